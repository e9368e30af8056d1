"""
LogJet - src package
"""

from .multipoly import Poly, RatFunc, MultiIndex
from .jetalg import JetPoly, CurveJet, Reparam, total_derive, pullback_curve
from .logconn import LogPair, LogJetPoly, nabla, wronskian_abs, wronskian_log
from .tower import TowerChart, GammaParams, nabla_chart, omega_chart
from .fermat import TotalChart, build_F, nabla_factor, system_residual, plucker_omega, rank_probe
from .bounds import params_for, kobayashi_bound, decompose_degree, bounds_table
from .models import FermatFamily, BoundParams, BoundReport, VerifyReport

__all__ = [
    "Poly",
    "RatFunc",
    "MultiIndex",
    "JetPoly",
    "CurveJet",
    "Reparam",
    "total_derive",
    "pullback_curve",
    "LogPair",
    "LogJetPoly",
    "nabla",
    "wronskian_abs",
    "wronskian_log",
    "TowerChart",
    "GammaParams",
    "nabla_chart",
    "omega_chart",
    "TotalChart",
    "build_F",
    "nabla_factor",
    "system_residual",
    "plucker_omega",
    "rank_probe",
    "params_for",
    "kobayashi_bound",
    "decompose_degree",
    "bounds_table",
    "FermatFamily",
    "BoundParams",
    "BoundReport",
    "VerifyReport",
]
