"""
LogJet - CLI Tests
Runs main.py as a subprocess and checks stdout and exit codes.
"""

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).parent.parent
MAIN = ROOT / "main.py"
EXAMPLE = ROOT / "config" / "families" / "example.fam"


def run_cli(*args, env=None):
    full_env = dict(os.environ)
    full_env.pop("LOGJET_SEED", None)
    full_env.update(env or {})
    return subprocess.run(
        [sys.executable, str(MAIN), "--log-level", "WARNING", *args],
        capture_output=True, text=True, cwd=ROOT, env=full_env, timeout=600,
    )


class TestWronskianCommand:
    """Tests for `wronskian`."""

    def test_absolute(self):
        """W(1, z1, z1^2) = 2 D1z1^3"""
        result = run_cli("wronskian", "--sections", "1,z1,z1^2")
        assert result.returncode == 0
        assert result.stdout.strip() == "2*D1z1^3"

    def test_dependent(self):
        """Repeated sections give 0."""
        result = run_cli("wronskian", "--sections", "z1,z1")
        assert result.stdout.strip() == "0"

    def test_malformed(self):
        """Parse errors exit 2."""
        result = run_cli("wronskian", "--sections", "z1+*2")
        assert result.returncode == 2
        assert result.stdout == ""


class TestNablaCommand:
    """Tests for `nabla`."""

    def test_leibniz_clean(self):
        """A correct connection prints a zero defect."""
        result = run_cli("nabla", "--sigma", "z1", "--section", "z1^2 + 1", "--order", "2", "--leibniz")
        assert result.returncode == 0
        assert "leibniz_defect: 0" in result.stdout


class TestBoundsCommand:
    """Tests for `bounds`."""

    def test_text(self):
        """The n = 2 row shows the headline bound."""
        result = run_cli("bounds", "--from", "2", "--to", "2")
        assert result.returncode == 0
        assert "248832" in result.stdout

    def test_json(self):
        """One object per n."""
        result = run_cli("bounds", "--from", "2", "--to", "5", "--format", "json")
        assert result.returncode == 0
        assert len(json.loads(result.stdout)) == 4

    def test_bad_range(self):
        """n = 1 is a usage error."""
        assert run_cli("bounds", "--from", "1", "--to", "2").returncode == 2


class TestFermatCommand:
    """Tests for `fermat`."""

    def test_example(self):
        """The bundled family passes every check."""
        result = run_cli("fermat", str(EXAMPLE))
        assert result.returncode == 0, result.stdout + result.stderr
        assert result.stdout.strip().endswith("RESULT: PASS")

    def test_perturbed_graph(self):
        """The negative control exits 1."""
        result = run_cli("fermat", str(EXAMPLE), "--check", "system", "--perturb-graph")
        assert result.returncode == 1
        assert "RESULT: FAIL" in result.stdout

    def test_bad_family(self, tmp_path):
        """|I| != delta is a usage error."""
        path = tmp_path / "bad.fam"
        path.write_text("n = 1\nN = 1\ndelta = 1\nepsilon = 1\nr = 1\nk = 1\na[1,1] = 1\n", encoding="utf-8")
        result = run_cli("fermat", str(path))
        assert result.returncode == 2


class TestVerifyCommand:
    """Tests for `verify`."""

    def test_clean(self):
        """A clean small run of one suite exits 0."""
        result = run_cli("verify", "--suite", "jetalg", "--seed", "1")
        assert result.returncode == 0
        assert result.stdout.strip().endswith("RESULT: PASS")

    def test_fault(self):
        """The injected nabla fault exits 1."""
        result = run_cli("verify", "--suite", "logconn", "--inject-fault", "nabla")
        assert result.returncode == 1

    def test_unknown_suite(self):
        """argparse rejects unknown suites with exit 2."""
        assert run_cli("verify", "--suite", "nope").returncode == 2

    def test_deterministic(self):
        """Two runs print the same report."""
        a = run_cli("verify", "--suite", "tower", "--seed", "5")
        b = run_cli("verify", "--suite", "tower", "--seed", "5")
        assert a.stdout == b.stdout

    def test_seed_from_environment(self):
        """LOGJET_SEED sets the default seed."""
        result = run_cli("verify", "--suite", "tower", env={"LOGJET_SEED": "9"})
        assert result.stdout.splitlines()[0].startswith("suite=tower seed=9")
