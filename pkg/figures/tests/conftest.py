"""Shared fixtures: real sweep CSVs produced through the colltherm CLI.

The figures package consumes only the documented CSV interface, so the
fixtures shell out to the generator instead of importing its library.
"""

import subprocess
import sys

import pytest


def run_colltherm(args, out):
    cmd = [sys.executable, "-m", "colltherm", *args, "--out", str(out)]
    subprocess.run(cmd, check=True, capture_output=True, text=True)
    return out


@pytest.fixture(scope="session")
def heatmap_csv(tmp_path_factory):
    """Coupling-grid sweep at T = 2 with ground-state ancillas.

    The grid spans weak to strong couplings, so the F1/F_th ratio crosses
    one and the level-1 contour exists.
    """
    out = tmp_path_factory.mktemp("csv") / "heatmap.csv"
    return run_colltherm(
        ["heatmap", "--temperature", "2", "--prep", "g",
         "--gamma-axis", "0.05:2:8:log", "--theta-axis", "0.15:pi/2:8"],
        out,
    )


@pytest.fixture(scope="session")
def scaling_csv(tmp_path_factory):
    """Weak-coupling scaling run for all three preparations."""
    out = tmp_path_factory.mktemp("csv") / "scaling.csv"
    return run_colltherm(
        ["scaling", "--temperature", "2", "--gamma-tau-se", "0.1",
         "--g-tau-sa", "pi/100", "--n-max", "5", "--preps", "g,e,plus"],
        out,
    )


@pytest.fixture(scope="session")
def decorrelated_scaling_csv(tmp_path_factory):
    """Strong-thermalization run where F_N collapses onto N*F_1."""
    out = tmp_path_factory.mktemp("csv") / "decorr.csv"
    return run_colltherm(
        ["scaling", "--temperature", "2", "--gamma-tau-se", "20",
         "--g-tau-sa", "pi/2", "--n-max", "3", "--preps", "g"],
        out,
    )
