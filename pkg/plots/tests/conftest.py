"""Session fixture producing real solver artifacts.

The figures package consumes files, not APIs, so the fixtures shell out to
the installed solver CLI exactly the way a user would and hand the tests the
resulting paths. Everything is generated once per session.
"""

import os
import subprocess
import sys

import pytest

HEAT_SOLVE_CFG = """\
problem.p = 1.0
problem.l = 1.0
problem.c = 0.0
problem.k = 0.0
problem.u0 = cosine:1.0,0.5
problem.T = 0.05
grid.n_cells = 32
time.dt = 0.001
solve.store_stride = 10
"""

REGULARIZED_SOLVE_CFG = """\
problem.p = 1.0
problem.l = 0.5
problem.c = 1.0
problem.k = 1.0
problem.u0 = constant:0.0
problem.T = 0.5
grid.n_cells = 32
time.dt = 0.0025
solve.eps = 0.01
solve.store_stride = 20
"""

LAYER_CERT_CFG = """\
problem.p = 1.0
problem.l = 0.5
problem.c = 1.0
problem.k = 1.0
problem.u0 = constant:0.0
problem.T = 0.5
candidate.amplitude = 1.0
candidate.xi0 = 0.225
candidate.alpha = 3.0
candidate.beta = 3.0
candidate.t_window = 0.0125
"""

STRICT_CERT_CFG = """\
problem.p = 0.5
problem.l = 0.75
problem.c = 1.0
problem.k = 1.0
problem.u0 = constant:0.0
problem.T = 0.5
candidate.eps = 0.1
candidate.amplitude = 1.0
candidate.xi0 = 0.003515625
candidate.gamma = 0.2
candidate.horizon = 0.5
"""

LADDER_CFG = """\
problem.p = 1.0
problem.l = 0.5
problem.c = 1.0
problem.k = 1.0
problem.u0 = constant:0.0
problem.T = 0.2
grid.n_cells = 24
time.dt = 0.005
ladder.eps0 = 0.02
ladder.rungs = 3
ladder.store_stride = 10
"""

SCAN_CFG = """\
experiment.name = threshold-scan
experiment.ratios = 0.1,1.0,10.0
experiment.rungs = 4
"""


def run_solver(*argv):
    proc = subprocess.run(
        [sys.executable, "-m", "heatlab", *argv], capture_output=True, text=True
    )
    assert proc.returncode == 0, f"heatlab {argv} failed:\n{proc.stdout}\n{proc.stderr}"


@pytest.fixture(scope="session")
def artifacts(tmp_path_factory):
    root = tmp_path_factory.mktemp("artifacts")

    def cfg(name, text):
        path = root / name
        path.write_text(text)
        return str(path)

    run_solver("solve", cfg("heat.cfg", HEAT_SOLVE_CFG), "--out", str(root / "heat"))
    run_solver("solve", cfg("reg.cfg", REGULARIZED_SOLVE_CFG), "--out", str(root / "reg"))
    run_solver("certify", "layer_sub", cfg("layer.cfg", LAYER_CERT_CFG), "--out", str(root / "layer"))
    run_solver("certify", "strict_super", cfg("strict.cfg", STRICT_CERT_CFG), "--out", str(root / "strict"))
    run_solver("ladder", cfg("ladder.cfg", LADDER_CFG), "--out", str(root / "ladder"))
    run_solver("experiment", cfg("scan.cfg", SCAN_CFG), "--out", str(root / "scan"))
    run_solver("oracle", "heat", "--out", str(root / "oracle"))

    paths = {
        "trajectory": root / "heat" / "trajectory.csv",
        "solution": root / "reg" / "trajectory.csv",
        "layer_profile": root / "layer" / "profile.csv",
        "strict_profile": root / "strict" / "profile.csv",
        "ladder": root / "ladder" / "ladder.json",
        "scan": root / "scan" / "threshold-scan" / "scan.csv",
        "conv_spatial": root / "oracle" / "heat-oracle" / "convergence_spatial.csv",
        "conv_temporal": root / "oracle" / "heat-oracle" / "convergence_temporal.csv",
    }
    for name, path in paths.items():
        assert os.path.exists(path), f"{name} artifact missing at {path}"
    return {name: str(path) for name, path in paths.items()}
