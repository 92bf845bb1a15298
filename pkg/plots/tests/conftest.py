"""Generate real artifacts once per session by driving the fgpe CLI at
small desk scale; every figure test consumes these files only."""

import subprocess
import sys
from pathlib import Path

import pytest


def _run(args, cwd):
    proc = subprocess.run([sys.executable, "-m", "fgpe.cli"] + args,
                          capture_output=True, text=True, timeout=900, cwd=cwd)
    assert proc.returncode in (0, 4), proc.stderr
    return proc


@pytest.fixture(scope="session")
def artifacts(tmp_path_factory):
    root = tmp_path_factory.mktemp("artifacts")
    _run(["groundstate", "--s-list", "0.9,0.95", "--n", "256", "--L", "16",
          "--out", str(root / "gs")], cwd=root)
    _run(["minimize", "--s", "0.9", "--N", "0.5x", "--n", "256", "--L", "16",
          "--out", str(root / "min")], cwd=root)
    _run(["saddle", "--s", "0.9", "--N", "0.5x", "--n", "256", "--L", "16",
          "--saddle-n", "512", "--tol", "1e-4", "--out", str(root / "sad")], cwd=root)
    _run(["sweep", "--s-list", "0.9,0.93", "--N", "0.5x", "--n", "256", "--L", "16",
          "--saddle-n", "512", "--out", str(root / "sweep")], cwd=root)
    return root
