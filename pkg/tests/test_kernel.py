import os
import subprocess
import sys

import numpy as np
import pytest

from kcluster import kernel

from conftest import BACKENDS


def test_env_forces_fallback():
    env = dict(os.environ, KCLUSTER_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import kcluster; print(kcluster.BACKEND)"], env=env, capture_output=True, text=True
    )
    assert out.stdout.strip() == "python"


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernel.get("fortran")


@pytest.mark.parametrize("backend", BACKENDS)
def test_feed_reports_complete_forest(backend):
    op = kernel.get(backend)(3, 2)
    u, v, w = np.array([0, 1]), np.array([1, 2]), np.array([1.0, 2.0])
    assert op.feed(u, v, w, np.arange(2))
    tau, births, deaths, reps, ess_b, ess_r, msf = op.result()
    assert tau.tolist() == [1.0, 1.0, 2.0]
    assert ess_b.tolist() == [1.0] and msf.tolist() == [0, 1]
