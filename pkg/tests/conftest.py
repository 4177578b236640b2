import numpy as np
import pytest

from floqlat.drive import DriveConfig
from floqlat.lattice import ModelKind


@pytest.fixture(scope="session")
def fig_cfg():
    """Baseline drive settings used across the paper-reproduction tests."""

    def make(m=1.0, omega2=None):
        kwargs = dict(delta=m * 125.0)
        if omega2 is not None:
            kwargs["omega2"] = omega2
        return DriveConfig(**kwargs)

    return make


@pytest.fixture(scope="session")
def kinds():
    return (ModelKind.BRICKWALL, ModelKind.HALDANE)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
