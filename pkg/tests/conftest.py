import numpy as np
import pytest

from levy_breakdrift.models import AlphaStable, BrownianMotion, GammaProcess
from levy_breakdrift.quadrature import QuadConfig


@pytest.fixture(scope="session")
def brownian():
    return BrownianMotion()


@pytest.fixture(scope="session")
def gamma2():
    return GammaProcess(delta=2.0)


@pytest.fixture(scope="session")
def stable15():
    return AlphaStable(alpha=1.5)


@pytest.fixture(scope="session")
def quad_cfg():
    return QuadConfig()


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
