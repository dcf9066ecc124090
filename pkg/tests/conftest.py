import attrs
import pytest

from src.cli import load_config
from src.netmodel import NetworkConfig


@pytest.fixture(scope="session")
def reference() -> NetworkConfig:
    """The bundled reference network, NLoS UAV links detectable."""
    return load_config()


@pytest.fixture(scope="session")
def baseline(reference: NetworkConfig) -> NetworkConfig:
    """Reference network as the analysis sees it."""
    return reference.analytic_view()


@pytest.fixture(scope="session")
def elevation(baseline: NetworkConfig) -> NetworkConfig:
    """Elevation-angle control (nu = -1) with alpha_u = 4 and one antenna."""
    return attrs.evolve(
        baseline,
        placement=attrs.evolve(baseline.placement, nu=-1.0),
        uav=attrs.evolve(baseline.uav, alpha=4.0, n_antennas=1),
    )
