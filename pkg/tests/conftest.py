import pytest

from ab_spectra.model import NumericsConfig, PotentialSpec, build_mesh
from ab_spectra.spectrum import adaptive_outer_radius


@pytest.fixture(scope="session")
def spec():
    return PotentialSpec()


@pytest.fixture(scope="session")
def cfg():
    return NumericsConfig()


@pytest.fixture(scope="session")
def mesh(spec, cfg):
    """Production mesh shared across circulations (defaults, n = 4000)."""
    R = max(adaptive_outer_radius(k, spec, cfg) for k in (0.0, 0.5))
    return build_mesh(spec.a, R, cfg.n_default)


@pytest.fixture(scope="session")
def coarse_mesh(spec):
    return build_mesh(spec.a, spec.a + 8.0, 300)
