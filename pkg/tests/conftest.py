import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from nncalc.generator import (
    ExtendedGenerator,
    make_identity_generator,
    make_sine_generator,
)

settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=200,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def sine_gen():
    return make_sine_generator()


@pytest.fixture(scope="session")
def sine_eg(sine_gen):
    return ExtendedGenerator(sine_gen)


@pytest.fixture(scope="session")
def identity_eg():
    return ExtendedGenerator(make_identity_generator())


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def resolvable(*values, margin=1e-7):
    """True when every value keeps a workable distance from the integer
    plateaus of the iterate maps.

    A pushed value at distance d from an integer is stored with relative
    error ~ulp/d; a later pull re-exposes that as absolute error, so
    identities that pull after pushing are only double-verifiable when all
    pushed intermediates clear the margin (1e-7 keeps the 1e-9 budgets).
    """
    return all(abs(v - round(v)) > margin for v in values)
