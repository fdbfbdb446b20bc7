import math

import pytest
from hypothesis import HealthCheck, settings

from rotomag.scenario import RotatingField, ScenarioA, ScenarioB, ScenarioC

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

RES_OMEGA0 = math.sqrt(1.5)
RES_THETA_B = math.acos(math.sqrt(3) / (2 * math.sqrt(2)))


@pytest.fixture
def resonant_field():
    return RotatingField(1.0, RES_THETA_B)


@pytest.fixture
def resonant_a(resonant_field):
    """l = 1 electron at the resonant point omega_L = omega, omega_S = 2 omega."""
    return ScenarioA(resonant_field, RES_OMEGA0, 1, 0.0)


@pytest.fixture
def weak_l0(resonant_field):
    return ScenarioB(resonant_field, RES_OMEGA0, 0, 0.0, 0.7)


@pytest.fixture
def slow_c():
    return ScenarioC(RotatingField(0.01, math.pi / 3), two_s=1, omega1=1.0, omega2=1.0)
