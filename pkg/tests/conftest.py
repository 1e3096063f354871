import math

import numpy as np
import pytest

from wiretap_lbb.geometry import ChannelParams, LinkBudget, Scenario, SystemGeometry, db_to_linear


def make_scenario(N_a=2, jammer=False, K_ae_db=5.0, **changes):
    """Small reference scenario: Bob at pi/3, Eve at pi/4, all SNRs 10 dB."""
    geometry = SystemGeometry(d_ab=1.0, theta_ab=math.pi / 3, d_ae=1.0, theta_ae=math.pi / 4)
    params = ChannelParams(N_a=N_a, N_e=2, N_j=4, K_ab=10.0, K_ae=float(db_to_linear(K_ae_db)), K_je=0.0)
    sc = Scenario(geometry, params, LinkBudget(10.0, 10.0, 10.0), R_s=1.0, jammer=jammer)
    return sc.replace(**changes) if changes else sc


@pytest.fixture
def scenario():
    return make_scenario()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
