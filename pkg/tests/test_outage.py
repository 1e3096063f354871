import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_scenario
from wiretap_lbb.beamformer import blend, build_basis
from wiretap_lbb.geometry import LinkBudget
from wiretap_lbb.montecarlo import sample_eve_sinr
from wiretap_lbb.outage import (
    OutageQuery,
    _interference_moment_integral,
    _interference_moment_series,
    eve_stats,
    interference_moment,
    jammer_moments,
    leakage_moment,
    outage_no_jammer,
    outage_with_jammer,
    rho_coefficients,
    secrecy_threshold,
)
from wiretap_lbb.special import pochhammer

# gamma survival function from scipy.stats for the same shape/scale
NO_JAMMER_REF = 0.9577209286123812

# vartheta_l by adaptive quadrature of its integral representation (scipy.integrate.quad)
THETA_REF = [
    (10 / 3, 2, 4, 1, 0.3474471947533139),
    (10 / 3, 2, 4, 2, 0.25555675471688816),
    (0.5, 3, 3, 1, 1.992169792023987),
    (0.5, 3, 3, 2, 5.5938365723271755),
    (2.0, 1, 2, 1, 0.4614553162418653),
    (2.0, 1, 2, 2, 0.5385446837581347),
    (1e-3, 2, 4, 1, 1.9940298094278748),
    (1e-3, 2, 4, 2, 5.964250001824763),
]


def test_threshold_and_query():
    assert secrecy_threshold(1.0, 6.0) == pytest.approx(2.5)
    assert OutageQuery(1.0, 6.0).threshold == pytest.approx(2.5)
    with pytest.raises(ValueError):
        OutageQuery(-1.0, 1.0)


def test_no_jammer_reference():
    g = np.array([1.0, 0.0])
    w = np.array([math.sqrt(0.37), math.sqrt(0.63)])
    stats = eve_stats(10 ** 0.5, g, w, 10.0)
    assert stats.K_eff == pytest.approx(0.37 * 10 ** 0.5)
    assert outage_no_jammer(OutageQuery(1.0, 6.0), stats, 2) == pytest.approx(NO_JAMMER_REF, rel=1e-10)


def test_no_jammer_limits():
    g, w = np.array([1.0, 0.0]), np.array([0.6, 0.8])
    # Bob below the target rate: certain outage
    assert outage_no_jammer(OutageQuery(1.0, 0.5), eve_stats(3.0, g, w, 10.0), 2) == 1.0
    # pure LOS Eve: step function of N_e * leakage * gamma_ae against T
    los = eve_stats(math.inf, g, w, 10.0)
    assert outage_no_jammer(OutageQuery(1.0, 20.0), los, 2) == 0.0
    assert outage_no_jammer(OutageQuery(1.0, 6.0), los, 2) == 1.0


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 100), st.floats(0, 1), st.floats(0.01, 100), st.floats(0, 5), st.floats(0, 1000), st.integers(1, 6))
def test_no_jammer_is_probability(K, leak, gae, Rs, gb, Ne):
    g = np.array([1.0, 0.0])
    w = np.array([math.sqrt(leak), math.sqrt(1 - leak)])
    p = outage_no_jammer(OutageQuery(Rs, gb), eve_stats(K, g, w, gae), Ne)
    assert 0.0 <= p <= 1.0


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 50), st.floats(0, 1), st.integers(1, 6))
def test_leakage_moment_matches_noncentral_chi_square(K, leak, Ne):
    # sum of Ne unit-variance complex Gaussians with total LOS power s = K Ne leak
    s = K * Ne * leak
    m1 = Ne + s
    m2 = (Ne + 2 * s) + m1 ** 2
    assert leakage_moment(1, K, Ne * leak, Ne) * Ne * (1 + K) == pytest.approx(m1, rel=1e-12)
    assert leakage_moment(2, K, Ne * leak, Ne) * pochhammer(Ne, 2) * (1 + K) ** 2 == pytest.approx(m2, rel=1e-12)


@pytest.mark.parametrize("kappa,Ne,Nj,l,ref", THETA_REF)
def test_interference_moment_reference(kappa, Ne, Nj, l, ref):
    assert interference_moment(l, kappa, Ne, Nj) == pytest.approx(ref, rel=1e-8)


# the quadrature is only selected for small kappa, where its integrand is smooth
@pytest.mark.parametrize("kappa", [0.05, 0.1, 0.3, 1.0])
@pytest.mark.parametrize("Ne,Nj", [(1, 2), (2, 4), (3, 3), (4, 5)])
def test_series_matches_integral(kappa, Ne, Nj):
    rho = rho_coefficients(kappa, Ne, Nj)
    for l in (1, 2):
        a = _interference_moment_series(l, kappa, rho, Nj)
        b = _interference_moment_integral(l, kappa, rho, Nj)
        assert a == pytest.approx(b, rel=1e-9)


@pytest.mark.parametrize("kappa", [1e-4, 0.004, 0.02, 0.5, 3.0, 20.0, 1e3])
def test_interference_moment_wide_range(kappa):
    # quad oracle of the integral form, accurate for any kappa
    from scipy import integrate

    for Ne, Nj in [(1, 2), (2, 4), (4, 5)]:
        rho = rho_coefficients(kappa, Ne, Nj)
        for l in (1, 2):
            ref = l * sum(
                r * integrate.quad(lambda u: math.exp(-u) * u ** (l - 1 + p) * (1 + kappa * u) ** -(Nj - 1), 0, np.inf, epsabs=0, epsrel=1e-13, limit=200)[0]
                for p, r in enumerate(rho)
            )
            assert interference_moment(l, kappa, Ne, Nj) == pytest.approx(ref, rel=1e-9)


def test_interference_vanishing_jammer_limit():
    for Ne in (1, 2, 3):
        for l in (1, 2):
            assert interference_moment(l, 1e-7, Ne, 4) == pytest.approx(pochhammer(Ne, l), rel=1e-5)


def test_jammer_moments_rejects():
    sc = make_scenario(jammer=True)
    w = np.array([1.0, 0.0])
    with pytest.raises(ValueError):
        jammer_moments(sc.params.__class__(N_a=2, N_e=2, K_je=1.0), sc.g_ae_los, w, sc.link)
    with pytest.raises(ValueError):
        jammer_moments(sc.params.__class__(N_a=2, N_e=2, N_j=1), sc.g_ae_los, w, sc.link)
    with pytest.raises(ValueError):
        jammer_moments(sc.params, sc.g_ae_los, w, LinkBudget(10, 10, 0))


def test_jammer_moments_against_simulation():
    sc = make_scenario(N_a=3, jammer=True)
    r = np.random.default_rng(5)
    h = r.standard_normal(3) + 1j * r.standard_normal(3)
    h_jb = r.standard_normal(4) + 1j * r.standard_normal(4)
    w = blend(build_basis(h, sc.g_ae_los), 0.4).w
    g = sample_eve_sinr(sc, w, 200_000, np.random.default_rng(6), jammer=True, h_jb=h_jb)
    m = jammer_moments(sc.params, sc.g_ae_los, w, sc.link)
    assert np.mean(g) == pytest.approx(m.mean, rel=0.01)
    assert np.mean(g ** 2) == pytest.approx(m.second_moment, rel=0.03)
    assert m.alpha == pytest.approx(m.mean ** 2 / m.variance)
    # the per-row reading understates the LOS power
    alt = jammer_moments(sc.params, sc.g_ae_los, w, sc.link, per_row_leakage=True)
    assert alt.mean < m.mean


def test_with_jammer_threshold_edge():
    sc = make_scenario(jammer=True)
    m = jammer_moments(sc.params, sc.g_ae_los, np.array([1.0, 0.0]), sc.link)
    assert outage_with_jammer(OutageQuery(1.0, 0.5), m) == 1.0
    assert 0 <= outage_with_jammer(OutageQuery(1.0, 30.0), m) <= 1
