import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_scenario
from wiretap_lbb.beamformer import (
    argmin_prefer_larger,
    blend,
    build_basis,
    optimize_tau,
    search_tau,
    search_tau_jammer,
    tau_grid,
)
from wiretap_lbb.geometry import los_vector


def _complex_vec(seed, n):
    r = np.random.default_rng(seed)
    return r.standard_normal(n) + 1j * r.standard_normal(n)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 6), st.floats(0, 1))
def test_basis_orthonormal_and_blend_unit(seed, n, tau):
    h = _complex_vec(seed, n)
    g = los_vector(n, 0.5, 0.1 + seed % 7)
    b = build_basis(h, g)
    assert np.linalg.norm(b.w1) == pytest.approx(1.0)
    assert np.linalg.norm(b.w2) == pytest.approx(1.0)
    assert abs(np.vdot(b.w1, b.w2)) < 1e-10
    assert abs(g @ b.w1) < 1e-10  # w1 is invisible along Eve's LOS row
    # h^H lies in span(w1, w2)
    hc = h.conj()
    resid = hc - b.w1 * np.vdot(b.w1, hc) - b.w2 * np.vdot(b.w2, hc)
    assert np.linalg.norm(resid) < 1e-10 * np.linalg.norm(h)
    assert np.linalg.norm(blend(b, tau).w) == pytest.approx(1.0)


def test_basis_degenerate_cases():
    g = los_vector(3, 0.5, 0.7)
    aligned = build_basis(2.0 * g, g)  # h^H along g^H
    assert aligned.w1_degenerate and not aligned.w2_degenerate
    assert blend(aligned, 0.3).tau == 0.0
    h_perp = np.conj([g[1], -g[0], 0.0])  # g @ h_perp^H == 0
    perp = build_basis(h_perp, g)
    assert perp.w2_degenerate and blend(perp, 0.3).tau == 1.0
    with pytest.raises(ValueError):
        build_basis(np.zeros(3), g)
    with pytest.raises(ValueError):
        build_basis(np.ones(2), g)


def test_blend_endpoints_and_range():
    b = build_basis(_complex_vec(1, 3), los_vector(3, 0.5, 0.4))
    np.testing.assert_allclose(blend(b, 1.0).w, b.w1)
    np.testing.assert_allclose(blend(b, 0.0).w, b.w2)
    with pytest.raises(ValueError):
        blend(b, 1.2)


def test_tau_grid():
    g = tau_grid(0.01)
    assert len(g) == 101 and g[0] == 0 and g[-1] == 1
    assert tau_grid(0.3)[-1] == 1.0
    with pytest.raises(ValueError):
        tau_grid(0)


def test_ties_go_to_larger_tau():
    assert argmin_prefer_larger([0.3, 0.1, 0.1, 0.2]) == 2


def test_search_tau_finds_synthetic_minimum():
    b = build_basis(_complex_vec(2, 2), los_vector(2, 0.5, 0.4))
    res = search_tau(b, lambda bf: 0.0, lambda bf, gb: (bf.tau - 0.37) ** 2, step=0.01)
    assert res.tau == pytest.approx(0.37)
    assert res.curve.shape == (101,)


def test_optimize_tau_pure_los_eve_picks_w1():
    sc = make_scenario(N_a=3, K_ae=np.inf)
    h = _complex_vec(3, 3)
    res = optimize_tau(sc, h)
    # a deterministic Eve only sees the LOS row, so nulling it is optimal when feasible
    assert res.tau == 1.0


def test_search_tau_jammer_requires_inputs():
    sc = make_scenario(N_a=2, jammer=True)
    h = _complex_vec(4, 2)
    b = build_basis(h, sc.g_ae_los)
    with pytest.raises(ValueError):
        search_tau_jammer(b, sc, h)
    res = search_tau_jammer(b, sc, h, analytic=True, step=0.1)
    assert 0 <= res.p_out <= 1
    with pytest.raises(ValueError):
        search_tau_jammer(b, sc.replace(K_je=1.0), h, analytic=True)
