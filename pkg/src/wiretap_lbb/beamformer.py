"""One-parameter beamformer family and the tau grid search."""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

DEFAULT_STEP = 1e-2
_DEGENERATE_RTOL = 1e-9


@dataclass(frozen=True)
class BeamBasis:
    """Orthonormal pair spanning the plane of ``h_ab^H`` and Eve's LOS row.

    ``w1`` is the part of ``h_ab^H`` orthogonal to ``g_ae^o``; ``w2`` is the
    part inside ``span(g_ae^o^H)``. A degenerate vector is stored as zeros.
    """

    w1: np.ndarray
    w2: np.ndarray
    w1_degenerate: bool = False
    w2_degenerate: bool = False
    h_ab: Optional[np.ndarray] = field(default=None, repr=False)
    g_ae_los: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def n_antennas(self):
        return self.w1.shape[0]

    def allowed_tau(self, tau):
        """Clamp ``tau`` to the surviving endpoint when one basis vector vanished."""
        if self.w1_degenerate:
            return 0.0
        if self.w2_degenerate:
            return 1.0
        return tau


@dataclass(frozen=True)
class Beamformer:
    w: np.ndarray
    tau: float
    basis: BeamBasis = field(repr=False)


def build_basis(h_ab, g_ae_los):
    """Split ``h_ab^H`` against the rank-one LOS row space of Alice -> Eve.

    Eve's LOS matrix is ``r g`` with rank one, so the projector onto its row
    space is ``g^H g / ||g||^2``; inverting ``G G^H`` (singular for N_e > 1)
    is never attempted.

    Parameters
    ----------
    h_ab : ndarray, shape (N_a,)
        Main channel row.
    g_ae_los : ndarray, shape (N_a,)
        Alice's LOS response toward Eve.
    """
    h_ab = np.asarray(h_ab, dtype=complex)
    g = np.asarray(g_ae_los, dtype=complex)
    if h_ab.shape != g.shape or h_ab.ndim != 1:
        raise ValueError(f"h_ab and g_ae_los must be 1-D of equal length, got {h_ab.shape} and {g.shape}")
    h_norm = np.linalg.norm(h_ab)
    g_norm2 = np.vdot(g, g).real
    if h_norm == 0 or g_norm2 == 0:
        raise ValueError("h_ab and g_ae_los must be nonzero")

    h_conj = h_ab.conj()
    inside = g.conj() * (g @ h_conj) / g_norm2
    outside = h_conj - inside
    # remove the round-off component left along g
    outside = outside - g.conj() * (g @ outside) / g_norm2

    tol = _DEGENERATE_RTOL * h_norm
    n_out, n_in = np.linalg.norm(outside), np.linalg.norm(inside)
    w1_deg, w2_deg = n_out < tol, n_in < tol
    zeros = np.zeros_like(h_conj)
    w1 = zeros if w1_deg else outside / n_out
    w2 = zeros if w2_deg else inside / n_in
    return BeamBasis(w1=w1, w2=w2, w1_degenerate=bool(w1_deg), w2_degenerate=bool(w2_deg), h_ab=h_ab, g_ae_los=g)


def blend(basis, tau):
    """``w(tau) = sqrt(tau) w1 + sqrt(1 - tau) w2``."""
    tau = float(tau)
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"tau must lie in [0, 1], got {tau}")
    tau = basis.allowed_tau(tau)
    w = math.sqrt(tau) * basis.w1 + math.sqrt(1.0 - tau) * basis.w2
    return Beamformer(w=w, tau=tau, basis=basis)


def tau_grid(step=DEFAULT_STEP):
    """``{0, step, 2 step, ..., 1}``; the last point is always exactly 1."""
    if not 0 < step <= 1:
        raise ValueError(f"grid step must lie in (0, 1], got {step}")
    n = int(math.floor(1.0 / step + 1e-9))
    grid = np.round(np.arange(n + 1) * step, 12)
    if grid[-1] < 1.0:
        grid = np.append(grid, 1.0)
    return grid


@dataclass(frozen=True)
class TauSearchResult:
    tau: float
    p_out: float
    beamformer: Beamformer = field(repr=False)
    taus: np.ndarray = field(repr=False)
    curve: np.ndarray = field(repr=False)


def argmin_prefer_larger(values):
    """Index of the minimum, ties resolved toward the last (largest tau) entry."""
    values = np.asarray(values, dtype=float)
    best = np.min(values)
    return int(np.flatnonzero(values == best)[-1])


def search_tau(basis, gamma_b_of: Callable, outage_of: Callable, step=DEFAULT_STEP, taus=None):
    """Exhaustive tau scan returning the grid minimizer.

    ``gamma_b_of(beamformer)`` gives Bob's SINR for that beamformer and
    ``outage_of(beamformer, gamma_b)`` the outage probability; both are called
    once per grid point. Ties go to the larger tau. A degenerate basis reduces
    the scan to its single admissible endpoint.
    """
    if taus is None:
        taus = tau_grid(step)
    taus = np.asarray(taus, dtype=float)
    if basis.w1_degenerate or basis.w2_degenerate:
        taus = np.array([basis.allowed_tau(0.5)])
    curve = np.empty(taus.shape)
    for i, tau in enumerate(taus):
        bf = blend(basis, tau)
        curve[i] = outage_of(bf, gamma_b_of(bf))
    i = argmin_prefer_larger(curve)
    return TauSearchResult(tau=float(taus[i]), p_out=float(curve[i]), beamformer=blend(basis, taus[i]), taus=taus, curve=curve)


def analytic_outage_of(scenario, jammer=None):
    """Outage callback for :func:`search_tau` built on the closed forms."""
    from .outage import OutageQuery, eve_stats, jammer_moments, outage_no_jammer, outage_with_jammer

    jammer = scenario.jammer if jammer is None else jammer
    p, link = scenario.params, scenario.link

    def outage_of(bf, gamma_b):
        query = OutageQuery(scenario.R_s, gamma_b)
        if jammer:
            return outage_with_jammer(query, jammer_moments(p, scenario.g_ae_los, bf.w, link))
        return outage_no_jammer(query, eve_stats(p.K_ae, scenario.g_ae_los, bf.w, link.gamma_ae), p.N_e)

    return outage_of


def mc_outage_of(scenario, h_ab, n_trials, seed, jammer=None, h_jb=None):
    """Empirical outage callback; every grid point reuses ``seed`` (common draws)."""
    from .montecarlo import empirical_outage

    def outage_of(bf, gamma_b):
        rng = np.random.default_rng(seed)
        return empirical_outage(scenario, h_ab, bf.w, n_trials, rng, jammer=jammer, h_jb=h_jb).p_hat

    return outage_of


def gamma_b_of(scenario, h_ab):
    from .outage import bob_sinr

    return lambda bf: bob_sinr(h_ab, bf.w, scenario.link.gamma_ab)


def optimize_tau(scenario, h_ab, step=DEFAULT_STEP):
    """Closed-form tau search without the jammer."""
    basis = build_basis(h_ab, scenario.g_ae_los)
    return search_tau(basis, gamma_b_of(scenario, h_ab), analytic_outage_of(scenario, jammer=False), step)


def search_tau_jammer(basis, scenario, h_ab, h_jb=None, n_trials=None, analytic=False, step=DEFAULT_STEP, seed=0):
    """Tau search with the jammer transmitting.

    With ``analytic=True`` (only valid for ``K_je == 0``) each grid point uses
    the moment-matched closed form; otherwise the outage is estimated from
    ``n_trials`` draws of Eve's channels, the same draws at every tau.
    """
    scenario.params.require_jammer()
    if analytic:
        if scenario.params.K_je != 0:
            raise ValueError("analytic tau search with the jammer requires K_je == 0")
        outage_of = analytic_outage_of(scenario, jammer=True)
    else:
        if n_trials is None:
            raise ValueError("n_trials is required for the Monte-Carlo tau search")
        outage_of = mc_outage_of(scenario, h_ab, n_trials, seed, jammer=True, h_jb=h_jb)
    return search_tau(basis, gamma_b_of(scenario, h_ab), outage_of, step)
