"""Closed-form secrecy outage probabilities.

Both expressions are gamma-distribution tails of Eve's SINR evaluated at the
secrecy threshold ``T = 2**-R_s (1 + gamma_b) - 1``:

* no jammer: shape ``N_e m``, scale ``gamma_bar / m`` where ``m`` is the
  Nakagami parameter matched to the effective Rician factor of ``G_ae w``;
* jammer with Rayleigh jammer-Eve link (``K_je = 0``): shape and scale matched
  to the first two moments of Eve's MMSE SINR.

Everything is in linear units.
"""

import math
from dataclasses import dataclass

import numpy as np

from .special import pochhammer, regularized_lower_gamma, upper_incomplete_gamma


def secrecy_threshold(R_s, gamma_b):
    """Eve SINR above which the secrecy rate drops below ``R_s``."""
    return 2.0 ** (-R_s) * (1.0 + gamma_b) - 1.0


def bob_sinr(h_ab, w, gamma_ab):
    return gamma_ab * abs(np.dot(h_ab, w)) ** 2


def los_leakage(g_ae_los, w):
    """``|g_ae^o w|^2``: power the beamformer steers onto Eve's LOS direction."""
    return abs(np.dot(g_ae_los, w)) ** 2


@dataclass(frozen=True)
class OutageQuery:
    R_s: float
    gamma_b: float

    def __post_init__(self):
        if not self.R_s >= 0 or not self.gamma_b >= 0:
            raise ValueError("R_s and gamma_b must be >= 0")

    @property
    def threshold(self):
        return secrecy_threshold(self.R_s, self.gamma_b)


@dataclass(frozen=True)
class EveEffectiveStats:
    """Per-antenna statistics of ``gamma_ae |g_i w|^2`` at Eve.

    ``gamma_bar`` is the per-antenna mean; the mean of the summed SINR over
    ``N_e`` antennas is ``N_e * gamma_bar``.
    """

    K_eff: float
    m: float
    gamma_bar: float


def eve_stats(K_ae, g_ae_los, w, gamma_ae):
    leak = los_leakage(g_ae_los, w)
    if math.isinf(K_ae):
        # pure LOS: deterministic SINR, infinite Nakagami parameter
        return EveEffectiveStats(K_eff=math.inf, m=math.inf, gamma_bar=leak * gamma_ae)
    K_eff = leak * K_ae
    m = (K_eff + 1.0) ** 2 / (2.0 * K_eff + 1.0)
    gamma_bar = (K_ae * leak + 1.0) * gamma_ae / (1.0 + K_ae)
    return EveEffectiveStats(K_eff=K_eff, m=m, gamma_bar=gamma_bar)


def _clamp(p):
    return min(1.0, max(0.0, p))


def gamma_tail(shape, scale, x):
    """``Pr(X > x)`` for ``X ~ Gamma(shape, scale)``; 1 for ``x <= 0``."""
    if x <= 0:
        return 1.0
    return _clamp(1.0 - regularized_lower_gamma(shape, x / scale))


def outage_no_jammer(query, stats, N_e):
    """Secrecy outage without the jammer.

    ``1 - gamma(N_e m, T m / gamma_bar) / Gamma(N_e m)``, exactly 1 when the
    threshold ``T`` is non-positive.
    """
    T = query.threshold
    if T <= 0:
        return 1.0
    if math.isinf(stats.m):
        return 1.0 if N_e * stats.gamma_bar > T else 0.0
    return gamma_tail(N_e * stats.m, stats.gamma_bar / stats.m, T)


@dataclass(frozen=True)
class JammerMoments:
    phi: tuple
    theta: tuple
    kappa: float
    rho: tuple
    alpha: float
    beta: float
    gamma_ae: float

    @property
    def mean(self):
        return self.gamma_ae * self.phi[0] * self.theta[0]

    @property
    def second_moment(self):
        return self.gamma_ae ** 2 * self.phi[1] * self.theta[1]

    @property
    def variance(self):
        return self.gamma_ae ** 2 * (self.phi[1] * self.theta[1] - (self.phi[0] * self.theta[0]) ** 2)


def rho_coefficients(kappa, N_e, N_j):
    """``rho_p`` for p = 0..N_e-1."""
    out = []
    for p in range(N_e):
        q_lo = max(0, p - N_j + 1)
        s = sum(math.comb(N_j - 1, p - q) / (math.factorial(q) * kappa ** q) for q in range(q_lo, p + 1))
        out.append(kappa ** p * s)
    return tuple(out)


def leakage_moment(l, K_ae, leakage, N_e):
    """``phi_l``: normalized l-th moment of the Rician part of Eve's SINR."""
    if math.isinf(K_ae):
        return leakage ** l / pochhammer(N_e, l)
    lam = K_ae * leakage
    total = sum(math.comb(l, m) * lam ** m / pochhammer(N_e, m) for m in range(l + 1))
    return total / (1.0 + K_ae) ** l


# beyond this many lost digits the alternating incomplete-gamma sum is replaced
# by the equivalent integral  l sum_p rho_p int e^-u u^(l-1+p) (1+kappa u)^-(N_j-1) du
# which only happens for small kappa, where Gauss-Laguerre on it is accurate
_MAX_CANCELLATION = 1e5
_LAGUERRE_NODES = 64


def _interference_moment_series(l, kappa, rho, N_j):
    x = 1.0 / kappa
    total = 0.0
    for p, rho_p in enumerate(rho):
        n = l - 1 + p
        inner = sum(
            math.comb(n, t) * (-x) ** (n - t) * upper_incomplete_gamma(t - N_j + 2, x)
            for t in range(n + 1)
        )
        total += rho_p * inner
    return l * math.exp(x) / kappa ** (N_j - 1) * total


def _interference_moment_integral(l, kappa, rho, N_j):
    u, wts = np.polynomial.laguerre.laggauss(_LAGUERRE_NODES)
    damp = (1.0 + kappa * u) ** (-(N_j - 1))
    total = 0.0
    for p, rho_p in enumerate(rho):
        total += rho_p * float(np.sum(wts * u ** (l - 1 + p) * damp))
    return l * total


def interference_moment(l, kappa, N_e, N_j):
    """``vartheta_l``: the jammer's multiplicative factor on the l-th moment.

    Tends to ``(N_e)_l`` as ``kappa -> 0``. The incomplete-gamma series is
    used unless it would cancel catastrophically (small ``kappa``).
    """
    rho = rho_coefficients(kappa, N_e, N_j)
    n_max = l - 1 + N_e - 1
    x = 1.0 / kappa
    if x < 200.0 and x ** n_max < _MAX_CANCELLATION:
        return _interference_moment_series(l, kappa, rho, N_j)
    return _interference_moment_integral(l, kappa, rho, N_j)


def jammer_moments(params, g_ae_los, w, link, per_row_leakage=False):
    """Moment-matched gamma parameters of Eve's SINR under AN jamming.

    Parameters
    ----------
    params : ChannelParams
        Needs ``K_je == 0`` and ``N_j >= 2``.
    g_ae_los : ndarray
        Alice's LOS response toward Eve.
    w : ndarray
        Unit-norm beamformer.
    link : LinkBudget
        Supplies ``gamma_ae`` and ``gamma_je``.
    per_row_leakage : bool
        Use ``|g_ae^o w|^2`` instead of the full LOS power
        ``||G_ae^o w||^2 = N_e |g_ae^o w|^2`` in ``phi_l``. Only the default
        reproduces simulated moments; the flag exists for comparison.
    """
    if params.K_je != 0:
        raise ValueError("the closed-form jammer moments require K_je == 0")
    params.require_jammer()
    if not link.gamma_je > 0:
        raise ValueError("jammer moments need gamma_je > 0")
    kappa = link.gamma_je / (params.N_j - 1)
    leak = los_leakage(g_ae_los, w)
    if not per_row_leakage:
        leak *= params.N_e
    phi = tuple(leakage_moment(l, params.K_ae, leak, params.N_e) for l in (1, 2))
    theta = tuple(interference_moment(l, kappa, params.N_e, params.N_j) for l in (1, 2))
    m1 = phi[0] * theta[0]
    var = phi[1] * theta[1] - m1 ** 2
    if not var > 0:
        raise ArithmeticError(f"non-positive SINR variance {var!r}; moments are inconsistent")
    alpha = m1 ** 2 / var
    beta = link.gamma_ae * var / m1
    return JammerMoments(
        phi=phi,
        theta=theta,
        kappa=kappa,
        rho=rho_coefficients(kappa, params.N_e, params.N_j),
        alpha=alpha,
        beta=beta,
        gamma_ae=link.gamma_ae,
    )


def outage_with_jammer(query, moments):
    """``1 - gamma(alpha, T / beta) / Gamma(alpha)``; 1 when ``T <= 0``."""
    return gamma_tail(moments.alpha, moments.beta, query.threshold)
