"""Monte-Carlo oracle: channel draws, exact per-realization SINRs, empirical outage.

Outage is conditioned on Bob's SINR: the main channel ``h_ab`` (and the
jammer-Bob channel ``h_jb``) are held fixed for an experiment while Eve's
channels are redrawn on every trial.

Trials are generated in chunks; each chunk owns a child generator spawned
from the caller's ``rng`` so results depend only on the seed, the trial
count and the chunk size, never on evaluation order or worker count.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .geometry import sample_rician_matrix, sample_rician_vector
from .outage import bob_sinr, secrecy_threshold

DEFAULT_CHUNK = 50_000
ACCEPTANCE_TRIALS = 1_000_000
SMOKE_TRIALS = 10_000


@dataclass(frozen=True)
class OutageEstimate:
    p_hat: float
    n_trials: int
    std_err: float

    @classmethod
    def from_count(cls, count, n_trials):
        p = count / n_trials
        return cls(p_hat=p, n_trials=int(n_trials), std_err=math.sqrt(p * (1 - p) / n_trials))

    @classmethod
    def from_samples(cls, values):
        """Estimate from per-draw probabilities (e.g. averaged over locations)."""
        values = np.asarray(values, dtype=float)
        n = values.size
        sd = float(np.std(values, ddof=1)) if n > 1 else 0.0
        return cls(p_hat=float(np.mean(values)), n_trials=n, std_err=sd / math.sqrt(n))


@dataclass(frozen=True)
class Realization:
    h_ab: np.ndarray
    G_ae: np.ndarray
    gamma_b: float
    gamma_e: float
    h_jb: np.ndarray = None
    G_je: np.ndarray = None
    W_AN: np.ndarray = field(default=None, repr=False)


def an_precoder(h_jb):
    """Orthonormal basis (N_j x N_j-1) of the null space of the row ``h_jb``."""
    h = np.asarray(h_jb, dtype=complex)
    if h.ndim != 1 or h.shape[0] < 2:
        raise ValueError(f"artificial noise needs N_j >= 2 jammer antennas, got shape {h.shape}")
    if not np.any(h):
        raise ValueError("h_jb must be nonzero")
    _, _, vh = np.linalg.svd(h[None, :])
    return vh[1:].conj().T


def sinr_eve_no_jammer(G_ae, w, gamma_ae):
    """``gamma_ae ||G_ae w||^2``; ``G_ae`` may carry leading batch axes."""
    v = np.asarray(G_ae) @ w
    return gamma_ae * np.sum(np.abs(v) ** 2, axis=-1)


def _interference_plus_noise(G_je, W_AN, gamma_je):
    n_streams = W_AN.shape[1]
    B = np.asarray(G_je) @ W_AN
    R = (gamma_je / n_streams) * (B @ np.swapaxes(B.conj(), -1, -2))
    return R


def _forward_solve(L, rhs):
    """Solve ``L y = rhs`` for lower-triangular batched ``L``; rhs (..., n) or (..., n, k)."""
    vector = rhs.ndim == L.ndim - 1
    if vector:
        rhs = rhs[..., None]
    y = np.empty(np.broadcast_shapes(L.shape[:-2], rhs.shape[:-2]) + rhs.shape[-2:], dtype=complex)
    n = L.shape[-1]
    for i in range(n):
        acc = rhs[..., i, :]
        if i:
            acc = acc - np.einsum("...k,...kj->...j", L[..., i, :i], y[..., :i, :])
        y[..., i, :] = acc / L[..., i, i, None]
    return y[..., 0] if vector else y


def sinr_eve_jammer(G_ae, G_je, W_AN, w, gamma_ae, gamma_je):
    """Eve's MMSE SINR ``gamma_ae w^H G^H M^-1 G w`` with ``M = R + I``.

    ``M`` is Hermitian positive definite; it is Cholesky-factored and the
    quadratic form is evaluated as ``||L^-1 G w||^2``.
    """
    M = _interference_plus_noise(G_je, W_AN, gamma_je)
    M = M + np.eye(M.shape[-1])
    L = np.linalg.cholesky(M)
    y = _forward_solve(L, np.asarray(G_ae) @ w)
    return gamma_ae * np.sum(np.abs(y) ** 2, axis=-1)


def sinr_eve_jammer_eig(G_ae, G_je, W_AN, w, gamma_ae, gamma_je):
    """Same SINR via the eigen-decomposition ``R = U diag(lam) U^H``:
    ``gamma_ae sum_i |mu_i|^2 / (lam_i + 1)`` with ``mu = U^H G w``.
    """
    R = _interference_plus_noise(G_je, W_AN, gamma_je)
    lam, U = np.linalg.eigh(R)
    mu = np.einsum("...ji,...j->...i", U.conj(), np.asarray(G_ae) @ w)
    return gamma_ae * np.sum(np.abs(mu) ** 2 / (lam + 1.0), axis=-1)


def draw_main_channel(scenario, rng):
    return sample_rician_vector(scenario.h_ab_los, scenario.params.K_ab, rng)


def draw_jammer_bob_channel(scenario, rng):
    return sample_rician_vector(scenario.h_jb_los, scenario.params.K_jb, rng)


def draw_realization(scenario, w, rng, h_ab=None, h_jb=None, jammer=None):
    """One full realization with Bob's and Eve's SINR for beamformer ``w``."""
    jammer = scenario.jammer if jammer is None else jammer
    p, link = scenario.params, scenario.link
    if h_ab is None:
        h_ab = draw_main_channel(scenario, rng)
    G_ae = sample_rician_matrix(scenario.G_ae_los, p.K_ae, rng)
    gamma_b = float(bob_sinr(h_ab, w, link.gamma_ab))
    if not jammer:
        return Realization(h_ab=h_ab, G_ae=G_ae, gamma_b=gamma_b, gamma_e=float(sinr_eve_no_jammer(G_ae, w, link.gamma_ae)))
    if h_jb is None:
        h_jb = draw_jammer_bob_channel(scenario, rng)
    G_je = sample_rician_matrix(scenario.G_je_los, p.K_je, rng)
    W_AN = an_precoder(h_jb)
    gamma_e = float(sinr_eve_jammer(G_ae, G_je, W_AN, w, link.gamma_ae, link.gamma_je))
    return Realization(h_ab=h_ab, G_ae=G_ae, gamma_b=gamma_b, gamma_e=gamma_e, h_jb=h_jb, G_je=G_je, W_AN=W_AN)


def _chunks(rng, n_trials, chunk):
    if n_trials < 1:
        raise ValueError(f"n_trials must be >= 1, got {n_trials}")
    sizes = [chunk] * (n_trials // chunk)
    if n_trials % chunk:
        sizes.append(n_trials % chunk)
    return list(zip(sizes, rng.spawn(len(sizes))))


def _map_chunks(fn, chunks, workers):
    if workers <= 1:
        return [fn(size, g) for size, g in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda c: fn(*c), chunks))


def _draw_eve_channels(scenario, size, g, jammer):
    p = scenario.params
    G_ae = sample_rician_matrix(scenario.G_ae_los, p.K_ae, g, size=size)
    G_je = sample_rician_matrix(scenario.G_je_los, p.K_je, g, size=size) if jammer else None
    return G_ae, G_je


def _resolve_jammer(scenario, jammer, h_jb):
    jammer = scenario.jammer if jammer is None else jammer
    if not jammer:
        return False, None
    scenario.params.require_jammer()
    if h_jb is None:
        raise ValueError("an active jammer needs the realized h_jb to build its precoder")
    return True, an_precoder(h_jb)


def sample_eve_sinr(scenario, w, n_trials, rng, jammer=None, h_jb=None, chunk=DEFAULT_CHUNK, workers=1):
    """Eve's SINR over ``n_trials`` fresh draws of ``G_ae`` (and ``G_je``)."""
    jammer, W_AN = _resolve_jammer(scenario, jammer, h_jb)
    link = scenario.link

    def run(size, g):
        G_ae, G_je = _draw_eve_channels(scenario, size, g, jammer)
        if jammer:
            return sinr_eve_jammer(G_ae, G_je, W_AN, w, link.gamma_ae, link.gamma_je)
        return sinr_eve_no_jammer(G_ae, w, link.gamma_ae)

    return np.concatenate(_map_chunks(run, _chunks(rng, n_trials, chunk), workers))


def paired_eve_sinr(scenario, w, n_trials, rng, h_jb, chunk=DEFAULT_CHUNK):
    """Eve's SINR without and with the jammer on the very same ``G_ae`` draws."""
    _, W_AN = _resolve_jammer(scenario, True, h_jb)
    link = scenario.link
    off, on = [], []
    for size, g in _chunks(rng, n_trials, chunk):
        G_ae, G_je = _draw_eve_channels(scenario, size, g, True)
        off.append(sinr_eve_no_jammer(G_ae, w, link.gamma_ae))
        on.append(sinr_eve_jammer(G_ae, G_je, W_AN, w, link.gamma_ae, link.gamma_je))
    return np.concatenate(off), np.concatenate(on)


def empirical_outage(scenario, h_ab, w, n_trials, rng, jammer=None, h_jb=None, chunk=DEFAULT_CHUNK, workers=1):
    """Fraction of trials with ``gamma_e > 2**-R_s (1 + gamma_b) - 1``.

    Parameters
    ----------
    scenario : Scenario
    h_ab : ndarray
        Realized main channel; fixes ``gamma_b`` for the whole run.
    w : ndarray
        Unit-norm beamformer.
    n_trials : int
        Number of Eve-side channel draws.
    rng : numpy.random.Generator
    jammer : bool, optional
        Overrides ``scenario.jammer``.
    h_jb : ndarray, optional
        Realized jammer-Bob channel; required when the jammer is on.
    """
    T = secrecy_threshold(scenario.R_s, bob_sinr(h_ab, w, scenario.link.gamma_ab))
    gamma_e = sample_eve_sinr(scenario, w, n_trials, rng, jammer=jammer, h_jb=h_jb, chunk=chunk, workers=workers)
    return OutageEstimate.from_count(int(np.count_nonzero(gamma_e > T)), n_trials)


def _quadratic_features(Q):
    """Real features of Hermitian ``Q`` so that ``w^H Q w = features @ coeffs(w)``."""
    n = Q.shape[-1]
    iu = np.triu_indices(n, 1)
    diag = np.real(np.diagonal(Q, axis1=-2, axis2=-1))
    off = Q[..., iu[0], iu[1]]
    return np.concatenate([diag, off.real, off.imag], axis=-1)


def _quadratic_coeffs(W):
    """Coefficients matching :func:`_quadratic_features` for beamformers ``W`` (k, n)."""
    n = W.shape[-1]
    iu = np.triu_indices(n, 1)
    cross = W[:, iu[0]].conj() * W[:, iu[1]]
    return np.concatenate([np.abs(W) ** 2, 2 * cross.real, -2 * cross.imag], axis=-1).T


def _eve_gram(scenario, G_ae, G_je, W_AN, jammer):
    # Q with gamma_e(w) = gamma_ae w^H Q w
    if not jammer:
        return np.swapaxes(G_ae.conj(), -1, -2) @ G_ae
    M = _interference_plus_noise(G_je, W_AN, scenario.link.gamma_je) + np.eye(G_ae.shape[-2])
    Y = _forward_solve(np.linalg.cholesky(M), G_ae)
    return np.swapaxes(Y.conj(), -1, -2) @ Y


def empirical_outage_many(scenario, h_ab, W, n_trials, rng, jammer=None, h_jb=None, chunk=None):
    """Empirical outage for many beamformers on common channel draws.

    ``W`` has shape (k, N_a). Every beamformer sees the same realizations, so
    differences between entries carry no independent sampling noise. The
    draws match :func:`empirical_outage` for the same ``rng`` state and chunk.
    """
    W = np.atleast_2d(np.asarray(W, dtype=complex))
    jammer, W_AN = _resolve_jammer(scenario, jammer, h_jb)
    link = scenario.link
    thresholds = secrecy_threshold(scenario.R_s, link.gamma_ab * np.abs(W @ h_ab) ** 2)
    coeffs = _quadratic_coeffs(W)
    if chunk is None:
        # keep the (chunk x k) comparison block around 1e7 entries
        chunk = int(max(1_000, min(DEFAULT_CHUNK, 10_000_000 // max(1, W.shape[0]))))
    counts = np.zeros(W.shape[0], dtype=np.int64)
    for size, g in _chunks(rng, n_trials, chunk):
        G_ae, G_je = _draw_eve_channels(scenario, size, g, jammer)
        feats = _quadratic_features(_eve_gram(scenario, G_ae, G_je, W_AN, jammer))
        gamma_e = link.gamma_ae * (feats @ coeffs)
        counts += np.count_nonzero(gamma_e > thresholds, axis=0)
    return [OutageEstimate.from_count(int(c), n_trials) for c in counts]


def two_antenna_grid(resolution):
    """Unit 2-vectors modulo global phase: ``(cos a, sin a e^{j p})``.

    ``a`` spans [0, pi/2] and ``p`` spans [0, 2 pi) with ``resolution``
    points each. Returns (W, a, p) with W of shape (resolution**2, 2).
    """
    if resolution < 2:
        raise ValueError("grid resolution must be >= 2")
    a = np.linspace(0.0, np.pi / 2, resolution)
    p = np.linspace(0.0, 2 * np.pi, resolution, endpoint=False)
    A, P = np.meshgrid(a, p, indexing="ij")
    W = np.stack([np.cos(A).ravel() + 0j, np.sin(A).ravel() * np.exp(1j * P.ravel())], axis=1)
    return W, A.ravel(), P.ravel()


@dataclass(frozen=True)
class ExhaustiveResult:
    w: np.ndarray
    p_best: float
    estimate: OutageEstimate
    angle: float
    phase: float
    grid_p: np.ndarray = field(repr=False)


def exhaustive_search(scenario, h_ab, grid_resolution, n_trials, rng, jammer=None, h_jb=None):
    """Brute-force beamformer search over all unit 2-vectors (N_a = 2 only).

    Minimizes the empirical outage on common draws. Equal estimates are
    resolved toward the smallest LOS leakage ``|g_ae^o w|^2``, then the
    lowest grid index.
    """
    if scenario.params.N_a != 2:
        raise ValueError(f"exhaustive search is limited to N_a = 2, got N_a={scenario.params.N_a}")
    W, a, p = two_antenna_grid(grid_resolution)
    estimates = empirical_outage_many(scenario, h_ab, W, n_trials, rng, jammer=jammer, h_jb=h_jb)
    grid_p = np.array([e.p_hat for e in estimates])
    leak = np.abs(W @ scenario.g_ae_los) ** 2
    order = np.lexsort((np.arange(len(W)), leak, grid_p))
    i = int(order[0])
    return ExhaustiveResult(w=W[i], p_best=float(grid_p[i]), estimate=estimates[i], angle=float(a[i]), phase=float(p[i]), grid_p=grid_p)
