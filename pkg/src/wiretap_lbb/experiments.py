"""Experiment drivers behind the command-line subcommands.

Every driver returns ``(header, rows)`` ready for :func:`write_csv`. The main
channel for antenna count ``N_a`` is drawn from ``default_rng([seed, N_a, 0])``
so sweeps over other parameters reuse one realization per ``N_a``. With
``h_ab_mode = "redraw"`` results are averaged over ``n_channels`` independent
main-channel realizations instead.
"""

import csv
import math

import numpy as np

from . import special
from .beamformer import (
    analytic_outage_of,
    blend,
    build_basis,
    gamma_b_of,
    search_tau,
    tau_grid,
)
from .geometry import db_to_linear
from .montecarlo import (
    draw_jammer_bob_channel,
    draw_main_channel,
    empirical_outage,
    paired_eve_sinr,
    sample_eve_sinr,
)
from .outage import jammer_moments
from .uncertainty import average_outage

FLOAT_FORMAT = ".10g"


def fmt(value):
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), FLOAT_FORMAT)


def write_csv(stream, header, rows):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])


def scenario_for(cfg, N_a):
    return cfg.scenario.replace(N_a=int(N_a))


def main_channels(scenario, seed, index=0):
    """``(h_ab, h_jb)`` for one realization; ``h_jb`` is None when N_j < 2."""
    N_a = scenario.params.N_a
    rng = np.random.default_rng([int(seed), N_a, int(index)])
    h_ab = draw_main_channel(scenario, rng)
    h_jb = draw_jammer_bob_channel(scenario, rng) if scenario.params.N_j >= 2 else None
    return h_ab, h_jb


def _analytic_available(scenario, jammer):
    return not jammer or scenario.params.K_je == 0


def _channels(cfg, scenario):
    n = cfg.n_channels if cfg.h_ab_mode == "redraw" else 1
    return [main_channels(scenario, cfg.seed, i) for i in range(n)]


def tau_curve(scenario, h_ab, h_jb, taus, jammer, n_trials=0, mc_seed=0):
    """Analytic and (optionally) common-draw empirical outage along ``taus``."""
    basis = build_basis(h_ab, scenario.g_ae_los)
    gb = gamma_b_of(scenario, h_ab)
    analytic = None
    if _analytic_available(scenario, jammer):
        analytic = search_tau(basis, gb, analytic_outage_of(scenario, jammer), taus=taus).curve
    mc = se = None
    if n_trials:
        mc = np.empty(len(taus))
        se = np.empty(len(taus))
        for i, tau in enumerate(taus):
            rng = np.random.default_rng(mc_seed)
            est = empirical_outage(scenario, h_ab, blend(basis, tau).w, n_trials, rng, jammer=jammer, h_jb=h_jb)
            mc[i], se[i] = est.p_hat, est.std_err
    return analytic, mc, se


def tau_sweep(cfg):
    header = ["N_a", "tau", "P_out_analytic", "P_out_mc", "mc_stderr"]
    taus = tau_grid(cfg.grid)
    jammer = cfg.scenario.jammer
    rows = []
    for N_a in cfg.N_a_values:
        sc = scenario_for(cfg, N_a)
        acc_a, acc_m, acc_v = [], [], []
        for k, (h_ab, h_jb) in enumerate(_channels(cfg, sc)):
            a, m, s = tau_curve(sc, h_ab, h_jb, taus, jammer, cfg.n_trials, [cfg.seed, N_a, k, 1])
            acc_a.append(a)
            acc_m.append(m)
            acc_v.append(None if s is None else s ** 2)
        n = len(acc_a)
        a = None if acc_a[0] is None else np.mean(acc_a, axis=0)
        m = None if acc_m[0] is None else np.mean(acc_m, axis=0)
        s = None if acc_v[0] is None else np.sqrt(np.sum(acc_v, axis=0)) / n
        for i, tau in enumerate(taus):
            rows.append([
                int(N_a),
                tau,
                None if a is None else a[i],
                None if m is None else m[i],
                None if s is None else s[i],
            ])
    return header, rows


def optimum(scenario, h_ab, jammer, step):
    """Grid optimum of the closed form for one main channel."""
    basis = build_basis(h_ab, scenario.g_ae_los)
    return search_tau(basis, gamma_b_of(scenario, h_ab), analytic_outage_of(scenario, jammer), step)


def _optimum_row(cfg, sc, jammer):
    """Mean (tau*, P*) and, with the jammer, the no-jammer design evaluated under jamming."""
    out = []
    for h_ab, _ in _channels(cfg, sc):
        design = optimum(sc, h_ab, False, cfg.grid)
        if not jammer:
            out.append((design.tau, design.p_out))
            continue
        best = optimum(sc, h_ab, True, cfg.grid)
        p_design = analytic_outage_of(sc, True)(design.beamformer, gamma_b_of(sc, h_ab)(design.beamformer))
        out.append((design.tau, p_design, best.tau, best.p_out))
    return list(np.mean(np.array(out), axis=0))


def _optimum_header(jammer):
    if jammer:
        return ["tau_star", "P_out_j_at_tau_star", "tau_star_j", "P_out_star_j"]
    return ["tau_star", "P_out_star"]


def outage_vs_snr(cfg):
    jammer = cfg.scenario.jammer
    header = ["N_a", "gamma_ab_db"] + _optimum_header(jammer)
    rows = []
    for N_a in cfg.N_a_values:
        for g_db in cfg.gamma_ab_db_values:
            sc = scenario_for(cfg, N_a).replace(gamma_ab=float(db_to_linear(g_db)))
            rows.append([int(N_a), g_db] + _optimum_row(cfg, sc, jammer))
    return header, rows


def outage_vs_k(cfg):
    jammer = cfg.scenario.jammer
    header = ["N_a", "K_ae_db"] + _optimum_header(jammer)
    rows = []
    for N_a in cfg.N_a_values:
        for k_db in cfg.K_ae_db_values:
            sc = scenario_for(cfg, N_a).replace(K_ae=float(db_to_linear(k_db)))
            rows.append([int(N_a), k_db] + _optimum_row(cfg, sc, jammer))
    return header, rows


def uncertainty_sweep(cfg):
    if cfg.uncertainty is None:
        raise ValueError("uncertainty-sweep needs an [uncertainty] section")
    header = ["scale", "sigma_x_m", "sigma_y_m", "rho", "tau", "P_out_avg", "stderr"]
    sc = cfg.scenario
    jammer = sc.jammer
    h_ab, h_jb = main_channels(sc, cfg.seed)
    n_inner = max(1, cfg.n_trials) if jammer else 1
    rows = []
    for scale in cfg.scales:
        u = cfg.uncertainty.scaled(scale)
        for tau in tau_grid(cfg.grid):
            # common location draws for every tau and scale
            rng = np.random.default_rng([cfg.seed, 2])
            est = average_outage(sc, h_ab, tau, u, cfg.n_locations, n_inner, rng, jammer=jammer, h_jb=h_jb)
            rows.append([scale, u.sigma_x, u.sigma_y, u.rho, tau, est.p_hat, est.std_err])
    return header, rows


def _direction(w):
    """``(a, p)`` with ``w ~ (cos a, sin a e^{jp})`` up to a global phase (N_a = 2)."""
    w = np.asarray(w, dtype=complex)
    w = w / np.linalg.norm(w)
    a = math.acos(min(1.0, abs(w[0])))
    p = float(np.angle(w[1]) - np.angle(w[0])) % (2 * math.pi) if abs(w[0]) > 0 and abs(w[1]) > 0 else 0.0
    return a, p


def _angle_between(u, v):
    """Angle between the complex lines spanned by ``u`` and ``v`` (radians, in [0, pi/2])."""
    c = abs(np.vdot(u, v)) / (np.linalg.norm(u) * np.linalg.norm(v))
    return math.acos(min(1.0, c))


def beam_geometry(cfg):
    """Optimal beamformers with and without the jammer for each ``K_ae``."""
    header = ["K_ae_db", "vector", "tau", "a_rad", "p_rad", "angle_to_h_ab_rad", "angle_to_w1_rad", "leakage_linear"]
    rows = []
    base = cfg.scenario
    h_ab, _ = main_channels(base, cfg.seed)
    h_dir = h_ab.conj()
    for k_db in cfg.K_ae_db_values:
        sc = base.replace(K_ae=float(db_to_linear(k_db)))
        basis = build_basis(h_ab, sc.g_ae_los)
        vectors = [("h_ab", None, h_dir), ("w1", 1.0, basis.w1), ("w2", 0.0, basis.w2)]
        best = optimum(sc, h_ab, False, cfg.grid)
        vectors.append(("w_star", best.tau, best.beamformer.w))
        if sc.params.N_j >= 2 and sc.link.gamma_je > 0 and sc.params.K_je == 0:
            best_j = optimum(sc, h_ab, True, cfg.grid)
            vectors.append(("w_star_j", best_j.tau, best_j.beamformer.w))
        for name, tau, v in vectors:
            if not np.any(v):
                continue
            a, p = _direction(v) if len(v) == 2 else (None, None)
            leak = abs(np.dot(sc.g_ae_los, v / np.linalg.norm(v))) ** 2
            rows.append([k_db, name, tau, a, p, _angle_between(v, h_dir), _angle_between(v, basis.w1) if np.any(basis.w1) else None, leak])
    return header, rows


# ---------------------------------------------------------------- validation


def binomial_stderr(p, n):
    """Standard error of an n-trial frequency whose true probability is ``p``."""
    return math.sqrt(max(p * (1.0 - p), 0.0) / n)


def _check(rows, name, value, tol, passed):
    rows.append([name, value, tol, bool(passed)])


def validate(cfg, n_trials=100_000):
    """Run the analytic-versus-oracle checks; rows are (check, value, tolerance, passed).

    ``value`` is the observed discrepancy, ``tolerance`` its bound.
    """
    rows = []
    seed = cfg.seed
    base = cfg.scenario.replace(jammer=False)

    # special functions
    rng = np.random.default_rng([seed, 10])
    worst_split = worst_exp = worst_rec = 0.0
    for _ in range(200):
        mu, nu = rng.uniform(0.1, 20), rng.uniform(0.01, 30)
        split = special.lower_incomplete_gamma(mu, nu) + special.upper_incomplete_gamma(mu, nu)
        worst_split = max(worst_split, abs(split / special.gamma_fn(mu) - 1))
        worst_exp = max(worst_exp, abs(special.lower_incomplete_gamma(1, nu) - (1 - math.exp(-nu))))
        a, x = rng.uniform(-5, 0.0), rng.uniform(0.05, 10)
        lhs = special.upper_incomplete_gamma(a + 1, x)
        rhs = a * special.upper_incomplete_gamma(a, x) + x ** a * math.exp(-x)
        worst_rec = max(worst_rec, abs(lhs - rhs) / max(abs(lhs), 1e-300))
    _check(rows, "special_splitting_identity", worst_split, 1e-10, worst_split <= 1e-10)
    _check(rows, "special_lower_gamma_order_one", worst_exp, 1e-12, worst_exp <= 1e-12)
    _check(rows, "special_recurrence_negative", worst_rec, 1e-8, worst_rec <= 1e-8)

    # LOS structure
    rank_gap = float(np.linalg.svd(base.G_ae_los, compute_uv=False)[1:].max(initial=0.0))
    _check(rows, "los_matrix_rank_one", rank_gap, 1e-12, rank_gap < 1e-12)

    # closed form without the jammer against the oracle
    for N_a in (2, 3, 4):
        sc = base.replace(N_a=N_a)
        h_ab, h_jb = main_channels(sc, seed)
        taus = np.array([0.0, 0.5, 1.0])
        a, m, _ = tau_curve(sc, h_ab, h_jb, taus, False, n_trials, [seed, N_a, 11])
        for tau, ai, mi in zip(taus, a, m):
            # spread of the frequency if the closed form were the true probability
            tol = 3 * binomial_stderr(ai, n_trials)
            gap = abs(ai - mi)
            _check(rows, f"no_jammer_closed_form_N_a{N_a}_tau{tau:g}", gap, tol, gap <= tol)

    # eve's LOS receive phase has no effect on the outage
    sc = base.replace(N_a=2)
    h_ab, _ = main_channels(sc, seed)
    w = blend(build_basis(h_ab, sc.g_ae_los), 0.5).w
    ests = []
    for phi in (0.0, math.pi / 3):
        sc_phi = sc.replace(geometry=sc.geometry.with_eve_aoa(phi))
        ests.append(empirical_outage(sc_phi, h_ab, w, n_trials, np.random.default_rng([seed, 12])))
    gap = abs(ests[0].p_hat - ests[1].p_hat)
    tol = 3 * math.hypot(ests[0].std_err, ests[1].std_err)
    _check(rows, "eve_receive_phase_invariance", gap, tol, gap <= tol)

    # jammer checks need an active jammer configuration
    jam = cfg.scenario.replace(jammer=True)
    if jam.params.K_je == 0 and jam.link.gamma_je > 0:
        for N_a in (3, 4):
            sc = jam.replace(N_a=N_a)
            h_ab, h_jb = main_channels(sc, seed)
            taus = np.array([0.0, 0.5, 1.0])
            a, m, _ = tau_curve(sc, h_ab, h_jb, taus, True, n_trials, [seed, N_a, 13])
            gap = float(np.max(np.abs(a - m)))
            _check(rows, f"jammer_closed_form_N_a{N_a}", gap, 0.02, gap <= 0.02)

        sc = jam.replace(N_a=2)
        h_ab, h_jb = main_channels(sc, seed)
        w = blend(build_basis(h_ab, sc.g_ae_los), 0.5).w
        g = sample_eve_sinr(sc, w, n_trials, np.random.default_rng([seed, 14]), jammer=True, h_jb=h_jb)
        mom = jammer_moments(sc.params, sc.g_ae_los, w, sc.link)
        e1 = abs(np.mean(g) / mom.mean - 1)
        e2 = abs(np.mean(g ** 2) / mom.second_moment - 1)
        _check(rows, "jammer_first_moment", e1, 0.01, e1 <= 0.01)
        _check(rows, "jammer_second_moment", e2, 0.02, e2 <= 0.02)

        off, on = paired_eve_sinr(sc, w, n_trials, np.random.default_rng([seed, 15]), h_jb)
        excess = float(np.max(on - off * (1 + 1e-12)))
        _check(rows, "jammer_never_helps_eve", max(excess, 0.0), 0.0, excess <= 0)
    return ["check", "value", "tolerance", "passed"], rows

