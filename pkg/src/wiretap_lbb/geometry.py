"""Node geometry, channel parameters, LOS components and Rician sampling.

Conventions
-----------
* Every transmit array (Alice, jammer) is a ULA laid along the x axis, so the
  LOS phase toward a node depends on the cosine of its bearing.
* Eve's array axis is rotated by ``eve_orientation``; her angles of arrival
  ``phi_ae`` / ``phi_je`` are measured from that axis.
* Channel rows are 1-D numpy arrays (row vectors); beamformers are 1-D arrays
  (column vectors). ``h @ w`` is therefore the scalar channel gain.
* All K-factors and SNRs here are linear.
"""

import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np


def db_to_linear(value_db):
    return 10.0 ** (np.asarray(value_db, dtype=float) / 10.0)


def linear_to_db(value):
    return 10.0 * np.log10(value)


def _bearing(from_xy, to_xy):
    return math.atan2(to_xy[1] - from_xy[1], to_xy[0] - from_xy[0])


def _polar_to_xy(d, theta):
    return (d * math.cos(theta), d * math.sin(theta))


@dataclass(frozen=True)
class SystemGeometry:
    """Polar locations of Bob, the jammer and Eve around Alice at the origin.

    Distances are in meters, angles in radians. Everything involving two
    non-Alice nodes (``d_je``, ``theta_je``, ``theta_jb``, ``phi_ae``,
    ``phi_je``) is derived from the Cartesian images and cannot be passed in.
    """

    d_ab: float
    theta_ab: float
    d_ae: float
    theta_ae: float
    d_aj: float = 4000.0
    theta_aj: float = -math.pi / 3
    eve_orientation: float = 0.0

    def __post_init__(self):
        for name in ("d_ab", "d_ae", "d_aj"):
            v = getattr(self, name)
            if not math.isfinite(v) or v <= 0:
                raise ValueError(f"{name} must be a positive finite distance, got {v}")
        for name in ("theta_ab", "theta_ae", "theta_aj", "eve_orientation"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.d_je <= 0:
            raise ValueError("jammer and Eve must not be co-located")

    @classmethod
    def from_cartesian(cls, bob, eve, jammer=None, eve_orientation=0.0):
        """Build from Cartesian (x, y) positions in meters; Alice sits at (0, 0)."""
        kwargs = {}
        if jammer is not None:
            kwargs.update(d_aj=math.hypot(*jammer), theta_aj=math.atan2(jammer[1], jammer[0]))
        return cls(
            d_ab=math.hypot(*bob),
            theta_ab=math.atan2(bob[1], bob[0]),
            d_ae=math.hypot(*eve),
            theta_ae=math.atan2(eve[1], eve[0]),
            eve_orientation=eve_orientation,
            **kwargs,
        )

    @property
    def alice_xy(self):
        return (0.0, 0.0)

    @property
    def bob_xy(self):
        return _polar_to_xy(self.d_ab, self.theta_ab)

    @property
    def eve_xy(self):
        return _polar_to_xy(self.d_ae, self.theta_ae)

    @property
    def jammer_xy(self):
        return _polar_to_xy(self.d_aj, self.theta_aj)

    @cached_property
    def d_je(self):
        (xj, yj), (xe, ye) = self.jammer_xy, self.eve_xy
        return math.hypot(xe - xj, ye - yj)

    @cached_property
    def d_jb(self):
        (xj, yj), (xb, yb) = self.jammer_xy, self.bob_xy
        return math.hypot(xb - xj, yb - yj)

    @cached_property
    def theta_je(self):
        """Bearing from the jammer to Eve."""
        return _bearing(self.jammer_xy, self.eve_xy)

    @cached_property
    def theta_jb(self):
        """Bearing from the jammer to Bob."""
        return _bearing(self.jammer_xy, self.bob_xy)

    @cached_property
    def phi_ae(self):
        """Angle of arrival of Alice's signal at Eve, relative to Eve's array axis."""
        return _bearing(self.eve_xy, self.alice_xy) - self.eve_orientation

    @cached_property
    def phi_je(self):
        return _bearing(self.eve_xy, self.jammer_xy) - self.eve_orientation

    def with_eve_at(self, xy):
        """Same geometry with Eve moved to Cartesian ``xy`` (orientation kept)."""
        return replace(self, d_ae=math.hypot(*xy), theta_ae=math.atan2(xy[1], xy[0]))

    def with_eve_aoa(self, phi):
        """Rotate Eve's array so that ``phi_ae == phi``; positions are unchanged."""
        return replace(self, eve_orientation=_bearing(self.eve_xy, self.alice_xy) - phi)


@dataclass(frozen=True)
class ChannelParams:
    """Antenna counts, Rician factors, array spacings and physical link terms.

    K-factors are linear. ``P_j == 0`` switches the jammer off.
    """

    N_a: int
    N_e: int
    N_j: int = 4
    K_ab: float = 10.0
    K_ae: float = 10.0 ** 0.5
    K_je: float = 0.0
    K_jb: float = 10.0
    delta_a: float = 0.5
    delta_j: float = 0.5
    delta_e: float = 0.5
    eta_ab: float = 4.0
    eta_ae: float = 4.0
    eta_je: float = 4.0
    P_a: float = 1.0
    P_j: float = 1.0
    sigma2_b: float = 1.0
    sigma2_e: float = 1.0

    def __post_init__(self):
        if self.N_a < 1 or self.N_e < 1 or self.N_j < 1:
            raise ValueError("antenna counts must be >= 1")
        for name in ("K_ab", "K_ae", "K_je", "K_jb"):
            v = getattr(self, name)
            if not v >= 0:
                raise ValueError(f"{name} must be >= 0, got {v}")
        for name in ("delta_a", "delta_j", "delta_e"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        if not self.P_a > 0 or not self.P_j >= 0:
            raise ValueError("P_a must be > 0 and P_j >= 0")
        if not self.sigma2_b > 0 or not self.sigma2_e > 0:
            raise ValueError("noise variances must be > 0")

    @property
    def jammer_active(self):
        return self.P_j > 0

    def require_jammer(self):
        if self.N_j < 2:
            raise ValueError(f"an active jammer needs N_j >= 2, got N_j={self.N_j}")


@dataclass(frozen=True)
class LinkBudget:
    """Average link SNRs P * d**-eta / sigma**2 (linear)."""

    gamma_ab: float
    gamma_ae: float
    gamma_je: float = 0.0

    def __post_init__(self):
        if not self.gamma_ab > 0 or not self.gamma_ae > 0 or not self.gamma_je >= 0:
            raise ValueError("link SNRs must be positive (gamma_je may be 0)")

    @classmethod
    def from_physical(cls, params, geometry):
        return cls(
            gamma_ab=params.P_a * geometry.d_ab ** -params.eta_ab / params.sigma2_b,
            gamma_ae=params.P_a * geometry.d_ae ** -params.eta_ae / params.sigma2_e,
            gamma_je=params.P_j * geometry.d_je ** -params.eta_je / params.sigma2_e,
        )


@dataclass(frozen=True)
class Scenario:
    """Everything needed to evaluate an outage: geometry, channel, link budget, rate."""

    geometry: SystemGeometry
    params: ChannelParams
    link: LinkBudget
    R_s: float = 1.0
    jammer: bool = False

    def __post_init__(self):
        if not self.R_s >= 0:
            raise ValueError("R_s must be >= 0")
        if self.jammer:
            self.params.require_jammer()

    @cached_property
    def h_ab_los(self):
        return los_vector(self.params.N_a, self.params.delta_a, self.geometry.theta_ab)

    @cached_property
    def h_jb_los(self):
        return los_vector(self.params.N_j, self.params.delta_j, self.geometry.theta_jb)

    @cached_property
    def g_ae_los(self):
        return los_vector(self.params.N_a, self.params.delta_a, self.geometry.theta_ae)

    @cached_property
    def G_ae_los(self):
        p, g = self.params, self.geometry
        return los_matrix_to_eve(p.N_a, p.N_e, p.delta_a, p.delta_e, g.theta_ae, g.phi_ae)

    @cached_property
    def G_je_los(self):
        p, g = self.params, self.geometry
        return los_matrix_to_eve(p.N_j, p.N_e, p.delta_j, p.delta_e, g.theta_je, g.phi_je)

    def replace(self, **changes):
        """Copy with top-level fields, ``ChannelParams`` or ``LinkBudget`` fields swapped."""
        top = {k: changes.pop(k) for k in list(changes) if k in ("geometry", "params", "link", "R_s", "jammer")}
        param_fields = {k: changes.pop(k) for k in list(changes) if k in ChannelParams.__dataclass_fields__}
        link_fields = {k: changes.pop(k) for k in list(changes) if k in LinkBudget.__dataclass_fields__}
        if changes:
            raise TypeError(f"unknown scenario fields: {sorted(changes)}")
        params = replace(top.pop("params", self.params), **param_fields)
        link = replace(top.pop("link", self.link), **link_fields)
        return replace(self, params=params, link=link, **top)


def los_vector(n, spacing, theta):
    """ULA response ``exp(j 2 pi m spacing cos(theta))``, m = 0..n-1."""
    if n < 1:
        raise ValueError(f"array needs at least one antenna, got {n}")
    if not spacing > 0:
        raise ValueError(f"antenna spacing must be > 0, got {spacing}")
    return np.exp(1j * 2 * np.pi * np.arange(n) * spacing * np.cos(theta))


def los_matrix_to_eve(n_tx, n_e, spacing_tx, spacing_e, theta, phi):
    """Rank-one LOS matrix ``r g`` from a transmitter to Eve (n_e x n_tx).

    ``r`` is Eve's receive response (negative phase progression in
    ``cos(phi)``) and ``g`` the transmit response toward ``theta``.
    """
    if n_e < 1:
        raise ValueError(f"Eve needs at least one antenna, got {n_e}")
    r = np.conj(los_vector(n_e, spacing_e, phi))
    g = los_vector(n_tx, spacing_tx, theta)
    return np.outer(r, g)


def complex_normal(rng, shape):
    """i.i.d. CN(0, 1) samples (real and imaginary parts each with variance 1/2)."""
    scale = math.sqrt(0.5)
    return scale * rng.standard_normal(shape) + 1j * scale * rng.standard_normal(shape)


def sample_rician_vector(los, K, rng, size=None):
    """Draw ``sqrt(K/(1+K)) los + sqrt(1/(1+K)) h_r`` with CN(0, 1) scatter.

    ``size`` prepends a batch dimension; ``None`` returns one realization.
    """
    if not K >= 0:
        raise ValueError(f"K must be >= 0, got {K}")
    los = np.asarray(los)
    shape = los.shape if size is None else (size,) + los.shape
    if math.isinf(K):
        return np.broadcast_to(los, shape).astype(complex)
    scatter = complex_normal(rng, shape)
    return math.sqrt(K / (1 + K)) * los + math.sqrt(1 / (1 + K)) * scatter


def sample_rician_matrix(los, K, rng, size=None):
    """Matrix analogue of :func:`sample_rician_vector`."""
    return sample_rician_vector(los, K, rng, size=size)
