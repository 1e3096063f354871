"""Average secrecy outage when Eve's location is only known up to a Gaussian.

Alice builds her beamformer from a location drawn from her belief while the
channel to Eve is generated at Eve's true location. Averaging the resulting
outage over the belief gives the location-averaged outage.
"""

import math
from dataclasses import dataclass

import numpy as np

from .beamformer import blend, build_basis
from .geometry import los_vector
from .montecarlo import OutageEstimate, empirical_outage
from .outage import OutageQuery, bob_sinr, eve_stats, outage_no_jammer


@dataclass(frozen=True)
class LocationUncertainty:
    """Bivariate normal belief about Eve's (x, y) position in meters.

    ``sigma_x = sigma_y = 0`` is accepted and means the location is known.
    """

    true_location: tuple
    sigma_x: float
    sigma_y: float
    rho: float = 0.0

    def __post_init__(self):
        x0, y0 = self.true_location
        if not (math.isfinite(x0) and math.isfinite(y0)):
            raise ValueError("true_location must be finite")
        if not (self.sigma_x >= 0 and self.sigma_y >= 0):
            raise ValueError(f"sigma_x and sigma_y must be >= 0, got {self.sigma_x}, {self.sigma_y}")
        if not abs(self.rho) < 1:
            raise ValueError(f"|rho| must be < 1 for a positive definite covariance, got {self.rho}")
        if (self.sigma_x == 0) != (self.sigma_y == 0):
            raise ValueError("covariance is singular: only one of sigma_x, sigma_y is zero")

    @classmethod
    def isotropic(cls, true_location, c_sigma):
        """``sigma_x = sigma_y = c_sigma``, uncorrelated.

        A convenience for sweeps over a single spread parameter; it is not
        derived from any particular localization system.
        """
        return cls(true_location=tuple(true_location), sigma_x=float(c_sigma), sigma_y=float(c_sigma))

    @property
    def is_point_mass(self):
        return self.sigma_x == 0 and self.sigma_y == 0

    @property
    def covariance(self):
        sxy = self.rho * self.sigma_x * self.sigma_y
        return np.array([[self.sigma_x ** 2, sxy], [sxy, self.sigma_y ** 2]])

    def scaled(self, factor):
        """Covariance multiplied by ``factor`` (standard deviations by its square root)."""
        if not factor >= 0:
            raise ValueError("covariance scale must be >= 0")
        s = math.sqrt(factor)
        return LocationUncertainty(self.true_location, self.sigma_x * s, self.sigma_y * s, self.rho)

    def cholesky(self):
        if self.is_point_mass:
            return np.zeros((2, 2))
        return np.linalg.cholesky(self.covariance)


def sample_location(u, rng, size=None):
    """Draw belief locations; shape (2,) for ``size=None``, else (size, 2).

    Draws are ``mean + L z`` with ``L`` the Cholesky factor, so the same
    generator state gives draws that scale with the covariance.
    """
    n = 1 if size is None else int(size)
    z = rng.standard_normal((n, 2))
    pts = np.asarray(u.true_location, dtype=float) + z @ u.cholesky().T
    return pts[0] if size is None else pts


def _belief_beamformer(scenario, h_ab, tau, xy):
    geom = scenario.geometry.with_eve_at(xy)
    g_belief = los_vector(scenario.params.N_a, scenario.params.delta_a, geom.theta_ae)
    return blend(build_basis(h_ab, g_belief), tau).w


def average_outage(scenario, h_ab, tau, u, n_locations, n_trials_per_location, rng, jammer=None, h_jb=None):
    """Outage averaged over Alice's belief about Eve's location.

    Parameters
    ----------
    scenario : Scenario
        Geometry with Eve at her true position.
    h_ab : ndarray
        Realized main channel.
    tau : float
        Beamformer blend parameter.
    u : LocationUncertainty
        Belief; ``u.true_location`` should match ``scenario.geometry``.
    n_locations : int
        Number of belief draws.
    n_trials_per_location : int
        Channel draws per location when the inner outage is empirical.
    rng : numpy.random.Generator
    jammer : bool, optional
        Overrides ``scenario.jammer``. Without the jammer the inner outage is
        the closed form; with it an empirical estimate (needs ``h_jb``).

    Returns
    -------
    OutageEstimate
        Mean over locations; ``std_err`` reflects the spread across them.
    """
    if n_locations < 1 or n_trials_per_location < 1:
        raise ValueError("n_locations and n_trials_per_location must be >= 1")
    jammer = scenario.jammer if jammer is None else jammer
    ex, ey = scenario.geometry.eve_xy
    if not np.allclose(u.true_location, (ex, ey), rtol=1e-9, atol=1e-6):
        raise ValueError(f"u.true_location {u.true_location} does not match the scenario's Eve at {(ex, ey)}")

    locs = sample_location(u, rng, size=n_locations)
    link, p = scenario.link, scenario.params
    values = np.empty(n_locations)
    for i, xy in enumerate(locs):
        w = _belief_beamformer(scenario, h_ab, tau, xy)
        if jammer:
            values[i] = empirical_outage(scenario, h_ab, w, n_trials_per_location, rng, jammer=True, h_jb=h_jb).p_hat
        else:
            query = OutageQuery(scenario.R_s, bob_sinr(h_ab, w, link.gamma_ab))
            values[i] = outage_no_jammer(query, eve_stats(p.K_ae, scenario.g_ae_los, w, link.gamma_ae), p.N_e)
    return OutageEstimate.from_samples(values)
