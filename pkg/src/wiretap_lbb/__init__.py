"""Secrecy outage of Rician wiretap channels with location-based beamforming."""

from .beamformer import BeamBasis, Beamformer, blend, build_basis, optimize_tau, search_tau, tau_grid
from .geometry import ChannelParams, LinkBudget, Scenario, SystemGeometry, los_matrix_to_eve, los_vector
from .montecarlo import OutageEstimate, empirical_outage, exhaustive_search
from .outage import OutageQuery, eve_stats, jammer_moments, outage_no_jammer, outage_with_jammer
from .uncertainty import LocationUncertainty, average_outage, sample_location

__all__ = [
    "BeamBasis",
    "Beamformer",
    "ChannelParams",
    "LinkBudget",
    "LocationUncertainty",
    "OutageEstimate",
    "OutageQuery",
    "Scenario",
    "SystemGeometry",
    "average_outage",
    "blend",
    "build_basis",
    "empirical_outage",
    "eve_stats",
    "exhaustive_search",
    "jammer_moments",
    "los_matrix_to_eve",
    "los_vector",
    "optimize_tau",
    "outage_no_jammer",
    "outage_with_jammer",
    "sample_location",
    "search_tau",
    "tau_grid",
]
