"""INI experiment configuration and the built-in presets.

Sections: ``[geometry]``, ``[channel]``, ``[link]``, ``[experiment]`` and
``[uncertainty]``. Keys ending in ``_db`` are decibels and are converted to
linear exactly once, here; every other K-factor or SNR key is linear. Angles
are radians and may be written as simple expressions such as ``pi/3`` or
``-pi/4``.

Example::

    [geometry]
    theta_ab = pi/3
    theta_ae = pi/4

    [channel]
    N_a = 2
    N_e = 2
    K_ab_db = 10
    K_ae_db = 5

    [link]
    gamma_ab_db = 10
    gamma_ae_db = 10
"""

import configparser
import io
import math
import re
from dataclasses import dataclass, field

from .geometry import ChannelParams, LinkBudget, Scenario, SystemGeometry, db_to_linear
from .uncertainty import LocationUncertainty


class ConfigError(ValueError):
    """Raised for missing or malformed configuration entries."""


_ANGLE = re.compile(r"^\s*([+-]?)\s*(\d*\.?\d*(?:[eE][+-]?\d+)?)\s*\*?\s*(pi)?\s*(?:/\s*(\d*\.?\d+))?\s*$")


def parse_angle(text):
    """Parse ``1.2``, ``pi``, ``-pi/4``, ``2*pi/3`` or ``0.5pi`` to radians."""
    m = _ANGLE.match(text)
    if not m or (not m.group(2) and not m.group(3)):
        raise ConfigError(f"cannot parse angle {text!r}")
    sign, coef, has_pi, denom = m.groups()
    value = float(coef) if coef else 1.0
    if has_pi:
        value *= math.pi
    if denom:
        value /= float(denom)
    return -value if sign == "-" else value


def _float(text):
    t = text.strip().lower()
    if t in ("inf", "+inf", "infinity"):
        return math.inf
    if t in ("-inf", "-infinity"):
        return -math.inf
    return float(t)


def parse_list(text, conv=_float):
    return [conv(t) for t in text.replace(";", ",").split(",") if t.strip()]


PRESETS = {
    "fig2": """
[geometry]
theta_ab = pi/3
theta_ae = pi/4
[channel]
N_a = 2
N_e = 2
K_ab_db = 10
K_ae_db = 5
[link]
gamma_ab_db = 10
gamma_ae_db = 10
[experiment]
R_s = 1
jammer = false
N_a_values = 2, 3, 4
""",
    "fig3": """
[geometry]
theta_ab = pi/3
theta_ae = pi/4
[channel]
N_a = 2
N_e = 2
K_ab_db = 10
K_ae_db = 5
[link]
gamma_ab_db = 10
gamma_ae_db = 10
[experiment]
R_s = 1
jammer = false
N_a_values = 2, 3, 4
gamma_ab_db_values = 6, 8, 10, 12, 14
""",
    "fig4": """
[geometry]
theta_ab = pi/3
theta_ae = pi/4
[channel]
N_a = 2
N_e = 2
K_ab_db = 10
K_ae_db = 5
[link]
gamma_ab_db = 10
gamma_ae_db = 10
[experiment]
R_s = 1
jammer = false
N_a_values = 2, 3, 4
K_ae_db_values = 0, 5, 10
""",
    "fig5": """
[geometry]
theta_ab = pi/3
theta_ae = pi/4
[channel]
N_a = 2
N_e = 2
N_j = 4
K_ab_db = 10
K_ae_db = 5
K_je = 0
[link]
gamma_ab_db = 10
gamma_ae_db = 10
gamma_je_db = 10
[experiment]
R_s = 1
jammer = true
N_a_values = 2, 3, 4
""",
    "fig6": """
[geometry]
theta_ab = pi/3
theta_ae = pi/4
[channel]
N_a = 2
N_e = 2
N_j = 4
K_ab_db = 10
K_ae_db = 5
K_je = 0
[link]
gamma_ab_db = 10
gamma_ae_db = 10
gamma_je_db = 10
[experiment]
R_s = 1
jammer = true
N_a_values = 2, 3, 4
gamma_ab_db_values = 6, 8, 10, 12, 14
""",
    "fig8": """
[geometry]
theta_ab = pi/3
theta_ae = pi/4
[channel]
N_a = 2
N_e = 2
N_j = 4
K_ab_db = 10
K_ae_db = 5
K_je = 0
[link]
gamma_ab_db = 10
gamma_ae_db = 10
gamma_je_db = 10
[experiment]
R_s = 1
jammer = false
K_ae_db_values = -inf, inf, 5
""",
    "fig9": """
[geometry]
bob_x = 1225
bob_y = 707
eve_x = 1000
eve_y = -1000
jammer_x = 2000
jammer_y = -3464
[channel]
N_a = 4
N_e = 2
N_j = 4
K_ab_db = 10
K_ae_db = 5
K_je = 0
[link]
gamma_ab_db = 10
gamma_ae_db = 10
gamma_je_db = 10
[experiment]
R_s = 1
jammer = false
n_locations = 2000
[uncertainty]
c_sigma = 100
rho = 0
scales = 1, 4, 16
""",
}


@dataclass
class ExperimentConfig:
    scenario: Scenario
    seed: int = 0
    n_trials: int = 0
    grid: float = 1e-2
    N_a_values: list = field(default_factory=list)
    gamma_ab_db_values: list = field(default_factory=list)
    K_ae_db_values: list = field(default_factory=list)
    h_ab_mode: str = "fixed"
    n_channels: int = 100
    n_locations: int = 1000
    uncertainty: LocationUncertainty = None
    scales: list = field(default_factory=lambda: [1.0])


class _Reader:
    def __init__(self, cp):
        self.cp = cp

    def has(self, section, key):
        return self.cp.has_option(section, key)

    def raw(self, section, key):
        if not self.has(section, key):
            raise ConfigError(f"missing required key '{key}' in section [{section}]")
        return self.cp.get(section, key)

    def get(self, section, key, conv=_float, default=None):
        if not self.has(section, key):
            return default
        text = self.cp.get(section, key)
        try:
            return conv(text)
        except (ValueError, ConfigError) as exc:
            raise ConfigError(f"bad value for '{key}' in [{section}]: {text!r} ({exc})") from None

    def require(self, section, key, conv=_float):
        self.raw(section, key)
        return self.get(section, key, conv)

    def linear_or_db(self, section, key, default=None):
        """``key`` in linear units or ``key_db`` in decibels, never both."""
        lin, db = self.has(section, key), self.has(section, key + "_db")
        if lin and db:
            raise ConfigError(f"both '{key}' and '{key}_db' given in [{section}]")
        if db:
            return float(db_to_linear(self.get(section, key + "_db")))
        return self.get(section, key, default=default)


def _int(text):
    value = float(text)
    if value != int(value):
        raise ValueError("expected an integer")
    return int(value)


def _bool(text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError("expected a boolean")


def _geometry(r):
    s = "geometry"
    orient = r.get(s, "eve_orientation", parse_angle, 0.0)
    if r.has(s, "bob_x") or r.has(s, "eve_x"):
        bob = (r.require(s, "bob_x"), r.require(s, "bob_y"))
        eve = (r.require(s, "eve_x"), r.require(s, "eve_y"))
        jam = None
        if r.has(s, "jammer_x") or r.has(s, "jammer_y"):
            jam = (r.require(s, "jammer_x"), r.require(s, "jammer_y"))
        return SystemGeometry.from_cartesian(bob, eve, jam, eve_orientation=orient)
    kwargs = dict(
        d_ab=r.get(s, "d_ab", default=1.0),
        theta_ab=r.require(s, "theta_ab", parse_angle),
        d_ae=r.get(s, "d_ae", default=1.0),
        theta_ae=r.require(s, "theta_ae", parse_angle),
        eve_orientation=orient,
    )
    if r.has(s, "d_aj"):
        kwargs["d_aj"] = r.get(s, "d_aj")
    if r.has(s, "theta_aj"):
        kwargs["theta_aj"] = r.get(s, "theta_aj", parse_angle)
    return SystemGeometry(**kwargs)


def _params(r):
    s = "channel"
    kwargs = {"N_a": r.require(s, "N_a", _int), "N_e": r.require(s, "N_e", _int)}
    if r.has(s, "N_j"):
        kwargs["N_j"] = r.get(s, "N_j", _int)
    for name in ("K_ab", "K_ae", "K_je", "K_jb"):
        v = r.linear_or_db(s, name)
        if v is not None:
            kwargs[name] = v
    for name in ("delta_a", "delta_j", "delta_e", "eta_ab", "eta_ae", "eta_je", "P_a", "P_j", "sigma2_b", "sigma2_e"):
        if r.has(s, name):
            kwargs[name] = r.get(s, name)
    return ChannelParams(**kwargs)


def _link(r, params, geometry):
    s = "link"
    if not r.cp.has_section(s):
        return LinkBudget.from_physical(params, geometry)
    return LinkBudget(
        gamma_ab=r.linear_or_db(s, "gamma_ab") or _missing(s, "gamma_ab"),
        gamma_ae=r.linear_or_db(s, "gamma_ae") or _missing(s, "gamma_ae"),
        gamma_je=r.linear_or_db(s, "gamma_je", default=0.0),
    )


def _missing(section, key):
    raise ConfigError(f"missing required key '{key}' (or '{key}_db') in section [{section}]")


def _uncertainty(r, geometry):
    s = "uncertainty"
    if not r.cp.has_section(s):
        return None
    true_xy = geometry.eve_xy
    rho = r.get(s, "rho", default=0.0)
    if r.has(s, "c_sigma"):
        c = r.get(s, "c_sigma")
        return LocationUncertainty(true_xy, c, c, rho)
    return LocationUncertainty(true_xy, r.require(s, "sigma_x"), r.require(s, "sigma_y"), rho)


def parse_config(text, overrides=None):
    """Build an :class:`ExperimentConfig` from INI text (plus CLI overrides)."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    for sec in ("geometry", "channel"):
        if not cp.has_section(sec):
            raise ConfigError(f"missing section [{sec}]")
    r = _Reader(cp)
    try:
        geometry = _geometry(r)
        params = _params(r)
        link = _link(r, params, geometry)
        e = "experiment"
        scenario = Scenario(
            geometry=geometry,
            params=params,
            link=link,
            R_s=r.get(e, "R_s", default=1.0),
            jammer=r.get(e, "jammer", _bool, False),
        )
        cfg = ExperimentConfig(
            scenario=scenario,
            seed=r.get(e, "seed", _int, 0),
            n_trials=r.get(e, "trials", _int, 0),
            grid=r.get(e, "grid", default=1e-2),
            N_a_values=r.get(e, "N_a_values", lambda t: parse_list(t, _int), [params.N_a]),
            gamma_ab_db_values=r.get(e, "gamma_ab_db_values", parse_list, []),
            K_ae_db_values=r.get(e, "K_ae_db_values", parse_list, []),
            h_ab_mode=r.get(e, "h_ab_mode", lambda t: t.strip(), "fixed"),
            n_channels=r.get(e, "n_channels", _int, 100),
            n_locations=r.get(e, "n_locations", _int, 1000),
            uncertainty=_uncertainty(r, geometry),
            scales=r.get("uncertainty", "scales", parse_list, [1.0]),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if cfg.h_ab_mode not in ("fixed", "redraw"):
        raise ConfigError(f"h_ab_mode must be 'fixed' or 'redraw', got {cfg.h_ab_mode!r}")
    for key, value in (overrides or {}).items():
        if value is not None:
            setattr(cfg, key, value)
    return cfg


def load_config(path=None, preset=None, overrides=None):
    """Read a preset and/or a config file; file entries override the preset."""
    if path is None and preset is None:
        raise ConfigError("either a config file or a preset is required")
    text = ""
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        text = PRESETS[preset]
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                file_text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if preset is None:
            text = file_text
        else:
            cp = configparser.ConfigParser(interpolation=None)
            cp.optionxform = str
            cp.read_string(text)
            try:
                cp.read_string(file_text)
            except configparser.Error as exc:
                raise ConfigError(f"malformed config: {exc}") from None
            buf = io.StringIO()
            cp.write(buf)
            text = buf.getvalue()
    return parse_config(text, overrides)
