"""Gamma-family special functions.

Only real arguments are supported. The upper incomplete gamma function is
defined for every real first argument (including zero and negative values)
as long as the second argument is strictly positive.
"""

import math

EULER_GAMMA = 0.57721566490153286061

_EPS = 1e-16
_FPMIN = 1e-300
_MAX_ITER = 10_000


def _check_finite(*values):
    for v in values:
        if math.isnan(v) or math.isinf(v):
            raise ValueError(f"argument must be finite, got {v!r}")


def gamma_fn(z):
    """Gamma function for z > 0."""
    z = float(z)
    _check_finite(z)
    if z <= 0:
        raise ValueError(f"gamma_fn requires z > 0, got {z}")
    return math.gamma(z)


def pochhammer(n, m):
    """Rising factorial (n)_m = n (n+1) ... (n+m-1), with (n)_0 = 1."""
    if n < 1 or m < 0 or int(m) != m:
        raise ValueError(f"pochhammer requires n >= 1 and integer m >= 0, got ({n}, {m})")
    out = 1.0
    for k in range(int(m)):
        out *= n + k
    return out


def _series_regularized_lower(a, x):
    # P(a, x) by the power series; a > 0, converges fast for x < a + 1
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    else:
        raise ArithmeticError(f"incomplete gamma series did not converge for ({a}, {x})")
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _continued_fraction(a, x):
    """Lentz evaluation of the Gamma(a, x) continued fraction, prefactor excluded."""
    b = x + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b if b != 0 else 1.0 / _FPMIN
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    else:
        raise ArithmeticError(f"incomplete gamma continued fraction did not converge for ({a}, {x})")
    return h


def _continued_fraction_upper(a, x):
    # unregularized Gamma(a, x); valid for any real a when x > 0
    return math.exp(-x + a * math.log(x)) * _continued_fraction(a, x)


def _exp1_small(x):
    # E1(x) = Gamma(0, x) by its convergent series, used for 0 < x < 1
    total = 0.0
    term = 1.0
    for k in range(1, _MAX_ITER):
        term *= -x / k
        contrib = term / k
        total += contrib
        if abs(contrib) < _EPS * max(abs(total), 1e-300):
            break
    return -EULER_GAMMA - math.log(x) - total


def lower_incomplete_gamma(mu, nu):
    """Lower incomplete gamma function.

    Parameters
    ----------
    mu : float
        Shape argument, ``mu > 0``.
    nu : float
        Upper integration limit, ``nu >= 0``.

    Returns
    -------
    float
        ``int_0^nu exp(-t) t^(mu-1) dt``.
    """
    mu, nu = float(mu), float(nu)
    _check_finite(mu, nu)
    if mu <= 0:
        raise ValueError(f"lower_incomplete_gamma requires mu > 0, got {mu}")
    if nu < 0:
        raise ValueError(f"lower_incomplete_gamma requires nu >= 0, got {nu}")
    if nu == 0:
        return 0.0
    if nu < mu + 1.0:
        return _series_regularized_lower(mu, nu) * math.gamma(mu)
    return math.gamma(mu) - _continued_fraction_upper(mu, nu)


def regularized_lower_gamma(mu, nu):
    """P(mu, nu) = lower_incomplete_gamma(mu, nu) / Gamma(mu), in [0, 1].

    Evaluated without forming Gamma(mu) so it stays finite for large shapes.
    """
    mu, nu = float(mu), float(nu)
    _check_finite(mu, nu)
    if mu <= 0:
        raise ValueError(f"regularized_lower_gamma requires mu > 0, got {mu}")
    if nu < 0:
        raise ValueError(f"regularized_lower_gamma requires nu >= 0, got {nu}")
    if nu == 0:
        return 0.0
    if nu < mu + 1.0:
        return min(1.0, _series_regularized_lower(mu, nu))
    q = math.exp(-nu + mu * math.log(nu) - math.lgamma(mu)) * _continued_fraction(mu, nu)
    return min(1.0, max(0.0, 1.0 - q))


def upper_incomplete_gamma(mu, nu):
    """Upper incomplete gamma function for any real ``mu`` and ``nu > 0``.

    For ``mu > 0`` the usual series / continued-fraction pair is used with the
    switch at ``nu = mu + 1``. For ``mu <= 0`` the continued fraction is used
    when ``nu >= 1``; below that the value is reached by applying

        Gamma(a, nu) = (Gamma(a + 1, nu) - nu**a * exp(-nu)) / a

    downward from a positive shifted argument (or from ``E1(nu)`` when ``mu``
    is a non-positive integer).
    """
    mu, nu = float(mu), float(nu)
    _check_finite(mu, nu)
    if nu <= 0:
        raise ValueError(f"upper_incomplete_gamma requires nu > 0, got {nu}")
    if mu > 0:
        if nu < mu + 1.0:
            return math.gamma(mu) - lower_incomplete_gamma(mu, nu)
        return _continued_fraction_upper(mu, nu)
    if nu >= 1.0:
        return _continued_fraction_upper(mu, nu)

    steps = math.ceil(-mu)
    start = mu + steps
    if start < 1e-12:
        # non-positive integer (up to float noise): start from E1
        start, steps = 0.0, round(-mu)
        value = _exp1_small(nu)
    else:
        value = math.gamma(start) - lower_incomplete_gamma(start, nu)
    a = start
    for _ in range(steps):
        a -= 1.0
        value = (value - math.exp(a * math.log(nu) - nu)) / a
    return value
