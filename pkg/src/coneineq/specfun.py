"""Special functions underlying the closed-form constants.

Everything here is a thin, guarded wrapper around the C library's Lanczos
log-Gamma: all sharp constants in this package are products of Gamma values
raised to small powers, so they are assembled in log space and exponentiated
once.  Arguments are restricted to (0, 1e4]; larger values are rejected
rather than silently losing precision.
"""

from __future__ import annotations

import math

_MAX_ARG = 1e4


def _check_positive(name, x):
    if not (x > 0):
        raise ValueError(f"{name} must be positive, got {x}")
    if x > _MAX_ARG:
        raise ValueError(f"{name}={x} exceeds the supported range (0, {_MAX_ARG:g}]")


def log_gamma(x):
    """Natural log of Gamma(x) for x in (0, 1e4]."""
    _check_positive("x", x)
    return math.lgamma(x)


def gamma_fn(x):
    """Gamma(x) = exp(log_gamma(x)); overflows above x ~ 171 are rejected."""
    _check_positive("x", x)
    if x > 171.6:
        raise ValueError(f"Gamma({x}) overflows double precision; use log_gamma")
    return math.exp(math.lgamma(x))


def log_beta(a, b):
    """Natural log of the Euler Beta function B(a, b)."""
    _check_positive("a", a)
    _check_positive("b", b)
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def beta(a, b):
    """Euler Beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a+b)."""
    return math.exp(log_beta(a, b))
