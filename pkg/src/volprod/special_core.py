"""Scalar special functions: log-gamma, shifted and double factorials.

``log_gamma`` delegates to the C library ``lgamma`` (through :mod:`math`),
which is accurate to a few ulp on the positive axis.  ``gamma_limit`` is a
deliberately naive second route to the same function and is what the tests
use to keep ``log_gamma`` honest.
"""

import math

import numpy as np

__all__ = [
    "DomainError",
    "log_gamma",
    "pochhammer_log",
    "gamma_limit",
    "double_factorial",
    "log_double_factorial",
]


class DomainError(ValueError):
    """Argument outside the domain of a function."""


def _finite(name, x):
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x!r}")
    return x


def log_gamma(x):
    """Natural log of Gamma(x) for x > 0."""
    x = _finite("x", x)
    if x <= 0.0:
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def pochhammer_log(z, k):
    """ln (z)_k where (z)_k = z (z+1) ... (z+k-1); (z)_0 = 1.

    The logs of the factors are summed with ``math.fsum`` so the result
    carries no accumulated rounding for large ``k``.
    """
    z = _finite("z", z)
    k = int(k)
    if k < 0:
        raise DomainError(f"k must be nonnegative, got {k}")
    if k == 0:
        return 0.0
    if z <= 0.0:
        raise DomainError(f"every factor z + j must be positive, got z={z!r}")
    factors = z + np.arange(k, dtype=np.float64)
    return math.fsum(np.log(factors))


def gamma_limit(z, K):
    """K-th term of the limit K**(z-1) K! / (z)_K, which tends to Gamma(z).

    No acceleration: the relative error is roughly z (z - 1) / (2 K).
    """
    z = _finite("z", z)
    K = int(K)
    if z <= 0.0:
        raise DomainError(f"gamma_limit requires z > 0, got {z!r}")
    if K < 1:
        raise DomainError(f"K must be a positive integer, got {K}")
    if z == 1.0:
        return 1.0
    log_value = (z - 1.0) * math.log(K) + pochhammer_log(1.0, K) - pochhammer_log(z, K)
    return math.exp(log_value)


def double_factorial(n):
    """Exact n!! as a Python int (0!! = 1!! = 1)."""
    n = int(n)
    if n < 0:
        raise DomainError(f"double_factorial requires n >= 0, got {n}")
    return math.prod(range(n, 0, -2))


def log_double_factorial(n):
    """ln n!!, usable where n!! itself would overflow a float."""
    n = int(n)
    if n < 0:
        raise DomainError(f"double_factorial requires n >= 0, got {n}")
    if n <= 1:
        return 0.0
    return math.fsum(np.log(np.arange(n, 0, -2, dtype=np.float64)))
