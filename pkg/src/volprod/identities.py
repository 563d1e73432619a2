"""Closed-form products obtained from the gamma-free representation at p = 2.

At p = 2 the product form collapses to M(n, 2) = 4**n (pi/4)**(2n-2) Q_n**2
with Q_n = prod_k (2k+1)**(n-2) (2k+n) / (2k+2)**(n-1), so every Q_n has a
closed value.  The even case n = 2m gives (4/pi)**(m-1) / m!.  For the odd
case and the ratio product built from the two, the published indices are
inconsistent with this derivation; both the published and the rederived
versions are evaluated, and the published ones are expected to fail.
"""

import math

import numpy as np

from .product_engine import DEFAULT_POLICY, eval_log_product
from .reports import compare_identity
from .special_core import DomainError, double_factorial, log_gamma

__all__ = [
    "DEFAULT_TOLERANCE",
    "mn2_closed",
    "product_root_at_p2",
    "corollary1_rhs",
    "corollary2_printed_rhs",
    "corollary2_corrected_rhs",
    "remark_closed_form",
    "corollary1_check",
    "corollary2_check_printed",
    "corollary2_check_corrected",
    "remark_product",
]

DEFAULT_TOLERANCE = 1e-7


def _check_m(m):
    if int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    return int(m)


def log_mn2_closed(n):
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    return math.log(4.0) + n * math.log(math.pi) - 2.0 * math.log(n) - 2.0 * log_gamma(n / 2.0)


def mn2_closed(n):
    """M(n, 2) = |B_2^n|**2 = 4 pi**n / (n**2 Gamma(n/2)**2)."""
    return math.exp(log_mn2_closed(n))


def product_root_at_p2(n):
    """Q_n = sqrt(M(n, 2) / (4**n h(2)**(2n-2))), with h(2) = pi/4.

    This is the value the p = 2 product must take; it is computed from the
    gamma closed form only and serves as the independent route for the
    corollaries.
    """
    n = int(n)
    log_h2 = math.log(math.pi / 4.0)
    return math.exp(0.5 * (log_mn2_closed(n) - n * math.log(4.0) - (2 * n - 2) * log_h2))


def corollary1_rhs(m):
    m = _check_m(m)
    return (4.0 / math.pi) ** (m - 1) / math.factorial(m)


def corollary2_printed_rhs(m):
    m = _check_m(m)
    return (8.0 / math.pi) ** (m + 1) / double_factorial(2 * m + 3)


def corollary2_corrected_rhs(m):
    m = _check_m(m)
    return (8.0 / math.pi) ** m / double_factorial(2 * m + 1)


def remark_closed_form(m):
    """Gamma(3/2) Gamma(m + 3/2) / (Gamma(2) Gamma(m + 1)) = pi (2m+1)!! / (2**(m+2) m!)."""
    m = _check_m(m)
    return math.pi * double_factorial(2 * m + 1) / (2 ** (m + 2) * math.factorial(m))


def _half_step(k):
    return 1.0 / (2.0 * k + 2.0)


def _cor1_term(m):
    def term(k):
        u = _half_step(k)
        return (2 * m - 2) * np.log1p(-u) + np.log1p((2 * m - 2) * u)

    return term


def _cor2_term(m, shift):
    # (2k+1)^(2m-1) (2k+2m+shift) / (2k+2)^(2m)
    def term(k):
        u = _half_step(k)
        return (2 * m - 1) * np.log1p(-u) + np.log1p((2 * m + shift - 2) * u)

    return term


def corollary1_check(m, policy=DEFAULT_POLICY, tolerance=DEFAULT_TOLERANCE):
    """prod_k (2k+1)**(2m-2) (2k+2m) / (2k+2)**(2m-1) against (4/pi)**(m-1) / m!."""
    m = _check_m(m)
    return compare_identity(
        f"corollary1(m={m})",
        lambda: eval_log_product(_cor1_term(m), policy),
        corollary1_rhs(m),
        tolerance,
        policy,
    )


def corollary2_check_printed(m, policy=DEFAULT_POLICY, tolerance=DEFAULT_TOLERANCE):
    """The odd-dimension product with the indices as stated.

    prod_k (2k+1)**(2m-1) (2k+2m+3) / (2k+2)**(2m) against
    (8/pi)**(m+1) / (2m+3)!!.  The factors are 1 + 1/k + O(1/k**2), so the
    product diverges and the verdict is "diverges".
    """
    m = _check_m(m)
    return compare_identity(
        f"corollary2_printed(m={m})",
        lambda: eval_log_product(_cor2_term(m, 3), policy),
        corollary2_printed_rhs(m),
        tolerance,
        policy,
    )


def corollary2_check_corrected(m, policy=DEFAULT_POLICY, tolerance=DEFAULT_TOLERANCE):
    """prod_k (2k+1)**(2m-1) (2k+2m+1) / (2k+2)**(2m) against (8/pi)**m / (2m+1)!!.

    This is Q_{2m+1}; the closed value follows from Gamma(m + 1/2) =
    (2m-1)!! sqrt(pi) / 2**m.
    """
    m = _check_m(m)
    return compare_identity(
        f"corollary2_corrected(m={m})",
        lambda: eval_log_product(_cor2_term(m, 1), policy),
        corollary2_corrected_rhs(m),
        tolerance,
        policy,
    )


def remark_product(m, variant="printed", policy=DEFAULT_POLICY, tolerance=DEFAULT_TOLERANCE):
    """prod_k (2k+2)(2k+2m) / ((2k+1)(2k+2m+d)), d = 3 printed, d = 1 corrected.

    The printed right-hand side is the quotient of the two published closed
    forms; the corrected one is the gamma closed form, which also equals
    corollary1_rhs(m) / corollary2_corrected_rhs(m).
    """
    m = _check_m(m)
    if variant == "printed":
        d = 3
        rhs = corollary1_rhs(m) / corollary2_printed_rhs(m)
    elif variant == "corrected":
        d = 1
        rhs = remark_closed_form(m)
    else:
        raise ValueError(f"unknown variant {variant!r}")

    def term(k):
        return np.log1p(1.0 / (2.0 * k + 1.0)) + np.log1p(-d / (2.0 * k + 2.0 * m + d))

    return compare_identity(
        f"remark_product[{variant}](m={m})",
        lambda: eval_log_product(term, policy),
        rhs,
        tolerance,
        policy,
    )
