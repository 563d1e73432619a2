"""Monotonicity and bounds diagnostics for M(n, p).

The sign claims made along the way to "M(n, .) increases on (1, 2]" are
reported, not assumed: every SignReport carries both the computed sign and
whether it matches the published claim.  The headline results (the
monotonicity itself and 4**n/n! <= M(n, p) <= M(n, 2)) are checked by grid
scans against an independent finite-difference oracle.
"""

import math
from concurrent.futures import ProcessPoolExecutor

from .product_engine import DEFAULT_POLICY, sum_series
from .reports import NEGATIVE, POSITIVE, ZERO, SignReport, VerificationReport, classify_sign
from .special_core import DomainError
from .volume_product import h_func, holder_conjugate, mprod_gamma

__all__ = [
    "SIGN_ZERO_TOL",
    "DEFAULT_MONOTONICITY_GRID",
    "pq_derivative",
    "inv_pq_derivative",
    "h_log_derivative",
    "dlogM_dp_series",
    "dM_dp_fd",
    "omega",
    "omega_derivative",
    "omega_prime_printed",
    "h_prime_sign",
    "check_bounds",
    "bounds_scan",
    "monotonicity_scan",
]

SIGN_ZERO_TOL = 1e-10
DEFAULT_MONOTONICITY_GRID = tuple(round(1.0 + 0.05 * i, 10) for i in range(1, 21))


def _open_p(p):
    p = float(p)
    if not 1.0 < p < math.inf:
        raise DomainError(f"p must lie in (1, inf), got {p!r}")
    return p


def pq_derivative(p):
    """d(pq)/dp = p (p - 2) / (p - 1)**2."""
    p = _open_p(p)
    return p * (p - 2.0) / (p - 1.0) ** 2


def inv_pq_derivative(p):
    """d(1/(pq))/dp = -(pq)'/(pq)**2, which simplifies to (2 - p) / p**3."""
    p = _open_p(p)
    return (2.0 - p) / p**3


def h_log_derivative(p):
    """h'/h = -(pq)'/(pq) + (pi/p**2) cot(pi/p)."""
    p = _open_p(p)
    x = math.pi / p
    return -(p - 2.0) / (p * (p - 1.0)) + x / p / math.tan(x)


def dlogM_dp_series(n, p, policy=DEFAULT_POLICY):
    """d ln M(n, p)/dp from the logarithmic derivative of the product form.

    (2n-2) h'/h + d(1/(pq))/dp * sum_k [(n-2)/g_k + n**2/r_k(n)]
    """
    p = _open_p(p)
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    if n == 1:
        return 0.0
    c = 1.0 / p - 1.0 / p**2

    def term(k):
        g = k * k + k + c
        r = k * k + n * k + n * n * c
        return (n - 2) / g + n * n / r

    series = sum_series(term, policy)
    return (2 * n - 2) * h_log_derivative(p) + inv_pq_derivative(p) * series.total


def dM_dp_fd(n, p, step=None):
    """Central difference of mprod_gamma in p; default step 1e-5 max(1, p)."""
    p = float(p)
    if step is None:
        step = 1e-5 * max(1.0, p)
    if not step > 0.0:
        raise DomainError(f"step must be positive, got {step!r}")
    if not (p - step > 1.0 and p + step < math.inf):
        raise DomainError(f"stencil [{p - step}, {p + step}] leaves (1, inf)")
    return (mprod_gamma(n, p + step) - mprod_gamma(n, p - step)) / (2.0 * step)


def _omega_value(p):
    x = math.pi / p
    return p * (2.0 - p) * math.sin(x) + math.pi * (p - 1.0) * math.cos(x)


def omega_derivative(p):
    """Exact derivative of omega: (p-1) [sin(pi/p)(pi**2/p**2 - 2) + (2 pi/p) cos(pi/p)]."""
    x = math.pi / p
    return (p - 1.0) * (math.sin(x) * (x * x - 2.0) + 2.0 * x * math.cos(x))


def omega(p):
    """omega(p) = p(2-p) sin(pi/p) + pi(p-1) cos(pi/p) on [1, 2], with its sign.

    The published claim is omega >= 0 on [1, 2] with equality only at p = 2.
    """
    p = float(p)
    if not 1.0 <= p <= 2.0:
        raise DomainError(f"omega is examined on [1, 2], got {p!r}")
    value = _omega_value(p)
    sign = classify_sign(value, SIGN_ZERO_TOL)
    if p in (1.0, 2.0):
        agrees = sign == ZERO
    else:
        agrees = sign == POSITIVE
    return SignReport(
        value=value,
        sign=sign,
        claim_source="omega >= 0 on (1, 2], equality iff p = 2",
        agrees_with_paper=agrees,
        zero_tol=SIGN_ZERO_TOL,
    )


def omega_prime_printed(p, step=1e-6):
    """Sign of the printed bracket pi(1-p) sin(pi/p) + (p**2 + 2p - 2) cos(pi/p).

    It is offered as having the sign of omega'.  ``agrees_with_paper`` is
    True when its sign matches a central difference of omega.
    """
    p = float(p)
    if not 1.0 < p <= 2.0:
        raise DomainError(f"printed omega' expression is examined on (1, 2], got {p!r}")
    x = math.pi / p
    value = math.pi * (1.0 - p) * math.sin(x) + (p * p + 2.0 * p - 2.0) * math.cos(x)
    fd = (_omega_value(p + step) - _omega_value(p - step)) / (2.0 * step)
    sign = classify_sign(value, SIGN_ZERO_TOL)
    fd_sign = classify_sign(fd, SIGN_ZERO_TOL)
    return SignReport(
        value=value,
        sign=sign,
        claim_source="sgn(omega') = sgn[pi(1-p) sin(pi/p) + (p^2+2p-2) cos(pi/p)] < 0",
        agrees_with_paper=sign == fd_sign,
        zero_tol=SIGN_ZERO_TOL,
        detail={"fd_derivative": fd, "fd_sign": fd_sign, "exact_derivative": omega_derivative(p)},
    )


def h_prime_sign(p, step=None):
    """Sign of h'(p), computed analytically and cross-checked by differencing h.

    The published claim is h' >= 0 on (1, 2] with equality only at p = 2.
    Since h(p) = h(q) and q decreases in p, that claim transports to
    h' <= 0 on [2, inf), which is what p > 2 is compared against.
    """
    p = _open_p(p)
    value = h_func(p) * h_log_derivative(p)
    if step is None:
        step = 1e-6 * min(p - 1.0, 1.0) * max(1.0, p)
    fd = (h_func(p + step) - h_func(p - step)) / (2.0 * step)
    sign = classify_sign(value, SIGN_ZERO_TOL)
    if p <= 2.0:
        agrees = sign in (ZERO, POSITIVE) and (sign == ZERO) == (p == 2.0)
        claim = "h' >= 0 on (1, 2], equality iff p = 2"
    else:
        agrees = sign == NEGATIVE
        claim = "h' >= 0 on (1, 2] transported by h(p) = h(q): h' < 0 for p > 2"
    return SignReport(
        value=value,
        sign=sign,
        claim_source=claim,
        agrees_with_paper=agrees,
        zero_tol=SIGN_ZERO_TOL,
        detail={"fd_derivative": fd, "fd_sign": classify_sign(fd, SIGN_ZERO_TOL)},
    )


def _lower_bound(n):
    return math.exp(n * math.log(4.0) - math.lgamma(n + 1.0))


def _bounds_point(n, p):
    """(failures, notes, relative margin) at one (n, p)."""
    pair = holder_conjugate(p)
    m = mprod_gamma(n, pair.p)
    lower = _lower_bound(n)
    upper = mprod_gamma(n, 2.0)
    tol = 1e-9 * upper
    failures, notes = [], []
    if m < lower - tol:
        failures.append({"n": n, "p": pair.p, "observed": m, "bound": lower, "reason": "below 4^n/n!"})
    if m > upper + tol:
        failures.append({"n": n, "p": pair.p, "observed": m, "bound": upper, "reason": "above M(n,2)"})
    left_eq = abs(m - lower) <= 1e-12 * lower
    right_eq = abs(m - upper) <= 1e-12 * upper
    if n > 1:
        expect_left = pair.is_boundary
        expect_right = pair.p == 2.0
        if left_eq != expect_left:
            failures.append({"n": n, "p": pair.p, "observed": m, "bound": lower,
                             "reason": "left equality mismatch"})
        if right_eq != expect_right:
            failures.append({"n": n, "p": pair.p, "observed": m, "bound": upper,
                             "reason": "right equality mismatch"})
        if left_eq:
            notes.append(f"n={n} p={pair.p!r}: left equality M = 4^n/n!")
        if right_eq:
            notes.append(f"n={n} p={pair.p!r}: right equality M = M(n,2)")
    margin = min(m - lower, upper - m) / upper
    return failures, notes, margin


def check_bounds(n, p):
    """Check 4**n/n! <= M(n, p) <= M(n, 2) at one point, with equality detection."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    failures, notes, margin = _bounds_point(int(n), p)
    return VerificationReport(
        grid=f"n={int(n)}, p={float(p)!r}",
        worst_margin=margin,
        failures=failures,
        tolerance=1e-9,
        notes=notes,
    )


def _pool_map(fn, args, jobs):
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, *zip(*args)))
    return [fn(*a) for a in args]


def bounds_scan(n_values, p_grid, jobs=1):
    """check_bounds over a grid; results are merged in grid order."""
    points = [(int(n), float(p)) for n in n_values for p in p_grid]
    results = _pool_map(_bounds_point, points, jobs)
    failures, notes = [], []
    for f, nt, _ in results:
        failures.extend(f)
        notes.extend(nt)
    return VerificationReport(
        grid=f"n in {list(n_values)}, {len(list(p_grid))} p values in [{min(p_grid)}, {max(p_grid)}]",
        worst_margin=min(r[2] for r in results),
        failures=failures,
        tolerance=1e-9,
        notes=notes,
    )


def _monotonicity_point(n, p, policy):
    m = mprod_gamma(n, p)
    fd = dM_dp_fd(n, p)
    series = dlogM_dp_series(n, p, policy)
    failures = []
    if fd < -1e-7 * m:
        failures.append({"n": n, "p": p, "observed": fd, "bound": -1e-7 * m, "reason": "dM/dp < 0"})
    gap = abs(series - fd / m)
    allowed = max(1e-6, 1e-4 * abs(series))
    if gap > allowed:
        failures.append({"n": n, "p": p, "observed": series, "bound": fd / m,
                         "reason": "series and finite-difference derivatives disagree"})
    return failures, fd / m, series


def monotonicity_scan(n_values, p_grid=DEFAULT_MONOTONICITY_GRID, policy=DEFAULT_POLICY, jobs=1):
    """Check dM/dp >= 0 on a grid in (1, 2] and series-vs-difference agreement."""
    for p in p_grid:
        if not 1.0 < p <= 2.0:
            raise DomainError(f"monotonicity grid must lie in (1, 2], got {p!r}")
    points = [(int(n), float(p), policy) for n in n_values for p in p_grid]
    results = _pool_map(_monotonicity_point, points, jobs)
    failures, notes = [], []
    for (n, p, _), (f, rel_fd, series) in zip(points, results):
        failures.extend(f)
        if p == 2.0:
            notes.append(f"n={n} p=2: d ln M/dp = {series:.3e} (fd {rel_fd:.3e})")
    return VerificationReport(
        grid=f"n in {list(n_values)}, p in {list(p_grid)}",
        worst_margin=min(r[1] for r in results),
        failures=failures,
        tolerance=1e-7,
        notes=notes,
    )
