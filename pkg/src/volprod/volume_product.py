"""Volumes of unit p-balls and their volume product M(n, p) = |B_p^n| |B_q^n|.

Two independent routes to M(n, p):

* ``mprod_gamma`` evaluates the gamma-function formula with ``log_gamma``;
* ``mprod_product`` uses the gamma-free form

      M(n, p) = 4**n h(p)**(2n-2) prod_k g_k**(n-2) r_k(n) / (k+1)**(2n-2),

  with g_k = k**2 + k + 1/(pq), r_k(j) = k**2 + j k + j**2/(pq) and
  h(p) = pi / (pq sin(pi/p)), summed by the product engine.

The remaining functions expose the building blocks of that representation
(the two-parameter product P(x, a), the factorization of Gamma(n/p), the
pairing of conjugate P's) and the p -> 1 limit objects s_n and sigma_n.
"""

import math
from dataclasses import dataclass

import numpy as np

from .product_engine import DEFAULT_POLICY, ProductEval, eval_log_product, sum_series
from .reports import compare_identity
from .special_core import DomainError, log_gamma

__all__ = [
    "HolderPair",
    "BallSpec",
    "holder_conjugate",
    "log_ball_volume",
    "ball_volume",
    "log_mprod_gamma",
    "mprod_gamma",
    "p_product",
    "p_gamma_side",
    "gamma_np_factorized",
    "pair_product_check",
    "h_func",
    "mprod_product",
    "s_product",
    "sigma_n",
    "sigma_inequality",
]

LOG4 = math.log(4.0)


@dataclass(frozen=True)
class HolderPair:
    """Conjugate exponents 1/p + 1/q = 1 on [1, inf], with 1 <-> inf."""

    p: float
    q: float

    def __post_init__(self):
        for v in (self.p, self.q):
            if math.isnan(v) or v < 1.0:
                raise DomainError(f"exponents must lie in [1, inf], got ({self.p}, {self.q})")
        if abs(_inv(self.p) + _inv(self.q) - 1.0) > 1e-14:
            raise DomainError(f"({self.p}, {self.q}) is not a conjugate pair")

    @classmethod
    def from_p(cls, p):
        return holder_conjugate(p)

    @property
    def inv_p(self):
        return _inv(self.p)

    @property
    def inv_q(self):
        """1/q, computed as (p-1)/p so it stays accurate for p near 1."""
        if math.isinf(self.p):
            return 1.0
        return (self.p - 1.0) / self.p

    @property
    def is_boundary(self):
        return self.p == 1.0 or math.isinf(self.p)


@dataclass(frozen=True)
class BallSpec:
    n: int
    pair: HolderPair

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"dimension must be a positive integer, got {self.n!r}")

    @classmethod
    def of(cls, n, p):
        return cls(int(n), holder_conjugate(p))

    def log_volume(self):
        return log_ball_volume(self.n, self.pair.p)

    def volume(self):
        return ball_volume(self.n, self.pair.p)


def _inv(p):
    return 0.0 if math.isinf(p) else 1.0 / p


def _check_n(n, minimum=1):
    if int(n) != n or n < minimum:
        raise DomainError(f"n must be an integer >= {minimum}, got {n!r}")
    return int(n)


def _check_open_p(p):
    p = float(p)
    if not (1.0 < p < math.inf):
        raise DomainError(f"p must lie in (1, inf), got {p!r}")
    return p


def holder_conjugate(p):
    """Return the HolderPair (p, q) for p in [1, inf]."""
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise DomainError(f"p must be >= 1, got {p!r}")
    if p == 1.0:
        return HolderPair(1.0, math.inf)
    if math.isinf(p):
        return HolderPair(math.inf, 1.0)
    if p == 2.0:
        return HolderPair(2.0, 2.0)
    return HolderPair(p, p / (p - 1.0))


def log_ball_volume(n, p):
    """ln |B_p^n| = n ln 2 + n ln Gamma(1 + 1/p) - ln Gamma(1 + n/p).

    The formula is used at p = 1 too, where it gives the cross-polytope
    volume 2**n / n!.
    """
    n = _check_n(n)
    pair = holder_conjugate(p)
    if math.isinf(pair.p):
        return n * math.log(2.0)
    ip = pair.inv_p
    return n * math.log(2.0) + n * log_gamma(1.0 + ip) - log_gamma(1.0 + n * ip)


def ball_volume(n, p):
    """Volume of the unit p-ball in R^n.  Raises OverflowError past float range."""
    if math.isinf(holder_conjugate(p).p):
        # the cube; exact where 2**n is representable
        return math.ldexp(1.0, _check_n(n))
    return math.exp(log_ball_volume(n, p))


def log_mprod_gamma(n, p):
    pair = holder_conjugate(p)
    return log_ball_volume(n, pair.p) + log_ball_volume(n, pair.q)


def mprod_gamma(n, p):
    """Volume product |B_p^n| |B_q^n| from the gamma formula (reference route)."""
    if _check_n(n) == 1:
        holder_conjugate(p)
        return 4.0
    return math.exp(log_mprod_gamma(n, p))


def _check_xa(x, a):
    x, a = float(x), float(a)
    if not (0.0 < x < math.inf) or not (0.0 <= a < 1.0):
        raise DomainError(f"need x > 0 and 0 <= a < 1, got x={x!r}, a={a!r}")
    return x, a


def p_product(x, a, policy=DEFAULT_POLICY):
    """P(x, a) = prod_k k (k + x - 1) / ((k - a)(k + x + a - 1)).

    Each factor is 1 + a (x + a - 1) / ((k - a)(k + x + a - 1)), which is
    what gets logged.
    """
    x, a = _check_xa(x, a)
    b = x + a - 1.0
    numerator = a * b

    def term(k):
        return np.log1p(numerator / ((k - a) * (k + b)))

    return eval_log_product(term, policy)


def log_p_gamma_side(x, a):
    x, a = _check_xa(x, a)
    return log_gamma(1.0 - a) + log_gamma(x + a) - log_gamma(x)


def p_gamma_side(x, a):
    """Gamma(1 - a) Gamma(x + a) / Gamma(x), the closed value of P(x, a)."""
    return math.exp(log_p_gamma_side(x, a))


def gamma_np_factorized(n, p, policy=DEFAULT_POLICY):
    """Gamma(n/p) rebuilt as Gamma(1/p) / Gamma(1/q)**(n-1) * prod_m P((n-m)/p, 1/p)."""
    n = _check_n(n, 2)
    pair = holder_conjugate(_check_open_p(p))
    ip, iq = pair.inv_p, pair.inv_q
    logs = [log_gamma(ip), -(n - 1) * log_gamma(iq)]
    for m in range(1, n):
        logs.append(p_product((n - m) * ip, ip, policy).log_value)
    return math.exp(math.fsum(logs))


def _pair_rhs_product(j, c, policy):
    """prod_k (k+1)**2 / g_k * r_k(j) / r_k(j+1), with c = 1/(pq)."""

    def term(k):
        kp1 = k + 1.0
        r_j = k * k + j * k + j * j * c
        return -np.log1p((c - 1.0 - k) / (kp1 * kp1)) - np.log1p((k + (2 * j + 1) * c) / r_j)

    return eval_log_product(term, policy)


def pair_product_check(n, m, p, policy=DEFAULT_POLICY, variant="printed", tolerance=1e-6):
    """Compare P(j/p, 1/p) P(j/q, 1/q), j = n - m, with its product form.

    ``variant="printed"`` uses the prefactor (1/pq) (j/(j+1))**2 as
    published; ``"corrected"`` uses pq (j/(j+1))**2, which is what the gamma
    values require and what reproduces the gamma-free M(n, p).
    """
    n = _check_n(n, 2)
    if int(m) != m or not 1 <= m <= n - 1:
        raise DomainError(f"m must be an integer in [1, n-1], got {m!r}")
    if variant not in ("printed", "corrected"):
        raise ValueError(f"unknown variant {variant!r}")
    pair = holder_conjugate(_check_open_p(p))
    j = n - int(m)
    ip, iq = pair.inv_p, pair.inv_q
    c = ip * iq
    ratio2 = (j / (j + 1.0)) ** 2
    prefactor = (c if variant == "printed" else 1.0 / c) * ratio2

    def lhs_eval():
        left = p_product(j * ip, ip, policy)
        right = p_product(j * iq, iq, policy)
        both = ProductEval(
            log_value=left.log_value + right.log_value,
            value=math.exp(left.log_value + right.log_value),
            terms_used=max(left.terms_used, right.terms_used),
            tail_estimate=left.tail_estimate + right.tail_estimate,
            error_bracket=(
                left.error_bracket[0] + right.error_bracket[0],
                left.error_bracket[1] + right.error_bracket[1],
            ),
            converged=left.converged and right.converged,
        )
        return both

    rhs = _shift(_pair_rhs_product(j, c, policy), math.log(prefactor)).value
    return compare_identity(
        f"pairing[{variant}](n={n},m={m},p={p!r})", lhs_eval, rhs, tolerance, policy
    )


def h_func(p):
    """h(p) = pi / (pq sin(pi/p)) = Gamma(1 + 1/p) Gamma(1 + 1/q); h(1) = h(inf) = 1.

    Written as pi (1/p)(1/q) / sin(pi min(1/p, 1/q)) so neither end loses
    digits to cancellation.
    """
    pair = holder_conjugate(p)
    if pair.is_boundary:
        return 1.0
    ip, iq = pair.inv_p, pair.inv_q
    x = math.pi * min(ip, iq)
    return x * max(ip, iq) / math.sin(x)


def _shift(prod, offset):
    lo, hi = prod.error_bracket
    log_value = prod.log_value + offset
    return ProductEval(
        log_value=log_value,
        value=math.exp(log_value),
        terms_used=prod.terms_used,
        tail_estimate=prod.tail_estimate,
        error_bracket=(lo + offset, hi + offset),
        converged=prod.converged,
    )


def mprod_product(n, p, policy=DEFAULT_POLICY):
    """M(n, p) by the gamma-free infinite product.

    At p = 1 and p = inf the representation is indeterminate; the limit
    4**n s_n is evaluated instead.
    """
    n = _check_n(n)
    pair = holder_conjugate(p)
    if n == 1:
        return ProductEval(LOG4, 4.0, 0, 0.0, (LOG4, LOG4), True)
    if pair.is_boundary:
        return _shift(s_product(n, policy), n * LOG4)
    c = pair.inv_p * pair.inv_q
    lin = float(n - 2)
    const = n * n * c - 1.0

    def term(k):
        kp1sq = (k + 1.0) * (k + 1.0)
        # each log is O(1/k); their O(1/k) parts cancel exactly in the sum
        return lin * np.log1p((c - 1.0 - k) / kp1sq) + np.log1p((lin * k + const) / kp1sq)

    prod = eval_log_product(term, policy)
    return _shift(prod, n * LOG4 + (2 * n - 2) * math.log(h_func(pair.p)))


def _s_excess(n, k):
    """[(k+1)**n - k**n - n k**(n-1)] / (k+1)**n, expanded so nothing cancels."""
    ratio = k / (k + 1.0)
    inv = 1.0 / (k + 1.0)
    out = np.zeros_like(k)
    for m in range(2, n + 1):
        out += math.comb(n, m) * ratio ** (n - m) * inv**m
    return out


def s_product(n, policy=DEFAULT_POLICY):
    """s_n = prod_k k**(n-1) (k+n) / (k+1)**n, the p -> 1 limit of M(n, p) / 4**n."""
    n = _check_n(n)
    return eval_log_product(lambda k: np.log1p(-_s_excess(n, k)), policy)


def _sigma_series(n, policy):
    n = _check_n(n, 2)
    return sum_series(lambda k: _s_excess(n, k), policy)


def sigma_n(n, policy=DEFAULT_POLICY):
    """sigma_n = sum_{m=2}^n C(n, m) sum_k k**(n-m) / (k+1)**n."""
    return _sigma_series(n, policy).total


@dataclass(frozen=True)
class SigmaCheck:
    n: int
    sigma: float
    sigma_bracket: tuple
    inv_factorial: float
    exp_neg_sigma: float
    holds: bool


def sigma_inequality(n, policy=DEFAULT_POLICY):
    """Check 1/n! < exp(-sigma_n), i.e. sigma_n < ln n!, using the upper bracket of sigma_n."""
    series = _sigma_series(n, policy)
    log_fact = math.lgamma(n + 1.0)
    return SigmaCheck(
        n=int(n),
        sigma=series.total,
        sigma_bracket=series.error_bracket,
        inv_factorial=math.exp(-log_fact),
        exp_neg_sigma=math.exp(-series.total),
        holds=series.error_bracket[1] < log_fact,
    )
