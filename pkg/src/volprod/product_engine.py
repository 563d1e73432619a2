"""Truncated evaluation of convergent infinite products and series.

Every product handled here is written as ``exp(sum_k t(k))`` where the
log-factor ``t(k)`` decays like ``1/k**2``.  The sum is accumulated with
``math.fsum`` (exactly rounded), the truncation index is doubled until the
error bracket is narrow enough, and the omitted tail is estimated from the
terms already computed.

Term evaluators are vectorized: they receive a float64 array of indices
``k`` (starting at 1) and must return an array of the same shape.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .special_core import DomainError

__all__ = [
    "TAIL_MODES",
    "TruncationPolicy",
    "SeriesEval",
    "ProductEval",
    "DivergenceSuspected",
    "sum_series",
    "eval_log_product",
    "log_upper_bound_sum",
    "zeta_tail",
]

TAIL_MODES = ("none", "first_order", "richardson")

_EPS = float(np.finfo(np.float64).eps)
_FIRST_WINDOW = 1024
# Block-max decay exponent below which the terms are treated as O(1/k) or
# worse.  Summable O(1/k**2) terms give 2.
_DIVERGENCE_EXPONENT = 1.5
# Terms with k |t(k)| below this are rounding noise from exactly cancelling
# logs; a genuine c/k divergence this weak is invisible in binary64 anyway.
_NOISE_FLOOR = 1e-10
# Fewer terms than this are too pre-asymptotic to judge the decay rate.
_MIN_DETECTION_WINDOW = 256


@dataclass(frozen=True)
class TruncationPolicy:
    """How far to go and how precise to be.

    ``rel_tol`` applies to the width of the bracket on the log scale, so it
    bounds the relative error of the product itself.
    """

    max_terms: int = 1_000_000
    rel_tol: float = 1e-9
    tail_mode: str = "first_order"

    def __post_init__(self):
        if int(self.max_terms) != self.max_terms or self.max_terms < 16:
            raise ValueError(f"max_terms must be an integer >= 16, got {self.max_terms!r}")
        if not 0.0 < self.rel_tol < 1.0:
            raise ValueError(f"rel_tol must lie in (0, 1), got {self.rel_tol!r}")
        if self.tail_mode not in TAIL_MODES:
            raise ValueError(f"tail_mode must be one of {TAIL_MODES}, got {self.tail_mode!r}")

    def scaled(self, factor):
        """Same policy with ``max_terms`` multiplied by ``factor``."""
        return replace(self, max_terms=int(self.max_terms * factor))

    def as_dict(self):
        return {"max_terms": self.max_terms, "rel_tol": self.rel_tol, "tail_mode": self.tail_mode}


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class SeriesEval:
    """Tail-corrected sum of a series together with an error bracket."""

    total: float
    terms_used: int
    tail_estimate: float
    error_bracket: tuple
    converged: bool

    @property
    def width(self):
        return self.error_bracket[1] - self.error_bracket[0]


@dataclass(frozen=True)
class ProductEval:
    """Result of a truncated infinite product, kept on the log scale."""

    log_value: float
    value: float
    terms_used: int
    tail_estimate: float
    error_bracket: tuple
    converged: bool

    @classmethod
    def from_series(cls, series):
        return cls(
            log_value=series.total,
            value=_safe_exp(series.total),
            terms_used=series.terms_used,
            tail_estimate=series.tail_estimate,
            error_bracket=series.error_bracket,
            converged=series.converged,
        )

    @property
    def value_bracket(self):
        lo, hi = self.error_bracket
        return _safe_exp(lo), _safe_exp(hi)

    def as_dict(self):
        return {
            "log_value": self.log_value,
            "value": self.value,
            "terms_used": self.terms_used,
            "tail_estimate": self.tail_estimate,
            "error_bracket": list(self.error_bracket),
            "converged": self.converged,
        }


class DivergenceSuspected(ArithmeticError):
    """The terms do not decay fast enough for the series to converge.

    ``partial`` holds the (non-converged) evaluation at the point the
    detector fired; ``decay_exponent`` is the observed decay rate s in
    ``|t(k)| ~ k**-s``.
    """

    def __init__(self, message, partial, decay_exponent):
        super().__init__(message)
        self.partial = partial
        self.decay_exponent = decay_exponent


def _safe_exp(x):
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def zeta_tail(s, K):
    """sum_{k > K} k**-s for s > 1, via Euler-Maclaurin at N = K + 1.

    The remainder is below N**-(s+7) / 1000, far under binary64 resolution
    for the N >= 16 used by the engine.
    """
    N = float(K + 1)
    out = N ** (1.0 - s) / (s - 1.0) + 0.5 * N ** -s
    out += s / 12.0 * N ** (-s - 1.0)
    out -= s * (s + 1) * (s + 2) / 720.0 * N ** (-s - 3.0)
    out += s * (s + 1) * (s + 2) * (s + 3) * (s + 4) / 30240.0 * N ** (-s - 5.0)
    return out


class _Accumulator:
    """Holds computed terms and caches exactly rounded partial sums."""

    def __init__(self, term):
        self._term = term
        self.terms = np.empty(0, dtype=np.float64)
        self._sums = {0: 0.0}

    def extend_to(self, K):
        have = self.terms.size
        if K <= have:
            return
        k = np.arange(have + 1, K + 1, dtype=np.float64)
        t = np.asarray(self._term(k), dtype=np.float64)
        if t.shape != k.shape:
            t = np.broadcast_to(t, k.shape).astype(np.float64)
        if not np.all(np.isfinite(t)):
            bad = int(k[~np.isfinite(t)][0])
            raise FloatingPointError(f"term({bad}) is not finite")
        self.terms = np.concatenate([self.terms, t])

    def partial(self, K):
        """Exactly rounded sum of the first K terms."""
        if K not in self._sums:
            below = max(j for j in self._sums if j <= K)
            self._sums[K] = math.fsum([self._sums[below], math.fsum(self.terms[below:K])])
        return self._sums[K]

    def rounding(self, K):
        return 4.0 * _EPS * (math.fsum(np.abs(self.terms[:K])) + abs(self.partial(K)))


def _decay_exponent(t):
    """Decay rate s of |t(k)| ~ k**-s from maxima over the last dyadic blocks."""
    K = t.size
    edges = [K // 8, K // 4, K // 2, K]
    maxima = [float(np.max(np.abs(t[lo:hi]))) for lo, hi in zip(edges[:-1], edges[1:])]
    if maxima[-1] == 0.0 or max(maxima[-1] * K, maxima[0] * edges[0]) < _NOISE_FLOOR:
        return math.inf
    if min(maxima) == 0.0:
        return 0.0
    return max(math.log2(maxima[0] / maxima[1]), math.log2(maxima[1] / maxima[2]))


def _first_order_tail(acc, K):
    """Fit k**2 t(k) ~ alpha + beta/k over the last decade and sum the model tail.

    Returns (tail, dispersion) where dispersion is the largest fit residual.
    """
    lo = max(1, K // 10)
    k = np.arange(lo, K + 1, dtype=np.float64)
    y = k * k * acc.terms[lo - 1:K]
    design = np.column_stack([np.ones_like(k), 1.0 / k])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    alpha, beta = float(coef[0]), float(coef[1])
    dispersion = float(np.max(np.abs(y - design @ coef)))
    tail = alpha * zeta_tail(2.0, K) + beta * zeta_tail(3.0, K)
    return tail, dispersion


def _estimate(acc, K, mode, cache):
    """(estimate of the full sum, bracket half-width) using terms 1..K."""
    if (K, mode) in cache:
        return cache[K, mode]
    S = acc.partial(K)
    rounding = acc.rounding(K)
    if mode == "none":
        result = S, 2.0 * K * abs(float(acc.terms[K - 1])) + rounding
    elif mode == "first_order":
        tail, dispersion = _first_order_tail(acc, K)
        here = S + tail
        prev_S = acc.partial(K // 2)
        prev_tail, _ = _first_order_tail(acc, K // 2)
        drift = abs(here - (prev_S + prev_tail))
        result = here, drift + dispersion * zeta_tail(2.0, K) + rounding
    else:
        s1, s2, s4 = acc.partial(K // 4), acc.partial(K // 2), S
        r_half = 2.0 * s2 - s1
        r_full = 2.0 * s4 - s2
        r2 = (4.0 * r_full - r_half) / 3.0
        result = r2, abs(r2 - r_full) + rounding
    cache[K, mode] = result
    return result


def sum_series(term, policy=DEFAULT_POLICY):
    """Sum ``t(1) + t(2) + ...`` for terms decaying like 1/k**2.

    The truncation index starts at min(1024, max_terms) and doubles until
    the bracket width is at most ``policy.rel_tol`` or ``max_terms`` is
    reached (then ``converged`` is False).

    Raises DivergenceSuspected when the terms decay like 1/k or slower
    (judged once at least 256 terms are available).
    """
    acc = _Accumulator(term)
    cache = {}
    K = min(_FIRST_WINDOW, policy.max_terms)
    while True:
        acc.extend_to(K)
        estimate, half = _estimate(acc, K, policy.tail_mode, cache)
        width = 2.0 * half
        result = SeriesEval(
            total=estimate,
            terms_used=K,
            tail_estimate=estimate - acc.partial(K),
            error_bracket=(estimate - half, estimate + half),
            converged=width <= policy.rel_tol,
        )
        exponent = _decay_exponent(acc.terms) if K >= _MIN_DETECTION_WINDOW else math.inf
        if exponent < _DIVERGENCE_EXPONENT:
            raw = acc.partial(K)
            partial = SeriesEval(raw, K, 0.0, (raw, raw), False)
            raise DivergenceSuspected(
                f"terms decay like k**-{exponent:.3g} over k <= {K}; series is not summable",
                partial,
                exponent,
            )
        if result.converged or K >= policy.max_terms:
            return result
        K = min(2 * K, policy.max_terms)


def eval_log_product(term, policy=DEFAULT_POLICY):
    """Evaluate prod_k exp(t(k)) given the vectorized log-factor ``t``."""
    try:
        series = sum_series(term, policy)
    except DivergenceSuspected as exc:
        raise DivergenceSuspected(
            str(exc), ProductEval.from_series(exc.partial), exc.decay_exponent
        ) from None
    return ProductEval.from_series(series)


def log_upper_bound_sum(a, x, K):
    """Bound on log P(x, a) from log t <= t - 1.

    Returns a (x + a - 1) * sum_k 1/((k - a)(k + x + a - 1)) with the sum
    truncated at K and its remainder replaced by the integral from K to
    infinity, which dominates it because the summand is decreasing.  For
    a (x + a - 1) >= 0 this is a certified upper bound on log P(x, a); for a
    negative prefactor it is a lower bound on the full bounding series.
    """
    a, x, K = float(a), float(x), int(K)
    if not (0.0 <= a < 1.0) or not x > 0.0 or not (math.isfinite(x)):
        raise DomainError(f"need 0 <= a < 1 and x > 0, got a={a!r}, x={x!r}")
    if K < 1:
        raise DomainError(f"K must be a positive integer, got {K}")
    b = x + a - 1.0
    prefactor = a * b
    if prefactor == 0.0:
        return 0.0
    k = np.arange(1, K + 1, dtype=np.float64)
    partial = math.fsum(1.0 / ((k - a) * (k + b)))
    spread = a + b
    if spread == 0.0:
        tail = 1.0 / (K - a)
    else:
        tail = math.log1p(spread / (K - a)) / spread
    return prefactor * (partial + tail)
