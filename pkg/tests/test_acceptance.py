"""One test per acceptance criterion.

Each test gathers every sub-check it makes and fails with the full list,
so a red criterion says exactly which part did not hold.  The terminal
summary (see conftest.py) prints one PASS/FAIL line per criterion.
"""

import json
import math
import subprocess
import sys

import numpy as np

from volprod import analysis, identities
from volprod import volume_product as vp
from volprod.product_engine import DivergenceSuspected, TruncationPolicy, eval_log_product
from volprod.special_core import log_gamma


def _rel(a, b):
    return abs(a / b - 1.0)


def _assert_all(failures):
    assert not failures, "\n".join(failures)


def test_criterion_1_product_route_matches_gamma_route():
    failures = []
    for n in range(1, 13):
        for p in (1.05, 1.1, 1.25, 1.5, 2.0, 3.0, 5.0, 10.0, 40.0):
            dev = _rel(vp.mprod_product(n, p).value, vp.mprod_gamma(n, p))
            if dev > 1e-7:
                failures.append(f"n={n} p={p}: rel dev {dev:.3e}")
    _assert_all(failures)


def test_criterion_2_two_parameter_product_matches_gamma_ratio():
    failures = []
    for x in (0.3, 0.5, 1.0, 2.7, 8.0):
        for a in (0.0, 0.25, 0.5, 0.9):
            closed = math.exp(log_gamma(1 - a) + log_gamma(x + a) - log_gamma(x))
            dev = _rel(vp.p_product(x, a).value, closed)
            if dev > 1e-7:
                failures.append(f"x={x} a={a}: rel dev {dev:.3e}")
    _assert_all(failures)


def test_criterion_3_factorization_and_pairing_identity():
    failures = []
    for n in range(2, 9):
        for p in (1.25, 1.5, 2.0, 3.0):
            dev = _rel(vp.gamma_np_factorized(n, p), math.gamma(n / p))
            if dev > 1e-6:
                failures.append(f"factorization n={n} p={p}: rel dev {dev:.3e}")
    # the pairing identity as stated, with prefactor 1/pq, on the sample set
    for n, m, p in ((2, 1, 2.0), (3, 1, 1.5), (5, 4, 3.0), (4, 2, 1.25), (6, 3, 10.0)):
        r = vp.pair_product_check(n, m, p, variant="printed", tolerance=1e-6)
        if r.verdict != "verified":
            failures.append(f"pairing n={n} m={m} p={p}: {r.verdict}, lhs {r.lhs:.10g} rhs {r.rhs:.10g}")
        c = vp.pair_product_check(n, m, p, variant="corrected", tolerance=1e-6)
        if c.verdict != "verified":
            failures.append(f"pairing with prefactor pq n={n} m={m} p={p}: {c.verdict}")
    _assert_all(failures)


def test_criterion_4_volume_product_bounds():
    failures = []
    grid = [1.0 + 0.05 * i for i in range(0, 781)]
    report = analysis.bounds_scan(range(1, 11), grid)
    failures.extend(f"{f['reason']} at n={f['n']} p={f['p']}" for f in report.failures)
    for n in range(2, 11):
        lower = 4.0**n / math.factorial(n)
        closed = 4 * math.pi**n / (n * n * math.gamma(n / 2) ** 2)
        if _rel(vp.mprod_gamma(n, 1.0), lower) > 1e-12:
            failures.append(f"n={n}: M(n,1) != 4^n/n!")
        if _rel(vp.mprod_gamma(n, 2.0), closed) > 1e-12:
            failures.append(f"n={n}: M(n,2) != 4 pi^n/(n^2 G(n/2)^2)")
        notes = analysis.check_bounds(n, 1.0).notes + analysis.check_bounds(n, 2.0).notes
        if not (any("left equality" in s for s in notes) and any("right equality" in s for s in notes)):
            failures.append(f"n={n}: equality cases not flagged")
    _assert_all(failures)


def test_criterion_5_monotone_on_one_to_two():
    failures = []
    grid = [round(1.0 + 0.05 * i, 10) for i in range(1, 21)]
    for n in range(1, 9):
        for p in grid:
            m = vp.mprod_gamma(n, p)
            fd = analysis.dM_dp_fd(n, p)
            if fd < -1e-7 * m:
                failures.append(f"n={n} p={p}: dM/dp = {fd:.3e}")
            series = analysis.dlogM_dp_series(n, p)
            if abs(fd / m) > 1e-6 and abs(series / (fd / m) - 1.0) > 1e-4:
                failures.append(f"n={n} p={p}: series {series:.8g} vs difference {fd / m:.8g}")
            elif abs(fd / m) <= 1e-6 and abs(series) > 1e-6:
                failures.append(f"n={n} p={p}: series {series:.3e} nonzero where difference vanishes")
    _assert_all(failures)


def test_criterion_6_limit_product_and_inequality():
    failures = []
    for n in range(1, 11):
        s = vp.s_product(n).value
        if abs(s * math.factorial(n) - 1.0) > 1e-6:
            failures.append(f"s_{n} = {s!r}")
    for n in range(2, 11):
        check = vp.sigma_inequality(n)
        if not check.holds:
            failures.append(f"n={n}: 1/n! = {check.inv_factorial:.6g} vs exp(-sigma) = {check.exp_neg_sigma:.6g}")
    sigma2 = vp.sigma_n(2)
    if abs(sigma2 - (math.pi**2 / 6 - 1)) > 1e-9:
        failures.append(f"sigma_2 = {sigma2!r}")
    _assert_all(failures)


def test_criterion_7_even_dimension_product():
    failures = []
    for m in range(1, 9):
        r = identities.corollary1_check(m)
        if r.verdict != "verified" or r.rel_dev > 1e-7:
            failures.append(f"m={m}: {r.verdict}, rel dev {r.rel_dev:.3e}")
    _assert_all(failures)


def test_criterion_8_discrepancy_ledger():
    failures = []
    # the odd-dimension product as stated: expected "falsified" with
    # lhs 16/(15 pi) and rel dev about 0.273 at m = 1
    printed = identities.corollary2_check_printed(1)
    if printed.verdict != "falsified":
        failures.append(f"odd-dimension product as stated: verdict {printed.verdict}, expected falsified "
                        f"(partial lhs {printed.lhs:.6g})")
    if not math.isclose(printed.lhs, 16 / (15 * math.pi), rel_tol=1e-3):
        failures.append(f"odd-dimension product as stated: lhs {printed.lhs:.6g}, expected 16/(15 pi) = "
                        f"{16 / (15 * math.pi):.6g}")
    if not math.isclose(printed.rhs, 64 / (15 * math.pi**2), rel_tol=1e-12):
        failures.append(f"odd-dimension product as stated: rhs {printed.rhs!r}")
    if not (math.isfinite(printed.rel_dev) and abs(printed.rel_dev - 0.273) < 5e-3):
        failures.append(f"odd-dimension product as stated: rel dev {printed.rel_dev:.6g}, expected about 0.273")
    for m in range(1, 7):
        r = identities.corollary2_check_corrected(m)
        if r.verdict != "verified" or r.rel_dev > 1e-7:
            failures.append(f"odd-dimension product with 2k+2m+1, m={m}: {r.verdict}")
    for m in (1, 2, 3):
        if identities.remark_product(m, "printed").verdict != "diverges":
            failures.append(f"ratio product as stated, m={m}: not reported divergent")
    w = analysis.omega(1.5)
    if not (w.value < 0 and w.agrees_with_paper is False):
        failures.append(f"omega(1.5) = {w.value!r}, agrees {w.agrees_with_paper}")
    for p in (1.1, 1.3, 1.5, 1.7, 1.9):
        h = analysis.h_prime_sign(p)
        if not (h.sign == "negative" and h.agrees_with_paper is False):
            failures.append(f"h'({p}) sign {h.sign}, agrees {h.agrees_with_paper}")
    for p in (1.0, 2.0):
        if abs(analysis.omega(p).value) > 1e-14:
            failures.append(f"omega({p}) = {analysis.omega(p).value!r}")
    proc = subprocess.run([sys.executable, "-m", "volprod", "--quiet", "verify", "all"],
                          capture_output=True, text=True, timeout=300)
    if proc.returncode != 0 or not json.loads(proc.stdout)["passed"]:
        failures.append(f"verify all exited {proc.returncode}")
    _assert_all(failures)


def _closed_forms():
    def cor1_m3(k):
        u = 1.0 / (2.0 * k + 2.0)
        return 4 * np.log1p(-u) + np.log1p(4 * u)

    return [
        ("telescoping", lambda k: np.log1p(-1.0 / (k + 1.0) ** 2), 0.5),
        ("half shift", lambda k: np.log1p(-0.25 / (k + 1.0) ** 2), 8.0 / (3.0 * math.pi)),
        ("even product m=3", cor1_m3, (4.0 / math.pi) ** 2 / 6.0),
        ("gamma ratio", lambda k: np.log1p(-0.14 / ((k + 0.5) * (k + 1.0))),
         math.gamma(1.5) * math.gamma(2.0) / (math.gamma(1.3) * math.gamma(2.2))),
        ("lemma P(2.7,0.9)", lambda k: np.log1p(0.9 * 2.6 / ((k - 0.9) * (k + 2.6))),
         math.gamma(0.1) * math.gamma(3.6) / math.gamma(2.7)),
    ]


def test_criterion_9_product_engine_properties():
    failures = []
    for mode in ("none", "first_order", "richardson"):
        for name, term, closed in _closed_forms():
            r = eval_log_product(term, TruncationPolicy(tail_mode=mode))
            lo, hi = r.error_bracket
            if not lo <= math.log(closed) <= hi:
                failures.append(f"{mode} {name}: log {math.log(closed)!r} outside [{lo!r}, {hi!r}]")
            for base in (1024, 5000, 20000):
                small = eval_log_product(term, TruncationPolicy(max_terms=base, tail_mode=mode))
                big = eval_log_product(term, TruncationPolicy(max_terms=4 * base, tail_mode=mode))
                w_small = small.error_bracket[1] - small.error_bracket[0]
                w_big = big.error_bracket[1] - big.error_bracket[0]
                if w_big > w_small or big.error_bracket[0] > small.error_bracket[1] \
                        or big.error_bracket[1] < small.error_bracket[0]:
                    failures.append(f"{mode} {name}: refinement from {base} widened or jumped")
    divergent = lambda k: np.log1p(1.0 / (2.0 * k + 1.0)) + np.log1p(-3.0 / (2.0 * k + 5.0))
    try:
        eval_log_product(divergent)
        failures.append("divergent test term not detected")
    except DivergenceSuspected:
        pass
    _assert_all(failures)
