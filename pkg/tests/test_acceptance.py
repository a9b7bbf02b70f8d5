"""Acceptance gate: ten checks, one printed PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-check
lines. Each test collects every violation before printing its line, so a FAIL
line always appears (with details) ahead of the assertion error.
"""

import math
import random
import time
from fractions import Fraction as F
from itertools import product

from kbonacci import (
    CoefficientVector,
    GHASpec,
    abelianization,
    binet_eval,
    binet_form,
    chain_notes,
    char_poly,
    energy_from_miles,
    enumerate_rules,
    extend_seeds,
    find_roots,
    grow_chain,
    iterate_sequence,
    linear_functions,
    matrix_char_poly,
    matrix_power_sequence,
    parse_rule,
    ratio_limit_check,
    spectrum,
    stochastic_analysis,
    truncated_operators,
    verify_relations,
)

GOLDEN = 1.6180339887498949


def coeffs_of(*vals):
    return CoefficientVector(tuple(F(v) for v in vals))


def vacuum_seeds(coeffs):
    return extend_seeds(coeffs, F(1), (F(0),) * (coeffs.k - 1))


def vacuum_spec(lams, arithmetic="exact"):
    c = coeffs_of(*lams)
    vac = tuple(F(1 if i == 0 else 0) for i in range(c.k))
    return GHASpec(functions=linear_functions(c), vacuum=vac, arithmetic=arithmetic)


def finish(num, name, failures, started, budget):
    elapsed = time.perf_counter() - started
    if elapsed >= budget:
        failures.append(f"runtime {elapsed:.2f}s exceeded {budget}s budget")
    status = "FAIL" if failures else "PASS"
    print(f"[acceptance {num:02d}] {name}: {status} ({elapsed:.2f}s)")
    assert not failures, f"acceptance check {num} ({name}): " + "; ".join(failures)


def test_01_quadratic_roots_and_golden_ratio():
    started = time.perf_counter()
    failures = []
    for r, s in [(1, 1), (1, 2), (2, 1), (3, 2)]:
        roots = find_roots(char_poly(coeffs_of(r, s)))
        disc = math.sqrt(r * r + 4 * s)
        for expected in ((r + disc) / 2, (r - disc) / 2):
            gap = min(abs(z - expected) for z in roots.roots)
            if gap > 1e-12:
                failures.append(f"({r},{s}): root {expected} missed by {gap:.2e}")
    dom = find_roots(char_poly(coeffs_of(1, 1)))
    if abs(dom.roots[dom.dominant] - GOLDEN) > 1e-12:
        failures.append("golden ratio beyond 1e-12")
    finish(1, "quadratic roots and golden ratio", failures, started, 1.0)


def test_02_cross_method_agreement():
    started = time.perf_counter()
    failures = []
    for k in (2, 3, 4, 5):
        for lams in product((1, 2), repeat=k):
            c = coeffs_of(*lams)
            seeds = vacuum_seeds(c)
            direct = iterate_sequence(c, seeds, 100).values
            for n in range(101):
                if matrix_power_sequence(c, seeds, n)[-1] != direct[n]:
                    failures.append(f"matrix != direct at {lams}, n={n}")
                    break
            if all(v == 1 for v in lams):
                for n in range(101):
                    if energy_from_miles(k, n) != direct[n]:
                        failures.append(f"miles != direct at k={k}, n={n}")
                        break
            roots = find_roots(char_poly(c))
            form = binet_form(c, seeds, roots)
            for n in range(101):
                got = binet_eval(form, roots, n)
                ref = float(direct[n])
                if abs(got - ref) > 1e-6 * max(1.0, abs(ref)):
                    failures.append(f"binet off at {lams}, n={n}")
                    break
    finish(2, "direct/matrix/miles/binet cross-check", failures, started, 10.0)


def test_03_miles_energy_identity():
    started = time.perf_counter()
    failures = []
    for k in range(2, 7):
        c = coeffs_of(*([1] * k))
        vals = iterate_sequence(c, vacuum_seeds(c), 30).values
        for n in range(31):
            if energy_from_miles(k, n) != vals[n]:
                failures.append(f"k={k}, n={n}: {energy_from_miles(k, n)} != {vals[n]}")
    finish(3, "path-count energy identity", failures, started, 5.0)


def test_04_operator_relations():
    started = time.perf_counter()
    failures = []
    for k in (2, 3, 4):
        for lams in product((1, 2), repeat=k):
            exact_spec = vacuum_spec(lams)
            report = verify_relations(
                truncated_operators(exact_spec, 12), exact_spec, tol=1e-10
            )
            bad = [e.label for e in report.entries if e.residual != 0]
            if bad:
                failures.append(f"exact residuals nonzero at {lams}: {bad}")
            float_spec = vacuum_spec(lams, "float64")
            report = verify_relations(
                truncated_operators(float_spec, 12), float_spec, tol=1e-10
            )
            if not report.all_passed:
                failures.append(
                    f"float residual {report.max_residual:.2e} > 1e-10 at {lams}"
                )
    finish(4, "operator relations at dim 12", failures, started, 1.0)


def test_05_k3_recursion():
    started = time.perf_counter()
    failures = []
    table = spectrum(vacuum_spec((2, 1, 2)), 10)
    alphas = [row.alphas[0] for row in table.rows]
    if alphas[:4] != [1, 2, 5, 14]:
        failures.append(f"prefix {alphas[:4]} != [1, 2, 5, 14]")
    for n in range(3, 10):
        if alphas[n + 1] != 2 * alphas[n] + alphas[n - 1] + 2 * alphas[n - 2]:
            failures.append(f"recurrence breaks at n={n}")
    # continuation determined by the recurrence: 2*14 + 5 + 2*2
    if alphas[4] != 37:
        failures.append(f"alpha_4 = {alphas[4]} != 37")
    finish(5, "k=3 spectrum recursion", failures, started, 1.0)


def test_06_enumeration_counts():
    started = time.perf_counter()
    failures = []
    if len(enumerate_rules(coeffs_of(1, 1))) != 2:
        failures.append("(1,1) count != 2")
    if len(enumerate_rules(coeffs_of(2, 1, 2))) != 12:
        failures.append("(2,1,2) count != 12")
    for l1 in (1, 2, 3):
        for k in (1, 2, 3, 4):
            for l2 in (1, 2):
                for q in (1, 2):
                    lams = [l1]
                    if k > 1:
                        lams.append(l2)
                    while len(lams) < k:
                        lams.append(lams[-1] * q)
                    expected = 1
                    for j in range(1, k):
                        expected *= l1 + j
                    got = len(enumerate_rules(coeffs_of(*lams)))
                    if got != expected:
                        failures.append(f"{lams}: {got} != {expected}")
    finish(6, "substitution rule counts", failures, started, 1.0)


def test_07_chain_growth():
    started = time.perf_counter()
    failures = []
    rule = parse_rule("A:ABAC,B:A,C:BB")
    states = grow_chain(rule, 4)
    words = [s.word for s in states[:3]]
    if words != ["A", "ABAC", "ABACAABACBB"]:
        failures.append(f"words {words} do not match the printed chain")
    lengths = [s.length for s in states]
    if lengths != [1, 4, 11, 28, 75]:
        failures.append(f"lengths {lengths} != [1, 4, 11, 28, 75]")
    for n in range(3, len(lengths)):
        expected = 2 * lengths[n - 1] + lengths[n - 2] + 2 * lengths[n - 3]
        if lengths[n] != expected:
            failures.append(f"length recurrence breaks at n={n}")
    notes = chain_notes(rule, states)
    if not any("29" in note for note in notes):
        failures.append("quoted step-3 length 29 not flagged")
    fib_lengths = [s.length for s in grow_chain(parse_rule("A:AB,B:A"), 4)]
    if fib_lengths != [1, 2, 3, 5, 8]:
        failures.append(f"fibonacci lengths {fib_lengths} != [1, 2, 3, 5, 8]")
    finish(7, "chain growth and length law", failures, started, 1.0)


def test_08_stochastic_case():
    started = time.perf_counter()
    failures = []
    report = stochastic_analysis(coeffs_of(F(1, 2), F(1, 2)))
    if not report.is_stochastic:
        failures.append("(1/2,1/2) not reported stochastic")
    if report.stationary != (F(1, 3), F(2, 3)):
        failures.append(f"stationary {report.stationary} != (1/3, 2/3)")
    if report.dominant_gap is None or report.dominant_gap > 1e-12:
        failures.append(f"|dominant - 1| = {report.dominant_gap}")
    finish(8, "stochastic stationary state", failures, started, 1.0)


def test_09_ratio_limits():
    started = time.perf_counter()
    failures = []
    fib = coeffs_of(1, 1)
    rep = ratio_limit_check(fib, vacuum_seeds(fib), 40, tol=1e-10)
    if abs(rep.ratio - GOLDEN) > 1e-10:
        failures.append(f"fibonacci ratio off by {abs(rep.ratio - GOLDEN):.2e}")
    if rep.passed is not True:
        failures.append("fibonacci ratio check did not pass")
    trib = coeffs_of(1, 1, 1)
    rep = ratio_limit_check(trib, vacuum_seeds(trib), 60, tol=1e-10)
    if rep.deviation > 1e-10:
        failures.append(f"tribonacci deviation {rep.deviation:.2e}")
    if rep.passed is not True:
        failures.append("tribonacci ratio check did not pass")
    finish(9, "ratio limits reach the dominant root", failures, started, 1.0)


def test_10_abelianization_similarity():
    started = time.perf_counter()
    failures = []
    rng = random.Random(1123581321)
    for trial in range(50):
        k = rng.randint(1, 4)
        lams = [rng.randint(1, 5)]
        if k > 1:
            lams.append(rng.randint(1, 4))
        while len(lams) < k:
            lams.append(lams[-1] * rng.randint(1, 3))
        c = coeffs_of(*lams)
        rule = rng.choice(enumerate_rules(c))
        rows = tuple(
            tuple(F(x) for x in row) for row in abelianization(rule).entries
        )
        if matrix_char_poly(rows) != char_poly(c):
            failures.append(f"trial {trial}: {lams} via {rule.as_text()}")
    finish(10, "abelianization shares the companion spectrum", failures, started, 5.0)
