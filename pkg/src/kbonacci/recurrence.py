"""Exact k-step linear recurrences over arbitrary-precision rationals.

A coefficient vector (lambda_1, ..., lambda_k) with every entry nonzero
defines the recurrence

    alpha_{n+1} = lambda_1 * alpha_n + ... + lambda_k * alpha_{n-k+1}.

Sequences are pinned down by a seed state built from a base value alpha_0
and k-1 higher ladder values (alpha_0^(2), ..., alpha_0^(k)); the values at
negative indices follow the convention alpha_{-m} = alpha_0^(m+1) / lambda_{m+1}.

Three independent evaluation routes are provided: direct iteration,
companion-matrix powers (square and multiply), and, for the all-ones
coefficient case, the Miles multinomial formula. All three are exact over
fractions.Fraction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .errors import DomainError, OrderMismatchError

__all__ = [
    "CoefficientVector",
    "SeedState",
    "ExactSequence",
    "extend_seeds",
    "iterate_sequence",
    "companion_rows",
    "matrix_power_sequence",
    "miles_number",
    "energy_from_miles",
]


def _fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        # Floats are rejected: exact inputs must arrive as int/str/Fraction.
        raise TypeError("exact coefficients must be int, str, or Fraction, not float")
    return Fraction(value)


@dataclass(frozen=True)
class CoefficientVector:
    """Recurrence coefficients (lambda_1, ..., lambda_k), all nonzero.

    The order k is the number of coefficients. Entries are coerced to
    Fraction; ints and strings like "1/2" are accepted.
    """

    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(_fraction(v) for v in self.values)
        if len(vals) < 1:
            raise ValueError("recurrence order k must be at least 1")
        if any(v == 0 for v in vals):
            raise ValueError("all recurrence coefficients must be nonzero")
        object.__setattr__(self, "values", vals)

    @property
    def k(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class SeedState:
    """Seed data for one sequence.

    alpha0   the base value alpha_0
    higher   the k-1 values (alpha_0^(2), ..., alpha_0^(k))
    extended the window (alpha_{-(k-1)}, ..., alpha_{-1}, alpha_0) obtained
             from the division convention; this is what iteration and the
             companion matrix act on.
    """

    alpha0: Fraction
    higher: tuple[Fraction, ...] = field(default=())
    extended: tuple[Fraction, ...] = field(default=())


def extend_seeds(coeffs: CoefficientVector, alpha0, higher) -> SeedState:
    """Build a SeedState from vacuum-form data.

    higher must have length k-1. The extended window is filled via
    alpha_{-m} = alpha_0^(m+1) / lambda_{m+1} for m = 1..k-1, which is well
    defined because coefficients are nonzero.
    """
    alpha0 = _fraction(alpha0)
    higher_t = tuple(_fraction(h) for h in higher)
    if len(higher_t) != coeffs.k - 1:
        raise OrderMismatchError(
            f"expected {coeffs.k - 1} higher seed values for order k={coeffs.k}, "
            f"got {len(higher_t)}"
        )
    extended = []
    for m in range(coeffs.k - 1, 0, -1):
        extended.append(higher_t[m - 1] / coeffs.values[m])
    extended.append(alpha0)
    return SeedState(alpha0, higher_t, tuple(extended))


@dataclass(frozen=True)
class ExactSequence:
    """Values alpha_0..alpha_n of one sequence, all exact rationals."""

    values: tuple[Fraction, ...]
    coefficients: CoefficientVector
    seeds: SeedState


def iterate_sequence(coeffs: CoefficientVector, seeds: SeedState, n_max: int) -> ExactSequence:
    """Evaluate alpha_0..alpha_{n_max} by direct iteration.

    Exact over Fraction. n_max must be >= 0.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    k = coeffs.k
    lams = coeffs.values
    window = list(seeds.extended)  # alpha_{n-k+1}..alpha_n, currently n = 0
    if len(window) != k:
        raise OrderMismatchError("seed state extended window length must equal k")
    values = [window[-1]]
    for _ in range(n_max):
        nxt = lams[0] * window[k - 1]
        for i in range(1, k):
            nxt += lams[i] * window[k - 1 - i]
        values.append(nxt)
        del window[0]
        window.append(nxt)
    return ExactSequence(tuple(values), coeffs, seeds)


def companion_rows(coeffs: CoefficientVector) -> tuple[tuple[Fraction, ...], ...]:
    """Companion matrix rows: superdiagonal ones, last row (lambda_k..lambda_1)."""
    k = coeffs.k
    zero, one = Fraction(0), Fraction(1)
    rows = [
        tuple(one if c == r + 1 else zero for c in range(k)) for r in range(k - 1)
    ]
    rows.append(tuple(coeffs.values[k - 1 - c] for c in range(k)))
    return tuple(rows)


def _mat_mul(a, b, k):
    return [
        [sum(a[r][m] * b[m][c] for m in range(k)) for c in range(k)]
        for r in range(k)
    ]


def _mat_vec(a, v, k):
    return [sum(a[r][m] * v[m] for m in range(k)) for r in range(k)]


def matrix_power_sequence(coeffs: CoefficientVector, seeds: SeedState, n: int) -> tuple[Fraction, ...]:
    """Return T^n applied to the extended seed window, T the companion matrix.

    The result is (alpha_{n-k+1}, ..., alpha_n); its last component equals
    iterate_sequence(coeffs, seeds, n).values[n]. The power is computed by
    square and multiply over exact scalars. Integer inputs take an integer
    fast path; results are always Fractions.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    k = coeffs.k
    rows = companion_rows(coeffs)
    vec = list(seeds.extended)
    if len(vec) != k:
        raise OrderMismatchError("seed state extended window length must equal k")
    integral = all(x.denominator == 1 for row in rows for x in row) and all(
        x.denominator == 1 for x in vec
    )
    if integral:
        rows = [[x.numerator for x in row] for row in rows]
        vec = [x.numerator for x in vec]
        one, zero = 1, 0
    else:
        one, zero = Fraction(1), Fraction(0)
    result = [[one if r == c else zero for c in range(k)] for r in range(k)]
    base = rows
    e = n
    while e:
        if e & 1:
            result = _mat_mul(result, base, k)
        e >>= 1
        if e:
            base = _mat_mul(base, base, k)
    out = _mat_vec(result, vec, k)
    return tuple(Fraction(x) for x in out)


def miles_number(k: int, m: int) -> int:
    """k-generalized Fibonacci number F_m^(k) by the multinomial sum.

    F_m^(k) = sum over a_1 + 2 a_2 + ... + k a_k = m - k + 1 of
    (a_1 + ... + a_k)! / (a_1! ... a_k!). The multinomial factor is built
    incrementally as a product of binomials along the enumeration, so no
    full factorials are formed.

    Requires k >= 2 and m >= k - 1 (DomainError otherwise).
    """
    if k < 2:
        raise DomainError("miles_number requires order k >= 2")
    target = m - k + 1
    if target < 0:
        raise DomainError(f"m must be >= k - 1, got m={m} for k={k}")

    def descend(weight: int, remaining: int, total: int, coeff: int) -> int:
        if weight == 1:
            return coeff * comb(total + remaining, remaining)
        acc = 0
        a = 0
        while a * weight <= remaining:
            acc += descend(
                weight - 1, remaining - a * weight, total + a, coeff * comb(total + a, a)
            )
            a += 1
        return acc

    return descend(k, target, 0, 1)


def energy_from_miles(k: int, n: int) -> int:
    """Energy level E_n for the all-ones coefficient case: F_{n+k-1}^(k)."""
    if n < 0:
        raise DomainError("level n must be >= 0")
    return miles_number(k, n + k - 1)
