"""Substitution rules on k letters whose growth follows the k-step recurrence.

A coefficient vector of naturals (lambda_1, ..., lambda_k) with integral
quotients q_i = lambda_i / lambda_{i-1} for i >= 3 admits rules of the shape

    A_1 -> A_1^{l_1} A_{i_1} A_1^{l_2} A_{i_2} ... A_{i_{k-1}} A_1^{l_k}
    A_2 -> A_1^{lambda_2}
    A_i -> A_{i-1}^{q_i}            for i = 3..k

with (i_1, ..., i_{k-1}) a permutation of 2..k and the l_j a composition of
lambda_1. There are (lambda_1 + 1)(lambda_1 + 2)...(lambda_1 + k - 1) such
rules. Chain iteration from the single letter A_1 grows words whose lengths
obey the recurrence; the abelianization (letter-count) matrix has the same
characteristic polynomial as the companion matrix.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterator, Optional

import numpy as np

from .errors import NonIntegralCoefficientsError, RuleFormatError
from .recurrence import CoefficientVector

__all__ = [
    "RuleSpec",
    "SubstitutionRule",
    "AbelianizationMatrix",
    "ChainState",
    "GrowthReport",
    "enumerate_rules",
    "parse_rule",
    "abelianization",
    "grow_chain",
    "growth_law_check",
    "rule_coefficients",
    "chain_notes",
]


@dataclass(frozen=True)
class RuleSpec:
    """Combinatorial data picking one rule: permutation plus composition."""

    lambda1: int
    lambda2: int
    quotients: tuple[int, ...]  # q_3..q_k
    permutation: tuple[int, ...]  # ordering of letters 2..k inside image(A_1)
    composition: tuple[int, ...]  # l_1..l_k, sum = lambda1

    @property
    def k(self) -> int:
        return len(self.quotients) + 2

    def lambdas(self) -> tuple[int, ...]:
        out = [self.lambda1, self.lambda2]
        for q in self.quotients:
            out.append(q * out[-1])
        return tuple(out)


@dataclass(frozen=True)
class SubstitutionRule:
    """Images of the alphabet letters A, B, C, ... in order."""

    letters: tuple[str, ...]
    images: tuple[str, ...]

    def image(self, letter: str) -> str:
        return self.images[self.letters.index(letter)]

    def as_text(self) -> str:
        return ",".join(f"{a}:{w}" for a, w in zip(self.letters, self.images))

    @classmethod
    def from_spec(cls, rs: RuleSpec) -> "SubstitutionRule":
        k = rs.k
        letters = tuple(string.ascii_uppercase[:k])
        lams = rs.lambdas()
        head = []
        for j in range(k):
            head.append(letters[0] * rs.composition[j])
            if j < k - 1:
                head.append(letters[rs.permutation[j] - 1])
        images = ["".join(head), letters[0] * lams[1]]
        for i in range(3, k + 1):
            images.append(letters[i - 2] * rs.quotients[i - 3])
        return cls(letters, tuple(images))


def _natural_lambdas(coeffs: CoefficientVector) -> list[int]:
    lams = []
    for i, v in enumerate(coeffs.values, start=1):
        if v.denominator != 1 or v < 1:
            raise NonIntegralCoefficientsError(
                f"lambda_{i} = {v} is not a natural number >= 1"
            )
        lams.append(v.numerator)
    for i in range(3, len(lams) + 1):
        if lams[i - 1] % lams[i - 2] != 0:
            raise NonIntegralCoefficientsError(
                f"quotient lambda_{i}/lambda_{i - 1} = "
                f"{Fraction(lams[i - 1], lams[i - 2])} is not integral"
            )
    return lams


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    # All tuples of nonnegative ints summing to total, lexicographic order.
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


def enumerate_rules(coeffs: CoefficientVector) -> list[SubstitutionRule]:
    """All rules for the coefficient vector, ordered by (permutation, composition).

    Coefficients must be naturals with integral quotients q_i for i >= 3
    (NonIntegralCoefficientsError otherwise). The count is
    prod_{j=1}^{k-1} (lambda_1 + j).
    """
    lams = _natural_lambdas(coeffs)
    k = len(lams)
    if k == 1:
        return [SubstitutionRule(("A",), ("A" * lams[0],))]
    quotients = tuple(lams[i - 1] // lams[i - 2] for i in range(3, k + 1))
    rules = []
    for perm in permutations(range(2, k + 1)):
        for comp in _compositions(lams[0], k):
            rs = RuleSpec(lams[0], lams[1], quotients, tuple(perm), comp)
            rules.append(SubstitutionRule.from_spec(rs))
    return rules


def parse_rule(text: str) -> SubstitutionRule:
    """Parse rule text of the form "A:ABAC,B:A,C:BB"."""
    entries = []
    for part in text.split(","):
        if ":" not in part:
            raise RuleFormatError(f"rule entry {part!r} is missing ':'")
        letter, _, word = part.partition(":")
        letter = letter.strip()
        word = word.strip()
        if len(letter) != 1 or not letter.isupper():
            raise RuleFormatError(f"bad letter {letter!r} in rule text")
        if not word:
            raise RuleFormatError(f"empty image for letter {letter!r}")
        entries.append((letter, word))
    letters = tuple(sorted(a for a, _ in entries))
    expected = tuple(string.ascii_uppercase[: len(letters)])
    if letters != expected or len(set(letters)) != len(entries):
        raise RuleFormatError(
            f"letters must be exactly {''.join(expected)} without repeats"
        )
    by_letter = dict(entries)
    alphabet = set(letters)
    for a, w in entries:
        bad = set(w) - alphabet
        if bad:
            raise RuleFormatError(
                f"image of {a!r} uses letters {sorted(bad)} outside the alphabet"
            )
    return SubstitutionRule(expected, tuple(by_letter[a] for a in expected))


@dataclass(frozen=True)
class AbelianizationMatrix:
    """entries[r][c] = count of letter c in the image of letter r."""

    k: int
    entries: tuple[tuple[int, ...], ...]


def abelianization(rule: SubstitutionRule) -> AbelianizationMatrix:
    k = len(rule.letters)
    entries = tuple(
        tuple(rule.images[r].count(rule.letters[c]) for c in range(k)) for r in range(k)
    )
    return AbelianizationMatrix(k, entries)


@dataclass(frozen=True)
class ChainState:
    """Chain snapshot: word is None once length exceeds the materialization cap."""

    step: int
    word: Optional[str]
    letter_counts: tuple[int, ...]
    length: int


def grow_chain(rule: SubstitutionRule, steps: int, word_cap: int = 10000) -> list[ChainState]:
    """Iterate the rule from the single first letter for the given step count.

    Letter counts and lengths are exact integers at every step; the word
    itself is materialized only while its length stays within word_cap.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if word_cap < 1:
        raise ValueError("word_cap must be >= 1")
    k = len(rule.letters)
    mat = abelianization(rule).entries
    counts = tuple(1 if i == 0 else 0 for i in range(k))
    word: Optional[str] = rule.letters[0] if 1 <= word_cap else None
    states = [ChainState(0, word, counts, 1)]
    for step in range(1, steps + 1):
        counts = tuple(
            sum(counts[r] * mat[r][c] for r in range(k)) for c in range(k)
        )
        length = sum(counts)
        if word is not None and length <= word_cap:
            word = "".join(rule.image(ch) for ch in word)
        else:
            word = None
        states.append(ChainState(step, word, counts, length))
    return states


def rule_coefficients(rule: SubstitutionRule) -> tuple[int, ...]:
    """Recover (lambda_1..lambda_k) from a rule in the canonical shape.

    Validates the abelianization pattern: first row (lambda_1, 1, ..., 1),
    second row (lambda_2, 0, ..., 0), row i >= 3 a single quotient entry at
    column i-1. ValueError when the rule is not of that shape.
    """
    mat = abelianization(rule).entries
    k = len(rule.letters)
    if k == 1:
        return (mat[0][0],)
    ok = all(mat[0][c] == 1 for c in range(1, k))
    ok = ok and all(mat[1][c] == 0 for c in range(1, k)) and mat[1][0] >= 1
    lams = [mat[0][0], mat[1][0]]
    for i in range(3, k + 1):
        row = mat[i - 1]
        q = row[i - 2]
        ok = ok and q >= 1 and all(row[c] == 0 for c in range(k) if c != i - 2)
        lams.append(q * lams[-1])
    if not ok or lams[0] < 1:
        raise ValueError("rule is not in the canonical shape; no growth law")
    return tuple(lams)


@dataclass(frozen=True)
class GrowthReport:
    lengths: tuple[int, ...]
    recurrence_ok: bool
    violations: tuple[int, ...]
    frequency_checked: bool
    frequency_deviation: Optional[float]
    dominant_frequencies: Optional[tuple[float, ...]]


def growth_law_check(rule: SubstitutionRule, steps: int) -> GrowthReport:
    """Check the length recurrence and, for long chains, letter frequencies.

    Lengths must satisfy length(n+1) = sum_i lambda_i length(n-i+1) exactly
    for every n >= k. If the final length exceeds 10^4 the letter frequency
    vector is compared (max deviation 0.05) against the normalized dominant
    left eigenvector of the abelianization matrix.
    """
    lams = rule_coefficients(rule)
    k = len(lams)
    if steps < 2 * k:
        raise ValueError(f"steps must be >= 2k = {2 * k}")
    states = grow_chain(rule, steps, word_cap=1)
    lengths = tuple(s.length for s in states)
    violations = []
    for n in range(k, steps):
        predicted = sum(lams[i - 1] * lengths[n - i + 1] for i in range(1, k + 1))
        if lengths[n + 1] != predicted:
            violations.append(n)
    freq_checked = False
    freq_dev = None
    dom_freq = None
    if lengths[-1] > 10**4:
        freq_checked = True
        mat = np.array(abelianization(rule).entries, dtype=float)
        eigvals, eigvecs = np.linalg.eig(mat.T)
        idx = int(np.argmax(np.abs(eigvals)))
        vec = np.real(eigvecs[:, idx])
        if vec.sum() < 0:
            vec = -vec
        vec = vec / vec.sum()
        dom_freq = tuple(float(v) for v in vec)
        final = states[-1]
        freqs = np.array(final.letter_counts, dtype=float) / final.length
        freq_dev = float(np.max(np.abs(freqs - vec)))
    return GrowthReport(
        lengths=lengths,
        recurrence_ok=not violations,
        violations=tuple(violations),
        frequency_checked=freq_checked,
        frequency_deviation=freq_dev,
        dominant_frequencies=dom_freq,
    )


# The worked three-letter chain has a widely quoted length sequence
# "1, 4, 11, 29, ..." whose fourth entry contradicts both direct rewriting
# and the length recurrence; reports surface the discrepancy rather than
# silently correcting it.
_QUOTED_MISPRINT_IMAGES = ("ABAC", "A", "BB")
_QUOTED_MISPRINT_SEQUENCE = (1, 4, 11, 29)


def chain_notes(rule: SubstitutionRule, states: list[ChainState]) -> list[str]:
    """Advisory notes for a grown chain (empty for most rules)."""
    notes = []
    if rule.images == _QUOTED_MISPRINT_IMAGES and len(states) >= 4:
        actual = states[3].length
        quoted = _QUOTED_MISPRINT_SEQUENCE[3]
        if actual != quoted:
            notes.append(
                f"note: this chain's lengths are sometimes quoted as "
                f"{', '.join(str(v) for v in _QUOTED_MISPRINT_SEQUENCE)}, ...; "
                f"the quoted step-3 value {quoted} is inconsistent with "
                f"letter-by-letter rewriting and with the length recurrence, "
                f"which both give {actual}"
            )
    return notes
