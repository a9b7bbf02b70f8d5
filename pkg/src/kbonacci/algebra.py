"""Ladder-operator algebras of order k and their Fock-space spectra.

An algebra spec is k level functions (f_1, ..., f_k) plus k vacuum values
(alpha_0^(1), ..., alpha_0^(k)). The spectrum recursions are

    alpha_{n+1}^(1) = f_1(alpha_n^(1)) + sum_{i>=2} alpha_n^(i)
    alpha_{n+1}^(i) = f_i(alpha_{n-i+2}^(1))          for i = 2..k
    N_{n+1}^2 = N_n^2 + f_1(alpha_{n+1}^(1)) - alpha_{n+1}^(1)
                + sum_{i>=2} alpha_{n+1}^(i)
    N_0^2 = f_1(alpha_0^(1)) - alpha_0^(1) + sum_{i>=2} alpha_0^(i)

When every level function is purely linear, negative-index arguments of the
second recursion come from the seed convention
alpha_{-m} = alpha_0^(m+1) / lambda_{m+1}; otherwise the first i-2 rows of
ladder i hold the vacuum value until the argument index is nonnegative.

Arithmetic is exact (Fraction) when every function is affine with rational
coefficients, or float64 on request. Truncated operator matrices realize
the algebra on a finite-dimensional Fock block for relation checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

import numpy as np

from .errors import (
    ExactModeUnavailableError,
    NonUnitaryRepresentationError,
    TruncationTooSmallError,
)
from .exprparse import ExprNode, as_affine, evaluate
from .recurrence import CoefficientVector

__all__ = [
    "AffineFunction",
    "ExpressionFunction",
    "FunctionSpec",
    "linear_functions",
    "GHASpec",
    "SpectrumRow",
    "SpectrumTable",
    "PhysicalityReport",
    "TruncatedOps",
    "RelationResidual",
    "VerificationReport",
    "spectrum",
    "physicality_report",
    "truncated_operators",
    "verify_relations",
]


@dataclass(frozen=True)
class AffineFunction:
    """f(x) = slope * x + offset with exact rational coefficients."""

    slope: Fraction
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "slope", Fraction(self.slope))
        object.__setattr__(self, "offset", Fraction(self.offset))

    def __call__(self, x):
        return self.slope * x + self.offset

    def affine_form(self) -> tuple[Fraction, Fraction]:
        return self.slope, self.offset


@dataclass(frozen=True)
class ExpressionFunction:
    """Level function given as a parsed expression tree."""

    node: ExprNode

    def __call__(self, x):
        return evaluate(self.node, x)

    def affine_form(self) -> Optional[tuple[Fraction, Fraction]]:
        return as_affine(self.node)


FunctionSpec = Union[AffineFunction, ExpressionFunction]


def linear_functions(coeffs: CoefficientVector) -> tuple[AffineFunction, ...]:
    """The purely linear family f_i(x) = lambda_i * x."""
    return tuple(AffineFunction(v) for v in coeffs.values)


@dataclass(frozen=True)
class GHASpec:
    """Algebra specification: level functions, vacuum, arithmetic mode.

    arithmetic is "exact" or "float64"; exact mode is permitted only when
    every function is affine with rational coefficients
    (ExactModeUnavailableError otherwise).
    """

    functions: tuple[FunctionSpec, ...]
    vacuum: tuple[Fraction, ...]
    arithmetic: str = "exact"

    def __post_init__(self):
        if len(self.functions) < 1:
            raise ValueError("need at least one level function")
        if len(self.vacuum) != len(self.functions):
            raise ValueError(
                f"vacuum must have {len(self.functions)} entries, got {len(self.vacuum)}"
            )
        object.__setattr__(self, "functions", tuple(self.functions))
        object.__setattr__(self, "vacuum", tuple(Fraction(v) for v in self.vacuum))
        if self.arithmetic not in ("exact", "float64"):
            raise ValueError("arithmetic must be 'exact' or 'float64'")
        if self.arithmetic == "exact":
            for i, fn in enumerate(self.functions, start=1):
                if fn.affine_form() is None:
                    raise ExactModeUnavailableError(
                        f"level function f_{i} is not affine; use float64 arithmetic"
                    )

    @property
    def k(self) -> int:
        return len(self.functions)


@dataclass(frozen=True)
class SpectrumRow:
    """One Fock level: alphas = (alpha_n^(1), ..., alpha_n^(k))."""

    n: int
    alphas: tuple
    nsq: object
    norm: Optional[float]  # sqrt(nsq), None when nsq < 0


@dataclass(frozen=True)
class SpectrumTable:
    rows: tuple[SpectrumRow, ...]
    physical_energy: bool  # every alpha_n^(1) >= 0
    unitary: bool  # every N_n^2 >= 0
    nondecreasing: bool  # alpha^(1) column nondecreasing


def _evaluators(spec: GHASpec) -> list[Callable]:
    if spec.arithmetic == "exact":
        fns = []
        for fn in spec.functions:
            pair = fn.affine_form()
            slope, offset = pair
            fns.append(lambda x, a=slope, b=offset: a * x + b)
        return fns
    out = []
    for fn in spec.functions:
        pair = fn.affine_form()
        if pair is not None:
            a, b = float(pair[0]), float(pair[1])
            out.append(lambda x, a=a, b=b: a * x + b)
        else:
            out.append(lambda x, f=fn: float(f(x)))
    return out


def _linear_slopes(spec: GHASpec) -> Optional[list[Fraction]]:
    slopes = []
    for fn in spec.functions:
        pair = fn.affine_form()
        if pair is None or pair[1] != 0 or pair[0] == 0:
            return None
        slopes.append(pair[0])
    return slopes


def spectrum(spec: GHASpec, n_max: int) -> SpectrumTable:
    """Levels 0..n_max of the Fock spectrum with physicality flags.

    Exact mode returns Fractions in alphas and nsq; float64 mode returns
    floats. norm is always a float square root (None when nsq < 0).
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    k = spec.k
    exact = spec.arithmetic == "exact"
    fns = _evaluators(spec)
    if exact:
        vacuum = list(spec.vacuum)
    else:
        vacuum = [float(v) for v in spec.vacuum]

    slopes = _linear_slopes(spec)
    negatives = {}
    if slopes is not None:
        # Seed convention: alpha_{-m} = alpha_0^(m+1) / lambda_{m+1}.
        for m in range(1, k):
            value = Fraction(spec.vacuum[m]) / slopes[m]
            negatives[-m] = value if exact else float(value)

    energies = [vacuum[0]]
    ladders = {i: [vacuum[i - 1]] for i in range(2, k + 1)}

    def alpha1(idx: int):
        if idx >= 0:
            return energies[idx]
        return negatives[idx]

    nsq0 = fns[0](vacuum[0]) - vacuum[0]
    for i in range(2, k + 1):
        nsq0 = nsq0 + ladders[i][0]
    nsqs = [nsq0]

    for n in range(n_max):
        new_energy = fns[0](energies[n])
        for i in range(2, k + 1):
            new_energy = new_energy + ladders[i][n]
        energies.append(new_energy)
        for i in range(2, k + 1):
            arg = n - i + 2
            if arg >= 0 or slopes is not None:
                ladders[i].append(fns[i - 1](alpha1(arg)))
            else:
                # Hold the vacuum value until the recursion argument exists.
                ladders[i].append(vacuum[i - 1])
        bracket = fns[0](energies[n + 1]) - energies[n + 1]
        for i in range(2, k + 1):
            bracket = bracket + ladders[i][n + 1]
        nsqs.append(nsqs[n] + bracket)

    rows = []
    for n in range(n_max + 1):
        alphas = (energies[n], *(ladders[i][n] for i in range(2, k + 1)))
        nsq = nsqs[n]
        norm = math.sqrt(float(nsq)) if nsq >= 0 else None
        rows.append(SpectrumRow(n, alphas, nsq, norm))
    physical = all(r.alphas[0] >= 0 for r in rows)
    unitary = all(r.nsq >= 0 for r in rows)
    nondecr = all(
        rows[n + 1].alphas[0] >= rows[n].alphas[0] for n in range(len(rows) - 1)
    )
    return SpectrumTable(tuple(rows), physical, unitary, nondecr)


@dataclass(frozen=True)
class PhysicalityReport:
    """First level at which each physicality condition fails (None if never)."""

    first_negative_energy: Optional[int]
    first_negative_norm_sq: Optional[int]
    first_decrease: Optional[int]

    @property
    def physical_energy(self) -> bool:
        return self.first_negative_energy is None

    @property
    def unitary(self) -> bool:
        return self.first_negative_norm_sq is None

    @property
    def nondecreasing(self) -> bool:
        return self.first_decrease is None


def physicality_report(table: SpectrumTable) -> PhysicalityReport:
    first_neg = next((r.n for r in table.rows if r.alphas[0] < 0), None)
    first_nonunitary = next((r.n for r in table.rows if r.nsq < 0), None)
    first_decrease = None
    for n in range(len(table.rows) - 1):
        if table.rows[n + 1].alphas[0] < table.rows[n].alphas[0]:
            first_decrease = n + 1
            break
    return PhysicalityReport(first_neg, first_nonunitary, first_decrease)


@dataclass(frozen=True)
class TruncatedOps:
    """Operators on the first dim Fock levels, all real float64 matrices.

    hamiltonian and the j_operators are diagonal; raising carries N_n on the
    first subdiagonal and lowering is its transpose.
    """

    dim: int
    hamiltonian: np.ndarray
    j_operators: tuple[np.ndarray, ...]  # J_i for i = 2..k
    raising: np.ndarray
    lowering: np.ndarray

    def kappa(self, n: int, i: int) -> float:
        """Product N_{n-1} * ... * N_{n-i+1} (empty product 1.0 for i = 1)."""
        if i < 1:
            raise ValueError("i must be >= 1")
        if n - i + 1 < 0 or n > self.dim - 1:
            raise ValueError(f"kappa({n},{i}) needs levels n-i+1..n-1 inside 0..dim-1")
        out = 1.0
        for m in range(n - i + 1, n):
            out *= self.raising[m + 1, m]
        return out


def truncated_operators(spec: GHASpec, dim: int) -> TruncatedOps:
    """Matrices of H, J_i, and the ladder pair on the first dim levels.

    Requires N_n^2 >= 0 for every n < dim; the first violating level raises
    NonUnitaryRepresentationError.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    table = spectrum(spec, dim - 1)
    for row in table.rows:
        if row.nsq < 0:
            raise NonUnitaryRepresentationError(row.n, row.nsq)
    k = spec.k
    h = np.zeros((dim, dim))
    for row in table.rows:
        h[row.n, row.n] = float(row.alphas[0])
    j_ops = []
    for i in range(2, k + 1):
        j = np.zeros((dim, dim))
        for row in table.rows:
            j[row.n, row.n] = float(row.alphas[i - 1])
        j_ops.append(j)
    raising = np.zeros((dim, dim))
    for n in range(dim - 1):
        raising[n + 1, n] = table.rows[n].norm
    return TruncatedOps(
        dim=dim,
        hamiltonian=h,
        j_operators=tuple(j_ops),
        raising=raising,
        lowering=raising.T.copy(),
    )


@dataclass(frozen=True)
class RelationResidual:
    label: str
    residual: float
    passed: bool


@dataclass(frozen=True)
class VerificationReport:
    entries: tuple[RelationResidual, ...]
    tol: float

    @property
    def max_residual(self) -> float:
        return max(e.residual for e in self.entries)

    @property
    def all_passed(self) -> bool:
        return all(e.passed for e in self.entries)


def _exact_matrices(spec: GHASpec, dim: int):
    # Exact verification rescales the ladder pair: raising carries N_n^2 on
    # the subdiagonal and lowering carries ones. Every relation's matrix
    # element is (product of subdiagonal weights) * (scalar recursion
    # residual), so the zero set matches the true sqrt-weighted operators
    # while staying inside Fraction arithmetic.
    table = spectrum(spec, dim - 1)
    zero = Fraction(0)
    k = spec.k

    def diag(vals):
        return [
            [vals[r] if r == c else zero for c in range(dim)] for r in range(dim)
        ]

    h = diag([row.alphas[0] for row in table.rows])
    js = [diag([row.alphas[i - 1] for row in table.rows]) for i in range(2, k + 1)]
    ad = [[zero] * dim for _ in range(dim)]
    a = [[zero] * dim for _ in range(dim)]
    for n in range(dim - 1):
        ad[n + 1][n] = Fraction(table.rows[n].nsq)
        a[n][n + 1] = Fraction(1)
    pairs = [fn.affine_form() for fn in spec.functions]
    f_of_h = [
        diag([p[0] * row.alphas[0] + p[1] for row in table.rows]) for p in pairs
    ]
    return h, js, ad, a, f_of_h


def _mat_mul_exact(x, y, dim):
    zero = Fraction(0)
    out = [[zero] * dim for _ in range(dim)]
    for r in range(dim):
        xr = x[r]
        for m in range(dim):
            v = xr[m]
            if v == 0:
                continue
            ym = y[m]
            orow = out[r]
            for c in range(dim):
                if ym[c] != 0:
                    orow[c] += v * ym[c]
    return out


def _mat_sub_exact(x, y, dim):
    return [[x[r][c] - y[r][c] for c in range(dim)] for r in range(dim)]


def _mat_add_exact(x, y, dim):
    return [[x[r][c] + y[r][c] for c in range(dim)] for r in range(dim)]


def _max_abs_exact(mat, dim, col_hi, row_hi=None) -> float:
    row_hi = dim if row_hi is None else row_hi
    worst = Fraction(0)
    for r in range(row_hi):
        for c in range(col_hi):
            v = mat[r][c]
            if v < 0:
                v = -v
            if v > worst:
                worst = v
    return float(worst)


def _verify_exact(spec: GHASpec, dim: int, tol: float) -> list[RelationResidual]:
    k = spec.k
    h, js, ad, a, f_of_h = _exact_matrices(spec, dim)
    mul = lambda x, y: _mat_mul_exact(x, y, dim)
    entries = []

    rhs = f_of_h[0]
    for j in js:
        rhs = _mat_add_exact(rhs, j, dim)
    res = _mat_sub_exact(mul(h, ad), mul(ad, rhs), dim)
    r = _max_abs_exact(res, dim, dim - 1)
    entries.append(RelationResidual("H.raising", r, r <= tol))

    power = None
    for idx, i in enumerate(range(2, k + 1)):
        power = ad if power is None else mul(power, ad)
        res = _mat_sub_exact(mul(js[idx], power), mul(power, f_of_h[i - 1]), dim)
        r = _max_abs_exact(res, dim, dim - i + 1)
        entries.append(RelationResidual(f"J{i}.raising^{i - 1}", r, r <= tol))

    comm = _mat_sub_exact(mul(a, ad), mul(ad, a), dim)
    res = _mat_sub_exact(comm, _mat_sub_exact(rhs, h, dim), dim)
    r = _max_abs_exact(res, dim, dim - 1, dim - 1)
    entries.append(RelationResidual("[lowering,raising]", r, r <= tol))

    worst = Fraction(0)
    for j in js:
        res = _mat_sub_exact(mul(h, j), mul(j, h), dim)
        m = _max_abs_exact(res, dim, dim)
        worst = max(worst, m)
    entries.append(RelationResidual("[H,Ji]", float(worst), worst <= tol))

    worst = 0.0
    for x in range(len(js)):
        for y in range(x + 1, len(js)):
            res = _mat_sub_exact(mul(js[x], js[y]), mul(js[y], js[x]), dim)
            worst = max(worst, _max_abs_exact(res, dim, dim))
    entries.append(RelationResidual("[Ji,Jj]", worst, worst <= tol))
    return entries


def _float_f_matrices(ops: TruncatedOps, spec: GHASpec) -> list[np.ndarray]:
    fns = _evaluators(spec)
    dim = ops.dim
    diag_alpha = np.diag(ops.hamiltonian).copy()
    out = []
    for fn in fns:
        m = np.zeros((dim, dim))
        for n in range(dim):
            m[n, n] = fn(diag_alpha[n])
        out.append(m)
    return out


def _verify_float(ops: TruncatedOps, spec: GHASpec, tol: float) -> list[RelationResidual]:
    k = spec.k
    dim = ops.dim
    h = ops.hamiltonian
    ad = ops.raising
    a = ops.lowering
    f_mats = _float_f_matrices(ops, spec)
    entries = []

    rhs = f_mats[0]
    for j in ops.j_operators:
        rhs = rhs + j
    res = h @ ad - ad @ rhs
    r = float(np.max(np.abs(res[:, : dim - 1]))) if dim > 1 else 0.0
    entries.append(RelationResidual("H.raising", r, r <= tol))

    power = np.eye(dim)
    for idx, i in enumerate(range(2, k + 1)):
        power = power @ ad
        res = ops.j_operators[idx] @ power - power @ f_mats[i - 1]
        r = float(np.max(np.abs(res[:, : dim - i + 1])))
        entries.append(RelationResidual(f"J{i}.raising^{i - 1}", r, r <= tol))

    comm = a @ ad - ad @ a
    res = comm - (rhs - h)
    r = float(np.max(np.abs(res[: dim - 1, : dim - 1]))) if dim > 1 else 0.0
    entries.append(RelationResidual("[lowering,raising]", r, r <= tol))

    worst = 0.0
    for j in ops.j_operators:
        worst = max(worst, float(np.max(np.abs(h @ j - j @ h))))
    entries.append(RelationResidual("[H,Ji]", worst, worst <= tol))

    worst = 0.0
    for x in range(len(ops.j_operators)):
        for y in range(x + 1, len(ops.j_operators)):
            jx, jy = ops.j_operators[x], ops.j_operators[y]
            worst = max(worst, float(np.max(np.abs(jx @ jy - jy @ jx))))
    entries.append(RelationResidual("[Ji,Jj]", worst, worst <= tol))
    return entries


def verify_relations(ops: TruncatedOps, spec: GHASpec, tol: float = 1e-10) -> VerificationReport:
    """Max-norm residuals of the defining relations on the truncated block.

    Checked on the rows/columns unaffected by truncation: the ladder
    relation on columns 0..D-2, each intertwining relation J_i a+^(i-1) on
    columns 0..D-i, the commutator on indices 0..D-2, and the diagonal
    commutators everywhere. Exact-mode specs verify over exact rationals
    (residuals are exactly zero when the recursions hold); float64 specs
    verify with float64 matrix products.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if ops.dim < spec.k:
        raise TruncationTooSmallError(
            f"dim {ops.dim} below algebra order k={spec.k}"
        )
    if spec.arithmetic == "exact":
        entries = _verify_exact(spec, ops.dim, tol)
    else:
        entries = _verify_float(ops, spec, tol)
    return VerificationReport(tuple(entries), tol)
