"""Command line interface.

Subcommands: spectrum, sequence, eigen, stochastic, subst (enumerate|grow),
verify. Exit codes: 0 success, 1 input error, 2 physicality or unitarity
failure under strict flags, 3 numerical failure. Exact rationals print as
p/q; floats print with 17 significant digits in text formats and as
round-trip JSON numbers in json format.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from . import algebra, spectral, substitution
from .errors import (
    ComputationError,
    InputError,
    KbonacciError,
    NonUnitaryRepresentationError,
    SpecFileError,
)
from .exprparse import parse as parse_expr
from .recurrence import (
    CoefficientVector,
    extend_seeds,
    energy_from_miles,
    iterate_sequence,
    matrix_power_sequence,
)

FORMATS = ("table", "csv", "json")


def _fraction_arg(text: str, what: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{what}: cannot parse rational {text!r} ({exc})") from None


def _rational_list(text: str, what: str) -> list[Fraction]:
    items = [t for t in text.split(",") if t.strip() != ""]
    if not items:
        raise InputError(f"{what}: expected comma-separated rationals")
    return [_fraction_arg(t, what) for t in items]


def _coeffs_arg(text: str) -> CoefficientVector:
    try:
        return CoefficientVector(tuple(_rational_list(text, "--coeffs")))
    except ValueError as exc:
        raise InputError(f"--coeffs: {exc}") from None


def _seed_state(coeffs: CoefficientVector, text: str | None):
    if text is None:
        vals = [Fraction(1)] + [Fraction(0)] * (coeffs.k - 1)
    else:
        vals = _rational_list(text, "--seeds")
        if len(vals) != coeffs.k:
            raise InputError(
                f"--seeds: expected {coeffs.k} values (alpha_0 plus {coeffs.k - 1} "
                f"higher ladder values), got {len(vals)}"
            )
    return extend_seeds(coeffs, vals[0], vals[1:])


def _scalar_text(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _scalar_json(x):
    if x is None:
        return None
    if isinstance(x, Fraction):
        return str(x)
    return x


def _emit_json(payload) -> None:
    print(json.dumps(payload, indent=2))


def _emit_csv(header, rows) -> None:
    writer = csv.writer(sys.stdout)
    writer.writerow(header)
    for row in rows:
        writer.writerow([_scalar_text(x) if not isinstance(x, str) else x for x in row])


# Spec file handling.


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SpecFileError(f"cannot read spec file {path!r}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise SpecFileError(
            f"spec file {path!r} is not valid JSON: line {exc.lineno}, "
            f"column {exc.colno}: {exc.msg}"
        ) from None


def _spec_rational(value, where: str) -> Fraction:
    if isinstance(value, bool):
        raise SpecFileError(f"{where}: expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecFileError(f"{where}: cannot parse rational {value!r} ({exc})") from None
    if isinstance(value, float):
        raise SpecFileError(
            f"{where}: write rationals as strings like \"1/2\" (raw JSON floats "
            f"are not exact)"
        )
    raise SpecFileError(f"{where}: expected a rational, got {type(value).__name__}")


def _load_algebra_spec(path: str) -> tuple[algebra.GHASpec, int | None, dict]:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise SpecFileError("spec file: top level must be a JSON object")
    unknown = set(data) - {"k", "linear", "functions", "vacuum", "n_max", "arithmetic", "tolerances"}
    if unknown:
        raise SpecFileError(f"spec file: unknown fields {sorted(unknown)}")
    k = data.get("k")
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise SpecFileError("field 'k': must be an integer >= 1")
    has_linear = "linear" in data
    has_functions = "functions" in data
    if has_linear == has_functions:
        raise SpecFileError("spec file: provide exactly one of 'linear' or 'functions'")
    if has_linear:
        raw = data["linear"]
        if not isinstance(raw, list) or len(raw) != k:
            raise SpecFileError(f"field 'linear': must be a list of {k} rationals")
        try:
            functions = tuple(
                algebra.AffineFunction(_spec_rational(v, f"linear[{i}]"))
                for i, v in enumerate(raw)
            )
        except ValueError as exc:
            raise SpecFileError(f"field 'linear': {exc}") from None
    else:
        raw = data["functions"]
        if not isinstance(raw, list) or len(raw) != k:
            raise SpecFileError(f"field 'functions': must be a list of {k} expressions")
        parsed = []
        for i, text in enumerate(raw):
            if not isinstance(text, str):
                raise SpecFileError(f"functions[{i}]: must be an expression string")
            try:
                parsed.append(algebra.ExpressionFunction(parse_expr(text)))
            except KbonacciError as exc:
                raise SpecFileError(f"functions[{i}]: {exc}") from None
        functions = tuple(parsed)
    vac_raw = data.get("vacuum")
    if not isinstance(vac_raw, list) or len(vac_raw) != k:
        raise SpecFileError(f"field 'vacuum': must be a list of {k} rationals")
    vacuum = tuple(_spec_rational(v, f"vacuum[{i}]") for i, v in enumerate(vac_raw))
    arithmetic = data.get("arithmetic", "exact")
    if arithmetic not in ("exact", "float64"):
        raise SpecFileError("field 'arithmetic': must be \"exact\" or \"float64\"")
    n_max = data.get("n_max")
    if n_max is not None and (not isinstance(n_max, int) or isinstance(n_max, bool) or n_max < 0):
        raise SpecFileError("field 'n_max': must be an integer >= 0")
    tolerances = data.get("tolerances", {})
    if not isinstance(tolerances, dict):
        raise SpecFileError("field 'tolerances': must be an object")
    spec = algebra.GHASpec(functions=functions, vacuum=vacuum, arithmetic=arithmetic)
    return spec, n_max, tolerances


# Subcommand handlers.


def _cmd_spectrum(args) -> int:
    spec, file_n_max, _ = _load_algebra_spec(args.specfile)
    n_max = args.levels if args.levels is not None else file_n_max
    if n_max is None:
        raise SpecFileError("field 'n_max': missing (or pass --levels)")
    table = algebra.spectrum(spec, n_max)
    k = spec.k
    header = ["n", *(f"alpha_{i}" for i in range(1, k + 1)), "Nsq", "N", "physical", "unitary"]
    rows = [
        [row.n, *row.alphas, row.nsq, row.norm, row.alphas[0] >= 0, row.nsq >= 0]
        for row in table.rows
    ]
    flags = {
        "physical_energy": table.physical_energy,
        "unitary": table.unitary,
        "nondecreasing": table.nondecreasing,
    }
    if args.format == "json":
        payload = {
            "k": k,
            "arithmetic": spec.arithmetic,
            "rows": [
                {
                    "n": row.n,
                    "alphas": [_scalar_json(a) for a in row.alphas],
                    "nsq": _scalar_json(row.nsq),
                    "norm": row.norm,
                    "physical": bool(row.alphas[0] >= 0),
                    "unitary": bool(row.nsq >= 0),
                }
                for row in table.rows
            ],
            "flags": flags,
        }
        _emit_json(payload)
    elif args.format == "csv":
        _emit_csv(header, rows)
    else:
        widths = [
            max(len(header[c]), *(len(_scalar_text(r[c])) for r in rows))
            for c in range(len(header))
        ]
        print("  ".join(h.ljust(widths[c]) for c, h in enumerate(header)))
        for r in rows:
            print("  ".join(_scalar_text(v).ljust(widths[c]) for c, v in enumerate(r)))
        print(
            f"flags: physical_energy={flags['physical_energy']} "
            f"unitary={flags['unitary']} nondecreasing={flags['nondecreasing']}"
        )
    if args.strict_physical and not all(flags.values()):
        failing = sorted(name for name, ok in flags.items() if not ok)
        print(f"error: physicality flags failed: {', '.join(failing)}", file=sys.stderr)
        return 2
    return 0


def _cmd_sequence(args) -> int:
    coeffs = _coeffs_arg(args.coeffs)
    seeds = _seed_state(coeffs, args.seeds)
    n = args.n
    if n < 0:
        raise InputError("-n must be >= 0")
    direct = iterate_sequence(coeffs, seeds, n).values
    method = args.method
    if method == "direct":
        values = list(direct)
    elif method == "matrix":
        values = [matrix_power_sequence(coeffs, seeds, m)[-1] for m in range(n + 1)]
    elif method == "miles":
        unit = all(v == 1 for v in coeffs.values)
        unit_seed = seeds.alpha0 == 1 and all(h == 0 for h in seeds.higher)
        if coeffs.k < 2 or not unit or not unit_seed:
            raise ComputationError(
                "miles requires unit coefficients (all lambda_i = 1, k >= 2) "
                "and the unit vacuum seed (1, 0, ..., 0)"
            )
        values = [Fraction(energy_from_miles(coeffs.k, m)) for m in range(n + 1)]
    elif method == "binet":
        roots = spectral.find_roots(
            spectral.char_poly(coeffs), tol=args.tol, max_iter=args.max_iter
        )
        form = spectral.binet_form(coeffs, seeds, roots)
        values = [spectral.binet_eval(form, roots, m) for m in range(n + 1)]
    else:  # pragma: no cover - argparse restricts choices
        raise InputError(f"unknown method {method!r}")

    check = None
    if args.check:
        if method == "binet":
            worst = 0.0
            for b, d in zip(values, direct):
                ref = abs(float(d))
                worst = max(worst, abs(b - float(d)) / max(1.0, ref))
            check = worst
        else:
            worst = max((abs(v - d) for v, d in zip(values, direct)), default=Fraction(0))
            check = worst

    if args.format == "json":
        payload = {
            "coefficients": [str(v) for v in coeffs.values],
            "method": method,
            "values": [_scalar_json(v) for v in values],
        }
        if check is not None:
            payload["max_discrepancy_vs_direct"] = _scalar_json(check)
        _emit_json(payload)
    elif args.format == "csv":
        _emit_csv(["n", "value"], [[m, v] for m, v in enumerate(values)])
        if check is not None:
            print(f"# max discrepancy vs direct: {_scalar_text(check)}")
    else:
        for m, v in enumerate(values):
            print(f"{m}  {_scalar_text(v)}")
        if check is not None:
            print(f"max discrepancy vs direct: {_scalar_text(check)}")
    return 0


def _poly_term(mag: Fraction, power: int) -> str:
    if power == 0:
        return _scalar_text(mag)
    xs = "x" if power == 1 else f"x^{power}"
    return xs if mag == 1 else f"{_scalar_text(mag)}*{xs}"


def _poly_text(desc) -> str:
    top = len(desc) - 1
    parts = []
    for i, c in enumerate(desc):
        if c == 0:
            continue
        body = _poly_term(abs(c), top - i)
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts) if parts else "0"


def _cmd_eigen(args) -> int:
    coeffs = _coeffs_arg(args.coeffs)
    poly = spectral.char_poly(coeffs)
    roots = spectral.find_roots(poly, tol=args.tol, max_iter=args.max_iter)
    dom = roots.roots[roots.dominant]
    if args.format == "json":
        _emit_json(
            {
                "char_poly": [str(c) for c in poly],
                "roots": [{"re": r.real, "im": r.imag} for r in roots.roots],
                "dominant_index": roots.dominant,
                "dominant": {"re": dom.real, "im": dom.imag},
                "min_separation": roots.condition,
            }
        )
    elif args.format == "csv":
        _emit_csv(
            ["index", "re", "im", "modulus"],
            [[i, r.real, r.imag, abs(r)] for i, r in enumerate(roots.roots)],
        )
    else:
        print(f"characteristic polynomial: {_poly_text(poly)}")
        for i, r in enumerate(roots.roots):
            mark = "  <- dominant" if i == roots.dominant else ""
            print(f"root {i}: {_scalar_text(r.real)} + {_scalar_text(r.imag)}i{mark}")
        print(f"min separation: {_scalar_text(roots.condition)}")
    return 0


def _cmd_stochastic(args) -> int:
    coeffs = _coeffs_arg(args.coeffs)
    report = spectral.stochastic_analysis(coeffs)
    if args.format == "json":
        _emit_json(
            {
                "stochastic": report.is_stochastic,
                "nonnegative": report.nonnegative,
                "sums_to_one": report.sums_to_one,
                "stationary": [str(p) for p in report.stationary]
                if report.stationary
                else None,
                "dominant_root": {
                    "re": report.dominant_root.real,
                    "im": report.dominant_root.imag,
                }
                if report.dominant_root is not None
                else None,
                "dominant_gap": report.dominant_gap,
            }
        )
    elif args.format == "csv":
        rows = []
        if report.stationary:
            rows = [[i + 1, p] for i, p in enumerate(report.stationary)]
        _emit_csv(["state", "pi"], rows)
    else:
        if report.is_stochastic:
            print("stochastic: yes")
            pi = ", ".join(str(p) for p in report.stationary)
            print(f"stationary distribution: ({pi})")
        else:
            reasons = []
            if not report.nonnegative:
                reasons.append("negative coefficients")
            if not report.sums_to_one:
                reasons.append("coefficients do not sum to 1")
            print(f"stochastic: no ({'; '.join(reasons)})")
        if report.dominant_root is not None:
            print(
                f"dominant root: {_scalar_text(report.dominant_root.real)} "
                f"+ {_scalar_text(report.dominant_root.imag)}i "
                f"(|dominant - 1| = {_scalar_text(report.dominant_gap)})"
            )
    return 0


def _cmd_subst(args) -> int:
    if args.action == "enumerate":
        coeffs = _coeffs_arg(args.coeffs)
        rules = substitution.enumerate_rules(coeffs)
        if args.format == "json":
            _emit_json({"count": len(rules), "rules": [r.as_text() for r in rules]})
        elif args.format == "csv":
            _emit_csv(["index", "rule"], [[i, r.as_text()] for i, r in enumerate(rules)])
        else:
            for r in rules:
                print(r.as_text())
            print(f"count: {len(rules)}")
        return 0

    # grow
    rule = substitution.parse_rule(args.rule)
    states = substitution.grow_chain(rule, args.steps, word_cap=args.word_cap)
    notes = substitution.chain_notes(rule, states)
    freq = lambda s: [c / s.length for c in s.letter_counts]
    if args.format == "json":
        _emit_json(
            {
                "rule": rule.as_text(),
                "states": [
                    {
                        "step": s.step,
                        "length": s.length,
                        "word": s.word,
                        "letter_counts": list(s.letter_counts),
                        "frequencies": freq(s),
                    }
                    for s in states
                ],
                "notes": notes,
            }
        )
    elif args.format == "csv":
        _emit_csv(
            ["step", "length", "word", *(f"count_{a}" for a in rule.letters)],
            [[s.step, s.length, s.word if s.word is not None else "", *s.letter_counts] for s in states],
        )
        for note in notes:
            print(f"# {note}")
    else:
        for s in states:
            word = s.word if s.word is not None else f"(not materialized, cap {args.word_cap})"
            fr = ", ".join(format(x, ".6f") for x in freq(s))
            print(f"step {s.step}: length {s.length}  word {word}  frequencies ({fr})")
        for note in notes:
            print(note)
    return 0


def _cmd_verify(args) -> int:
    spec, _, tolerances = _load_algebra_spec(args.specfile)
    tol = args.tol
    if tol is None:
        tol = tolerances.get("verify", 1e-10)
        if not isinstance(tol, (int, float)) or isinstance(tol, bool) or tol <= 0:
            raise SpecFileError("tolerances['verify']: must be a positive number")
    ops = algebra.truncated_operators(spec, args.dim)
    report = algebra.verify_relations(ops, spec, tol=tol)
    if args.format == "json":
        _emit_json(
            {
                "dim": args.dim,
                "tol": tol,
                "relations": [
                    {"label": e.label, "residual": e.residual, "passed": e.passed}
                    for e in report.entries
                ],
                "all_passed": report.all_passed,
            }
        )
    elif args.format == "csv":
        _emit_csv(
            ["label", "residual", "passed"],
            [[e.label, e.residual, e.passed] for e in report.entries],
        )
    else:
        for e in report.entries:
            status = "PASS" if e.passed else "FAIL"
            print(f"{e.label:24s} residual {_scalar_text(e.residual):24s} {status}")
        print(f"all relations within tol {_scalar_text(float(tol))}: {report.all_passed}")
    return 0 if report.all_passed else 3


class _ArgumentParser(argparse.ArgumentParser):
    # Usage problems are input errors: exit 1, not argparse's default 2.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(self._input_error(message))

    def _input_error(self, message) -> int:
        print(f"error: {message}", file=sys.stderr)
        return 1


def _add_format(p) -> None:
    p.add_argument("--format", choices=FORMATS, default="table", help="output format")


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(
        prog="kbonacci",
        description=(
            "k-step ladder algebras, k-generalized Fibonacci sequences, and "
            "Fibonacci substitution chains over exact rationals"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="Fock spectrum table from an algebra spec file")
    p.add_argument("specfile")
    p.add_argument("--levels", type=int, default=None, help="override n_max from the file")
    p.add_argument(
        "--strict-physical",
        action="store_true",
        help="exit 2 if any physicality flag fails",
    )
    _add_format(p)
    p.set_defaults(handler=_cmd_spectrum)

    p = sub.add_parser("sequence", help="evaluate the k-step recurrence")
    p.add_argument("--coeffs", required=True, help="comma-separated rationals lambda_1..lambda_k")
    p.add_argument(
        "--seeds",
        default=None,
        help="comma-separated vacuum-form seeds alpha_0^(1..k); default 1,0,...,0",
    )
    p.add_argument("-n", type=int, required=True, help="largest index to evaluate")
    p.add_argument(
        "--method",
        choices=("direct", "matrix", "binet", "miles"),
        default="direct",
    )
    p.add_argument("--check", action="store_true", help="compare against direct iteration")
    p.add_argument("--tol", type=float, default=1e-13, help="root iteration tolerance")
    p.add_argument("--max-iter", type=int, default=500, help="root iteration cap")
    _add_format(p)
    p.set_defaults(handler=_cmd_sequence)

    p = sub.add_parser("eigen", help="characteristic polynomial and its roots")
    p.add_argument("--coeffs", required=True)
    p.add_argument("--tol", type=float, default=1e-13)
    p.add_argument("--max-iter", type=int, default=500)
    _add_format(p)
    p.set_defaults(handler=_cmd_eigen)

    p = sub.add_parser("stochastic", help="probability-row test and stationary state")
    p.add_argument("--coeffs", required=True)
    _add_format(p)
    p.set_defaults(handler=_cmd_stochastic)

    p = sub.add_parser("subst", help="substitution rules and chain growth")
    action = p.add_subparsers(dest="action", required=True)

    pe = action.add_parser("enumerate", help="list all rules for a coefficient vector")
    pe.add_argument("--coeffs", required=True)
    _add_format(pe)
    pe.set_defaults(handler=_cmd_subst)

    pg = action.add_parser("grow", help="iterate a rule from the first letter")
    pg.add_argument("--rule", required=True, help='rule text like "A:ABAC,B:A,C:BB"')
    pg.add_argument("--steps", type=int, required=True)
    pg.add_argument("--word-cap", type=int, default=10000, help="word materialization cap")
    _add_format(pg)
    pg.set_defaults(handler=_cmd_subst)

    p = sub.add_parser("verify", help="check the defining relations on a truncation")
    p.add_argument("specfile")
    p.add_argument("--dim", type=int, required=True, help="truncation dimension")
    p.add_argument("--tol", type=float, default=None, help="residual tolerance")
    _add_format(p)
    p.set_defaults(handler=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 0
    try:
        return args.handler(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NonUnitaryRepresentationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ComputationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KbonacciError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
