"""Command-line front end.

Algebras come from an AlgebraSpec JSON file (``--algebra``) or the built-in zoo
(``--zoo``).  AlgebraSpec uses 1-based indices::

    {"dim": 3, "basis": ["e1", "e2", "e3"],
     "brackets": [{"i": 1, "j": 2, "terms": [{"k": 2, "c": "1"}]},
                  {"i": 1, "j": 3, "terms": [{"k": 3, "c": "-1"}]}]}

Exit codes: 0 ok, 2 invalid algebra, 3 invalid form, 4 irrational spectrum refused.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import zoo
from .algebra import (
    LieAlgebra,
    Twist,
    classify,
    derived_subalgebra,
    is_unimodular,
    jacobi_check,
)
from .cohomology import BettiTable, betti, novikov_report
from .dixmier import nontriviality_set, operator_spectrum, verify_les
from .errors import (
    InvalidAlgebra,
    NotSolvable,
    OmegaNotClosed,
    OmegaZero,
    RationalSpectrumRequired,
)
from .linalg import format_rational, parse_rational
from .weights import adapted_basis, line_candidates, omega_set, weight_system

EXIT_OK = 0
EXIT_INVALID_ALGEBRA = 2
EXIT_INVALID_FORM = 3
EXIT_IRRATIONAL = 4


class SpecError(InvalidAlgebra):
    pass


# -- AlgebraSpec I/O -------------------------------------------------------------------


def _require_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SpecError(f"{where}: expected an integer, got {value!r}")
    return value


def parse_algebra_spec(doc) -> LieAlgebra:
    """Validate a decoded AlgebraSpec document and build the algebra."""
    if not isinstance(doc, dict):
        raise SpecError("top level: expected a JSON object")
    unknown = set(doc) - {"dim", "basis", "brackets"}
    if unknown:
        raise SpecError(f"top level: unknown field(s) {', '.join(sorted(unknown))}")
    if "dim" not in doc:
        raise SpecError("dim: missing required field")
    n = _require_int(doc["dim"], "dim")
    if n < 1:
        raise SpecError("dim: must be >= 1")
    names = doc.get("basis")
    if names is not None:
        if not isinstance(names, list) or len(names) != n or not all(isinstance(s, str) for s in names):
            raise SpecError(f"basis: expected a list of {n} strings")
    brackets: dict[tuple[int, int], dict[int, Fraction]] = {}
    entries = doc.get("brackets", [])
    if not isinstance(entries, list):
        raise SpecError("brackets: expected a list")
    for idx, entry in enumerate(entries):
        where = f"brackets[{idx}]"
        if not isinstance(entry, dict):
            raise SpecError(f"{where}: expected an object")
        i = _require_int(entry.get("i"), f"{where}.i")
        j = _require_int(entry.get("j"), f"{where}.j")
        if not (1 <= i <= n and 1 <= j <= n):
            raise SpecError(f"{where}: indices must lie in 1..{n}")
        if not i < j:
            raise SpecError(f"{where}: requires i < j, got i={i}, j={j}")
        if (i - 1, j - 1) in brackets:
            raise SpecError(f"{where}: duplicate bracket ({i}, {j})")
        terms = entry.get("terms", [])
        if not isinstance(terms, list):
            raise SpecError(f"{where}.terms: expected a list")
        row: dict[int, Fraction] = {}
        for t_idx, term in enumerate(terms):
            twhere = f"{where}.terms[{t_idx}]"
            if not isinstance(term, dict):
                raise SpecError(f"{twhere}: expected an object")
            k = _require_int(term.get("k"), f"{twhere}.k")
            if not 1 <= k <= n:
                raise SpecError(f"{twhere}.k: must lie in 1..{n}")
            c = term.get("c")
            if isinstance(c, bool) or not isinstance(c, (str, int)):
                raise SpecError(f"{twhere}.c: expected a rational string like \"p/q\"")
            try:
                value = parse_rational(c)
            except ValueError as exc:
                raise SpecError(f"{twhere}.c: {exc}") from None
            row[k - 1] = row.get(k - 1, Fraction(0)) + value
        brackets[(i - 1, j - 1)] = row
    return LieAlgebra(n, brackets, tuple(names) if names else ())


def load_algebra_spec(text: str, source: str = "<input>") -> LieAlgebra:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        return parse_algebra_spec(doc)
    except SpecError as exc:
        raise SpecError(f"{source}: {exc}") from None


def algebra_to_spec(L: LieAlgebra) -> dict:
    return {
        "dim": L.dim,
        "basis": list(L.basis_names),
        "brackets": [
            {"i": i + 1, "j": j + 1, "terms": [{"k": k + 1, "c": format_rational(c)} for k, c in terms.items()]}
            for (i, j), terms in L.brackets.items()
        ],
    }


def parse_covector(text: str, n: int) -> tuple[Fraction, ...]:
    try:
        values = tuple(parse_rational(x) for x in text.split(","))
    except ValueError as exc:
        raise OmegaNotClosed(f"--omega: {exc}") from None
    if len(values) != n:
        raise OmegaNotClosed(f"--omega: expected {n} coordinates, got {len(values)}")
    return values


def parse_grid(text: str) -> list[Fraction]:
    """Comma list of rationals, or an integer range ``a..b``."""
    text = text.strip()
    if ".." in text:
        a, _, b = text.partition("..")
        return [Fraction(x) for x in range(int(a), int(b) + 1)]
    return [parse_rational(x) for x in text.split(",")]


# -- rendering ------------------------------------------------------------------------------


def _fmt_vec(v) -> str:
    return "(" + ", ".join(format_rational(x) for x in v) + ")"


def render_betti(tables: Sequence[BettiTable]) -> str:
    if not tables:
        return "(no tables)"
    n = len(tables[0].betti) - 1
    header = ["lambda"] + [f"b{q}" for q in range(n + 1)] + ["euler"]
    rows = [[format_rational(t.twist.lam)] + [str(b) for b in t.betti] + [str(t.euler)] for t in tables]
    widths = [max(len(r[c]) for r in [header, *rows]) for c in range(len(header))]
    lines = [f"omega = {_fmt_vec(tables[0].twist.omega)}"]
    for r in [header, *rows]:
        lines.append("  ".join(x.rjust(w) for x, w in zip(r, widths)))
    return "\n".join(lines)


def _render_table(header, rows) -> str:
    widths = [max(len(str(r[c])) for r in [header, *rows]) for c in range(len(header))]
    return "\n".join("  ".join(str(x).rjust(w) for x, w in zip(r, widths)) for r in [header, *rows])


# -- commands ------------------------------------------------------------------------------


def _load(args) -> tuple[LieAlgebra, str]:
    if args.algebra:
        with open(args.algebra, encoding="utf-8") as fh:
            return load_algebra_spec(fh.read(), args.algebra), args.algebra
    entry = zoo.get(args.zoo, args.n)
    return entry.algebra, f"zoo:{entry.name}"


def _require_jacobi(L: LieAlgebra):
    report = jacobi_check(L)
    if not report.ok:
        (i, j, k), _ = report.violations[0]
        raise InvalidAlgebra(f"Jacobi identity fails on triple ({i + 1}, {j + 1}, {k + 1})")


def cmd_check(L, args, warnings):
    report = jacobi_check(L)
    cls = classify(L)
    result = {
        "jacobi": report.to_dict(),
        "classification": cls.to_dict(),
        "unimodular": is_unimodular(L),
        "derived_dim": derived_subalgebra(L).dim,
    }
    lines = [f"jacobi: {'pass' if report.ok else 'FAIL'}"]
    for (i, j, k), res in report.violations:
        lines.append(f"  violating triple ({i + 1}, {j + 1}, {k + 1}): residual {_fmt_vec(res)}")
    lines += [
        f"class: {cls.kind}",
        f"unimodular: {'yes' if result['unimodular'] else 'no'}",
        f"dim [g,g]: {result['derived_dim']}",
    ]
    return result, "\n".join(lines), EXIT_OK if report.ok else EXIT_INVALID_ALGEBRA


def _omega_arg(L, args, required=True):
    if args.omega is None:
        if required:
            raise OmegaNotClosed("--omega is required for this command")
        return (Fraction(0),) * L.dim
    return parse_covector(args.omega, L.dim)


def cmd_betti(L, args, warnings):
    omega = _omega_arg(L, args, required=False)
    lam = parse_rational(args.lam)
    table = betti(L, Twist.checked(L, omega, lam))
    return table.to_dict(), render_betti([table]), EXIT_OK


def cmd_spectrum(L, args, warnings):
    omega = _omega_arg(L, args)
    spec = operator_spectrum(L, omega)
    ns = nontriviality_set(L, omega)
    if not ns.complete:
        warnings.append("IrrationalSpectrum: some eigenvalues are irrational; the nontriviality set is partial")
    result = {"spectrum": spec.to_dict(), "nontriviality": ns.to_dict()}
    rows = []
    for d in spec.degrees:
        resid = "" if d.factorization.is_rational_complete else " + irrational residual"
        rows.append([d.degree, d.matrix.nrows, "{" + ", ".join(format_rational(r) for r in d.eigenvalues) + "}" + resid])
    text = _render_table(["k", "dim H^k(b)", "Spec^k"], rows)
    text += "\nnontrivial lambda: {" + ", ".join(format_rational(x) for x in ns.lambdas) + "}"
    return result, text, EXIT_OK


def cmd_weights(L, args, warnings):
    ab = adapted_basis(L)
    result = ab.to_dict()
    lines = [f"k = {ab.k}"]
    for idx, w in enumerate(ab.weights, start=ab.k + 1):
        lines.append(f"alpha_{idx} = {_fmt_vec(w)}")
    return result, "\n".join(lines), EXIT_OK


def cmd_omega_set(L, args, warnings):
    ws = weight_system(L)
    result = ws.to_dict()
    lines = ["Omega_g:"] + [f"  {_fmt_vec(v)}" for v in ws.omega_set]
    lines += ["certified (nonzero cohomology at lam*omega = -theta):"] + [f"  {_fmt_vec(v)}" for v in ws.omega_tilde]
    return result, "\n".join(lines), EXIT_OK


def cmd_nontrivial_set(L, args, warnings):
    omega = _omega_arg(L, args)
    Twist.checked(L, omega)
    ns = nontriviality_set(L, omega)
    if not ns.complete:
        warnings.append("IrrationalSpectrum: some eigenvalues are irrational; the nontriviality set is partial")
    result = ns.to_dict()
    if classify(L).solvable:
        try:
            sums = omega_set(adapted_basis(L).weights)
            result["weight_candidates"] = [format_rational(x) for x in line_candidates(omega, sums)]
        except RationalSpectrumRequired:
            warnings.append("weights unavailable: irrational eigenvalues on [g,g]")
    text = render_betti(list(ns.certified))
    text += "\nnontrivial lambda: {" + ", ".join(format_rational(x) for x in ns.lambdas) + "}"
    return result, text, EXIT_OK


def cmd_les_verify(L, args, warnings):
    omega = _omega_arg(L, args)
    spec = operator_spectrum(L, omega)
    reports = [verify_les(L, omega, lam, spec) for lam in parse_grid(args.lambda_grid)]
    rows = [
        [format_rational(r.lam), " ".join(map(str, r.kernel_dims)), " ".join(map(str, r.predicted)),
         " ".join(map(str, r.actual)), "equal" if r.ok else "UNEQUAL"]
        for r in reports
    ]
    text = _render_table(["lambda", "k^i", "predicted", "actual", "verdict"], rows)
    code = EXIT_OK if all(r.ok for r in reports) else 1
    return [r.to_dict() for r in reports], text, code


def _novikov_candidates(L, omega, warnings):
    if classify(L).solvable:
        try:
            return line_candidates(omega, omega_set(adapted_basis(L).weights)), omega_set(adapted_basis(L).weights)
        except RationalSpectrumRequired:
            warnings.append("weights unavailable; candidates taken from the adX* spectrum")
    ns = nontriviality_set(L, omega)
    if not ns.complete:
        warnings.append("IrrationalSpectrum: candidate list is partial")
    return list(ns.lambdas), []


def cmd_novikov(L, args, warnings):
    omega = _omega_arg(L, args)
    Twist.checked(L, omega)
    cands, sums = _novikov_candidates(L, omega, warnings)
    rep = novikov_report(L, omega, cands, sums)
    rows = [["generic " + format_rational(rep.generic_lambda)] + list(rep.generic_betti)]
    rows += [[format_rational(lam)] + list(tab.betti) for lam, tab in rep.exceptional]
    rows.append(["lower bound"] + list(rep.morse_lower_bounds))
    header = ["lambda"] + [f"b{q}" for q in range(L.dim + 1)]
    return rep.to_dict(), _render_table(header, rows), EXIT_OK


def cmd_export(L, args, warnings):
    spec = algebra_to_spec(L)
    return spec, json.dumps(spec, indent=2), EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "betti": cmd_betti,
    "spectrum": cmd_spectrum,
    "weights": cmd_weights,
    "omega-set": cmd_omega_set,
    "nontrivial-set": cmd_nontrivial_set,
    "les-verify": cmd_les_verify,
    "novikov": cmd_novikov,
    "export": cmd_export,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lietwist", description="Twisted cohomology of Lie algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, omega=False, lam=False, grid=False):
        p = sub.add_parser(name, help=help_text)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--algebra", metavar="FILE", help="AlgebraSpec JSON file")
        src.add_argument("--zoo", metavar="NAME", help=f"built-in algebra: {', '.join(zoo.CONSTRUCTORS)}")
        p.add_argument("--n", type=int, default=None, help="size parameter for zoo families")
        p.add_argument("--format", choices=("table", "json"), default="table")
        if omega:
            p.add_argument("--omega", help="closed 1-form in dual coordinates, e.g. 1,0,0 (use --omega=-1,0 for a leading minus)")
        if lam:
            p.add_argument("--lambda", dest="lam", default="0", help="rational twist parameter p/q")
        if grid:
            p.add_argument("--lambda-grid", default="-3..3", help="comma list of rationals or a range a..b")
        return p

    add("check", "Jacobi identity, class, unimodularity")
    add("betti", "Betti table of the twisted complex", omega=True, lam=True)
    add("spectrum", "adX* spectra on H*(ker omega) and the nontriviality set", omega=True)
    add("weights", "weights of the triangular basis")
    add("omega-set", "sums of weights and their certified subset")
    add("nontrivial-set", "lambdas with nonzero cohomology on the omega-line", omega=True)
    add("les-verify", "check b^i = k^i + k^(i-1) on a lambda grid", omega=True, grid=True)
    add("novikov", "generic and exceptional Betti numbers on the omega-line", omega=True)
    add("export", "print the algebra as AlgebraSpec JSON")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    warnings: list[str] = []
    try:
        L, source = _load(args)
        if args.command != "check":
            _require_jacobi(L)
        result, text, code = COMMANDS[args.command](L, args, warnings)
    except (InvalidAlgebra, NotSolvable, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_ALGEBRA
    except (OmegaNotClosed, OmegaZero) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_FORM
    except RationalSpectrumRequired as exc:
        residual = " ".join(format_rational(c) for c in exc.residual)
        print(f"error: {exc}; residual factor coefficients (low to high): {residual}", file=sys.stderr)
        return EXIT_IRRATIONAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_FORM
    if args.format == "json":
        doc = {
            "command": args.command,
            "input": {"source": source, "digest": L.digest()},
            "result": result,
            "warnings": warnings,
        }
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(text)
        for w in warnings:
            print(f"warning: {w}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
