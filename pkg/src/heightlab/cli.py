"""Command-line interface: ``heightlab <command> ...``.

JSON goes to stdout, diagnostics to stderr.  Exit codes: 0 ok, 1 selftest
failure, 2 validation failure, 3 parse error, 4 mathematical precondition.
"""

from __future__ import annotations

import argparse
import sys

from .biext import jump_identity_check, make_mixed_extension, torsion_pairing
from .ceresa import bounding_pair_rep, build_ceresa, sing_class
from .errors import (
    BlockMismatch,
    GenusTooSmall,
    InvalidPair,
    NotACocycle,
    NotAdmissible,
    NotCommuting,
    NotGluable,
    NotNilpotent,
    NotRestricted,
    NotTorsion,
    ParseError,
    ValidationError,
)
from .exact import parse_rational
from .families import jordan_alpha, jordan_beta, jordan_rep
from .heights import a_Q, complex_of, height_pairing
from .koszul import Cochain
from .serialization import (
    ProblemDocument,
    canonical_json,
    cochain_json,
    document_json,
    load_document,
    value_str,
)

EXIT_OK, EXIT_SELFTEST, EXIT_INVALID, EXIT_PARSE, EXIT_PRECONDITION = 0, 1, 2, 3, 4

_EXIT_CODES = (
    ((ParseError,), EXIT_PARSE),
    ((ValidationError, NotCommuting, NotNilpotent, NotACocycle, NotGluable, BlockMismatch,
      GenusTooSmall, InvalidPair), EXIT_INVALID),
    ((NotAdmissible, NotTorsion, NotRestricted), EXIT_PRECONDITION),
)


def _emit(obj, out) -> None:
    out.write(canonical_json(obj))


def _read(path: str) -> ProblemDocument:
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    return load_document(text)


def _rationals(text: str, what: str) -> tuple:
    try:
        return tuple(parse_rational(x) for x in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad {what}: {text!r}") from exc


def _integers(text: str, what: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise ParseError(f"bad {what}: {text!r}") from exc


# --- queries -----------------------------------------------------------------


def _point(args, doc: ProblemDocument):
    """(t, stratum) from the flags, falling back to the document's query."""
    if getattr(args, "t", None) is not None:
        return _rationals(args.t, "--t"), None
    if getattr(args, "stratum", None) is not None:
        return None, _integers(args.stratum, "--stratum")
    if getattr(args, "symbolic", False):
        return None, None
    if doc.t is not None:
        return doc.t, None
    return None, doc.stratum


def height_report(doc: ProblemDocument, t=None, stratum=None) -> dict:
    if doc.alpha is None or doc.beta is None:
        raise ValidationError([{"message": "the document needs alpha and beta"}])
    rep = doc.rep.check()
    if doc.pairing == "hQ":
        if rep.Q is None:
            raise ValidationError([{"message": "pairing hQ needs a polarization"}])
        complex_of(rep).check_cocycle_in_B(doc.alpha, "alpha")
        report = height_pairing(rep.dual(), a_Q(rep.Q, doc.alpha), doc.beta, t, stratum=stratum, l=doc.l)
    else:
        report = height_pairing(rep, doc.alpha, doc.beta, t, stratum=stratum, l=doc.l)
    return {
        "value": value_str(report.value),
        "stratum": list(report.stratum),
        "representatives": {
            "alpha": cochain_json(doc.alpha),
            "beta": cochain_json(doc.beta),
            "l": [value_str(x) for x in report.l],
        },
    }


def validation_report(doc: ProblemDocument) -> dict:
    rep = doc.rep
    problems = rep.problems()
    if not problems:
        K = complex_of(rep)
        if doc.alpha is not None and not K.in_B(doc.alpha):
            problems.append({"message": "alpha is not a cocycle of B^1"})
        if doc.beta is not None and not complex_of(rep.dual()).in_B(doc.beta):
            problems.append({"message": "beta is not a cocycle of B^1 of the dual"})
        if doc.ring is not None and not problems:
            try:
                _extension(doc)
            except NotGluable as exc:
                problems.append({"message": str(exc)})
            except (BlockMismatch, ValueError) as exc:
                problems.append({"message": str(exc)})
    return {"valid": not problems, "problems": problems}


def _extension(doc: ProblemDocument, ring=None):
    if doc.alpha is None or doc.beta is None:
        raise ValidationError([{"message": "an extension needs alpha and beta"}])
    r = doc.rep.r
    alpha = [doc.alpha.component_at(k) for k in range(r)]
    beta = [doc.beta.component_at(k) for k in range(r)]
    return make_mixed_extension(doc.rep, alpha, beta, doc.corner, ring or doc.ring or "Q")


# --- commands ----------------------------------------------------------------


def cmd_validate(args, out) -> int:
    report = validation_report(_read(args.file))
    _emit(report, out)
    for p in report["problems"]:
        print(f"invalid: {p['message']}", file=sys.stderr)
    return EXIT_OK if report["valid"] else EXIT_INVALID


def cmd_ih(args, out) -> int:
    doc = _read(args.file)
    rep = doc.rep.check()
    if not 0 <= args.p <= rep.r:
        raise ValidationError([{"message": f"degree {args.p} is outside 0..{rep.r}"}])
    H = complex_of(rep).intersection_cohomology(args.p)
    basis = [cochain_json(Cochain(args.p, rep.r, rep.n, v)) for v in H.transversal]
    _emit({"p": args.p, "dim": H.dim, "basis": basis}, out)
    return EXIT_OK


def cmd_height(args, out) -> int:
    doc = _read(args.file)
    t, stratum = _point(args, doc)
    _emit(height_report(doc, t, stratum), out)
    return EXIT_OK


def cmd_torsion(args, out) -> int:
    doc = _read(args.file)
    rep = doc.rep
    if rep.T is None:
        raise ValidationError([{"message": "the torsion pairing needs integral lifts T"}])
    if doc.alpha is None or doc.beta is None:
        raise ValidationError([{"message": "the document needs alpha and beta"}])
    i = args.index - 1
    if not 0 <= i < rep.r:
        raise ValidationError([{"message": f"--index must lie in 1..{rep.r}"}])
    value = torsion_pairing(rep.T[i], doc.alpha.component_at(i), doc.beta.component_at(i))
    _emit({"value": str(value)}, out)
    return EXIT_OK


def cmd_jump(args, out) -> int:
    doc = _read(args.file)
    t, stratum = _point(args, doc)
    X = _extension(doc)
    report = jump_identity_check(X, t, stratum=stratum)
    _emit({
        "holds": report.holds,
        "h": value_str(report.h),
        "mu": value_str(report.mu),
        "sum_t_mu": value_str(report.linear),
    }, out)
    if not report.holds:
        print("jump identity fails", file=sys.stderr)
        return EXIT_SELFTEST
    return EXIT_OK


def _generated(args, doc: ProblemDocument, out) -> int:
    """Emit the document, or its height when a point was requested."""
    if args.t is None and args.stratum is None and not args.symbolic:
        _emit(document_json(doc), out)
        return EXIT_OK
    t, stratum = _point(args, doc)
    _emit(height_report(doc, t, stratum), out)
    return EXIT_OK


def cmd_jordan(args, out) -> int:
    a = _rationals(args.a, "--a")
    b = _rationals(args.b, "--b")
    if len(a) != len(b):
        raise ValidationError([{"message": "--a and --b need the same length"}])
    rep = jordan_rep(len(a))
    doc = ProblemDocument(rep, jordan_alpha(a), jordan_beta(b))
    return _generated(args, doc, out)


def cmd_ceresa(args, out) -> int:
    rep = bounding_pair_rep(args.g, args.h)
    s = sing_class(args.g, args.h)
    doc = ProblemDocument(rep, s, s, pairing="hQ")
    if args.info:
        _, data, _ = build_ceresa(args.g)
        print(f"dim wedge^3 H = {data.dim}, rank V = {data.rank_V}", file=sys.stderr)
    return _generated(args, doc, out)


def cmd_selftest(args, out) -> int:
    from .acceptance import run_all

    results = run_all()
    for res in results:
        out.write(res.line() + "\n")
    failed = [res for res in results if not res.passed]
    out.write(f"{len(results) - len(failed)}/{len(results)} criteria passed\n")
    return EXIT_SELFTEST if failed else EXIT_OK


# --- parser ------------------------------------------------------------------


def _add_point_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--t", help="comma-separated rational point, e.g. 1,1")
    p.add_argument("--symbolic", action="store_true", help="return a rational function of t")
    p.add_argument("--stratum", help="1-based indices of the nonzero t_i (implies --symbolic)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heightlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a problem document")
    p.add_argument("file", help="JSON document, or - for stdin")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("ih", help="intersection cohomology IH^p")
    p.add_argument("file")
    p.add_argument("--p", type=int, default=1)
    p.set_defaults(func=cmd_ih)

    p = sub.add_parser("height", help="asymptotic height pairing")
    p.add_argument("file")
    _add_point_flags(p)
    p.set_defaults(func=cmd_height)

    p = sub.add_parser("torsion", help="torsion pairing mod Z")
    p.add_argument("file")
    p.add_argument("--index", type=int, default=1, help="which T_i to use (1-based)")
    p.set_defaults(func=cmd_torsion)

    p = sub.add_parser("jump", help="check h = -mu + sum t_i mu_i")
    p.add_argument("file")
    _add_point_flags(p)
    p.set_defaults(func=cmd_jump)

    p = sub.add_parser("jordan", help="the r-fold Jordan example")
    p.add_argument("--a", required=True, help="coefficients of alpha, comma-separated")
    p.add_argument("--b", required=True, help="coefficients of beta, comma-separated")
    _add_point_flags(p)
    p.set_defaults(func=cmd_jordan)

    p = sub.add_parser("ceresa", help="the bounding-pair degeneration of the Ceresa cycle")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--info", action="store_true", help="print sizes on stderr")
    _add_point_flags(p)
    p.set_defaults(func=cmd_ceresa)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except Exception as exc:
        for kinds, code in _EXIT_CODES:
            if isinstance(exc, kinds):
                print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
                if isinstance(exc, NotCommuting):
                    print(f"offending pair: {list(exc.pair)}", file=sys.stderr)
                return code
        if isinstance(exc, ValueError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INVALID
        raise


if __name__ == "__main__":
    sys.exit(main())
