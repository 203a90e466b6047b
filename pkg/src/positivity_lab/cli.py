"""``positivity-lab`` command line.

Exit codes: 0 success, 1 precondition error, 2 model/schema error,
3 internal soundness error (or a failing ``selftest``).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import acceptance, asymptotic, fixtures, surface, toric
from .errors import ModelError, PositivityError, PreconditionError
from .linalg import format_rational, vec


def _fmt(xs) -> list[str]:
    return [format_rational(x) for x in xs]


def _approximate(doc: Any) -> Any:
    if isinstance(doc, dict):
        return {k: _approximate(v) for k, v in doc.items()}
    if isinstance(doc, list):
        return [_approximate(v) for v in doc]
    if isinstance(doc, str):
        try:
            x = Fraction(doc)
        except (ValueError, ZeroDivisionError):
            return doc
        return f"~{float(x):.6g}"
    return doc


def _emit(args, doc: dict, csv_text: str | None = None) -> None:
    if getattr(args, "format", "json") == "csv":
        if csv_text is None:
            raise PreconditionError(f"command {args.command} has no CSV output")
        text = csv_text
    else:
        if args.decimal:
            doc = {**doc, "approximate": _approximate(doc)}
        text = json.dumps(doc, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_fixture(args) -> fixtures.Fixture | None:
    return fixtures.get(args.fixture) if getattr(args, "fixture", None) else None


def _fan_and_divisor(args) -> tuple[toric.Fan, toric.ToricDivisor, str]:
    fx = _load_fixture(args)
    if fx is not None:
        fan, name = fx.fan, fx.name
    elif args.fan:
        fan, name = toric.load_fan(args.fan), args.fan
    else:
        raise PreconditionError("one of --fixture or --fan is required")
    if args.coefficients:
        D = toric.ToricDivisor(_coords(args.coefficients))
    elif args.divisor_file:
        with open(args.divisor_file) as fh:
            try:
                D = toric.ToricDivisor.from_json(json.load(fh))
            except json.JSONDecodeError as exc:
                raise ModelError(f"{args.divisor_file}: not valid JSON ({exc})") from exc
    elif args.divisor:
        if fx is None:
            raise PreconditionError("--divisor expressions need a --fixture basis; use --coefficients with --fan")
        D = fx.divisor(fx.parse(args.divisor))
    else:
        raise PreconditionError("a divisor is required (--divisor, --coefficients or --divisor-file)")
    if len(D.coefficients) != fan.n_rays:
        raise PreconditionError(f"divisor has {len(D.coefficients)} coefficients, fan has {fan.n_rays} rays")
    return fan, D, name


def _coords(text: str):
    try:
        return vec(p for p in text.replace(",", " ").split())
    except (ValueError, ZeroDivisionError) as exc:
        raise PreconditionError(f"cannot parse coordinates {text!r}: {exc}") from exc


def _surface_model(args) -> surface.SurfaceModel:
    if getattr(args, "model", None):
        return surface.load_model(args.model)
    fx = _load_fixture(args)
    if fx is None:
        raise PreconditionError("one of --fixture or --model is required")
    if fx.model is None:
        raise PreconditionError(f"fixture {fx.name} is not a surface")
    return fx.model


def _labels(args) -> Sequence[str]:
    if getattr(args, "model", None):
        return surface.load_model(args.model).basis_labels
    fx = _load_fixture(args)
    if fx is None:
        raise PreconditionError("one of --fixture or --model is required")
    return fx.labels


def _parse(args, text: str):
    return fixtures.parse_class(text, _labels(args))


def _backend(args) -> asymptotic.Backend:
    if getattr(args, "model", None):
        return asymptotic.SurfaceBackend(surface.load_model(args.model))
    if not args.fixture:
        raise PreconditionError("one of --fixture or --model is required")
    return asymptotic.backend_for(args.fixture, args.engine)


def cmd_hi(args) -> dict:
    fan, D, name = _fan_and_divisor(args)
    if args.m_range:
        lo, hi_ = (int(x) for x in args.m_range.split(":"))
        scales = range(lo, hi_ + 1)
    else:
        scales = [args.scale]
    degrees = [args.i] if args.i is not None else None
    rows = []
    for m in scales:
        dims = toric.cohomology(fan, D * m, degrees).dims
        row = {"scale": m}
        if args.i is not None:
            row["value"] = dims[args.i]
        else:
            row["dims"] = list(dims)
        rows.append(row)
    doc = {"command": "hi", "variety": name, "divisor": D.to_json()["coefficients"]}
    if args.i is not None:
        doc["i"] = args.i
    if len(rows) == 1:
        doc.update(rows[0])
    else:
        doc["rows"] = rows
    return doc


def cmd_hhat(args) -> dict:
    if args.engine == "toric" and (args.fan or args.coefficients or args.divisor_file):
        fan, D, name = _fan_and_divisor(args)
        prof = toric.hhat_profile(fan, D)
        doc = {"command": "hhat", "engine": "toric", "variety": name, "divisor": D.to_json()["coefficients"]}
    else:
        if not args.cls:
            raise PreconditionError("--class is required")
        backend = _backend(args)
        cls = _parse(args, args.cls)
        prof = backend.profile(cls).values
        doc = {"command": "hhat", "engine": args.engine, "variety": getattr(backend, "name", ""), "class": _fmt(cls)}
    if args.i is not None:
        if not 0 <= args.i < len(prof):
            raise PreconditionError(f"degree {args.i} outside 0..{len(prof) - 1}")
        doc["i"] = args.i
        doc["value"] = format_rational(prof[args.i])
    else:
        doc["profile"] = _fmt(prof)
    return doc


def cmd_zariski(args) -> dict:
    model = _surface_model(args)
    L = fixtures.parse_class(args.cls, model.basis_labels)
    dec = surface.zariski(model, L)
    return {
        "command": "zariski",
        "model": model.name,
        "class": _fmt(L),
        "positivePart": _fmt(dec.positive),
        "negativePart": [{"curve": _fmt(c), "coefficient": format_rational(a)} for c, a in dec.negative],
        "volume": format_rational(model.square(dec.positive)),
    }


def cmd_cones(args) -> dict:
    doc: dict = {"command": "cones", "engine": args.engine}
    if args.engine == "surface":
        model = _surface_model(args)
        L = fixtures.parse_class(args.cls, model.basis_labels)
        doc.update(
            model=model.name,
            **{"class": _fmt(L)},
            ample=surface.is_ample(model, L),
            nef=surface.is_nef(model, L),
            big=surface.is_big(model, L),
            pseff=surface.is_pseff(model, L),
        )
    else:
        if args.cls and not (args.fan or args.coefficients or args.divisor_file):
            args.divisor = args.cls
        fan, D, name = _fan_and_divisor(args)
        doc.update(
            variety=name,
            divisor=D.to_json()["coefficients"],
            ample=toric.is_ample(fan, D),
            nef=toric.is_nef(fan, D),
            big=toric.is_big(fan, D),
            pseff=toric.is_pseff(fan, D),
        )
    return doc


def cmd_scan(args):
    backend = _backend(args)
    L, A = _parse(args, args.cls), _parse(args, args.ample)
    rep = asymptotic.ample_scan(backend, L, A, Fraction(args.tmax), args.steps)
    doc = {"command": "scan", "variety": getattr(backend, "name", ""), **rep.to_json()}
    return doc, rep.to_csv()


def cmd_serre_check(args) -> dict:
    backend = _backend(args)
    L = _parse(args, args.cls)
    res = asymptotic.serre_criterion_check(backend, L, Fraction(args.radius), args.samples)
    ample = backend.is_ample(L)
    return {
        "command": "serre-check",
        "variety": getattr(backend, "name", ""),
        "class": _fmt(L),
        **res.to_json(),
        "ample": ample,
        "agreesWithConeTest": res.vanishing == ample,
    }


def cmd_abc(args) -> dict:
    model = _surface_model(args)
    L = fixtures.parse_class(args.cls, model.basis_labels)
    A = fixtures.parse_class(args.ample, model.basis_labels)
    a, b, c = surface.a_invariant(model, L, A), surface.b_invariant(model, L), surface.c_invariant(model, L)
    return {"command": "abc", "model": model.name, "class": _fmt(L), "ample": _fmt(A), "a": a, "b": b, "c": c}


def cmd_kunneth(args) -> dict:
    if args.profile1 and args.profile2:
        p1v, p2v = _coords(args.profile1), _coords(args.profile2)
        try:
            p1 = asymptotic.AsymptoticProfile(len(p1v) - 1, p1v)
            p2 = asymptotic.AsymptoticProfile(len(p2v) - 1, p2v)
        except ValueError as exc:
            raise PreconditionError(str(exc)) from exc
    else:
        if not (args.left and args.right and args.left_class and args.right_class):
            raise PreconditionError("give --profile1/--profile2 or --left/--left-class/--right/--right-class")
        lf, rf = fixtures.get(args.left), fixtures.get(args.right)
        p1 = asymptotic.backend_for(args.left, args.engine).profile(lf.parse(args.left_class))
        p2 = asymptotic.backend_for(args.right, args.engine).profile(rf.parse(args.right_class))
    prod = asymptotic.kunneth(p1, p2)
    return {"command": "kunneth", "left": p1.to_json(), "right": p2.to_json(), "product": prod.to_json()}


def cmd_example33(args) -> dict:
    rep = asymptotic.example_invariants(args.lam, args.mu, direct_toric=args.direct_toric)
    return {"command": "example33", **rep.to_json()}


def cmd_export_fixture(args) -> dict:
    fx = fixtures.get(args.name)
    doc = {
        "command": "export-fixture",
        "name": fx.name,
        "fan": fx.fan.to_json(),
        "basisLabels": list(fx.labels),
        "basisDivisors": [_fmt(b) for b in fx.basis],
    }
    if fx.model is not None:
        doc["surfaceModel"] = fx.model.to_json()
    return doc


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--decimal", action="store_true", help="add decimal approximations (marked approximate)")


def _variety(p: argparse.ArgumentParser, fan: bool = True, model: bool = False) -> None:
    p.add_argument("--fixture", choices=fixtures.FIXTURE_NAMES)
    if fan:
        p.add_argument("--fan", help="fan JSON file")
        p.add_argument("--coefficients", help="ray coefficients, e.g. '0,2,1,0'")
        p.add_argument("--divisor-file", help="divisor JSON file")
    if model:
        p.add_argument("--model", help="surface model JSON file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="positivity-lab", description="Exact asymptotic cohomology of divisors.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hi", help="finite cohomology h^i(X, O(mD)) on a toric variety")
    _variety(p)
    p.add_argument("--divisor", help="class expression in the fixture basis, e.g. 2E+F")
    p.add_argument("--scale", type=int, default=1)
    p.add_argument("--m-range", help="scales lo:hi (inclusive)")
    p.add_argument("--i", type=int)
    _common(p)

    p = sub.add_parser("hhat", help="asymptotic cohomology profile")
    _variety(p, model=True)
    p.add_argument("--class", dest="cls")
    p.add_argument("--divisor", dest="divisor", help=argparse.SUPPRESS)
    p.add_argument("--engine", choices=("toric", "surface"), default="toric")
    p.add_argument("--i", type=int)
    _common(p)

    p = sub.add_parser("zariski", help="Zariski decomposition of a surface class")
    _variety(p, fan=False, model=True)
    p.add_argument("--class", dest="cls", required=True)
    _common(p)

    p = sub.add_parser("cones", help="ample / nef / big / pseff verdicts")
    _variety(p, model=True)
    p.add_argument("--class", dest="cls")
    p.add_argument("--divisor", help=argparse.SUPPRESS)
    p.add_argument("--engine", choices=("toric", "surface"), default="surface")
    _common(p)

    p = sub.add_parser("scan", help="profiles of L - tA along a t-grid")
    _variety(p, fan=False, model=True)
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--ample", required=True)
    p.add_argument("--tmax", default="1/4")
    p.add_argument("--steps", type=int, default=20)
    p.add_argument("--engine", choices=("toric", "surface"), default="surface")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    _common(p)

    p = sub.add_parser("serre-check", help="vanishing of higher hhat on a ball around L")
    _variety(p, fan=False, model=True)
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--radius", default="1/10")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--engine", choices=("toric", "surface"), default="surface")
    _common(p)

    p = sub.add_parser("abc", help="a(L,A), b(L), c(L) on a surface")
    _variety(p, fan=False, model=True)
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--ample", required=True)
    _common(p)

    p = sub.add_parser("kunneth", help="asymptotic Künneth product of two profiles")
    p.add_argument("--profile1")
    p.add_argument("--profile2")
    p.add_argument("--left", choices=fixtures.FIXTURE_NAMES)
    p.add_argument("--left-class")
    p.add_argument("--right", choices=fixtures.FIXTURE_NAMES)
    p.add_argument("--right-class")
    p.add_argument("--engine", choices=("toric", "surface"), default="toric")
    _common(p)

    p = sub.add_parser("example33", help="a, b, c for L = p*(lambda E + F) + q*H on F1 x P1")
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--mu", type=int, required=True)
    p.add_argument("--direct-toric", action="store_true", help="also compute the profile on the 3-dimensional fan")
    _common(p)

    p = sub.add_parser("export-fixture", help="dump a shipped fixture as JSON")
    p.add_argument("name", choices=fixtures.FIXTURE_NAMES)
    _common(p)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    _common(p)
    return parser


COMMANDS = {
    "hi": cmd_hi,
    "hhat": cmd_hhat,
    "zariski": cmd_zariski,
    "cones": cmd_cones,
    "scan": cmd_scan,
    "serre-check": cmd_serre_check,
    "abc": cmd_abc,
    "kunneth": cmd_kunneth,
    "example33": cmd_example33,
    "export-fixture": cmd_export_fixture,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "selftest":
            results = acceptance.run_all(echo=lambda line: print(line, flush=True))
            doc = {
                "command": "selftest",
                "passed": all(r.passed for r in results),
                "criteria": [{"number": r.number, "title": r.title, "passed": r.passed, "detail": r.detail} for r in results],
            }
            if args.out:
                _emit(args, doc)
            return 0 if doc["passed"] else 3
        out = COMMANDS[args.command](args)
        if isinstance(out, tuple):
            _emit(args, *out)
        else:
            _emit(args, out)
        return 0
    except PositivityError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
