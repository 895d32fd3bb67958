"""Command-line front end.

Subcommands:

    check        run the axiom checker on an algebra (and optional module)
    h1           derivation space of an algebra with module coefficients
    h2           2-cocycles, coboundaries and the quotient
    extend       build and verify a square-zero extension along a cochain
    deform       build a first-order deformation and check it end to end
    equiv        decide whether two cochains give equivalent structures
    dump-preset  write a built-in example as a canonical algebra file

Inputs are an algebra file or ``--preset NAME`` (one of trivial,
dual-numbers, split-pair, graded-nilpotent, free-boson).  Exit codes: 0 for
mathematical success (pass, pass-within-window, equivalent, computed,
artifact written), 1 for mathematical failure (axiom failures, inequivalent,
not a cocycle), 2 for unusable input (parse errors, unknown preset, bad
flags, impossible cutoffs).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from .axioms import AxiomReport, CreationFailed, check_all, check_module
from .cohomology import NotACocycle, TwoCochain, compute_der, compute_h2
from .extensions import (
    NotVerified,
    build_deformation,
    build_extension,
    check_equivalence_deformations,
    check_equivalence_extensions,
    verify_extension,
)
from .presets import PRESETS, adjoint_module, build_preset
from .scalars import DualScalar, format_rational
from .spaces import (
    GradedMap,
    NoVacuum,
    VacuumWrongWeight,
    VertexAlgebra,
    VAModule,
    WeightRuleViolation,
)
from .specfile import (
    ParseError,
    SpecFile,
    dump_spec,
    parse_spec,
    spec_from_objects,
    to_algebra,
    to_cochain,
    to_module,
)


class InputError(Exception):
    """Unusable invocation or input data: exit code 2."""


class MathError(Exception):
    """The computation ran but the mathematics says no: exit code 1."""


# ---------------------------------------------------------------------------
# serialization helpers
# ---------------------------------------------------------------------------

def _jsonable(obj):
    """Exact scalars as strings, tuples as lists, keys stringified."""
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, DualScalar):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(x) for x in obj]
    return obj


def _report_data(rep: AxiomReport) -> dict:
    return {
        "verdict": rep.verdict,
        "passed": rep.passed_counts(),
        "failed": [
            {"axiom": a, "instance": list(inst), "residual": res}
            for a, inst, res in rep.failed
        ],
        "skipped": [
            {"axiom": a, "instance": list(inst), "reason": list(why)}
            for a, inst, why in rep.skipped
        ],
    }


def _map_data(g: GradedMap) -> dict:
    src, tgt = g.source, g.target
    out: dict = {}
    for s in sorted(g.columns):
        col = g.columns[s]
        out[src.label_of(s)] = {
            tgt.label_of(t): col[t] for t in sorted(col)
        }
    return out


def _cochain_data(psi: TwoCochain) -> dict:
    return {f"{u} {n} {v}": vec for (u, n, v), vec in psi.entries_by_labels().items()}


def _file_source(path: str) -> dict:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return {"kind": "file", "path": path, "sha256": hashlib.sha256(data).hexdigest()}


def _verdict_lines(rep: AxiomReport) -> list[str]:
    counts = " ".join(f"{k}={v}" for k, v in sorted(rep.passed_counts().items()))
    lines = [f"verdict: {rep.verdict}", f"passed: {counts or 'none'}"]
    for a, inst, res in rep.failed[:10]:
        lines.append(f"FAIL {a} {inst}: residual {_jsonable(res)}")
    if len(rep.failed) > 10:
        lines.append(f"... and {len(rep.failed) - 10} more failures")
    if rep.skipped:
        lines.append(f"skipped: {len(rep.skipped)} instance(s) beyond the cutoff")
    return lines


# ---------------------------------------------------------------------------
# input loading
# ---------------------------------------------------------------------------

def _read_spec(path: str) -> SpecFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return parse_spec(text)


def _load_algebra(args) -> tuple[VertexAlgebra, list[dict]]:
    """The algebra under study plus provenance entries for the report."""
    preset = getattr(args, "preset", None)
    path = getattr(args, "input", None)
    cutoff = getattr(args, "cutoff", None)
    if preset and path:
        raise InputError("give an input file or --preset, not both")
    if preset:
        try:
            algebra = build_preset(preset, cutoff=cutoff)
        except KeyError as exc:
            raise InputError(
                f"unknown preset {preset!r} (have: {', '.join(sorted(PRESETS))})"
            ) from exc
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        return algebra, [{"kind": "preset", "name": preset, "cutoff": cutoff}]
    if not path:
        raise InputError("an input file or --preset is required")
    source = _file_source(path)
    spec = _read_spec(path)
    if cutoff is not None:
        top = max((w for _, w in spec.basis), default=0)
        stated = spec.cutoff if spec.cutoff is not None else top
        if spec.tier == "truncated":
            if cutoff != stated:
                raise InputError(
                    "a truncated file fixes its own cutoff; rebuild the file "
                    "instead of passing --cutoff"
                )
        elif cutoff < top:
            raise InputError(f"cutoff {cutoff} is below the top basis weight {top}")
        else:
            spec.cutoff = cutoff
    try:
        algebra = to_algebra(spec)
    except (NoVacuum, VacuumWrongWeight, WeightRuleViolation, ValueError) as exc:
        raise InputError(str(exc)) from exc
    return algebra, [source]


def _load_module(args, V: VertexAlgebra, sources: list[dict]) -> VAModule:
    path = getattr(args, "module", None)
    if path:
        sources.append(_file_source(path))
        spec = _read_spec(path)
        try:
            return to_module(spec, V)
        except (WeightRuleViolation, ValueError) as exc:
            raise InputError(str(exc)) from exc
    try:
        return adjoint_module(V)
    except ValueError as exc:
        raise MathError(str(exc)) from exc


def _load_cochain(path: str, V: VertexAlgebra, W: VAModule,
                  sources: list[dict]) -> TwoCochain:
    sources.append(_file_source(path))
    spec = _read_spec(path)
    try:
        return to_cochain(spec, V, W)
    except (WeightRuleViolation, ValueError) as exc:
        raise InputError(str(exc)) from exc


# ---------------------------------------------------------------------------
# report emission
# ---------------------------------------------------------------------------

def _emit(args, command: str, sources: list[dict], status: str, code: int,
          data: dict, lines: list[str], started: float) -> int:
    if args.json:
        report = {
            "command": command,
            "inputs": sources,
            "status": status,
            "exit_code": code,
            "data": data,
            "elapsed_ms": round((time.monotonic() - started) * 1000, 3),
        }
        print(json.dumps(_jsonable(report), indent=2))
    else:
        for line in lines:
            print(line)
    return code


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_check(args, started: float) -> int:
    V, sources = _load_algebra(args)
    rep = AxiomReport()
    rep.merge(check_all(V))
    if getattr(args, "module", None):
        W = _load_module(args, V, sources)
        check_module(V, W, report=rep)
    code = 1 if rep.verdict == "fail" else 0
    return _emit(args, "check", sources, rep.verdict, code,
                 _report_data(rep), _verdict_lines(rep), started)


def _cmd_h1(args, started: float) -> int:
    V, sources = _load_algebra(args)
    W = _load_module(args, V, sources)
    res = compute_der(V, W)
    data = {
        "h1_dim": res.h_dim,
        "window": res.window,
        "basis": [_map_data(g) for g in res.representative_classes],
    }
    lines = [f"h1 dimension: {res.h_dim}"
             + (f" (window {res.window})" if res.window else "")]
    for i, g in enumerate(res.representative_classes):
        lines.append(f"derivation {i}: {_jsonable(_map_data(g))}")
    return _emit(args, "h1", sources, "computed", 0, data, lines, started)


def _cmd_h2(args, started: float) -> int:
    V, sources = _load_algebra(args)
    W = _load_module(args, V, sources)
    res = compute_h2(V, W)
    data = {
        "z2_dim": len(res.cocycle_basis),
        "b2_dim": len(res.coboundary_basis),
        "h2_dim": res.h_dim,
        "window": res.window,
        "representatives": [_cochain_data(p) for p in res.representative_classes],
    }
    lines = [
        f"z2 dimension: {data['z2_dim']}",
        f"b2 dimension: {data['b2_dim']}",
        f"h2 dimension: {res.h_dim}"
        + (f" (window {res.window})" if res.window else ""),
    ]
    for i, p in enumerate(res.representative_classes):
        lines.append(f"class {i}: {_jsonable(_cochain_data(p))}")
    return _emit(args, "h2", sources, "computed", 0, data, lines, started)


def _cmd_extend(args, started: float) -> int:
    V, sources = _load_algebra(args)
    W = _load_module(args, V, sources)
    psi = (_load_cochain(args.psi, V, W, sources) if args.psi
           else TwoCochain.zero(V, W))
    ext = build_extension(V, W, psi)
    rep = verify_extension(ext)
    data = _report_data(rep)
    data["total_dims"] = ext.total.space.dims()
    lines = _verdict_lines(rep)
    if rep.verdict == "fail":
        return _emit(args, "extend", sources, "fail", 1, data, lines, started)
    if args.out:
        Path(args.out).write_text(dump_spec(spec_from_objects(ext.total)))
        data["out"] = args.out
        lines.append(f"total algebra written to {args.out}")
    return _emit(args, "extend", sources, rep.verdict, 0, data, lines, started)


def _cmd_deform(args, started: float) -> int:
    V, sources = _load_algebra(args)
    W = _load_module(args, V, sources)
    psi = _load_cochain(args.psi, V, W, sources)
    try:
        defm = build_deformation(V, psi)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    rep = check_all(defm.deformed)
    code = 1 if rep.verdict == "fail" else 0
    status = rep.verdict if code else "first-order structure verified"
    lines = _verdict_lines(rep)
    if code == 0:
        lines.append("the deformed mode table satisfies every axiom to first order")
    return _emit(args, "deform", sources, status, code,
                 _report_data(rep), lines, started)


def _cmd_equiv(args, started: float) -> int:
    V, sources = _load_algebra(args)
    W = _load_module(args, V, sources)
    psi1 = _load_cochain(args.psi, V, W, sources)
    psi2 = _load_cochain(args.psi2, V, W, sources)
    if args.kind == "extension":
        res = check_equivalence_extensions(
            build_extension(V, W, psi1), build_extension(V, W, psi2))
    else:
        try:
            d1, d2 = build_deformation(V, psi1), build_deformation(V, psi2)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        res = check_equivalence_deformations(d1, d2)
    if res is None:
        lines = ["inequivalent: the difference cochain is a cocycle "
                 "but not a coboundary"]
        return _emit(args, "equiv", sources, "inequivalent", 1,
                     {"equivalent": False}, lines, started)
    data = {"equivalent": True, "kind": res.kind, "note": res.note,
            "shear": _map_data(res.g)}
    lines = [f"equivalent ({res.kind}): {res.note}",
             f"shear: {_jsonable(_map_data(res.g))}"]
    return _emit(args, "equiv", sources, "equivalent", 0, data, lines, started)


def _cmd_dump_preset(args, started: float) -> int:
    try:
        V = build_preset(args.name, cutoff=args.cutoff)
    except KeyError as exc:
        raise InputError(
            f"unknown preset {args.name!r} (have: {', '.join(sorted(PRESETS))})"
        ) from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    text = dump_spec(spec_from_objects(V))
    sources = [{"kind": "preset", "name": args.name, "cutoff": args.cutoff}]
    if args.out:
        Path(args.out).write_text(text)
        return _emit(args, "dump-preset", sources, "written", 0,
                     {"out": args.out}, [f"written to {args.out}"], started)
    if args.json:
        return _emit(args, "dump-preset", sources, "dumped", 0,
                     {"text": text}, [], started)
    sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vertexcoh",
        description="axiom checking and low-degree cohomology for graded "
                    "vertex algebras with exact arithmetic",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, module=True):
        sp.add_argument("input", nargs="?", metavar="FILE",
                        help="algebra file (or use --preset)")
        sp.add_argument("--preset", metavar="NAME",
                        help="built-in example: " + ", ".join(sorted(PRESETS)))
        sp.add_argument("--cutoff", type=int, metavar="N",
                        help="weight cutoff: resizes the free boson, widens "
                             "exact windows")
        if module:
            sp.add_argument("--module", metavar="FILE",
                            help="module file (default: the algebra acting "
                                 "on itself)")
        sp.add_argument("--json", action="store_true",
                        help="emit a full JSON report")

    sp = sub.add_parser("check", help="run the axiom checker")
    common(sp)
    sp.set_defaults(func=_cmd_check)

    sp = sub.add_parser("h1", help="compute the derivation space")
    common(sp)
    sp.set_defaults(func=_cmd_h1)

    sp = sub.add_parser("h2", help="compute cocycles, coboundaries, classes")
    common(sp)
    sp.set_defaults(func=_cmd_h2)

    sp = sub.add_parser("extend", help="build and verify a square-zero extension")
    common(sp)
    sp.add_argument("--psi", metavar="FILE",
                    help="cochain file ([PSI] section); default: zero")
    sp.add_argument("--out", metavar="FILE",
                    help="write the verified total algebra here")
    sp.set_defaults(func=_cmd_extend)

    sp = sub.add_parser("deform", help="check a first-order deformation")
    common(sp, module=False)
    sp.add_argument("--psi", metavar="FILE", required=True,
                    help="cochain file ([PSI] section)")
    sp.set_defaults(func=_cmd_deform)

    sp = sub.add_parser("equiv", help="decide equivalence of two cochains")
    common(sp)
    sp.add_argument("--psi", metavar="FILE", required=True,
                    help="first cochain file")
    sp.add_argument("--psi2", metavar="FILE", required=True,
                    help="second cochain file")
    sp.add_argument("--kind", choices=("extension", "deformation"),
                    default="extension",
                    help="which structures to compare (default: extension)")
    sp.set_defaults(func=_cmd_equiv)

    sp = sub.add_parser("dump-preset", help="write a preset as an algebra file")
    sp.add_argument("name", metavar="NAME",
                    help="one of: " + ", ".join(sorted(PRESETS)))
    sp.add_argument("--cutoff", type=int, metavar="N")
    sp.add_argument("--out", metavar="FILE")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=_cmd_dump_preset)
    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    started = time.monotonic()
    try:
        return args.func(args, started)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MathError as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 1
    except NotACocycle as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 1
    except NotVerified as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 1
    except CreationFailed as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
