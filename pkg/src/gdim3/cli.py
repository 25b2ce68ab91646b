"""Command line interface.

Exit codes: 0 on success, 2 for invalid input (malformed files,
descriptions that fail validation, unsupported probe elements), 3 when a
tree exploration exceeds its resource cap.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Dict, List, Optional, Sequence

from . import corpus
from .bass_serre import (
    BallLimitExceeded,
    FreeProductSpec,
    MissingAssignment,
    NotHyperbolic,
    SemidirectSpec,
    UnsupportedElement,
    axis_of,
    ball,
    cone_off,
    cyclically_reduce,
    normalizer_probe,
    parse_word,
    pushout_dimension_bound,
    setwise_axis_stabilizer,
    word_str,
    words_up_to,
)
from .dimension import RULES, DimensionReport, FamilyIndex, compute, torus_bundle_gd
from .gl2z import (
    InvalidDeterminant,
    Mat2Z,
    MatKind,
    classify,
    geometry_of_monodromy,
    invariant_eigenvector,
    parabolic_quotient_type,
)
from .model import (
    DescriptionFormatError,
    InvalidDescription,
    ManifoldDescription,
    NormalizationAmbiguous,
    description_from_json,
    description_to_json,
    load_description,
    validate,
)
from .orbifold2 import (
    OrbifoldBase,
    annulus,
    classify_base,
    disk,
    euler_characteristic_orb,
    klein_bottle,
    mobius_band,
    projective_plane,
    sphere,
    torus,
)

EX_OK = 0
EX_DATA = 2
EX_RESOURCE = 3

_SURFACES = {
    "sphere": sphere,
    "disk": disk,
    "annulus": annulus,
    "torus": torus,
    "projective-plane": projective_plane,
    "klein-bottle": klein_bottle,
    "mobius-band": mobius_band,
}


def _fail(message: str, code: int = EX_DATA) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _load_target(target: str) -> ManifoldDescription:
    """A description, from a JSON file path or a bundled corpus:NAME."""
    if target.startswith("corpus:"):
        return corpus.load(target[len("corpus:"):])
    return load_description(target)


def report_to_json(report: DimensionReport) -> dict:
    trace = []
    for family_name, result in (("k2", report.k2), ("k3plus", report.k3plus)):
        for step in result.trace:
            trace.append(
                {
                    "family": family_name,
                    "path": step.path,
                    "rule": step.rule,
                    "inputs": step.inputs,
                    "value": step.value,
                }
            )
    return {
        "name": report.name,
        "k2": report.k2.value,
        "k3plus": report.k3plus.value,
        "rank_cap": report.rank_cap,
        "trace": trace,
        "description": description_to_json(report.description),
    }


def _parse_k(text: str) -> Optional[int]:
    """--k value: None means both columns."""
    if text == "all":
        return None
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--k must be 'all' or an integer >= 2, got {text!r}")
    if k < 2:
        raise argparse.ArgumentTypeError("--k must be >= 2 (the families start at k = 2)")
    return k


def _print_report_text(report: DimensionReport, k: Optional[int], explain: bool) -> None:
    print(f"name: {report.name}")
    columns = []
    if k is None:
        columns = [("k = 2", report.k2), ("k >= 3", report.k3plus)]
    else:
        index = FamilyIndex(k)
        if index.clamped:
            print(f"note: the families stabilise at k = 3; k = {k} uses the k >= 3 column",
                  file=sys.stderr)
        label = "k = 2" if index.k == 2 else ("k >= 3" if k == 3 else f"k = {k} (= k >= 3)")
        columns = [(label, report.k2 if index.k == 2 else report.k3plus)]
    for label, result in columns:
        print(f"gd({label}) = {result.value}")
    print(f"rank cap: Z^{report.rank_cap} present, no Z^{report.rank_cap + 1}")
    if explain:
        for label, result in columns:
            print(f"derivation ({label}):")
            for step in result.trace:
                print(f"  [{step.path}] {step.rule}: {step.inputs} -> {step.value}")


def _cmd_compute(args: argparse.Namespace) -> int:
    try:
        desc = _load_target(args.target)
        report = compute(desc)
    except FileNotFoundError as exc:
        return _fail(str(exc))
    except KeyError as exc:
        return _fail(exc.args[0])
    except (DescriptionFormatError, NormalizationAmbiguous) as exc:
        return _fail(str(exc))
    except InvalidDescription as exc:
        print("error: the description does not validate", file=sys.stderr)
        for violation in exc.report:
            print(f"  {violation}", file=sys.stderr)
        return EX_DATA
    if args.format == "json":
        print(json.dumps(report_to_json(report), indent=2))
    else:
        _print_report_text(report, args.k, args.explain)
    return EX_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    try:
        desc = _load_target(args.target)
    except FileNotFoundError as exc:
        return _fail(str(exc))
    except KeyError as exc:
        return _fail(exc.args[0])
    except DescriptionFormatError as exc:
        return _fail(str(exc))
    report = validate(desc)
    if report:
        print(f"{desc.name or args.target}: {len(report)} violation(s)")
        for violation in report:
            print(f"  {violation}")
        return EX_DATA
    print(f"OK: {desc.name or args.target} ({len(desc.pieces)} piece(s))")
    return EX_OK


def _cmd_classify_matrix(args: argparse.Namespace) -> int:
    try:
        matrix = Mat2Z.parse(args.matrix)
        cls = classify(matrix)
    except (ValueError, InvalidDeterminant) as exc:
        return _fail(str(exc))
    print(f"matrix {matrix}  det {matrix.det():+d}  trace {matrix.trace()}")
    if cls.kind is MatKind.ELLIPTIC:
        print(f"class: elliptic, order {cls.order}")
    else:
        print(f"class: {cls.kind.value}")
    if cls.kind is MatKind.PARABOLIC:
        vector, eigenvalue = invariant_eigenvector(matrix)
        print(f"invariant axis: {vector}, eigenvalue {eigenvalue}")
        print(f"quotient by the axis: {parabolic_quotient_type(matrix).value}")
    print(f"mapping torus geometry: {geometry_of_monodromy(matrix)}")
    print(
        f"mapping torus gd: k = 2 -> {torus_bundle_gd(matrix, 2).value}, "
        f"k >= 3 -> {torus_bundle_gd(matrix, 3).value}"
    )
    return EX_OK


def _cmd_classify_orbifold(args: argparse.Namespace) -> int:
    cones = tuple(args.cone or ())
    if args.surface is not None:
        if args.genus is not None or args.nonorientable or args.boundary is not None:
            return _fail("--surface already fixes genus, orientability and boundary")
        base = _SURFACES[args.surface](*cones)
    else:
        base = OrbifoldBase(
            genus=args.genus if args.genus is not None else 0,
            orientable=not args.nonorientable,
            boundary_count=args.boundary if args.boundary is not None else 0,
            cone_orders=cones,
        )
    if any(order < 2 for order in cones):
        return _fail("cone orders must be >= 2")
    if base.genus < 0 or (not base.orientable and base.genus == 0):
        return _fail("genus must be >= 0, and >= 1 for nonorientable surfaces")
    if base.boundary_count < 0:
        return _fail("boundary count must be >= 0")
    print(f"base: {base.label()}")
    print(f"orbifold Euler characteristic: {euler_characteristic_orb(base)}")
    print(f"class: {classify_base(base).value}")
    return EX_OK


def _parse_factors(text: str) -> FreeProductSpec:
    try:
        orders = tuple(int(part) for part in text.split(","))
        return FreeProductSpec(orders)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _cmd_ball(args: argparse.Namespace) -> int:
    try:
        tree = ball(args.factors, args.radius, max_vertices=args.max_vertices)
    except BallLimitExceeded as exc:
        return _fail(str(exc), EX_RESOURCE)
    if args.format == "json":
        print(json.dumps(
            {
                "factor_orders": list(args.factors.factor_orders),
                "radius": args.radius,
                "vertices": [v.label() for v in tree.vertices],
                "edges": [[u.label(), v.label()] for u, v in tree.edges],
            },
            indent=2,
        ))
        return EX_OK
    element = sum(1 for v in tree.vertices if v.factor is None)
    coset = len(tree.vertices) - element
    orders = " * ".join(f"Z{n}" for n in args.factors.factor_orders)
    print(f"{orders}, ball of radius {args.radius}")
    print(f"vertices: {len(tree.vertices)} ({element} element, {coset} coset)")
    print(f"edges: {len(tree.edges)}")
    if args.list:
        for v in tree.vertices:
            print(f"  {v.label()} (distance {tree.distance(v, tree.vertices[0])},"
                  f" degree {tree.degree(v)})")
    return EX_OK


def _auto_axes(tree, max_syllables: int = 2) -> List[tuple]:
    """Axes of all short hyperbolic words, deduplicated by vertex set."""
    spec = tree.spec
    axes: List[tuple] = []
    seen = set()
    for w in words_up_to(spec, max_syllables):
        if len(cyclically_reduce(spec, w)) <= 1:
            continue
        axis = axis_of(tree, w)
        if axis is None:
            continue
        key = frozenset(axis)
        if key not in seen:
            seen.add(key)
            axes.append(axis)
    return axes


def _cmd_cone_off(args: argparse.Namespace) -> int:
    try:
        tree = ball(args.factors, args.radius, max_vertices=args.max_vertices)
    except BallLimitExceeded as exc:
        return _fail(str(exc), EX_RESOURCE)
    if args.axes == "auto":
        axes = _auto_axes(tree)
        if not axes:
            return _fail("no axis is visible at this radius; increase --radius")
    else:
        axes = []
        for text in args.axes.split(","):
            try:
                w = parse_word(args.factors, text)
            except ValueError as exc:
                return _fail(str(exc))
            axis = axis_of(tree, w)
            if axis is None:
                reduced = cyclically_reduce(args.factors, w)
                if len(reduced) <= 1:
                    return _fail(f"{text!r} is elliptic (conjugate into a factor), no axis")
                return _fail(f"the axis of {text!r} is not visible at radius {args.radius}")
            axes.append(axis)
    complex_ = cone_off(tree, axes, budget=args.budget)
    bound: Optional[int] = None
    if args.assign:
        assignment: Dict[str, int] = {}
        for item in args.assign:
            if "=" not in item:
                return _fail(f"--assign expects class=value, got {item!r}")
            key, _, value = item.partition("=")
            try:
                assignment[key.strip()] = int(value)
            except ValueError:
                return _fail(f"--assign value must be an integer, got {item!r}")
        try:
            bound = pushout_dimension_bound(complex_, assignment)
        except MissingAssignment as exc:
            return _fail(f"cell class {exc.args[0]!r} has no assigned value")
    reports = [setwise_axis_stabilizer(tree, axis, budget=args.budget) for axis in axes]
    if args.format == "json":
        cells = []
        for cell in complex_.cells():
            record = complex_.stabilizer_records[cell]
            cells.append(
                {
                    "class": cell.cell_class,
                    "dim": cell.dim,
                    "stabilizer_words": [word_str(w) for w in record],
                }
            )
        obj = {
            "factor_orders": list(args.factors.factor_orders),
            "radius": args.radius,
            "budget": args.budget,
            "axes": [
                {
                    "vertices": [v.label() for v in axis],
                    "consistent": report.consistent,
                    "translations": len(report.translations),
                    "reflections": len(report.reflections),
                }
                for axis, report in zip(axes, reports)
            ],
            "cells": cells,
        }
        if bound is not None:
            obj["pushout_dimension_bound"] = bound
        print(json.dumps(obj, indent=2))
        return EX_OK
    counts: Dict[str, int] = {}
    for cell in complex_.cells():
        counts[cell.cell_class] = counts.get(cell.cell_class, 0) + 1
    print(f"coned complex over {len(axes)} axis/axes, word budget {args.budget}")
    for cell_class in complex_.cell_classes():
        print(f"  {cell_class}: {counts[cell_class]} cell(s)")
    for i, (axis, report) in enumerate(zip(axes, reports)):
        status = "consistent" if report.consistent else "INCONSISTENT"
        print(
            f"axis {i} ({len(axis)} vertices): setwise stabiliser {status}, "
            f"{len(report.translations)} translation(s), "
            f"{len(report.reflections)} reflection(s)"
        )
    if bound is not None:
        print(f"push-out dimension bound: {bound}")
    return EX_OK


def _cmd_probe_normalizer(args: argparse.Namespace) -> int:
    try:
        matrix = Mat2Z.parse(args.monodromy)
    except ValueError as exc:
        return _fail(str(exc))
    parts = args.element.split(",")
    if len(parts) != 3:
        return _fail(f"--element expects x,y,l, got {args.element!r}")
    try:
        x, y, l = (int(p) for p in parts)
    except ValueError:
        return _fail(f"--element expects integers x,y,l, got {args.element!r}")
    try:
        probe = normalizer_probe(SemidirectSpec(matrix), ((x, y), l), bound=args.bound)
    except (NotHyperbolic, UnsupportedElement) as exc:
        return _fail(str(exc))
    print(f"element (({x}, {y}), {l}) in Z^2 x| Z with monodromy {matrix}")
    print(f"normaliser rank: {probe.rank}")
    for line in probe.certificate:
        print(f"  {line}")
    return EX_OK


def _cmd_replay(args: argparse.Namespace) -> int:
    try:
        with open(args.report, "r", encoding="utf-8") as handle:
            stored = json.load(handle)
    except FileNotFoundError as exc:
        return _fail(str(exc))
    except json.JSONDecodeError as exc:
        return _fail(f"{args.report}: {exc}")
    if not isinstance(stored, dict) or "description" not in stored:
        return _fail("the report carries no embedded description")
    try:
        desc = description_from_json(stored["description"])
        report = compute(desc)
    except (DescriptionFormatError, InvalidDescription, NormalizationAmbiguous) as exc:
        return _fail(str(exc))
    fresh = report_to_json(report)
    mismatches = []
    for key in ("name", "k2", "k3plus", "rank_cap", "trace"):
        if stored.get(key) != fresh[key]:
            mismatches.append(key)
    if mismatches:
        print(f"replay MISMATCH in {', '.join(mismatches)}")
        for key in mismatches:
            print(f"  stored {key}: {stored.get(key)!r}")
            print(f"  fresh  {key}: {fresh[key]!r}")
        return EX_DATA
    print(f"replay OK: {fresh['name']} reproduces k2={fresh['k2']}, "
          f"k3plus={fresh['k3plus']}, rank_cap={fresh['rank_cap']} with matching trace")
    return EX_OK


def _cmd_corpus(args: argparse.Namespace) -> int:
    names = corpus.names()
    width = max(len(name) for name in names)
    for name in names:
        report = compute(corpus.load(name))
        print(f"{name:<{width}}  k2={report.k2.value}  k>=3={report.k3plus.value}")
    return EX_OK


def _cmd_rules(args: argparse.Namespace) -> int:
    width = max(len(rule) for rule in RULES)
    for rule, text in RULES.items():
        print(f"{rule:<{width}}  {text}")
    return EX_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gdim3",
        description="Exact geometric dimensions of closed oriented 3-manifold groups "
                    "relative to the virtually-abelian families, with finite-scale "
                    "tree and normaliser certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="evaluate both family columns for a description")
    p.add_argument("target", help="JSON description file, or corpus:NAME")
    p.add_argument("--k", type=_parse_k, default=None,
                   help="family index to display: 2, 3, 'all' (default), or any k >= 4 "
                        "(reported from the stabilised k >= 3 column)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--explain", action="store_true", help="print the derivation trace")
    p.set_defaults(func=_cmd_compute)

    p = sub.add_parser("validate", help="report well-formedness violations")
    p.add_argument("target", help="JSON description file, or corpus:NAME")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("classify-matrix", help="classify a GL(2, Z) matrix")
    p.add_argument("matrix", help="matrix as 'a,b;c,d'")
    p.set_defaults(func=_cmd_classify_matrix)

    p = sub.add_parser("classify-orbifold", help="classify a 2-orbifold")
    p.add_argument("--surface", choices=sorted(_SURFACES), default=None,
                   help="named underlying surface")
    p.add_argument("--genus", type=int, default=None,
                   help="genus (crosscap count when nonorientable)")
    p.add_argument("--nonorientable", action="store_true")
    p.add_argument("--boundary", type=int, default=None, help="boundary circle count")
    p.add_argument("--cone", type=int, action="append", help="cone point order (repeatable)")
    p.set_defaults(func=_cmd_classify_orbifold)

    p = sub.add_parser("ball", help="explore a Bass-Serre tree ball")
    p.add_argument("--factors", type=_parse_factors, required=True,
                   help="cyclic factor orders, e.g. 2,3")
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--max-vertices", type=int, default=50000)
    p.add_argument("--list", action="store_true", help="list every vertex")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_ball)

    p = sub.add_parser("cone-off", help="cone the axes in a tree ball and bound the dimension")
    p.add_argument("--factors", type=_parse_factors, required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--max-vertices", type=int, default=50000)
    p.add_argument("--axes", default="auto",
                   help="'auto' or comma-separated words like ab,ab2")
    p.add_argument("--budget", type=int, default=4,
                   help="syllable-length cap for stabiliser enumeration")
    p.add_argument("--assign", action="append", default=[],
                   help="cell-class value, e.g. --assign vertex=0 (repeatable)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_cone_off)

    p = sub.add_parser("probe-normalizer",
                       help="normaliser rank of a cyclic subgroup of Z^2 x| Z")
    p.add_argument("--monodromy", required=True, help="hyperbolic matrix as 'a,b;c,d'")
    p.add_argument("--element", required=True, help="generator as x,y,l")
    p.add_argument("--bound", type=int, default=8)
    p.set_defaults(func=_cmd_probe_normalizer)

    p = sub.add_parser("replay", help="recompute a stored JSON report and compare")
    p.add_argument("report", help="report produced by compute --format json")
    p.set_defaults(func=_cmd_replay)

    p = sub.add_parser("corpus", help="list the bundled descriptions with their values")
    p.set_defaults(func=_cmd_corpus)

    p = sub.add_parser("rules", help="list the derivation rule identifiers")
    p.set_defaults(func=_cmd_rules)

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
