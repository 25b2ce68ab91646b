"""Structured descriptions of closed oriented 3-manifolds.

A manifold is described by its prime decomposition: a list of prime
pieces.  Each piece is either recognisably geometric (a spherical space
form, a single model geometry, a torus bundle with explicit monodromy,
the double of the twisted I-bundle over the Klein bottle, or a closed
Seifert fibration given by unnormalised Seifert invariants), or a
nontrivial torus decomposition recorded as a graph whose vertices are
finite-volume hyperbolic pieces or bounded Seifert pieces and whose
edges are the gluing tori.

validate() reports every violated well-formedness condition with a path
into the description instead of raising on the first one.  normalize()
removes trivial summands and rewrites the two torus-decomposition shapes
that are secretly geometric (a doubled twisted I-bundle is Sol, a torus
times interval glued to itself is a torus bundle); it raises when a
rewrite needs data the description does not carry.  Descriptions whose
only defects are those two rewritable shapes are accepted by normalize
and repaired; everything else must validate cleanly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from math import gcd
from typing import List, NamedTuple, Optional, Tuple, Union

from .geometry import Geometry
from .gl2z import Mat2Z
from .orbifold2 import OrbifoldBase, OrbifoldClass, classify_base


class DescriptionFormatError(ValueError):
    """The JSON object cannot be decoded into a description at all."""


class NormalizationAmbiguous(ValueError):
    """A normalization rewrite needs data the description lacks."""


class Violation(NamedTuple):
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


class InvalidDescription(ValueError):
    """Raised by normalize/compute when hard violations remain."""

    def __init__(self, report: List[Violation]):
        self.report = list(report)
        super().__init__("; ".join(str(v) for v in self.report))


# ---------------------------------------------------------------------------
# types

@dataclass(frozen=True)
class SeifertData:
    """Unnormalised Seifert invariants over a cone-point base.

    cone_pairs lists (alpha, beta) for the exceptional fibres, with
    alpha >= 2 and gcd(alpha, beta) = 1; the multiset of alphas must
    agree with base.cone_orders.  The integer b is the obstruction term
    and is present exactly when the base is closed.
    """

    base: OrbifoldBase
    cone_pairs: Tuple[Tuple[int, int], ...] = ()
    b: Optional[int] = None

    def __post_init__(self) -> None:
        pairs = tuple(sorted(tuple(p) for p in self.cone_pairs))
        object.__setattr__(self, "cone_pairs", pairs)

    @property
    def boundary_count(self) -> int:
        return self.base.boundary_count

    def euler_number(self) -> Fraction:
        """e = -(b + sum beta_i / alpha_i); defined for closed bases only."""
        if self.base.boundary_count != 0 or self.b is None:
            raise ValueError("Euler number is defined for closed Seifert data with b")
        total = Fraction(self.b)
        for alpha, beta in self.cone_pairs:
            total += Fraction(beta, alpha)
        return -total


@dataclass(frozen=True)
class Spherical:
    """Spherical space form, recorded by the order of its fundamental group."""

    pi1_order: int


@dataclass(frozen=True)
class Geometric:
    """Closed piece carrying a single model geometry."""

    geometry: Geometry


@dataclass(frozen=True)
class TorusBundle:
    """Torus bundle over the circle with explicit monodromy."""

    monodromy: Mat2Z


@dataclass(frozen=True)
class KleinDouble:
    """Double of the twisted I-bundle over the Klein bottle (a Sol manifold)."""


@dataclass(frozen=True)
class SeifertClosed:
    """Closed Seifert fibration."""

    data: SeifertData


@dataclass(frozen=True)
class HyperbolicCusped:
    """Finite-volume hyperbolic piece with cusps >= 1."""

    cusps: int


@dataclass(frozen=True)
class SeifertBounded:
    """Seifert fibration over a base with boundary (no obstruction term)."""

    data: SeifertData


JsjVertex = Union[HyperbolicCusped, SeifertBounded]


@dataclass(frozen=True)
class JsjGraph:
    """Torus decomposition graph: vertices are pieces, edges are gluing tori.

    Edges are unordered index pairs with multiplicity.  The optional
    monodromy is consumed only by the normalization rewrite of a single
    torus-times-interval vertex with a self-edge into a TorusBundle.
    """

    vertices: Tuple[JsjVertex, ...]
    edges: Tuple[Tuple[int, int], ...] = ()
    monodromy: Optional[Mat2Z] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        normalised = tuple(tuple(sorted(e)) for e in self.edges)
        object.__setattr__(self, "edges", normalised)


PrimePiece = Union[Spherical, Geometric, TorusBundle, KleinDouble, SeifertClosed, JsjGraph]


@dataclass(frozen=True)
class ManifoldDescription:
    name: str
    pieces: Tuple[PrimePiece, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "pieces", tuple(self.pieces))


def boundary_tori(vertex: JsjVertex) -> int:
    if isinstance(vertex, HyperbolicCusped):
        return vertex.cusps
    return vertex.data.boundary_count


# ---------------------------------------------------------------------------
# validation

def _is_flat_one_boundary(data: SeifertData) -> bool:
    """Twisted-I-bundle shape: flat base with a single boundary circle."""
    base = data.base
    if base.boundary_count != 1 or any(a < 2 for a in base.cone_orders):
        return False
    return classify_base(base) is OrbifoldClass.FLAT


def _is_torus_x_interval(data: SeifertData) -> bool:
    """T^2 x I shape: flat base with two boundary circles (the bare annulus)."""
    base = data.base
    if base.boundary_count != 2 or any(a < 2 for a in base.cone_orders):
        return False
    return classify_base(base) is OrbifoldClass.FLAT


def _validate_base(base: OrbifoldBase, path: str, report: List[Violation]) -> None:
    if base.genus < 0:
        report.append(Violation(f"{path}.genus", "genus must be >= 0"))
    if not base.orientable and base.genus == 0:
        report.append(Violation(f"{path}.genus", "nonorientable surfaces have genus >= 1"))
    if base.boundary_count < 0:
        report.append(Violation(f"{path}.boundary_count", "boundary_count must be >= 0"))
    for i, alpha in enumerate(base.cone_orders):
        if alpha < 2:
            report.append(Violation(f"{path}.cone_orders[{i}]", "cone orders must be >= 2"))


def _validate_seifert(data: SeifertData, path: str, report: List[Violation], closed: bool) -> None:
    _validate_base(data.base, f"{path}.base", report)
    for i, (alpha, beta) in enumerate(data.cone_pairs):
        if alpha < 2:
            report.append(Violation(f"{path}.cone_pairs[{i}]", "alpha must be >= 2"))
        elif gcd(alpha, beta) != 1:
            report.append(
                Violation(f"{path}.cone_pairs[{i}]", f"gcd({alpha}, {beta}) != 1")
            )
    alphas = tuple(sorted(alpha for alpha, _ in data.cone_pairs))
    if alphas != data.base.cone_orders:
        report.append(
            Violation(
                f"{path}.cone_pairs",
                "cone order mismatch: pairs carry orders "
                f"{list(alphas)} but the base carries {list(data.base.cone_orders)}",
            )
        )
    if closed:
        if data.base.boundary_count != 0:
            report.append(Violation(f"{path}.base", "closed Seifert piece over a bounded base"))
        if data.b is None:
            report.append(Violation(f"{path}.b", "closed Seifert data needs the obstruction term b"))
    else:
        if data.base.boundary_count < 1:
            report.append(Violation(f"{path}.base", "bounded Seifert piece over a closed base"))
        if data.b is not None:
            report.append(Violation(f"{path}.b", "bounded Seifert data must not carry b"))


def _validate_jsj(graph: JsjGraph, path: str, report: List[Violation]) -> None:
    n = len(graph.vertices)
    if n == 0:
        report.append(Violation(f"{path}.vertices", "graph needs at least one vertex"))
        return
    for i, vertex in enumerate(graph.vertices):
        vpath = f"{path}.vertices[{i}]"
        if isinstance(vertex, HyperbolicCusped):
            if vertex.cusps < 1:
                report.append(Violation(f"{vpath}.cusps", "cusps must be >= 1"))
        else:
            _validate_seifert(vertex.data, vpath, report, closed=False)

    degree = [0] * n
    edges_ok = True
    for j, (u, v) in enumerate(graph.edges):
        if not (0 <= u < n and 0 <= v < n):
            report.append(Violation(f"{path}.edges[{j}]", f"vertex index out of range: ({u}, {v})"))
            edges_ok = False
            continue
        degree[u] += 1
        degree[v] += 1
    if not edges_ok:
        return

    for i, vertex in enumerate(graph.vertices):
        tori = boundary_tori(vertex)
        if tori >= 1 and degree[i] != tori:
            report.append(
                Violation(
                    f"{path}.vertices[{i}]",
                    f"boundary bookkeeping: {tori} tori but {degree[i]} edge ends",
                )
            )

    # connectivity (a description stands for one connected manifold)
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in graph.edges:
        parent[find(u)] = find(v)
    if len({find(i) for i in range(n)}) > 1:
        report.append(Violation(f"{path}.edges", "graph is not connected"))

    # minimality rejections: these shapes are geometric, not torus decompositions
    flat_one = [
        isinstance(v, SeifertBounded) and _is_flat_one_boundary(v.data)
        for v in graph.vertices
    ]
    if n == 2 and all(flat_one) and len(graph.edges) == 1:
        report.append(
            Violation(
                path,
                "non-minimal/geometric: Klein double, use KleinDouble",
            )
        )
    if n >= 2:
        for i, vertex in enumerate(graph.vertices):
            if isinstance(vertex, SeifertBounded) and _is_torus_x_interval(vertex.data):
                report.append(
                    Violation(
                        f"{path}.vertices[{i}]",
                        "non-minimal: torus-times-interval vertex in a multi-vertex graph",
                    )
                )


def validate(desc: ManifoldDescription) -> List[Violation]:
    """Every violated well-formedness condition, with a path into the description."""
    report: List[Violation] = []
    if not desc.pieces:
        report.append(Violation("pieces", "a description needs at least one piece"))
    for i, piece in enumerate(desc.pieces):
        path = f"pieces[{i}]"
        if isinstance(piece, Spherical):
            if piece.pi1_order < 1:
                report.append(Violation(f"{path}.pi1_order", "group order must be >= 1"))
        elif isinstance(piece, Geometric):
            if not isinstance(piece.geometry, Geometry):
                report.append(Violation(f"{path}.geometry", "unknown geometry"))
        elif isinstance(piece, TorusBundle):
            if piece.monodromy.det() not in (1, -1):
                report.append(
                    Violation(f"{path}.monodromy", "monodromy determinant must be +1 or -1")
                )
        elif isinstance(piece, KleinDouble):
            pass
        elif isinstance(piece, SeifertClosed):
            _validate_seifert(piece.data, path, report, closed=True)
        elif isinstance(piece, JsjGraph):
            if piece.monodromy is not None and piece.monodromy.det() not in (1, -1):
                report.append(
                    Violation(f"{path}.monodromy", "monodromy determinant must be +1 or -1")
                )
            _validate_jsj(piece, path, report)
        else:
            report.append(Violation(path, f"unknown piece type {type(piece).__name__}"))
    return report


# ---------------------------------------------------------------------------
# normalization

_REWRITABLE_MARK = "non-minimal/geometric: Klein double, use KleinDouble"


def _rewrite_jsj(graph: JsjGraph) -> PrimePiece:
    n = len(graph.vertices)
    flat_one = [
        isinstance(v, SeifertBounded) and _is_flat_one_boundary(v.data)
        for v in graph.vertices
    ]
    if n == 2 and all(flat_one) and graph.edges == ((0, 1),):
        return KleinDouble()
    if n == 1 and graph.edges == ((0, 0),):
        vertex = graph.vertices[0]
        if isinstance(vertex, SeifertBounded) and _is_torus_x_interval(vertex.data):
            if graph.monodromy is None:
                raise NormalizationAmbiguous(
                    "a torus-times-interval vertex glued to itself is a torus bundle; "
                    "supply the gluing monodromy on the graph piece"
                )
            return TorusBundle(graph.monodromy)
    return graph


def normalize(desc: ManifoldDescription) -> ManifoldDescription:
    """Canonical form: no trivial summands, no geometric shapes hiding in graphs.

    Idempotent.  Raises InvalidDescription when violations other than the
    rewritable graph shapes are present, and NormalizationAmbiguous when
    the torus-bundle rewrite lacks its monodromy.
    """
    rewritten: List[PrimePiece] = []
    for piece in desc.pieces:
        if isinstance(piece, JsjGraph):
            rewritten.append(_rewrite_jsj(piece))
        else:
            rewritten.append(piece)
    nontrivial = [p for p in rewritten if p != Spherical(1)]
    if not nontrivial:
        nontrivial = [Spherical(1)] if rewritten else []
    result = replace(desc, pieces=tuple(nontrivial))
    report = validate(result)
    if report:
        raise InvalidDescription(report)
    return result


# ---------------------------------------------------------------------------
# JSON wire format

def _base_to_json(base: OrbifoldBase) -> dict:
    obj = {
        "genus": base.genus,
        "orientable": base.orientable,
        "boundary_count": base.boundary_count,
    }
    if base.cone_orders:
        obj["cone_orders"] = list(base.cone_orders)
    return obj


def _base_from_json(obj: dict, cone_pairs: Tuple[Tuple[int, int], ...]) -> OrbifoldBase:
    if not isinstance(obj, dict):
        raise DescriptionFormatError(f"base must be an object, got {obj!r}")
    default_orders = sorted(alpha for alpha, _ in cone_pairs)
    return OrbifoldBase(
        genus=int(obj.get("genus", 0)),
        orientable=bool(obj.get("orientable", True)),
        boundary_count=int(obj.get("boundary_count", 0)),
        cone_orders=tuple(int(a) for a in obj.get("cone_orders", default_orders)),
    )


def _pairs_from_json(obj) -> Tuple[Tuple[int, int], ...]:
    try:
        return tuple((int(a), int(b)) for a, b in obj)
    except (TypeError, ValueError) as exc:
        raise DescriptionFormatError(f"cone_pairs must be a list of [alpha, beta]: {obj!r}") from exc


def _matrix_from_json(obj) -> Mat2Z:
    try:
        return Mat2Z.from_rows(obj)
    except (TypeError, ValueError) as exc:
        raise DescriptionFormatError(f"monodromy must be [[a, b], [c, d]]: {obj!r}") from exc


def _seifert_from_json(obj: dict) -> SeifertData:
    pairs = _pairs_from_json(obj.get("cone_pairs", []))
    base = _base_from_json(obj.get("base", {}), pairs)
    b = obj.get("b")
    return SeifertData(base=base, cone_pairs=pairs, b=None if b is None else int(b))


def _vertex_from_json(obj: dict) -> JsjVertex:
    kind = obj.get("kind")
    if kind == "hyperbolic_cusped":
        return HyperbolicCusped(cusps=int(obj.get("cusps", 0)))
    if kind == "seifert_bounded":
        return SeifertBounded(_seifert_from_json(obj))
    raise DescriptionFormatError(f"unknown vertex kind {kind!r}")


def piece_from_json(obj: dict) -> PrimePiece:
    if not isinstance(obj, dict):
        raise DescriptionFormatError(f"piece must be an object, got {obj!r}")
    kind = obj.get("kind")
    if kind == "spherical":
        return Spherical(pi1_order=int(obj["pi1_order"]))
    if kind == "geometric":
        try:
            return Geometric(Geometry(obj["geometry"]))
        except (KeyError, ValueError) as exc:
            raise DescriptionFormatError(f"unknown geometry in {obj!r}") from exc
    if kind == "torus_bundle":
        return TorusBundle(_matrix_from_json(obj.get("monodromy")))
    if kind == "klein_double":
        return KleinDouble()
    if kind == "seifert_closed":
        return SeifertClosed(_seifert_from_json(obj))
    if kind == "jsj":
        vertices = tuple(_vertex_from_json(v) for v in obj.get("vertices", []))
        try:
            edges = tuple((int(u), int(v)) for u, v in obj.get("edges", []))
        except (TypeError, ValueError) as exc:
            raise DescriptionFormatError(f"edges must be index pairs: {obj.get('edges')!r}") from exc
        monodromy = obj.get("monodromy")
        return JsjGraph(
            vertices=vertices,
            edges=edges,
            monodromy=None if monodromy is None else _matrix_from_json(monodromy),
        )
    raise DescriptionFormatError(f"unknown piece kind {kind!r}")


def piece_to_json(piece: PrimePiece) -> dict:
    if isinstance(piece, Spherical):
        return {"kind": "spherical", "pi1_order": piece.pi1_order}
    if isinstance(piece, Geometric):
        return {"kind": "geometric", "geometry": piece.geometry.value}
    if isinstance(piece, TorusBundle):
        return {"kind": "torus_bundle", "monodromy": [list(r) for r in piece.monodromy.rows()]}
    if isinstance(piece, KleinDouble):
        return {"kind": "klein_double"}
    if isinstance(piece, SeifertClosed):
        data = piece.data
        return {
            "kind": "seifert_closed",
            "base": _base_to_json(data.base),
            "cone_pairs": [list(p) for p in data.cone_pairs],
            "b": data.b,
        }
    if isinstance(piece, JsjGraph):
        obj = {
            "kind": "jsj",
            "vertices": [_vertex_to_json(v) for v in piece.vertices],
            "edges": [list(e) for e in piece.edges],
        }
        if piece.monodromy is not None:
            obj["monodromy"] = [list(r) for r in piece.monodromy.rows()]
        return obj
    raise TypeError(f"unknown piece type {type(piece).__name__}")


def _vertex_to_json(vertex: JsjVertex) -> dict:
    if isinstance(vertex, HyperbolicCusped):
        return {"kind": "hyperbolic_cusped", "cusps": vertex.cusps}
    data = vertex.data
    return {
        "kind": "seifert_bounded",
        "base": _base_to_json(data.base),
        "cone_pairs": [list(p) for p in data.cone_pairs],
    }


def description_to_json(desc: ManifoldDescription) -> dict:
    return {"name": desc.name, "pieces": [piece_to_json(p) for p in desc.pieces]}


def description_from_json(obj: dict) -> ManifoldDescription:
    if not isinstance(obj, dict):
        raise DescriptionFormatError(f"description must be an object, got {obj!r}")
    pieces = obj.get("pieces")
    if not isinstance(pieces, list):
        raise DescriptionFormatError("description needs a 'pieces' list")
    return ManifoldDescription(
        name=str(obj.get("name", "")),
        pieces=tuple(piece_from_json(p) for p in pieces),
    )


def load_description(path: str) -> ManifoldDescription:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            obj = json.load(handle)
        except json.JSONDecodeError as exc:
            raise DescriptionFormatError(f"{path}: {exc}") from exc
    return description_from_json(obj)
