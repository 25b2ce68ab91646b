"""The dimension engine.

For a closed oriented 3-manifold M with fundamental group G and an
integer k >= 2, the quantity computed here is the minimal dimension of a
classifying space for G relative to the family of subgroups that are
virtually Z^r with r <= k.  The families stabilise at k = 3 (a
3-manifold group has no Z^4 subgroup), so there are exactly two columns:
k = 2 and k >= 3.  The possible values are 0, 2, 3 and 5; the value 1
never occurs because a finitely generated group outside the family
cannot act on a tree with all stabilisers in the family without a fixed
point obstruction in dimension 2.

The computation is table driven.  Every prime piece gets a value from
the piece table (keyed by geometry, by base orbifold class and Euler
number for Seifert pieces, and by monodromy type for torus bundles);
graph pieces take the maximum over their vertices; the prime
decomposition is combined by a three-case rule (an infinite dihedral
connected sum collapses to 0, a free product of family members costs 2,
anything else is a maximum).  Each step is recorded in a derivation
trace whose rule identifiers are documented in the README rule table.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple, Union

from .geometry import Geometry
from .gl2z import Mat2Z, MatKind, classify, geometry_of_monodromy
from .model import (
    Geometric,
    HyperbolicCusped,
    JsjGraph,
    JsjVertex,
    KleinDouble,
    ManifoldDescription,
    PrimePiece,
    SeifertBounded,
    SeifertClosed,
    SeifertData,
    Spherical,
    TorusBundle,
    normalize,
)
from .orbifold2 import OrbifoldClass, classify_base


class UnsupportedPiece(ValueError):
    """The piece cannot be evaluated by this operation."""


ALLOWED_VALUES = frozenset({0, 2, 3, 5})


@dataclass(frozen=True)
class FamilyIndex:
    """Family selector.  All k >= 4 collapse to the stabilised column k = 3."""

    requested: int
    k: int = field(init=False)

    def __post_init__(self) -> None:
        if self.requested < 2:
            raise ValueError(f"family index must be >= 2, got {self.requested}")
        object.__setattr__(self, "k", min(self.requested, 3))

    @property
    def clamped(self) -> bool:
        return self.requested >= 4

    def __str__(self) -> str:
        return f"k={self.requested}" if not self.clamped else f"k={self.requested} (= k=3)"


def family(k: Union[int, FamilyIndex]) -> FamilyIndex:
    return k if isinstance(k, FamilyIndex) else FamilyIndex(k)


@dataclass(frozen=True)
class TraceStep:
    path: str
    rule: str
    inputs: str
    value: int


@dataclass(frozen=True)
class GdResult:
    value: int
    trace: Tuple[TraceStep, ...]

    def __post_init__(self) -> None:
        if self.value not in ALLOWED_VALUES:
            raise AssertionError(f"value {self.value} outside {{0, 2, 3, 5}}")
        if not self.trace or self.trace[-1].value != self.value:
            raise AssertionError("trace must end in the step producing the value")


#: Rule catalogue.  Every rule identifier emitted in a trace is a key here,
#: and every key appears in the README rule table (tested).
RULES = {
    "Table1-row1": "closed hyperbolic piece: value 3 in both columns",
    "Table1-row2": "finite-volume hyperbolic piece with cusps: value 3 in both columns",
    "Table1-row3": "piece with finite or virtually cyclic group "
                   "(spherical space form, S2xE, or a Seifert fibration over a bad "
                   "or spherical base): value 0 in both columns",
    "Table1-row4": "Seifert piece over a hyperbolic base, closed or bounded: "
                   "value 2 in both columns",
    "Table1-row5": "closed Seifert piece over a flat base with Euler number 0 "
                   "(flat geometry): value 5 at k = 2 and 0 at k >= 3",
    "Table1-row6": "closed Seifert piece over a flat base with nonzero Euler number "
                   "(Nil geometry): value 3 in both columns",
    "Table1-row7": "bounded Seifert piece over a flat base: value 0 in both columns",
    "Elementary-piece": "bounded Seifert piece over an elementary base "
                        "(virtually cyclic group): value 0 in both columns",
    "Thm4.5-elliptic": "torus bundle with elliptic monodromy (flat geometry): "
                       "value 5 at k = 2 and 0 at k >= 3",
    "Thm4.5-parabolic": "torus bundle with parabolic monodromy (Nil geometry): "
                        "value 3 in both columns",
    "Thm4.5-hyperbolic": "torus bundle with hyperbolic monodromy (Sol geometry): "
                         "value 2 in both columns",
    "Prop5.1-sol": "Sol-geometric piece (Anosov mapping torus or Klein bottle double): "
                   "value 2 in both columns",
    "Thm1.2-max": "prime piece with a torus decomposition graph: "
                  "maximum of the vertex values",
    "Thm1.1-case1": "connected sum of two order-2 spherical pieces "
                    "(infinite dihedral group): value 0",
    "Thm1.1-case2": "connected sum with every factor in the family and the total "
                    "group not virtually cyclic: value 2",
    "Thm1.1-case3": "connected sum, remaining case: maximum of the factor values",
}


def _result(steps: Sequence[TraceStep]) -> GdResult:
    return GdResult(steps[-1].value, tuple(steps))


def _step(path: str, rule: str, inputs: str, value: int) -> TraceStep:
    assert rule in RULES, f"unregistered rule {rule}"
    return TraceStep(path, rule, inputs, value)


def torus_bundle_gd(monodromy: Mat2Z, k: Union[int, FamilyIndex], path: str = "piece") -> GdResult:
    """Value of a torus bundle from the type of its monodromy.

    Elliptic monodromy gives a flat manifold: the group is virtually Z^3,
    so the value is 5 at k = 2 and the group itself lies in the family
    once k >= 3.  Parabolic monodromy gives Nil (value 3), hyperbolic
    gives Sol (value 2), in both columns.
    """
    k = family(k)
    cls = classify(monodromy)
    inputs = f"monodromy {monodromy} is {cls}"
    if cls.kind is MatKind.ELLIPTIC:
        value = 5 if k.k == 2 else 0
        return _result([_step(path, "Thm4.5-elliptic", inputs, value)])
    if cls.kind is MatKind.PARABOLIC:
        return _result([_step(path, "Thm4.5-parabolic", inputs, 3)])
    return _result([_step(path, "Thm4.5-hyperbolic", inputs, 2)])


def _seifert_gd(data: SeifertData, k: FamilyIndex, path: str) -> GdResult:
    base_class = classify_base(data.base)
    label = data.base.label()
    if base_class in (OrbifoldClass.BAD, OrbifoldClass.SPHERICAL):
        inputs = f"Seifert piece, {base_class} base {label}"
        return _result([_step(path, "Table1-row3", inputs, 0)])
    if base_class is OrbifoldClass.HYPERBOLIC:
        inputs = f"Seifert piece, hyperbolic base {label}"
        return _result([_step(path, "Table1-row4", inputs, 2)])
    if base_class is OrbifoldClass.ELEMENTARY:
        inputs = f"bounded Seifert piece, elementary base {label}"
        return _result([_step(path, "Elementary-piece", inputs, 0)])
    # flat base
    if data.base.boundary_count > 0:
        inputs = f"bounded Seifert piece, flat base {label}"
        return _result([_step(path, "Table1-row7", inputs, 0)])
    e = data.euler_number()
    if e == 0:
        inputs = f"closed Seifert piece, flat base {label}, Euler number 0"
        value = 5 if k.k == 2 else 0
        return _result([_step(path, "Table1-row5", inputs, value)])
    inputs = f"closed Seifert piece, flat base {label}, Euler number {e}"
    return _result([_step(path, "Table1-row6", inputs, 3)])


def piece_gd(piece: Union[PrimePiece, JsjVertex], k: Union[int, FamilyIndex],
             path: str = "piece") -> GdResult:
    """Value of a single geometric piece or graph vertex.

    Graph pieces are not accepted here; they are combined by
    jsj_combine.  Use evaluate_piece for uniform dispatch.
    """
    k = family(k)
    if isinstance(piece, HyperbolicCusped):
        inputs = f"finite-volume hyperbolic piece with {piece.cusps} cusp(s)"
        return _result([_step(path, "Table1-row2", inputs, 3)])
    if isinstance(piece, Spherical):
        inputs = f"spherical space form, group of order {piece.pi1_order}"
        return _result([_step(path, "Table1-row3", inputs, 0)])
    if isinstance(piece, Geometric):
        return _geometric_gd(piece.geometry, k, path)
    if isinstance(piece, KleinDouble):
        inputs = "double of the twisted I-bundle over the Klein bottle (Sol)"
        return _result([_step(path, "Prop5.1-sol", inputs, 2)])
    if isinstance(piece, TorusBundle):
        return torus_bundle_gd(piece.monodromy, k, path)
    if isinstance(piece, (SeifertClosed, SeifertBounded)):
        return _seifert_gd(piece.data, k, path)
    if isinstance(piece, JsjGraph):
        raise UnsupportedPiece("graph pieces are combined by jsj_combine")
    raise UnsupportedPiece(f"unknown piece type {type(piece).__name__}")


def _geometric_gd(geometry: Geometry, k: FamilyIndex, path: str) -> GdResult:
    inputs = f"closed piece with geometry {geometry}"
    if geometry in (Geometry.S3, Geometry.S2xE):
        return _result([_step(path, "Table1-row3", inputs, 0)])
    if geometry is Geometry.H3:
        return _result([_step(path, "Table1-row1", inputs, 3)])
    if geometry is Geometry.E3:
        value = 5 if k.k == 2 else 0
        return _result([_step(path, "Table1-row5", inputs, value)])
    if geometry is Geometry.NIL:
        return _result([_step(path, "Table1-row6", inputs, 3)])
    if geometry in (Geometry.H2xE, Geometry.PSL2R):
        inputs += " (Seifert over a hyperbolic base)"
        return _result([_step(path, "Table1-row4", inputs, 2)])
    if geometry is Geometry.SOL:
        return _result([_step(path, "Prop5.1-sol", inputs, 2)])
    raise UnsupportedPiece(f"unknown geometry {geometry!r}")


def jsj_combine(graph: JsjGraph, k: Union[int, FamilyIndex], path: str = "piece") -> GdResult:
    """Maximum of the vertex values over a torus decomposition graph."""
    k = family(k)
    steps: List[TraceStep] = []
    values = []
    for i, vertex in enumerate(graph.vertices):
        part = piece_gd(vertex, k, f"{path}.vertices[{i}]")
        steps.extend(part.trace)
        values.append(part.value)
    inputs = f"vertex values {values}"
    steps.append(_step(path, "Thm1.2-max", inputs, max(values)))
    return _result(steps)


def evaluate_piece(piece: PrimePiece, k: Union[int, FamilyIndex],
                   path: str = "piece") -> GdResult:
    """Uniform per-piece evaluation: graphs via jsj_combine, all else via piece_gd."""
    if isinstance(piece, JsjGraph):
        return jsj_combine(piece, k, path)
    return piece_gd(piece, k, path)


def in_family(piece: PrimePiece, k: Union[int, FamilyIndex]) -> bool:
    """Whether the piece's group lies in the k-th family.

    A group lies in the family exactly when its value is 0, so membership
    is read off the piece evaluation.  At k = 2 that means spherical
    space forms, S3 and S2xE pieces (and their Seifert-fibred spellings
    over bad or spherical bases); at k >= 3 the flat pieces join them.
    """
    return evaluate_piece(piece, k).value == 0


def is_virtually_cyclic_free_product(pieces: Sequence[PrimePiece]) -> bool:
    """True exactly for the connected sum of two order-2 spherical pieces.

    A free product of nontrivial groups is virtually cyclic only when
    both factors have order two (the infinite dihedral group); spherical
    pieces must be spelled with pi1_order for this detection to apply.
    """
    return len(pieces) == 2 and all(p == Spherical(2) for p in pieces)


def prime_combine(pieces: Sequence[PrimePiece], k: Union[int, FamilyIndex],
                  path: str = "pieces") -> GdResult:
    """Combine a normalized prime decomposition.

    With one piece the value is the piece's value.  With several, the
    group is the free product of the piece groups and three cases apply:
    the infinite dihedral sum is virtually cyclic (value 0); a free
    product of family members that is not virtually cyclic acts on its
    Bass-Serre tree with family stabilisers and costs exactly 2; in the
    remaining case the answer is the maximum of the piece values, using
    the values at the same k.
    """
    k = family(k)
    steps: List[TraceStep] = []
    parts: List[GdResult] = []
    for i, piece in enumerate(pieces):
        part = evaluate_piece(piece, k, f"{path}[{i}]")
        steps.extend(part.trace)
        parts.append(part)
    values = [p.value for p in parts]
    if len(parts) == 1:
        steps.append(_step(path, "Thm1.1-case3", "single prime piece", values[0]))
        return _result(steps)
    if is_virtually_cyclic_free_product(pieces):
        inputs = "two order-2 spherical factors, infinite dihedral group"
        steps.append(_step(path, "Thm1.1-case1", inputs, 0))
        return _result(steps)
    if all(v == 0 for v in values):
        inputs = f"all {len(parts)} factors lie in the family at {k}"
        steps.append(_step(path, "Thm1.1-case2", inputs, 2))
        return _result(steps)
    inputs = f"factor values {values}"
    steps.append(_step(path, "Thm1.1-case3", inputs, max(values)))
    return _result(steps)


def models_euclidean(piece: PrimePiece) -> bool:
    """Whether the prime piece is modelled on E^3 (carries a Z^3 subgroup)."""
    if isinstance(piece, Geometric):
        return piece.geometry is Geometry.E3
    if isinstance(piece, TorusBundle):
        return classify(piece.monodromy).kind is MatKind.ELLIPTIC
    if isinstance(piece, SeifertClosed):
        base = piece.data.base
        return (
            classify_base(base) is OrbifoldClass.FLAT
            and base.boundary_count == 0
            and piece.data.euler_number() == 0
        )
    return False


@dataclass(frozen=True)
class DimensionReport:
    """Both family columns for one description, plus the Z^n rank indicator."""

    name: str
    description: ManifoldDescription
    k2: GdResult
    k3plus: GdResult
    rank_cap: int

    def value(self, k: Union[int, FamilyIndex]) -> int:
        return self.k2.value if family(k).k == 2 else self.k3plus.value


def compute(desc: ManifoldDescription) -> DimensionReport:
    """Validate, normalize, and evaluate both family columns with full traces.

    The rank indicator is 3 when some prime piece is modelled on E^3
    (only then does the group contain Z^3) and 2 otherwise.
    """
    normalized = normalize(desc)
    k2 = prime_combine(normalized.pieces, FamilyIndex(2))
    k3plus = prime_combine(normalized.pieces, FamilyIndex(3))
    rank_cap = 3 if any(models_euclidean(p) for p in normalized.pieces) else 2
    return DimensionReport(
        name=normalized.name,
        description=normalized,
        k2=k2,
        k3plus=k3plus,
        rank_cap=rank_cap,
    )
