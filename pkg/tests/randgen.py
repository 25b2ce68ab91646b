"""Seeded random generator of valid manifold descriptions.

Used by the property suites: every emitted description passes validate()
and exercises spherical, geometric, torus-bundle, Seifert and graph
pieces.  The graph shapes are chains and self-glued even-cusp pieces,
built so that the boundary bookkeeping always balances and none of the
rejected geometric-in-disguise shapes (doubled twisted I-bundles,
torus-times-interval vertices) can occur.
"""
from __future__ import annotations

import random
from typing import List

from gdim3.geometry import Geometry
from gdim3.gl2z import Mat2Z
from gdim3.model import (
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
)
from gdim3.orbifold2 import OrbifoldBase

UNIMODULAR_POOL = [
    Mat2Z(1, 0, 0, 1), Mat2Z(-1, 0, 0, -1), Mat2Z(0, -1, 1, 0),
    Mat2Z(0, -1, 1, 1), Mat2Z(0, -1, 1, -1), Mat2Z(1, 1, 0, 1),
    Mat2Z(1, -3, 0, 1), Mat2Z(-1, 2, 0, -1), Mat2Z(2, 1, 1, 1),
    Mat2Z(3, 2, 1, 1), Mat2Z(0, 1, 1, 0), Mat2Z(1, 2, 1, 1),
    Mat2Z(2, 3, 1, 2), Mat2Z(-2, 1, 1, -1),
]


def random_matrix(rng: random.Random) -> Mat2Z:
    m = rng.choice(UNIMODULAR_POOL)
    if rng.random() < 0.5:
        # conjugate to vary the entries without changing the class
        p = rng.choice(UNIMODULAR_POOL)
        m = p * m * p.inverse()
    return m


def random_coprime(rng: random.Random, alpha: int) -> int:
    from math import gcd
    candidates = [b for b in range(1, alpha) if gcd(alpha, b) == 1]
    return rng.choice(candidates)


def random_closed_base(rng: random.Random) -> OrbifoldBase:
    kind = rng.randrange(4)
    cone_count = rng.randrange(4)
    orders = tuple(sorted(rng.randrange(2, 6) for _ in range(cone_count)))
    if kind == 0:
        return OrbifoldBase(genus=0, orientable=True, cone_orders=orders)
    if kind == 1:
        return OrbifoldBase(genus=1, orientable=True, cone_orders=orders)
    if kind == 2:
        return OrbifoldBase(genus=1, orientable=False, cone_orders=orders)
    return OrbifoldBase(genus=2, orientable=False, cone_orders=orders)


def random_seifert_closed(rng: random.Random) -> SeifertClosed:
    base = random_closed_base(rng)
    pairs = tuple((a, random_coprime(rng, a)) for a in base.cone_orders)
    return SeifertClosed(SeifertData(base=base, cone_pairs=pairs, b=rng.randrange(-2, 3)))


# bounded bases with hyperbolic orbifold class only, so chain vertices can
# never form one of the rejected flat shapes
_DISK_CONES = [(2, 3), (3, 3), (2, 4), (3, 5), (2, 2, 2)]
_ANNULUS_CONES = [(2,), (3,), (2, 2)]


def random_bounded_vertex(rng: random.Random, tori: int) -> JsjVertex:
    if rng.random() < 0.5:
        return HyperbolicCusped(cusps=tori)
    if tori == 1:
        orders = rng.choice(_DISK_CONES)
        base = OrbifoldBase(genus=0, orientable=True, boundary_count=1,
                            cone_orders=tuple(sorted(orders)))
    else:
        orders = rng.choice(_ANNULUS_CONES)
        base = OrbifoldBase(genus=0, orientable=True, boundary_count=2,
                            cone_orders=tuple(sorted(orders)))
    pairs = tuple((a, random_coprime(rng, a)) for a in base.cone_orders)
    return SeifertBounded(SeifertData(base=base, cone_pairs=pairs))


def random_jsj(rng: random.Random) -> JsjGraph:
    if rng.random() < 0.3:
        # one piece, even cusp count, self-glued
        loops = rng.randrange(1, 3)
        return JsjGraph(
            vertices=(HyperbolicCusped(cusps=2 * loops),),
            edges=tuple((0, 0) for _ in range(loops)),
        )
    n = rng.randrange(2, 5)
    vertices: List[JsjVertex] = []
    for i in range(n):
        tori = 1 if i in (0, n - 1) else 2
        vertices.append(random_bounded_vertex(rng, tori))
    edges = tuple((i, i + 1) for i in range(n - 1))
    return JsjGraph(vertices=tuple(vertices), edges=edges)


def random_piece(rng: random.Random) -> PrimePiece:
    roll = rng.randrange(6)
    if roll == 0:
        return Spherical(pi1_order=rng.choice([1, 2, 3, 4, 5, 8, 12, 60, 120]))
    if roll == 1:
        return Geometric(rng.choice(list(Geometry)))
    if roll == 2:
        return TorusBundle(random_matrix(rng))
    if roll == 3:
        return KleinDouble()
    if roll == 4:
        return random_seifert_closed(rng)
    return random_jsj(rng)


def random_description(seed: int) -> ManifoldDescription:
    rng = random.Random(seed)
    count = rng.randrange(1, 5)
    pieces = tuple(random_piece(rng) for _ in range(count))
    return ManifoldDescription(name=f"random_{seed}", pieces=pieces)
