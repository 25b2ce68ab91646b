import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gdim3.bass_serre import (
    BASE_VERTEX,
    BallLimitExceeded,
    FreeProductSpec,
    MissingAssignment,
    NotHyperbolic,
    SemidirectSpec,
    UnsupportedElement,
    Vertex,
    act,
    axis_of,
    ball,
    cone_off,
    coset_canonical,
    cyclically_reduce,
    inverse,
    mul,
    normal_form,
    normalizer_probe,
    parse_word,
    path_stabilizer,
    pushout_dimension_bound,
    setwise_axis_stabilizer,
    translation_syllables,
    word_str,
    words_up_to,
    _order_path,
)
from gdim3.gl2z import Mat2Z, MatKind, classify

Z22 = FreeProductSpec((2, 2))
Z23 = FreeProductSpec((2, 3))
Z33 = FreeProductSpec((3, 3))
Z222 = FreeProductSpec((2, 2, 2))


def syllables(spec):
    return st.lists(
        st.tuples(st.integers(0, spec.num_factors - 1), st.integers(-5, 5)),
        max_size=8,
    )


# --- words ---

def test_spec_validation():
    with pytest.raises(ValueError):
        FreeProductSpec((2,))
    with pytest.raises(ValueError):
        FreeProductSpec((2, 1))


def test_normal_form_known_cases():
    assert normal_form(Z22, [(0, 1), (0, 1)]) == ()
    assert normal_form(Z22, [(0, 1), (1, 1), (0, 1)]) == ((0, 1), (1, 1), (0, 1))
    assert normal_form(Z23, [(0, 1), (1, 2), (1, 1), (0, 1)]) == ()
    assert normal_form(Z23, [(1, 5)]) == ((1, 2),)
    assert normal_form(Z23, [(0, -1)]) == ((0, 1),)


@given(syllables(Z23))
def test_normal_form_is_idempotent(raw):
    w = normal_form(Z23, raw)
    assert normal_form(Z23, w) == w
    assert all(e != 0 for _, e in w)
    assert all(f1 != f2 for (f1, _), (f2, _) in zip(w, w[1:]))


@given(syllables(Z23), syllables(Z23), syllables(Z23))
def test_multiplication_is_associative(a, b, c):
    a, b, c = (normal_form(Z23, w) for w in (a, b, c))
    assert mul(Z23, mul(Z23, a, b), c) == mul(Z23, a, mul(Z23, b, c))


@given(syllables(Z23))
def test_inverse_law(w):
    w = normal_form(Z23, w)
    assert mul(Z23, w, inverse(Z23, w)) == ()
    assert mul(Z23, inverse(Z23, w), w) == ()


@given(syllables(Z23))
def test_cyclic_reduction_is_a_conjugate_of_no_greater_length(w):
    w = normal_form(Z23, w)
    r = cyclically_reduce(Z23, w)
    assert len(r) <= len(w)
    if len(r) >= 2:
        assert r[0][0] != r[-1][0]


def test_words_up_to_counts():
    assert sum(1 for _ in words_up_to(Z23, 0)) == 1
    assert sum(1 for _ in words_up_to(Z23, 1)) == 4
    assert sum(1 for _ in words_up_to(Z23, 2)) == 8
    assert sum(1 for _ in words_up_to(Z22, 3)) == 7


@given(syllables(Z33))
def test_word_str_round_trips(raw):
    w = normal_form(Z33, raw)
    assert parse_word(Z33, word_str(w)) == w


def test_parse_word_rejects_garbage():
    with pytest.raises(ValueError):
        parse_word(Z23, "xyz")
    with pytest.raises(ValueError):
        parse_word(Z23, "a!b")


# --- balls ---

def test_radius_zero_is_the_base_vertex():
    tree = ball(Z23, 0)
    assert tree.vertices == (BASE_VERTEX,)
    assert tree.edges == ()


def test_infinite_dihedral_ball_is_a_line():
    tree = ball(Z22, 3)
    assert len(tree.vertices) == 7
    assert len(tree.edges) == 6
    assert all(tree.degree(v) <= 2 for v in tree.vertices)
    tree = ball(Z22, 6)
    assert len(tree.vertices) == 13
    assert len(tree.edges) == 12
    assert sorted(tree.degree(v) for v in tree.vertices) == [1, 1] + [2] * 11


def test_z2_z3_ball_is_bipartite_with_factor_degrees():
    tree = ball(Z23, 4)
    for v in tree.vertices:
        if tree.distance(BASE_VERTEX, v) < tree.radius:
            if v.factor is None:
                assert tree.degree(v) == 2    # one coset per factor
            else:
                assert tree.degree(v) == Z23.factor_orders[v.factor]
        # every edge joins an element vertex to a coset vertex
        for n in tree.adjacency[v]:
            assert (v.factor is None) != (n.factor is None)


@pytest.mark.parametrize("spec,radius", [(Z22, 5), (Z23, 4), (Z222, 4), (Z33, 3)])
def test_balls_are_trees(spec, radius):
    tree = ball(spec, radius)
    assert len(tree.vertices) == len(tree.edges) + 1
    # union-find: adding each edge merges two previously distinct components
    parent = {v: v for v in tree.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in tree.edges:
        ru, rv = find(u), find(v)
        assert ru != rv, "cycle detected"
        parent[ru] = rv
    assert len({find(v) for v in tree.vertices}) == 1


def test_vertex_distances_track_syllable_length():
    tree = ball(Z23, 5)
    for v in tree.vertices:
        d = tree.distance(BASE_VERTEX, v)
        if v.factor is None:
            assert d == 2 * len(v.word)
        else:
            assert d == 2 * len(v.word) + 1


def test_ball_limit_guard():
    with pytest.raises(BallLimitExceeded):
        ball(Z222, 8, max_vertices=50)


def test_action_is_by_isometries_and_composes():
    tree = ball(Z23, 4)
    words = [w for w in words_up_to(Z23, 2)]
    for g in words:
        for h in words:
            gh = mul(Z23, g, h)
            for v in tree.vertices[:12]:
                assert act(Z23, g, act(Z23, h, v)) == act(Z23, gh, v)


def test_action_preserves_adjacency():
    tree = ball(Z23, 4)
    g = parse_word(Z23, "ab")
    for u, v in tree.edges:
        gu, gv = act(Z23, g, u), act(Z23, g, v)
        if gu in tree and gv in tree:
            assert gv in tree.adjacency[gu]


def test_coset_canonical_strips_own_factor_syllable():
    w = parse_word(Z23, "ab")
    assert coset_canonical(w, 1) == parse_word(Z23, "a")
    assert coset_canonical(w, 0) == w


# --- stabilizers and acylindricity ---

def test_single_coset_vertex_stabilizer_is_the_conjugated_factor():
    tree = ball(Z23, 4)
    fix = path_stabilizer(tree, [Vertex((), 1)], budget=4)
    assert set(fix) == {(), ((1, 1),), ((1, 2),)}
    fix = path_stabilizer(tree, [Vertex(parse_word(Z23, "a"), 1)], budget=4)
    assert set(fix) == {(), parse_word(Z23, "aba"), parse_word(Z23, "ab2a")}


def test_element_vertex_stabilizer_is_trivial():
    tree = ball(Z23, 4)
    assert path_stabilizer(tree, [BASE_VERTEX], budget=4) == [()]


def test_acylindricity_every_edge_path_has_trivial_stabilizer():
    # fixing both endpoints of a geodesic fixes the whole path, so vertex
    # pairs certify every path with at least one edge
    tree = ball(Z22, 6)
    for u, v in combinations(tree.vertices, 2):
        assert path_stabilizer(tree, [u, v], budget=6) == [()]


# --- axes ---

def test_elliptic_words_have_no_axis():
    tree = ball(Z23, 4)
    assert axis_of(tree, parse_word(Z23, "a")) is None
    assert axis_of(tree, parse_word(Z23, "b2")) is None
    assert axis_of(tree, parse_word(Z23, "aba")) is None      # conjugate of b
    assert axis_of(tree, ()) is None


def test_axis_of_ab_in_the_dihedral_line():
    # the whole tree is the axis line, and all of it is visible
    tree = ball(Z22, 6)
    g = parse_word(Z22, "ab")
    assert translation_syllables(Z22, g) == 2
    axis = axis_of(tree, g)
    assert axis is not None
    assert set(axis) == set(tree.vertices)
    for u, v in zip(axis, axis[1:]):
        assert v in tree.adjacency[u]
    # the ordered path is carried into itself four steps along
    index = {v: i for i, v in enumerate(axis)}
    for v in axis:
        image = act(Z22, g, v)
        if image in index:
            assert abs(index[image] - index[v]) == 4


def test_axis_is_equivariant_under_conjugation():
    tree = ball(Z23, 6)
    g = parse_word(Z23, "ab")
    a = parse_word(Z23, "a")
    conj = mul(Z23, mul(Z23, a, g), inverse(Z23, a))
    axis_g = axis_of(tree, g)
    axis_conj = set(axis_of(tree, conj))
    for v in axis_g:
        image = act(Z23, a, v)
        if image in tree and act(Z23, conj, image) in tree:
            assert image in axis_conj


def test_axis_not_visible_in_a_small_ball():
    tree = ball(Z23, 1)
    assert axis_of(tree, parse_word(Z23, "ab")) is None


def test_translation_length_is_cyclic_syllable_length():
    assert translation_syllables(Z23, parse_word(Z23, "ab")) == 2
    assert translation_syllables(Z23, parse_word(Z23, "abab")) == 4
    assert translation_syllables(Z23, parse_word(Z23, "aba")) == 1   # elliptic
    # displacement of a hyperbolic word doubles the syllable count
    tree = ball(Z23, 6)
    g = parse_word(Z23, "ab")
    assert tree.distance(BASE_VERTEX, Vertex(g, None)) == 4


# --- setwise axis stabilizers ---

def test_dihedral_axis_has_translations_and_reflections():
    tree = ball(Z22, 6)
    axis = axis_of(tree, parse_word(Z22, "ab"))
    report = setwise_axis_stabilizer(tree, axis, budget=4)
    assert report.consistent
    deltas = {d for _, d in report.translations}
    assert {0}.issubset(deltas) and any(d != 0 for d in deltas)
    assert report.reflections      # a reverses the line
    assert parse_word(Z22, "a") in {g for g, _ in report.reflections}


def test_orientation_only_axis_in_z3_z3():
    # ab is not conjugate to its inverse ab2 (cyclic words differ), so no
    # budgeted word may reverse the axis
    tree = ball(Z33, 6)
    axis = axis_of(tree, parse_word(Z33, "ab"))
    report = setwise_axis_stabilizer(tree, axis, budget=5)
    assert report.consistent
    assert report.reflections == ()
    assert any(d != 0 for _, d in report.translations)


def test_no_commuting_hyperbolics_with_crossing_axes_within_budget():
    # bounded check: any two commuting hyperbolic words must share their
    # axis line, so the union of the visible windows is still a path
    tree = ball(Z23, 6)
    words = [w for w in words_up_to(Z23, 3)
             if len(cyclically_reduce(Z23, w)) >= 2]
    for g in words:
        for h in words:
            if g >= h or mul(Z23, g, h) != mul(Z23, h, g):
                continue
            axis_g, axis_h = axis_of(tree, g), axis_of(tree, h)
            if axis_g is None or axis_h is None:
                continue
            union = list(set(axis_g) | set(axis_h))
            assert _order_path(tree, union)


# --- coned complexes ---

def test_cone_off_without_axes_is_the_bare_ball():
    tree = ball(Z23, 3)
    cx = cone_off(tree, [], budget=3)
    assert cx.cell_classes() == ("vertex", "edge")
    assert pushout_dimension_bound(cx, {"vertex": 0, "edge": 0}) == 1


def test_dihedral_cone_vertex_is_preserved_by_every_budgeted_word():
    tree = ball(Z22, 6)
    axis = axis_of(tree, parse_word(Z22, "ab"))
    cx = cone_off(tree, [axis], budget=2)
    record = cx.stabilizer_records[("cone_vertex", 0, (0,))]
    assert set(record) == set(words_up_to(Z22, 2))


def test_cell_counts_track_the_axes():
    tree = ball(Z222, 4)
    axes = [axis_of(tree, parse_word(Z222, w)) for w in ("ab", "bc", "ac")]
    assert all(a is not None for a in axes)
    cx = cone_off(tree, axes, budget=4)
    counts = {}
    for cell in cx.cells():
        counts[cell.cell_class] = counts.get(cell.cell_class, 0) + 1
    assert counts["cone_vertex"] == 3
    assert counts["cone_edge"] == sum(len(a) for a in axes)
    assert counts["face"] == sum(len(a) - 1 for a in axes)
    assert counts["vertex"] == len(tree.vertices)
    assert counts["edge"] == len(tree.edges)
    # the three axes have pairwise distinct setwise stabilizer records
    records = [cx.stabilizer_records[("cone_vertex", 0, (i,))] for i in range(3)]
    assert records[0] != records[1] != records[2] != records[0]


def test_stabilizer_records_do_preserve_their_cells():
    tree = ball(Z222, 4)
    axes = [axis_of(tree, parse_word(Z222, "ab"))]
    cx = cone_off(tree, axes, budget=3)
    axis_set = set(axes[0])
    for cell in cx.cells():
        for g in cx.stabilizer_records[cell]:
            if cell.cell_class == "vertex":
                (v,) = cell.key
                assert act(Z222, g, v) == v
            elif cell.cell_class == "edge":
                u, v = cell.key
                assert {act(Z222, g, u), act(Z222, g, v)} == {u, v}
            elif cell.cell_class == "cone_edge":
                _, v = cell.key
                assert act(Z222, g, v) == v
            elif cell.cell_class == "face":
                _, u, v = cell.key
                assert {act(Z222, g, u), act(Z222, g, v)} == {u, v}
            if cell.cell_class != "vertex" and cell.cell_class != "edge":
                # cone cells also preserve the axis setwise where visible
                for v in axis_set:
                    image = act(Z222, g, v)
                    if image in tree:
                        assert image in axis_set


def test_missing_assignment_only_for_present_classes():
    tree = ball(Z22, 4)
    cx = cone_off(tree, [], budget=2)
    with pytest.raises(MissingAssignment):
        pushout_dimension_bound(cx, {"vertex": 0})
    # cone classes are absent, so they need no assignment
    assert pushout_dimension_bound(cx, {"vertex": 0, "edge": 0}) == 1


def test_jsj_style_assignment_dominates():
    tree = ball(Z22, 4)
    cx = cone_off(tree, [], budget=2)
    assert pushout_dimension_bound(cx, {"vertex": 3, "edge": 0}) == 3


# --- normalizer probe ---

ANOSOV = Mat2Z(2, 1, 1, 1)


def test_probe_matches_the_dichotomy_for_the_reference_monodromy():
    group = SemidirectSpec(ANOSOV)
    probe = normalizer_probe(group, ((0, 0), 1), bound=8)
    assert probe.rank == 1
    assert probe.certificate
    probe = normalizer_probe(group, ((1, 0), 0), bound=8)
    assert probe.rank == 2
    assert probe.certificate


def test_probe_rejects_bad_inputs():
    with pytest.raises(NotHyperbolic):
        normalizer_probe(SemidirectSpec(Mat2Z(0, -1, 1, 0)), ((0, 0), 1))
    with pytest.raises(NotHyperbolic):
        normalizer_probe(SemidirectSpec(Mat2Z(1, 1, 0, 1)), ((0, 0), 1))
    group = SemidirectSpec(ANOSOV)
    with pytest.raises(UnsupportedElement):
        normalizer_probe(group, ((0, 0), 0))
    with pytest.raises(UnsupportedElement):
        normalizer_probe(group, ((1, 0), 1))


def test_probe_over_random_hyperbolic_monodromies():
    from itertools import product as iproduct
    hyperbolics = [
        m for m in (
            Mat2Z(a, b, c, d)
            for a, b, c, d in iproduct(range(-3, 4), repeat=4)
        )
        if m.det() in (1, -1) and classify(m).kind is MatKind.HYPERBOLIC
    ]
    rng = random.Random(42)
    for m in rng.sample(hyperbolics, 10):
        group = SemidirectSpec(m)
        for _ in range(10):
            l = rng.choice([i for i in range(-5, 6) if i])
            assert normalizer_probe(group, ((0, 0), l), bound=8).rank == 1
        for _ in range(10):
            x, y = rng.randint(-5, 5), rng.randint(-5, 5)
            if (x, y) == (0, 0):
                x = 1
            assert normalizer_probe(group, ((x, y), 0), bound=8).rank == 2


def test_semidirect_group_laws():
    group = SemidirectSpec(ANOSOV)
    e1, e2, e3 = ((1, 2), 1), ((0, -1), -2), ((3, 0), 1)
    assert group.mul(group.mul(e1, e2), e3) == group.mul(e1, group.mul(e2, e3))
    assert group.mul(e1, group.inv(e1)) == ((0, 0), 0)
    assert group.inv(group.inv(e2)) == e2


def test_fibre_vectors_commute():
    group = SemidirectSpec(ANOSOV)
    u, v = ((1, 0), 0), ((0, 1), 0)
    assert group.mul(u, v) == group.mul(v, u)
