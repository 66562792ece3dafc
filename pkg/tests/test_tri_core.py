from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from effitri.errors import (
    EmptyTriangulation,
    IndexOutOfRange,
    InvolutionViolation,
    SelfGluedFace,
    TriSyntaxError,
)
from effitri.tri_core import (
    ALL_PERMS,
    IDENTITY,
    Perm4,
    Triangulation,
    components,
    face_vertices,
    normalize_text,
    oriented,
    parse,
    relabel,
    serialize,
    sub_triangulation,
    transposition,
    validate,
)

from conftest import closed_census

perms = st.sampled_from(ALL_PERMS)


# ------------------------------------------------------------ Perm4

@given(perms, perms, perms)
def test_composition_is_associative(p, q, r):
    assert (p * q) * r == p * (q * r)


@given(perms, perms)
def test_composition_matches_function_composition(p, q):
    assert all((p * q)(v) == p(q(v)) for v in range(4))


@given(perms)
def test_inverse(p):
    assert p * p.inverse() is IDENTITY
    assert p.inverse() * p is IDENTITY


@given(perms, perms)
def test_sign_is_multiplicative(p, q):
    assert (p * q).sign == p.sign * q.sign


def test_sign_by_cycle_count():
    # independent oracle: sign = (-1)^(n - #cycles)
    for p in ALL_PERMS:
        seen, cycles = set(), 0
        for v in range(4):
            if v not in seen:
                cycles += 1
                while v not in seen:
                    seen.add(v)
                    v = p(v)
        assert p.sign == (-1) ** (4 - cycles)


def test_perm_table_and_interning():
    assert len(ALL_PERMS) == 24 and len(set(ALL_PERMS)) == 24
    assert [p.index for p in ALL_PERMS] == list(range(24))
    assert Perm4((1, 0, 2, 3)) is transposition(0, 1)
    assert Perm4.parse("1230") is Perm4((1, 2, 3, 0))
    assert str(Perm4.parse("3012")) == "3012"
    with pytest.raises(ValueError):
        Perm4((0, 0, 1, 2))


# ------------------------------------------------------------ construction errors

def test_involution_violation():
    p = Perm4.parse("0123")
    with pytest.raises(InvolutionViolation):
        Triangulation([[(0, transposition(0, 1)), None, None, None]])
    with pytest.raises(InvolutionViolation):
        Triangulation([[(1, p), None, None, None], [None, None, None, None]])


def test_self_glued_face():
    with pytest.raises(SelfGluedFace):
        Triangulation([[(0, IDENTITY), None, None, None]])


def test_index_out_of_range():
    with pytest.raises(IndexOutOfRange):
        Triangulation([[(3, IDENTITY), None, None, None]])


def test_empty_triangulation_rejected():
    with pytest.raises(EmptyTriangulation):
        validate(Triangulation([]))
    with pytest.raises(EmptyTriangulation):
        parse("tri 0\n")


# ------------------------------------------------------------ text format

def test_parse_diagnostics_carry_position():
    with pytest.raises(TriSyntaxError) as exc:
        parse("tri 1\n0:1023 0:1023 0:1230 0:30x2\n")
    assert exc.value.line == 2 and exc.value.column == 22
    with pytest.raises(TriSyntaxError) as exc:
        parse("garbage\n")
    assert "line 1, column 1" in str(exc.value)
    with pytest.raises(TriSyntaxError):
        parse("tri 1\n0:1023 0:1023 0:1230\n")
    with pytest.raises(TriSyntaxError):
        parse("tri 2\n0:1023 0:1023 0:1230 0:3012\n")
    with pytest.raises(IndexOutOfRange):
        parse("tri 1\n5:1023 0:1023 0:1230 0:3012\n")


def test_comments_and_whitespace_are_ignored():
    text = "# a comment\n\n  tri 1 \n0:1023   0:1023 0:1230 0:3012  # trailing\n"
    with pytest.raises(TriSyntaxError):
        parse(text)  # trailing comments are not part of the grammar
    clean = "# a comment\n\n  tri 1 \n0:1023   0:1023 0:1230 0:3012\n"
    assert normalize_text(clean) == "tri 1\n0:1023 0:1023 0:1230 0:3012\n"


@pytest.mark.parametrize("t", [1, 2, 3])
def test_serialize_roundtrip_on_census(t):
    for T in closed_census(t):
        assert parse(serialize(T)) == T


# ------------------------------------------------------------ skeleton oracles

def _naive_vertex_classes(T: Triangulation) -> int:
    """Independent oracle: merge corner sets until nothing changes."""
    classes = [{(a, v)} for a in range(T.size) for v in range(4)]
    changed = True
    while changed:
        changed = False
        for a in range(T.size):
            for f in range(4):
                g = T.gluing(a, f)
                if g is None:
                    continue
                b, p = g
                for v in face_vertices(f):
                    i = next(k for k, c in enumerate(classes) if (a, v) in c)
                    j = next(k for k, c in enumerate(classes) if (b, p(v)) in c)
                    if i != j:
                        classes[i] |= classes[j]
                        del classes[j]
                        changed = True
    return len(classes)


def _naive_edge_classes(T: Triangulation) -> list:
    """Orders of edge classes, merging unordered vertex pairs across faces."""
    classes = [{(a, frozenset(e))} for a in range(T.size) for e in itertools.combinations(range(4), 2)]
    changed = True
    while changed:
        changed = False
        for a in range(T.size):
            for f in range(4):
                g = T.gluing(a, f)
                if g is None:
                    continue
                b, p = g
                for e in itertools.combinations(face_vertices(f), 2):
                    x, y = (a, frozenset(e)), (b, frozenset(p(v) for v in e))
                    i = next(k for k, c in enumerate(classes) if x in c)
                    j = next(k for k, c in enumerate(classes) if y in c)
                    if i != j:
                        classes[i] |= classes[j]
                        del classes[j]
                        changed = True
    return sorted(len(c) for c in classes)


@pytest.mark.parametrize("t", [1, 2])
def test_skeleton_counts_match_naive_oracle(t):
    for T in closed_census(t):
        sk = T.skeleton
        assert sk.num_vertices == _naive_vertex_classes(T)
        assert sorted(sk.edge_orders) == _naive_edge_classes(T)
        assert sum(sk.edge_orders) == 6 * T.size
        assert sk.num_faces == 2 * T.size


@pytest.mark.parametrize("t", [1, 2, 3])
def test_closed_manifolds_have_zero_euler_characteristic(t):
    for T in closed_census(t):
        assert T.skeleton.euler_characteristic() == 0
        rep = validate(T)
        assert rep.closed and rep.orientable and rep.manifold


def test_named_edge_orders(named):
    # the two one-tetrahedron 3-spheres: an edge of order one, and one of order five
    assert sorted(named("s3_2v").skeleton.edge_orders) == [1, 1, 4]
    assert 5 in named("s3_1v").skeleton.edge_orders
    assert named("s3_2v").skeleton.num_vertices == 2
    assert named("s3_1v").skeleton.num_vertices == 1


def test_bounded_triangulation_validity():
    # a single tetrahedron with two faces folded together is a ball
    T = Triangulation.from_pairs(1, [(0, 0, 0, "1023")])
    rep = validate(T)
    assert not rep.closed and rep.manifold and rep.orientable
    assert all(lk.is_disk or lk.is_sphere for lk in T.skeleton.vertex_links)


def test_invalid_edge_detected():
    # gluing face 3 to face 2 by a map reversing edge 01 collapses it onto itself backwards
    T = Triangulation.from_pairs(1, [(0, 3, 0, "1032")])
    assert not validate(T).edge_valid


def test_non_orientable_detected():
    # an even gluing inside one tetrahedron reverses orientation
    T = Triangulation.from_pairs(1, [(0, 0, 0, "2301"), (0, 1, 0, "2301")])
    assert T.orientation is None
    assert not validate(T).orientable


# ------------------------------------------------------------ relabelling

@settings(max_examples=40, deadline=None)
@given(st.data())
def test_relabel_preserves_invariants(data):
    T = data.draw(st.sampled_from(closed_census(2)))
    order = data.draw(st.permutations(range(T.size)))
    vps = [data.draw(perms) for _ in range(T.size)]
    R = relabel(T, order, vps)
    assert R.skeleton.num_vertices == T.skeleton.num_vertices
    assert sorted(R.skeleton.edge_orders) == sorted(T.skeleton.edge_orders)
    assert R.is_orientable == T.is_orientable
    back = relabel(R, [order.index(i) for i in range(T.size)],
                   [vps[order.index(i)].inverse() for i in range(T.size)])
    assert back == T


@pytest.mark.parametrize("t", [1, 2, 3])
def test_oriented_makes_every_gluing_odd(t):
    for T in closed_census(t):
        O = oriented(T)
        assert all(p.is_odd for _, _, _, p in O.glued_pairs())
        assert O.orientation == tuple([1] * O.size)


def test_components_and_sub_triangulation(named):
    A, B = named("l41"), named("rp3_2v")
    table = [list(r) for r in A.table] + [[(b + 1, p) for b, p in r] for r in B.table]
    U = Triangulation(table)
    assert components(U) == [[0], [1, 2]]
    assert sub_triangulation(U, [1, 2]) == B
