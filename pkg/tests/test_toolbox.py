from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from effitri.errors import BudgetExceeded, IllegalMove, InvalidInput, NotClosed
from effitri.toolbox import (
    census,
    edge_order_report,
    homology_h1,
    is_isomorphic,
    iso_signature,
    pachner,
)
from effitri.toolbox.isosig import canonical_form
from effitri.toolbox.lint import cone_faces
from effitri.tri_core import ALL_PERMS, EDGE_INDEX, Triangulation, relabel, serialize, validate

from conftest import closed_census


def _brute_canonical(T: Triangulation) -> str:
    """Least serialisation over every relabelling (t! * 24^t maps)."""
    best = None
    for order in itertools.permutations(range(T.size)):
        for vps in itertools.product(ALL_PERMS, repeat=T.size):
            s = serialize(relabel(T, order, vps))
            if best is None or s < best:
                best = s
    return best


def _brute_one_tet() -> dict:
    """Every one-tetrahedron gluing table, by filter, up to brute-force isomorphism."""
    faces = range(4)
    matchings = [[]]
    for a, b in itertools.combinations(faces, 2):
        matchings.append([(a, b)])
    for (a, b), (c, d) in itertools.combinations(itertools.combinations(faces, 2), 2):
        if len({a, b, c, d}) == 4:
            matchings.append([(a, b), (c, d)])
    found = {"all": set(), "orientable": set(), "closed": set(), "closed-orientable": set()}
    for m in matchings:
        choices = [[p for p in ALL_PERMS if p(a) == b] for a, b in m]
        for perms in itertools.product(*choices):
            T = Triangulation.from_pairs(1, [(0, a, 0, p) for (a, _), p in zip(m, perms)])
            rep = validate(T)
            if not rep.manifold:
                continue
            key = _brute_canonical(T)
            found["all"].add(key)
            if rep.orientable:
                found["orientable"].add(key)
            if rep.closed:
                found["closed"].add(key)
                if rep.orientable:
                    found["closed-orientable"].add(key)
    return found


# ------------------------------------------------------------ census

def test_one_tetrahedron_census_matches_brute_force():
    brute = _brute_one_tet()
    for flt, keys in brute.items():
        got = census(1, flt)
        assert len(got) == len(keys), flt
        assert {_brute_canonical(T) for T in got} == keys


def test_one_tetrahedron_counts():
    # seven orientable identification spaces of one tetrahedron, four of them closed
    assert len(census(1, "orientable")) == 7
    closed = census(1, "closed-orientable")
    assert len(closed) == 4
    assert sorted(str(homology_h1(T)) for T in closed) == ["0", "0", "Z/4", "Z/5"]


def test_two_tetrahedron_census_structure(census2):
    assert len(census2) == 16
    assert len({iso_signature(T) for T in census2}) == 16
    rp3 = [T for T in census2 if str(homology_h1(T)) == "Z/2"]
    assert len(rp3) == 2
    assert sorted(T.skeleton.num_vertices for T in rp3) == [1, 2]


def test_two_tetrahedron_lens_space_l31_count(census2):
    # four distinct minimal triangulations of L(3,1) are expected; see the decisions ledger
    l31 = [T for T in census2 if str(homology_h1(T)) == "Z/3"]
    assert len(l31) == 4


def test_census_sorted_and_valid(census3):
    sigs = [iso_signature(T) for T in census3]
    assert sigs == sorted(sigs)
    assert len(set(sigs)) == len(sigs) == 76
    for T in census3:
        rep = validate(T)
        assert rep.closed and rep.orientable and rep.manifold


def test_census_rejects_bad_requests():
    with pytest.raises(InvalidInput):
        census(1, "nonsense")
    with pytest.raises(InvalidInput):
        census(0)
    with pytest.raises(BudgetExceeded):
        census(9)


# ------------------------------------------------------------ signatures

def test_signature_agrees_with_brute_force_isomorphism(census2):
    keys = [_brute_canonical(T) for T in census2]
    assert len(set(keys)) == len(keys)
    for A, B in itertools.combinations(census2, 2):
        assert not is_isomorphic(A, B)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_signature_is_relabelling_invariant(data):
    t = data.draw(st.sampled_from([1, 2, 3]))
    T = data.draw(st.sampled_from(closed_census(t)))
    order = data.draw(st.permutations(range(T.size)))
    vps = [data.draw(st.sampled_from(ALL_PERMS)) for _ in range(T.size)]
    R = relabel(T, order, vps)
    assert iso_signature(R) == iso_signature(T)
    assert canonical_form(R) == canonical_form(T)
    assert is_isomorphic(R, T)


def test_disconnected_signature(named):
    A, B = named("l41"), named("rp3_2v")
    U = Triangulation([list(r) for r in A.table] + [[(b + 1, p) for b, p in r] for r in B.table])
    V = Triangulation([[(b, p) for b, p in r] for r in B.table] + [[(2, p) for _, p in r] for r in A.table])
    assert "_" in iso_signature(U)
    assert iso_signature(U) == iso_signature(V)


# ------------------------------------------------------------ Pachner moves

def _move_targets(T, move):
    if move == "2-3":
        return range(T.skeleton.num_faces)
    if move == "3-2":
        return range(T.skeleton.num_edges)
    return range(T.size)


@pytest.mark.parametrize("move", ["2-3", "3-2", "1-4"])
def test_moves_preserve_homology_and_validity(move, census1, census2, census3):
    applied = 0
    inputs = census3 if move == "3-2" else census1 + census2
    for T in inputs:
        h = homology_h1(T)
        for loc in _move_targets(T, move):
            try:
                R = pachner(T, move, loc)
            except IllegalMove:
                continue
            applied += 1
            rep = validate(R)
            assert rep.closed and rep.orientable and rep.manifold
            assert homology_h1(R) == h
            delta = {"2-3": 1, "3-2": -1, "1-4": 3}[move]
            assert R.size == T.size + delta
            if move == "1-4":
                assert R.skeleton.num_vertices == T.skeleton.num_vertices + 1
            else:
                assert R.skeleton.num_vertices == T.skeleton.num_vertices
    assert applied > 0


def test_2_3_then_3_2_is_identity_up_to_isomorphism(census2):
    checked = 0
    for T in census2:
        for loc in range(T.skeleton.num_faces):
            try:
                R = pachner(T, "2-3", loc)
            except IllegalMove:
                continue
            # the new edge is edge 0 (vertices 0, 1) of the last three tetrahedra
            new_edge = R.skeleton.edge_of[(R.size - 3, 0)][0]
            assert R.skeleton.edge_order(new_edge) == 3
            back = pachner(R, "3-2", new_edge)
            assert is_isomorphic(back, T)
            checked += 1
    assert checked > 10


def test_illegal_moves(named):
    T = named("l41")
    with pytest.raises(IllegalMove):
        pachner(T, "2-3", 0)  # the only face orbits join the tetrahedron to itself
    with pytest.raises(IllegalMove):
        pachner(T, "3-2", 0)
    with pytest.raises(IllegalMove):
        pachner(T, "1-4", 5)
    with pytest.raises(IllegalMove):
        pachner(T, "4-4", 0)


# ------------------------------------------------------------ edge-order lint

def test_order_one_edge_of_two_vertex_sphere(named):
    rep = edge_order_report(named("s3_2v"))
    assert sorted(e.order for e in rep) == [1, 1, 4]
    assert sum(e.order1 for e in rep) == 2


def test_lint_flags_match_orders(census2):
    for T in census2:
        for e in edge_order_report(T):
            assert e.order == T.skeleton.edge_order(e.edge)
            assert (e.order1, e.order2, e.order3) == (e.order == 1, e.order == 2, e.order == 3)


def _face_edge_orbits(T, j):
    a, f = T.skeleton.face_orbits[j][0]
    verts = [v for v in range(4) if v != f]
    return [T.skeleton.edge_of[(a, EDGE_INDEX[(u, v)])][0] for u, v in itertools.combinations(verts, 2)]


def test_cone_faces(named):
    # the two-vertex sphere folds two faces together: the other faces become cones
    assert set(cone_faces(named("s3_2v"))) == {0, 1}
    # the one-vertex sphere has dunce-hat faces (all three sides identified), never cones
    T = named("s3_1v")
    assert cone_faces(T) == {}
    assert any(len(set(_face_edge_orbits(T, j))) == 1 for j in range(T.skeleton.num_faces))
    for name in ("s3_2v", "l31_b", "rp3_1v"):
        T = named(name)
        for j, e in cone_faces(T).items():
            orbits = _face_edge_orbits(T, j)
            assert len(set(orbits)) == 2 and orbits.count(e) == 2


def test_lint_requires_closed():
    T = Triangulation.from_pairs(1, [(0, 0, 0, "1023")])
    with pytest.raises(NotClosed):
        edge_order_report(T)
