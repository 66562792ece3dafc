from __future__ import annotations

import itertools

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from effitri.normal_coords import (
    CoordSystem,
    MatchingSystem,
    NormalVector,
    admissible,
    matching_system,
    octagon_systems,
)
from effitri.vertex_enum import (
    ConeMembership,
    RayList,
    _in_cone_lp,
    bounded_solutions,
    extreme_rays,
    in_cone,
    is_extreme,
    oracle_verify,
)

from conftest import closed_census


def _system(rows) -> MatchingSystem:
    return MatchingSystem(CoordSystem(1), tuple(tuple(r) for r in rows), tuple(range(len(rows))))


def _support_oracle(rows, n=7) -> set:
    """Extreme rays as the minimal supports: one-dimensional kernel, positive on the support."""
    found = set()
    for k in range(1, n + 1):
        for S in itertools.combinations(range(n), k):
            sub = sympy.Matrix([[r[j] for j in S] for r in rows]) if rows else sympy.zeros(1, k)
            ker = sub.nullspace()
            if len(ker) != 1:
                continue
            v = ker[0]
            den = sympy.ilcm(1, 1, *[sympy.fraction(c)[1] for c in v])
            v = [int(c * den) for c in v]
            if all(c < 0 for c in v):
                v = [-c for c in v]
            if not all(c > 0 for c in v):
                continue
            g = sympy.igcd(0, *v)
            full = [0] * n
            for j, c in zip(S, v):
                full[j] = c // g
            found.add(tuple(full))
    return found


small_rows = st.lists(st.lists(st.integers(-2, 2), min_size=7, max_size=7), min_size=1, max_size=4)


@settings(max_examples=60, deadline=None)
@given(small_rows)
def test_double_description_matches_minimal_support_oracle(rows):
    A = _system(rows)
    got = {tuple(r.coords) for r in extreme_rays(A)}
    assert got == _support_oracle(rows)


@settings(max_examples=40, deadline=None)
@given(small_rows, st.integers(1, 5))
def test_rays_are_extreme_solutions_and_scale(rows, k):
    A = _system(rows)
    for r in extreme_rays(A):
        assert A.is_solution(r.coords)
        assert A.is_solution([k * c for c in r.coords])
        assert is_extreme(A, r.coords)
        assert r.content == 1


@pytest.mark.parametrize("t", [1, 2])
def test_enumeration_is_deterministic(t):
    for T in closed_census(t):
        A = matching_system(T)
        assert extreme_rays(A).serialize() == extreme_rays(A).serialize()


@pytest.mark.parametrize("t", [1, 2])
def test_quad_filter_equals_post_filter(t):
    for T in closed_census(t):
        A = matching_system(T)
        post = [r for r in extreme_rays(A) if admissible(r)]
        assert list(extreme_rays(A, quad_filter=True)) == post


def test_bounded_solutions_against_brute_force(named):
    T = named("l41")
    A = matching_system(T)
    brute = {x for x in itertools.product(range(3), repeat=7) if any(x) and A.is_solution(x)}
    assert set(bounded_solutions(A, 2)) == brute


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_cone_membership_agrees_with_exact_lp(data):
    # two independent routes to the same question: NNLS-guided certificate and exact simplex
    t = data.draw(st.sampled_from([1, 2]))
    T = data.draw(st.sampled_from(closed_census(t)))
    A = matching_system(T)
    rays = [tuple(r.coords) for r in extreme_rays(A)]
    drop = data.draw(st.integers(0, len(rays) - 1))
    gens = rays[:drop] + rays[drop + 1:]
    cone = ConeMembership(gens)
    sols = list(itertools.islice(bounded_solutions(A, 2), 300))
    for x in data.draw(st.lists(st.sampled_from(sols), min_size=1, max_size=15)):
        assert (x in cone) == _in_cone_lp(x, gens) == in_cone(x, gens)


@pytest.mark.parametrize("t", [1, 2])
def test_oracle_has_no_violations(t):
    for T in closed_census(t):
        for system in [CoordSystem(t)] + (octagon_systems(t) if t == 1 else []):
            A = matching_system(T, system)
            rep = oracle_verify(A, extreme_rays(A), bound=3)
            assert rep.ok, (T, system, rep)
            assert rep.solutions_checked > 0


def test_oracle_catches_a_missing_ray(census1):
    caught = 0
    for T in census1:
        A = matching_system(T)
        rays = extreme_rays(A)
        for k in range(len(rays)):
            partial = RayList(rays.system, rays.rays[:k] + rays.rays[k + 1:])
            rep = oracle_verify(A, partial, bound=3)
            # the dropped ray itself is a bounded solution outside the smaller cone
            if max(rays.rays[k].coords) <= 3:
                assert rep.outside_cone
                caught += 1
    assert caught > 0


def test_oracle_catches_corrupted_rays(named):
    T = named("l41")
    A = matching_system(T)
    rays = extreme_rays(A)
    first = rays.rays[0]
    bumped = list(first.coords)
    bumped[0] += 1
    bad = RayList(rays.system, (NormalVector(first.system, tuple(bumped)),) + rays.rays[1:])
    rep = oracle_verify(A, bad, bound=2)
    assert rep.not_solutions or rep.not_extreme
    # a sum of two rays is a solution but not extreme
    pair = NormalVector(first.system, tuple(p + q for p, q in zip(rays.rays[0].coords, rays.rays[1].coords)))
    rep = oracle_verify(A, RayList(rays.system, rays.rays + (pair,)), bound=2)
    assert rep.not_extreme
    # a doubled ray is not primitive
    rep = oracle_verify(A, RayList(rays.system, rays.rays + (first.scaled(2),)), bound=2)
    assert rep.not_primitive
