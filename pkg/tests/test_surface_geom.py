from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from effitri.errors import MatchingViolated, NotAdmissible, NotOrientable
from effitri.normal_coords import (
    CoordSystem,
    NormalVector,
    admissible,
    closed_form_chi,
    matching_system,
    vertex_link_vector,
    weight,
)
from effitri.surface_geom import find_nvl_sphere, reconstruct, sphere_candidates
from effitri.toolbox import homology_h1
from effitri.tri_core import Triangulation
from effitri.vertex_enum import extreme_rays

from conftest import closed_census


def _admissible_rays(T):
    return [r for r in extreme_rays(matching_system(T)) if admissible(r)]


def _check_surface(T, x):
    S = reconstruct(T, x)
    assert S.euler_char == closed_form_chi(T, x)
    total = [0] * x.system.dim
    for c in S.components:
        total = [p + q for p, q in zip(total, c.vector.coords)]
        # each component is itself an admissible solution with its own closed-form chi
        assert admissible(c.vector)
        assert c.euler_char == closed_form_chi(T, c.vector)
        assert c.weight == weight(T, c.vector)
    assert tuple(total) == x.coords
    return S


@pytest.mark.parametrize("t", [1, 2])
def test_chi_cross_check_rays_and_pair_sums(t):
    for T in closed_census(t):
        rays = _admissible_rays(T)
        for r in rays:
            _check_surface(T, r)
        for a, b in itertools.combinations(rays, 2):
            s = a + b
            if admissible(s):
                _check_surface(T, s)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_chi_cross_check_on_three_tetrahedra(data):
    T = data.draw(st.sampled_from(closed_census(3)))
    rays = _admissible_rays(T)
    r = data.draw(st.sampled_from(rays))
    k = data.draw(st.integers(1, 3))
    _check_surface(T, r.scaled(k))


def test_vertex_links_reconstruct_as_spheres(census2):
    for T in census2:
        for v in range(T.skeleton.num_vertices):
            x = vertex_link_vector(T, v)
            S = _check_surface(T, x)
            assert len(S.components) == 1
            c = S.components[0]
            assert c.is_sphere and c.vertex_linking and not c.has_quad


def test_doubled_link_in_one_vertex_triangulation(named):
    T = named("l41")
    assert T.skeleton.num_vertices == 1
    S = reconstruct(T, vertex_link_vector(T, 0).scaled(2))
    assert len(S.components) == 2
    assert all(c.vertex_linking and c.is_sphere for c in S.components)


def test_projective_plane_double_in_rp3(named):
    for name in ("rp3_1v", "rp3_2v"):
        T = named(name)
        planes = [c for r in _admissible_rays(T) for c in reconstruct(T, r).components
                  if c.is_projective_plane and c.has_quad]
        assert planes, name
        doubled = reconstruct(T, planes[0].vector.scaled(2))
        assert len(doubled.components) == 1
        sphere = doubled.components[0]
        assert sphere.is_sphere and not sphere.vertex_linking
    # in the two-tetrahedron, two-vertex RP3 the double has four quads
    T = named("rp3_2v")
    quads = [c.quads for r in _admissible_rays(T) for c in reconstruct(T, r).components if c.is_projective_plane]
    assert 2 in quads


def test_sphere_selection_order(census3):
    seen = 0
    for T in census3[:30]:
        cands = sphere_candidates(T)
        keys = [(-c.weight, c.vector.coords) for c in cands]
        assert keys == sorted(keys)
        assert len(set(keys)) == len(keys)
        for c in cands:
            assert c.is_sphere and c.has_quad
        seen += len(cands)
    assert seen > 0


def test_find_nvl_sphere_examples(named, census2):
    assert find_nvl_sphere(named("s3_1v")) is None
    assert find_nvl_sphere(named("s3_2v")) is None
    assert find_nvl_sphere(named("rp3_1v")) is not None
    assert find_nvl_sphere(named("rp3_2v")) is not None
    assert find_nvl_sphere(named("s2xs1")) is not None
    lens = [T for T in census2 if str(homology_h1(T)) == "Z/3"]
    assert sum(find_nvl_sphere(T) is None for T in lens) == 1


def test_reconstruct_rejects_bad_vectors(named):
    T = named("l41")
    with pytest.raises(NotAdmissible):
        reconstruct(T, NormalVector(CoordSystem(1), (0, 0, 0, 0, 1, 1, 0)))
    with pytest.raises(MatchingViolated):
        reconstruct(T, NormalVector(CoordSystem(1), (1, 0, 0, 0, 0, 0, 0)))
    odd = Triangulation.from_pairs(1, [(0, 0, 0, "2301"), (0, 1, 0, "2301")])
    with pytest.raises(NotOrientable):
        sphere_candidates(odd)
