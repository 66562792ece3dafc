"""Reconstruction of normal and octagonal almost normal surfaces.

Within a tetrahedron, triangles about vertex ``v`` are numbered by depth from
``v``; quads (or octagons) of type ``i`` are numbered from the side of the
vertex split that contains vertex 0.  On a face, the arcs cutting off a vertex
are listed from that vertex outward and glued k-th to k-th across the face.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import NotAdmissible, NotClosed, NotOrientable
from .normal_coords import (
    ARCS,
    CoordSystem,
    NormalVector,
    _check_solution,
    admissible,
    edge_multiplicity,
    matching_system,
    octagon_cuts,
    quad_cuts,
    same_side,
    vertex_link_vector,
)
from .tri_core import EDGES, Triangulation, UnionFind, face_vertices
from .vertex_enum import extreme_rays

Disk = tuple  # (tet, kind, type, depth)


def _band(x: NormalVector, tet: int) -> tuple:
    """(kind, type, count) of the quad/octagon band in ``tet``; kind None if empty."""
    o = x.octagon(tet)
    if o:
        return "O", x.system.oct_type, o
    typ, q = x.quad_state(tet)
    if q:
        return "Q", typ, q
    return None, 0, 0


def _band_order(count: int, from_zero_side: bool) -> list:
    return list(range(count)) if from_zero_side else list(range(count - 1, -1, -1))


def _zero_side(typ: int, a: int) -> bool:
    return same_side(typ, 0, a) or a == 0


def arc_stack(x: NormalVector, tet: int, face: int, a: int) -> list:
    """Disks whose arcs cut off ``a`` on ``face`` of ``tet``, nearest ``a`` first."""
    out = [(tet, "T", a, d) for d in range(x.tri(tet, a))]
    kind, typ, n = _band(x, tet)
    if kind == "Q" and quad_cuts(typ, face, a):
        out += [(tet, "Q", typ, d) for d in _band_order(n, _zero_side(typ, a))]
    elif kind == "O" and octagon_cuts(typ, face, a):
        out += [(tet, "O", typ, d) for d in _band_order(n, _zero_side(typ, a))]
    return out


def edge_stack(x: NormalVector, tet: int, u: int, v: int) -> list:
    """Disks meeting edge (u, v) of ``tet`` in order from ``u`` (octagons may repeat)."""
    out = [(tet, "T", u, d) for d in range(x.tri(tet, u))]
    kind, typ, n = _band(x, tet)
    if kind is not None:
        order = _band_order(n, _zero_side(typ, u))
        if kind == "O" and same_side(typ, u, v):
            out += [(tet, kind, typ, d) for d in order + order[::-1]]
        elif not same_side(typ, u, v):
            out += [(tet, kind, typ, d) for d in order]
    out += [(tet, "T", v, d) for d in range(x.tri(tet, v) - 1, -1, -1)]
    return out


@dataclass(frozen=True)
class Component:
    index: int
    vector: NormalVector
    euler_char: int
    weight: int
    disks: int
    quads: int
    octagons: int
    vertex_linking: bool

    @property
    def is_sphere(self) -> bool:
        return self.euler_char == 2

    @property
    def is_projective_plane(self) -> bool:
        return self.euler_char == 1

    @property
    def has_quad(self) -> bool:
        return self.quads > 0

    @property
    def has_octagon(self) -> int:
        return self.octagons

    def tags(self) -> list:
        out = []
        if self.is_sphere:
            out.append("sphere")
        if self.is_projective_plane:
            out.append("projective-plane")
        if self.vertex_linking:
            out.append("vertex-linking")
        if self.quads:
            out.append("quad")
        if self.octagons:
            out.append(f"octagon={self.octagons}")
        return out


class NormalSurface:
    """Disks of an admissible solution, their arc gluings and components."""

    def __init__(self, T: Triangulation, x: NormalVector):
        if not admissible(x):
            raise NotAdmissible("vector violates the quad condition")
        _check_solution(T, x)
        self.tri = T
        self.vector = x
        disks = []
        for tet in range(T.size):
            for v in range(4):
                disks += [(tet, "T", v, d) for d in range(x.tri(tet, v))]
            kind, typ, n = _band(x, tet)
            if kind is not None:
                disks += [(tet, kind, typ, d) for d in range(n)]
        self.disks = disks
        self.index = {d: k for k, d in enumerate(disks)}
        uf = UnionFind(len(disks))
        self.arc_gluings = []
        for a, f, b, p in T.glued_pairs():
            for v in face_vertices(f):
                left = arc_stack(x, a, f, v)
                right = arc_stack(x, b, p(f), p(v))
                if len(left) != len(right):
                    raise AssertionError("arc counts disagree across a face on a solution")
                for k, (d1, d2) in enumerate(zip(left, right)):
                    uf.union(self.index[d1], self.index[d2])
                    self.arc_gluings.append(((a, f, v, k), (b, p(f), p(v), k)))
        groups = uf.groups()
        self.component_of = [0] * len(disks)
        for c, g in enumerate(groups):
            for k in g:
                self.component_of[k] = c
        self.components = [self._component(c, [disks[k] for k in g]) for c, g in enumerate(groups)]

    def _component(self, c: int, members: list) -> Component:
        T, x = self.tri, self.vector
        coords = [0] * x.system.dim
        arcs = quads = octs = 0
        for tet, kind, typ, _ in members:
            if kind == "O":
                coords[x.system.oct_index] += 1
                octs += 1
            else:
                coords[x.system.column(tet, kind, typ)] += 1
                quads += kind == "Q"
            arcs += ARCS[kind]
        vec = NormalVector(x.system, tuple(coords))
        sk = T.skeleton
        weight = 0
        for e in range(sk.num_edges):
            tet, u, v = sk.edge_rep(e)
            for d in edge_stack(x, tet, u, v):
                if self.component_of[self.index[d]] == c:
                    weight += 1
        chi = weight - arcs // 2 + len(members)
        linking = False
        if not quads and not octs:
            std = tuple(coords[: 7 * T.size])
            linking = any(vertex_link_vector(T, v).coords == std for v in range(sk.num_vertices))
        return Component(c, vec, chi, weight, len(members), quads, octs, linking)

    @property
    def euler_char(self) -> int:
        return sum(c.euler_char for c in self.components)


def reconstruct(T: Triangulation, x: NormalVector) -> NormalSurface:
    T.require_nonempty()
    return NormalSurface(T, x)


def _require_closed_orientable(T: Triangulation):
    T.require_nonempty()
    if not T.is_closed:
        raise NotClosed("triangulation has boundary faces")
    if not T.is_orientable:
        raise NotOrientable("triangulation is not orientable")


def sphere_candidates(T: Triangulation, rays=None) -> list:
    """Non-vertex-linking normal spheres read off the admissible extreme rays.

    A ray whose surface is a sphere with quads is taken as is; a one-sided
    projective plane with quads contributes its double, which is a sphere.
    Result is sorted by decreasing weight, then lexicographically by vector.
    """
    _require_closed_orientable(T)
    if rays is None:
        rays = extreme_rays(matching_system(T))
    found = {}
    for r in rays:
        if not admissible(r):
            continue
        surf = NormalSurface(T, r)
        for comp in surf.components:
            if not comp.has_quad:
                continue
            if comp.is_sphere:
                found[comp.vector.coords] = comp
            elif comp.is_projective_plane:
                doubled = NormalSurface(T, comp.vector.scaled(2))
                if len(doubled.components) == 1 and doubled.components[0].is_sphere:
                    found[doubled.components[0].vector.coords] = doubled.components[0]
    return sorted(found.values(), key=lambda c: (-c.weight, c.vector.coords))


def find_nvl_sphere(T: Triangulation) -> Optional[NormalVector]:
    cands = sphere_candidates(T)
    return cands[0].vector if cands else None
