"""Normal coordinates, matching equations and coordinate-level surface data.

Coordinates are tetrahedron-major: T0 T1 T2 T3 Q1 Q2 Q3 for each tetrahedron,
followed by a single octagon coordinate in octagon systems.  Quad ``Qi``
separates ``{0, i}`` from the other two vertices; octagon ``Oi`` has the same
vertex split, meeting the edges ``{0, i}`` and its opposite twice each.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional, Sequence

from .errors import InvalidInput, MatchingViolated, NotAdmissible, NotClosed
from .tri_core import EDGES, Triangulation, face_vertices


def quad_pairs(i: int) -> tuple:
    """The two vertex pairs split by quad/octagon type ``i``; the first contains 0."""
    rest = tuple(v for v in (1, 2, 3) if v != i)
    return (0, i), rest


def quad_type_of_pair(a: int, b: int) -> int:
    """Quad type whose vertex split puts ``a`` and ``b`` on the same side."""
    if 0 in (a, b):
        return a + b
    return 6 - a - b


def same_side(i: int, a: int, b: int) -> bool:
    return quad_type_of_pair(a, b) == i


def quad_cuts(i: int, face: int, a: int) -> bool:
    """Does a quad of type i, on ``face``, cut off the face vertex ``a``?"""
    return same_side(i, a, face)


def octagon_cuts(i: int, face: int, a: int) -> bool:
    """Does an octagon of type i, on ``face``, have an arc cutting off ``a``?"""
    return not same_side(i, a, face)


def edge_multiplicity(kind: str, typ: int, u: int, v: int) -> int:
    """Number of points in which one disk meets tetrahedron edge (u, v)."""
    if kind == "T":
        return 1 if typ in (u, v) else 0
    if kind == "Q":
        return 0 if same_side(typ, u, v) else 1
    if kind == "O":
        return 2 if same_side(typ, u, v) else 1
    raise ValueError(kind)


ARCS = {"T": 3, "Q": 4, "O": 8}


@dataclass(frozen=True)
class CoordSystem:
    tets: int
    oct_tet: Optional[int] = None
    oct_type: Optional[int] = None

    def __post_init__(self):
        if self.tets < 1:
            raise InvalidInput("coordinate system needs at least one tetrahedron")
        if (self.oct_tet is None) != (self.oct_type is None):
            raise InvalidInput("octagon system needs both a tetrahedron and a type")
        if self.oct_tet is not None:
            if not 0 <= self.oct_tet < self.tets or self.oct_type not in (1, 2, 3):
                raise InvalidInput(f"bad octagon system ({self.oct_tet}, {self.oct_type})")

    @property
    def is_octagon(self) -> bool:
        return self.oct_tet is not None

    @property
    def dim(self) -> int:
        return 7 * self.tets + (1 if self.is_octagon else 0)

    @property
    def oct_index(self) -> Optional[int]:
        return 7 * self.tets if self.is_octagon else None

    @property
    def frozen(self) -> tuple:
        """Columns forced to zero (the quads of the octagon tetrahedron)."""
        if not self.is_octagon:
            return ()
        return tuple(7 * self.oct_tet + 4 + k for k in range(3))

    def tag(self) -> str:
        if self.is_octagon:
            return f"system octagon {self.tets} {self.oct_tet} {self.oct_type}"
        return f"system standard {self.tets}"

    @staticmethod
    def parse_tag(line: str) -> "CoordSystem":
        parts = line.split()
        if len(parts) == 3 and parts[:2] == ["system", "standard"]:
            return CoordSystem(int(parts[2]))
        if len(parts) == 5 and parts[:2] == ["system", "octagon"]:
            return CoordSystem(int(parts[2]), int(parts[3]), int(parts[4]))
        raise InvalidInput(f"bad coordinate system line {line!r}")

    def column(self, tet: int, kind: str, typ: int) -> int:
        if kind == "T":
            return 7 * tet + typ
        if kind == "Q":
            return 7 * tet + 3 + typ
        if kind == "O":
            if tet != self.oct_tet or typ != self.oct_type:
                raise ValueError("no such octagon column")
            return 7 * self.tets
        raise ValueError(kind)


def octagon_systems(tets: int) -> list:
    return [CoordSystem(tets, a, i) for a in range(tets) for i in (1, 2, 3)]


@dataclass(frozen=True)
class NormalVector:
    system: CoordSystem
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.system.dim:
            raise InvalidInput(f"vector has {len(self.coords)} coordinates, system needs {self.system.dim}")
        if any(c < 0 for c in self.coords):
            raise InvalidInput("normal coordinates must be nonnegative")

    def __getitem__(self, k):
        return self.coords[k]

    def __add__(self, other: "NormalVector") -> "NormalVector":
        if other.system != self.system:
            raise InvalidInput("cannot add vectors from different systems")
        return NormalVector(self.system, tuple(x + y for x, y in zip(self.coords, other.coords)))

    def scaled(self, k: int) -> "NormalVector":
        return NormalVector(self.system, tuple(k * x for x in self.coords))

    def tri(self, tet: int, v: int) -> int:
        return self.coords[7 * tet + v]

    def quad(self, tet: int, i: int) -> int:
        return self.coords[7 * tet + 3 + i]

    def octagon(self, tet: int) -> int:
        if self.system.is_octagon and tet == self.system.oct_tet:
            return self.coords[-1]
        return 0

    def quad_state(self, tet: int) -> tuple:
        """(quad type or 0, count); raises NotAdmissible on two quad types."""
        nz = [(i, self.quad(tet, i)) for i in (1, 2, 3) if self.quad(tet, i)]
        if len(nz) > 1:
            raise NotAdmissible(f"tetrahedron {tet} carries more than one quad type")
        return nz[0] if nz else (0, 0)

    @property
    def content(self) -> int:
        g = 0
        for c in self.coords:
            g = gcd(g, c)
        return g

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def serialize(self) -> str:
        return self.system.tag() + "\n" + " ".join(map(str, self.coords)) + "\n"

    def __str__(self):
        return " ".join(map(str, self.coords))

    @staticmethod
    def parse(text: str) -> "NormalVector":
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if len(lines) != 2:
            raise InvalidInput("vector text needs a system line and a coordinate line")
        system = CoordSystem.parse_tag(lines[0])
        try:
            coords = tuple(int(x) for x in lines[1].split())
        except ValueError:
            raise InvalidInput("coordinates must be integers") from None
        return NormalVector(system, coords)


@dataclass(frozen=True)
class MatchingSystem:
    system: CoordSystem
    rows: tuple  # tuples of ints, length system.dim
    labels: tuple  # (a, f, b, arc vertex) per row

    @property
    def ncols(self) -> int:
        return self.system.dim

    def residual(self, x: Sequence[int]) -> list:
        return [sum(r[j] * x[j] for j in range(len(x)) if r[j]) for r in self.rows]

    def is_solution(self, x: Sequence[int]) -> bool:
        return all(v == 0 for v in self.residual(x))


def arc_count_terms(system: CoordSystem, tet: int, face: int, a: int) -> list:
    """Columns (with multiplicity) whose disks induce the arc cutting off ``a`` on ``face``."""
    cols = [system.column(tet, "T", a)]
    for i in (1, 2, 3):
        if quad_cuts(i, face, a):
            cols.append(system.column(tet, "Q", i))
    if system.is_octagon and tet == system.oct_tet and octagon_cuts(system.oct_type, face, a):
        cols.append(system.oct_index)
    return cols


def matching_system(T: Triangulation, system: Optional[CoordSystem] = None) -> MatchingSystem:
    T.require_nonempty()
    if not T.is_closed:
        raise NotClosed("matching equations need a closed triangulation")
    if system is None:
        system = CoordSystem(T.size)
    if system.tets != T.size:
        raise InvalidInput("coordinate system does not match the triangulation")
    rows, labels = [], []
    for a, f, b, p in T.glued_pairs():
        for v in face_vertices(f):
            row = [0] * system.dim
            for c in arc_count_terms(system, a, f, v):
                row[c] += 1
            for c in arc_count_terms(system, b, p(f), p(v)):
                row[c] -= 1
            rows.append(tuple(row))
            labels.append((a, f, b, v))
    return MatchingSystem(system, tuple(rows), tuple(labels))


def admissible(x: NormalVector) -> bool:
    for c in x.system.frozen:
        if x.coords[c]:
            return False
    for tet in range(x.system.tets):
        if sum(1 for i in (1, 2, 3) if x.quad(tet, i)) > 1:
            return False
    return True


def vertex_link_vector(T: Triangulation, v: int) -> NormalVector:
    T.require_nonempty()
    coords = [0] * (7 * T.size)
    for tet, corner in T.skeleton.vertex_orbits[v]:
        coords[7 * tet + corner] = 1
    return NormalVector(CoordSystem(T.size), tuple(coords))


def edge_count(x: NormalVector, tet: int, u: int, v: int) -> int:
    """Points of the surface on edge (u, v) of ``tet``."""
    n = x.tri(tet, u) + x.tri(tet, v)
    for i in (1, 2, 3):
        n += x.quad(tet, i) * edge_multiplicity("Q", i, u, v)
    if x.octagon(tet):
        n += x.octagon(tet) * edge_multiplicity("O", x.system.oct_type, u, v)
    return n


def _check_solution(T: Triangulation, x: NormalVector):
    if x.system.tets != T.size:
        raise InvalidInput("vector does not match the triangulation")
    if not matching_system(T, x.system).is_solution(x.coords):
        raise MatchingViolated("vector does not satisfy the matching equations")


def weight(T: Triangulation, x: NormalVector) -> int:
    _check_solution(T, x)
    sk = T.skeleton
    total = 0
    for e in range(sk.num_edges):
        tet, u, v = sk.edge_rep(e)
        total += edge_count(x, tet, u, v)
    return total


def disk_totals(x: NormalVector) -> tuple:
    """(number of disks, number of boundary arcs)."""
    disks = arcs = 0
    for tet in range(x.system.tets):
        for v in range(4):
            disks += x.tri(tet, v)
            arcs += 3 * x.tri(tet, v)
        for i in (1, 2, 3):
            disks += x.quad(tet, i)
            arcs += 4 * x.quad(tet, i)
        disks += x.octagon(tet)
        arcs += 8 * x.octagon(tet)
    return disks, arcs


def closed_form_chi(T: Triangulation, x: NormalVector) -> int:
    if not admissible(x):
        raise NotAdmissible("Euler characteristic needs an admissible vector")
    w = weight(T, x)
    disks, arcs = disk_totals(x)
    return w - arcs // 2 + disks


def edge_weights(T: Triangulation, x: NormalVector) -> list:
    """Points on each edge orbit, measured on its representative."""
    sk = T.skeleton
    return [edge_count(x, *sk.edge_rep(e)) for e in range(sk.num_edges)]


__all__ = [
    "ARCS",
    "CoordSystem",
    "EDGES",
    "MatchingSystem",
    "NormalVector",
    "admissible",
    "closed_form_chi",
    "edge_count",
    "edge_multiplicity",
    "edge_weights",
    "matching_system",
    "octagon_cuts",
    "octagon_systems",
    "quad_cuts",
    "quad_pairs",
    "quad_type_of_pair",
    "vertex_link_vector",
    "weight",
]
