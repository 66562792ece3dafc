"""Generalized triangulations: gluing tables, skeleta, validity, text format.

A triangulation is a list of tetrahedra.  Face ``f`` of a tetrahedron is the
face opposite vertex ``f``.  A gluing ``(a, f) -> (b, p)`` identifies face
``f`` of tetrahedron ``a`` with face ``p(f)`` of tetrahedron ``b``, sending
vertex ``v`` of ``a`` to vertex ``p(v)`` of ``b``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import (
    EmptyTriangulation,
    IndexOutOfRange,
    InvolutionViolation,
    SelfGluedFace,
    TriSyntaxError,
)


class Perm4:
    """A permutation of {0, 1, 2, 3}.  Instances are interned."""

    __slots__ = ("images", "index", "sign", "_inverse")
    _cache: dict = {}

    def __new__(cls, images: Iterable[int]):
        key = tuple(images)
        perm = cls._cache.get(key)
        if perm is not None:
            return perm
        if sorted(key) != [0, 1, 2, 3]:
            raise ValueError(f"not a permutation of 0..3: {key}")
        perm = object.__new__(cls)
        perm.images = key
        inversions = sum(1 for i, j in itertools.combinations(range(4), 2) if key[i] > key[j])
        perm.sign = -1 if inversions % 2 else 1
        perm.index = None
        perm._inverse = None
        cls._cache[key] = perm
        return perm

    def __call__(self, v: int) -> int:
        return self.images[v]

    def __mul__(self, other: "Perm4") -> "Perm4":
        # (self * other)(v) == self(other(v))
        return Perm4(self.images[other.images[i]] for i in range(4))

    def inverse(self) -> "Perm4":
        if self._inverse is None:
            inv = [0] * 4
            for i, j in enumerate(self.images):
                inv[j] = i
            self._inverse = Perm4(inv)
        return self._inverse

    @property
    def is_odd(self) -> bool:
        return self.sign < 0

    def __str__(self):
        return "".join(map(str, self.images))

    def __repr__(self):
        return f"Perm4({self})"

    def __lt__(self, other: "Perm4") -> bool:
        return self.images < other.images

    def __reduce__(self):
        return (Perm4, (self.images,))

    @staticmethod
    def parse(text: str) -> "Perm4":
        return Perm4(int(c) for c in text)


ALL_PERMS: tuple = tuple(Perm4(p) for p in itertools.permutations(range(4)))
for _i, _p in enumerate(ALL_PERMS):
    _p.index = _i
IDENTITY = ALL_PERMS[0]


def transposition(i: int, j: int) -> Perm4:
    images = list(range(4))
    images[i], images[j] = j, i
    return Perm4(images)


# Edge numbering inside a tetrahedron.
EDGES: tuple = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_INDEX: dict = {}
for _k, (_u, _v) in enumerate(EDGES):
    EDGE_INDEX[(_u, _v)] = _k
    EDGE_INDEX[(_v, _u)] = _k


def face_vertices(f: int) -> tuple:
    return tuple(v for v in range(4) if v != f)


class UnionFind:
    """Union-find with an optional Z/2 label relative to the root."""

    def __init__(self, n: int = 0):
        self.parent = list(range(n))
        self.parity = [0] * n
        self.conflict = False

    def add(self) -> int:
        self.parent.append(len(self.parent))
        self.parity.append(0)
        return len(self.parent) - 1

    def find(self, x: int) -> tuple:
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        root = x
        # compress, accumulating parity from the top down
        acc = 0
        for node in reversed(path):
            acc ^= self.parity[node]
            self.parity[node] = acc
            self.parent[node] = root
        return root

    def root(self, x: int) -> int:
        return self.find(x)

    def rel(self, x: int) -> int:
        """Parity of ``x`` relative to its root."""
        self.find(x)
        return self.parity[x] if self.parent[x] != x else 0

    def union(self, x: int, y: int, odd: int = 0) -> bool:
        """Merge, recording parity(x) xor parity(y) == odd.  False on conflict."""
        rx, ry = self.find(x), self.find(y)
        px, py = self.rel(x), self.rel(y)
        if rx == ry:
            if (px ^ py) != odd:
                self.conflict = True
                return False
            return True
        if rx < ry:
            rx, ry, px, py = ry, rx, py, px
        self.parent[rx] = ry
        self.parity[rx] = px ^ py ^ odd
        return True

    def groups(self) -> list:
        """Classes as sorted member lists, ordered by least member."""
        by_root: dict = {}
        for x in range(len(self.parent)):
            by_root.setdefault(self.find(x), []).append(x)
        return sorted(by_root.values(), key=lambda g: g[0])


Gluing = Optional[tuple]  # (partner tet, Perm4) or None


class Triangulation:
    """Immutable gluing table.  Derived data is computed lazily and cached."""

    def __init__(self, gluings: Sequence[Sequence[Gluing]]):
        table = []
        for a, row in enumerate(gluings):
            if len(row) != 4:
                raise InvolutionViolation(f"tetrahedron {a} has {len(row)} faces")
            cells = []
            for g in row:
                if g is None:
                    cells.append(None)
                else:
                    b, p = g
                    if not isinstance(p, Perm4):
                        p = Perm4(p)
                    cells.append((int(b), p))
            table.append(tuple(cells))
        self._g = tuple(table)
        self._check()

    def _check(self):
        t = len(self._g)
        for a in range(t):
            for f in range(4):
                g = self._g[a][f]
                if g is None:
                    continue
                b, p = g
                if not 0 <= b < t:
                    raise IndexOutOfRange(f"tetrahedron {a} face {f}: partner {b} out of range 0..{t - 1}")
                if b == a and p(f) == f:
                    raise SelfGluedFace(f"tetrahedron {a} face {f} glued to itself")
                back = self._g[b][p(f)]
                if back is None or back[0] != a or back[1] is not p.inverse():
                    raise InvolutionViolation(
                        f"gluing ({a},{f}) -> ({b},{p}) is not matched by ({b},{p(f)})"
                    )

    @classmethod
    def from_pairs(cls, t: int, pairs: Iterable[tuple]) -> "Triangulation":
        """Build from ``(a, f, b, perm)`` entries, each face pair listed once."""
        table = [[None] * 4 for _ in range(t)]
        for a, f, b, p in pairs:
            if not isinstance(p, Perm4):
                p = Perm4.parse(p) if isinstance(p, str) else Perm4(p)
            for tet, face in ((a, f), (b, p(f))):
                if not (0 <= tet < t):
                    raise IndexOutOfRange(f"tetrahedron {tet} out of range")
                if table[tet][face] is not None:
                    raise InvolutionViolation(f"face ({tet},{face}) glued twice")
            table[a][f] = (b, p)
            table[b][p(f)] = (a, p.inverse())
        return cls(table)

    @property
    def size(self) -> int:
        return len(self._g)

    tet_count = size

    def gluing(self, tet: int, face: int) -> Gluing:
        return self._g[tet][face]

    @property
    def table(self) -> tuple:
        return self._g

    def glued_pairs(self) -> list:
        """Each internal face pairing once, as (a, f, b, perm) with (a, f) the smaller side."""
        out = []
        for a in range(self.size):
            for f in range(4):
                g = self._g[a][f]
                if g is None:
                    continue
                b, p = g
                if (a, f) < (b, p(f)):
                    out.append((a, f, b, p))
        return out

    def require_nonempty(self):
        if self.size == 0:
            raise EmptyTriangulation("triangulation has no tetrahedra")

    @property
    def is_closed(self) -> bool:
        return all(g is not None for row in self._g for g in row)

    @cached_property
    def orientation(self) -> Optional[tuple]:
        """Signs (+1/-1 per tetrahedron) making every gluing odd, or None."""
        uf = UnionFind(self.size)
        for a, f, b, p in self.glued_pairs():
            # same sign needed iff the gluing is odd
            if not uf.union(a, b, 0 if p.is_odd else 1):
                return None
        return tuple(-1 if uf.rel(a) else 1 for a in range(self.size))

    @property
    def is_orientable(self) -> bool:
        return self.orientation is not None

    @cached_property
    def skeleton(self) -> "Skeleton":
        return Skeleton(self)

    def __eq__(self, other):
        return isinstance(other, Triangulation) and self._g == other._g

    def __hash__(self):
        return hash(self._g)

    def __repr__(self):
        return f"<Triangulation t={self.size}>"

    def __str__(self):
        return serialize(self)


def relabel(T: Triangulation, tet_perm: Sequence[int], vertex_perms: Sequence[Perm4]) -> Triangulation:
    """Isomorphic copy: old tet ``a`` becomes ``tet_perm[a]`` with vertex ``v`` renamed ``vertex_perms[a](v)``."""
    t = T.size
    table = [[None] * 4 for _ in range(t)]
    for a in range(t):
        na, pa = tet_perm[a], vertex_perms[a]
        for f in range(4):
            g = T.gluing(a, f)
            if g is None:
                continue
            b, p = g
            nb, pb = tet_perm[b], vertex_perms[b]
            table[na][pa(f)] = (nb, pb * p * pa.inverse())
    return Triangulation(table)


def oriented(T: Triangulation) -> Triangulation:
    """Relabel negatively oriented tetrahedra so that every gluing is odd."""
    signs = T.orientation
    if signs is None:
        return T
    swap = transposition(2, 3)
    return relabel(T, range(T.size), [IDENTITY if s > 0 else swap for s in signs])


def components(T: Triangulation) -> list:
    """Connected components as sorted tetrahedron lists."""
    uf = UnionFind(T.size)
    for a, f, b, p in T.glued_pairs():
        uf.union(a, b)
    return uf.groups()


def sub_triangulation(T: Triangulation, tets: Sequence[int]) -> Triangulation:
    """Restriction to a union of components, tetrahedra renumbered in the given order."""
    new = {a: i for i, a in enumerate(tets)}
    table = []
    for a in tets:
        row = []
        for f in range(4):
            g = T.gluing(a, f)
            row.append(None if g is None else (new[g[0]], g[1]))
        table.append(row)
    return Triangulation(table)


@dataclass(frozen=True)
class VertexLink:
    vertex: int
    corners: tuple  # (tet, vertex) pairs
    euler_char: int
    orientable: bool
    boundary_edges: int

    @property
    def is_sphere(self) -> bool:
        return self.boundary_edges == 0 and self.euler_char == 2

    @property
    def is_disk(self) -> bool:
        return self.boundary_edges > 0 and self.euler_char == 1


class Skeleton:
    """Vertex, edge and face orbits plus vertex links.

    Orbits are numbered by their least ``(tet, index)`` member; each edge
    member carries a sign telling whether its ``u < v`` direction agrees with
    the representative's.
    """

    def __init__(self, T: Triangulation):
        self.tri = T
        t = T.size
        pairs = T.glued_pairs()

        vuf = UnionFind(4 * t)
        euf = UnionFind(6 * t)
        for a, f, b, p in pairs:
            for v in face_vertices(f):
                vuf.union(4 * a + v, 4 * b + p(v))
            for u, v in itertools.combinations(face_vertices(f), 2):
                pu, pv = p(u), p(v)
                euf.union(6 * a + EDGE_INDEX[(u, v)], 6 * b + EDGE_INDEX[(pu, pv)], 0 if pu < pv else 1)
        self.edge_valid = not euf.conflict

        self.vertex_orbits = [tuple(divmod(x, 4) for x in g) for g in vuf.groups()]
        self.vertex_of = {}
        for i, orbit in enumerate(self.vertex_orbits):
            for member in orbit:
                self.vertex_of[member] = i

        self.edge_orbits = []
        self.edge_of = {}
        for i, g in enumerate(euf.groups()):
            rep_par = euf.rel(g[0])
            orbit = []
            for x in g:
                sign = -1 if (euf.rel(x) ^ rep_par) else 1
                tet, e = divmod(x, 6)
                orbit.append((tet, e, sign))
                self.edge_of[(tet, e)] = (i, sign)
            self.edge_orbits.append(tuple(orbit))

        self.face_orbits = []
        self.face_of = {}
        for a in range(t):
            for f in range(4):
                if (a, f) in self.face_of:
                    continue
                orbit = [(a, f)]
                g = T.gluing(a, f)
                if g is not None:
                    orbit.append((g[0], g[1](f)))
                idx = len(self.face_orbits)
                for m in orbit:
                    self.face_of[m] = idx
                self.face_orbits.append(tuple(orbit))

        self.vertex_links = tuple(self._link(i) for i in range(len(self.vertex_orbits)))

    def _link(self, i: int) -> VertexLink:
        T = self.tri
        corners = self.vertex_orbits[i]
        index = {c: k for k, c in enumerate(corners)}
        luf = UnionFind(len(corners))
        # link vertices: (corner, other vertex w)
        lv = {}
        for c in corners:
            for w in range(4):
                if w != c[1]:
                    lv[(c, w)] = len(lv)
        vuf = UnionFind(len(lv))
        glued = boundary = 0
        for (a, v) in corners:
            for f in range(4):
                if f == v:
                    continue
                g = T.gluing(a, f)
                if g is None:
                    boundary += 1
                    continue
                b, p = g
                if (a, f) < (b, p(f)):
                    glued += 1
                luf.union(index[(a, v)], index[(b, p(v))], 0 if p.is_odd else 1)
                for w in face_vertices(f):
                    if w != v:
                        vuf.union(lv[((a, v), w)], lv[((b, p(v)), p(w))])
        n_vertices = len(vuf.groups())
        chi = n_vertices - (glued + boundary) + len(corners)
        return VertexLink(i, corners, chi, not luf.conflict, boundary)

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_orbits)

    @property
    def num_edges(self) -> int:
        return len(self.edge_orbits)

    @property
    def num_faces(self) -> int:
        return len(self.face_orbits)

    def edge_order(self, e: int) -> int:
        return len(self.edge_orbits[e])

    @property
    def edge_orders(self) -> list:
        return [len(o) for o in self.edge_orbits]

    def edge_rep(self, e: int) -> tuple:
        """Representative (tet, u, v) of an edge orbit, u < v."""
        tet, k, _ = self.edge_orbits[e][0]
        return (tet,) + EDGES[k]

    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges + self.num_faces - self.tri.size


@dataclass(frozen=True)
class ValidityReport:
    closed: bool
    orientable: bool
    vertex_links_ok: bool
    edge_valid: bool
    vertices: int

    @property
    def manifold(self) -> bool:
        return self.edge_valid and self.vertex_links_ok


def validate(T: Triangulation) -> ValidityReport:
    T.require_nonempty()
    sk = T.skeleton
    closed = T.is_closed
    links_ok = all(
        (lk.is_sphere if closed else (lk.is_sphere or lk.is_disk)) for lk in sk.vertex_links
    )
    return ValidityReport(closed, T.is_orientable, links_ok, sk.edge_valid, sk.num_vertices)


def skeleton(T: Triangulation) -> Skeleton:
    T.require_nonempty()
    return T.skeleton


# ---------------------------------------------------------------- text format

def _parse_token(tok: str, lineno: int, col: int, t: int):
    if tok == "-":
        return None
    if tok.count(":") != 1:
        raise TriSyntaxError(f"bad gluing token {tok!r}", lineno, col)
    left, right = tok.split(":")
    if not left.isdigit():
        raise TriSyntaxError(f"bad partner index {left!r}", lineno, col)
    if len(right) != 4 or not right.isdigit() or sorted(right) != list("0123"):
        raise TriSyntaxError(f"bad permutation {right!r}", lineno, col)
    b = int(left)
    if b >= t:
        raise IndexOutOfRange(f"line {lineno}, column {col}: partner {b} out of range 0..{t - 1}")
    return (b, Perm4.parse(right))


def parse(text: str) -> Triangulation:
    header = None
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if header is None:
            parts = stripped.split()
            if len(parts) != 2 or parts[0] != "tri" or not parts[1].isdigit():
                raise TriSyntaxError("expected header 'tri <t>'", lineno, 1)
            header = int(parts[1])
            if header == 0:
                raise EmptyTriangulation("triangulation has no tetrahedra")
            continue
        if len(rows) == header:
            raise TriSyntaxError(f"more than {header} tetrahedron lines", lineno, 1)
        tokens = []
        col = 0
        for tok in stripped.split():
            col = line.index(tok, col) + 1
            tokens.append((tok, col))
            col += len(tok) - 1
        if len(tokens) != 4:
            raise TriSyntaxError(f"expected 4 gluing tokens, found {len(tokens)}", lineno, 1)
        rows.append([_parse_token(tok, lineno, c, header) for tok, c in tokens])
    if header is None:
        raise TriSyntaxError("missing header 'tri <t>'", 1, 1)
    if len(rows) != header:
        raise TriSyntaxError(f"declared {header} tetrahedra but found {len(rows)} lines")
    return Triangulation(rows)


def serialize(T: Triangulation) -> str:
    lines = [f"tri {T.size}"]
    for row in T.table:
        lines.append(" ".join("-" if g is None else f"{g[0]}:{g[1]}" for g in row))
    return "\n".join(lines) + "\n"


def normalize_text(text: str) -> str:
    """Canonical whitespace form of a triangulation file (comments dropped)."""
    return serialize(parse(text))


def read_tri(path) -> Triangulation:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())
