"""Crushing a triangulation along a normal 2-sphere.

The complement of the sphere ``S`` is cut by the triangulation into regions:

* ``("V", tet, v)``      the corner of ``tet`` at vertex ``v`` (contains the vertex)
* ``("TG", tet, v, k)``  between triangles k-1 and k about ``v``        (type III)
* ``("QG", tet, k)``     between quads k-1 and k                        (type IV)
* ``("P", tet, side)``   truncated prism on one side of the quads       (type II)
* ``("C", tet)``         truncated tetrahedron of a quad-free tet       (type I)

Side 0 of a quad type is the vertex pair containing vertex 0.  A face of a
tetrahedron is cut by the arcs of ``S`` into pieces; piece ``(a, k)`` lies
between the (k-1)-th and k-th arcs cutting off face vertex ``a`` (the corner
at ``a`` when k = 0) and the ``"mid"`` piece is what remains.  Pieces glue
k-th to k-th across face gluings, which is what joins regions together.

The product region, its fibre orientation and its end fills on ``S`` are
computed from these pieces, and the crushed triangulation is obtained from the
surviving truncated tetrahedra with faces re-paired along chains of prisms.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import InvalidInput, NotClosed, NotOrientable
from .normal_coords import NormalVector, quad_pairs, same_side
from .surface_geom import NormalSurface, arc_stack, edge_stack
from .tri_core import (
    EDGE_INDEX,
    Perm4,
    Triangulation,
    UnionFind,
    components,
    face_vertices,
    sub_triangulation,
    transposition,
    validate,
)

CRUSHED = "Crushed"
TWISTED = "ObstructionTwistedIBundle"
SINGLE_EDGE_CYCLE = "ObstructionSingleEdgeCycle"
ONE_ANNULUS_CYCLE = "ObstructionCycleOneAnnulus"
THREE_ANNULI_CYCLE = "ObstructionCycleThreeAnnuli"
ALL_CONSUMED = "AllConsumed"
NO_VERTEX_FREE_SIDE = "NoVertexFreeSide"


class _Tet:
    """Disk counts of the sphere inside one tetrahedron."""

    __slots__ = ("t", "qtype", "q")

    def __init__(self, x: NormalVector, tet: int):
        self.t = [x.tri(tet, v) for v in range(4)]
        self.qtype, self.q = x.quad_state(tet)

    def side(self, v: int) -> int:
        return 0 if v in quad_pairs(self.qtype)[0] else 1

    def pair(self, side: int) -> tuple:
        return quad_pairs(self.qtype)[side]


class RegionComplex:
    """Regions of the complement of one sphere component and how they meet."""

    def __init__(self, T: Triangulation, x: NormalVector):
        T.require_nonempty()
        if not T.is_closed:
            raise NotClosed("crushing needs a closed triangulation")
        if not T.is_orientable:
            raise NotOrientable("crushing needs an orientable triangulation")
        self.tri = T
        self.vector = x
        self.surface = NormalSurface(T, x)
        if len(self.surface.components) != 1 or not self.surface.components[0].is_sphere:
            raise InvalidInput("crushing needs a vector describing a single normal sphere")
        self.tets = [_Tet(x, a) for a in range(T.size)]
        self._build_regions()
        self._glue_pieces()

    # ------------------------------------------------------------ regions

    def _build_regions(self):
        regions = []
        for a, d in enumerate(self.tets):
            for v in range(4):
                regions.append(("V", a, v))
                regions += [("TG", a, v, k) for k in range(1, d.t[v])]
            if d.q:
                regions += [("QG", a, k) for k in range(1, d.q)]
                regions += [("P", a, 0), ("P", a, 1)]
            else:
                regions.append(("C", a))
        self.regions = regions
        self.rindex = {r: i for i, r in enumerate(regions)}
        self.merges = []
        for a, d in enumerate(self.tets):
            for v in range(4):
                if d.t[v] == 0:
                    other = ("P", a, d.side(v)) if d.q else ("C", a)
                    self.merges.append((("V", a, v), other))

    def piece_counts(self, tet: int, face: int) -> dict:
        """Number of arcs cutting off each face vertex."""
        return {a: len(arc_stack(self.vector, tet, face, a)) for a in face_vertices(face)}

    def piece_owner(self, tet: int, face: int, piece) -> tuple:
        d = self.tets[tet]
        if piece == "mid":
            return ("P", tet, 1 - d.side(face)) if d.q else ("C", tet)
        a, k = piece
        ta = d.t[a]
        if k == 0:
            return ("V", tet, a)
        if k < ta:
            return ("TG", tet, a, k)
        if k == ta:
            return ("P", tet, d.side(a))
        if _zero_side(d.qtype, a):
            return ("QG", tet, k - ta)
        return ("QG", tet, d.q - k + ta)

    def face_pieces(self, tet: int, face: int) -> list:
        out = ["mid"]
        for a, n in self.piece_counts(tet, face).items():
            out += [(a, k) for k in range(n)]
        return out

    def _glue_pieces(self):
        T = self.tri
        uf = UnionFind(len(self.regions))
        for r1, r2 in self.merges:
            uf.union(self.rindex[r1], self.rindex[r2])
        self.piece_pairs = []  # (A, f, piece, B, g, piece', owner A, owner B)
        for a, f, b, p in T.glued_pairs():
            g = p(f)
            for piece in self.face_pieces(a, f):
                other = "mid" if piece == "mid" else (p(piece[0]), piece[1])
                oa = self.piece_owner(a, f, piece)
                ob = self.piece_owner(b, g, other)
                self.piece_pairs.append((a, f, piece, b, g, other, oa, ob))
                uf.union(self.rindex[oa], self.rindex[ob])
        self._uf = uf
        roots = {}
        self.component_of = {}
        for r in self.regions:
            root = uf.root(self.rindex[r])
            self.component_of[r] = roots.setdefault(root, len(roots))
        self.num_components = len(roots)
        has_vertex = [False] * self.num_components
        for r in self.regions:
            if r[0] == "V":
                has_vertex[self.component_of[r]] = True
        self.vertex_free = [c for c in range(self.num_components) if not has_vertex[c]]
        self.separating = self.num_components == 2
        self.x_component: Optional[int] = self.vertex_free[0] if self.vertex_free else None

    def owner_class(self, r: tuple) -> int:
        """Canonical id of a region after internal merges."""
        return self._uf.root(self.rindex[r])

    def in_x(self, r: tuple) -> bool:
        return self.x_component is not None and self.component_of[r] == self.x_component

    def regions_in(self, comp: int, kinds=("C", "P", "TG", "QG", "V")) -> list:
        return [r for r in self.regions if r[0] in kinds and self.component_of[r] == comp]

    def boundary_disks(self, r: tuple) -> list:
        """Disks of S on the boundary of a region."""
        kind, a = r[0], r[1]
        d = self.tets[a]
        if kind == "C":
            return [(a, "T", v, d.t[v] - 1) for v in range(4) if d.t[v]]
        if kind == "P":
            side = r[2]
            out = [(a, "Q", d.qtype, 0 if side == 0 else d.q - 1)]
            out += [(a, "T", v, d.t[v] - 1) for v in d.pair(side) if d.t[v]]
            return out
        if kind == "TG":
            v, k = r[2], r[3]
            return [(a, "T", v, k - 1), (a, "T", v, k)]
        if kind == "QG":
            k = r[2]
            return [(a, "Q", d.qtype, k - 1), (a, "Q", d.qtype, k)]
        v = r[2]
        return [(a, "T", v, 0)] if d.t[v] else []

    def audit(self) -> list:
        counts = {}
        for r in self.regions:
            counts[r[0]] = counts.get(r[0], 0) + 1
        return [
            "regions: " + " ".join(f"{k}={counts[k]}" for k in sorted(counts)),
            f"components: {self.num_components} separating={self.separating} "
            f"vertex_free={len(self.vertex_free)}",
        ]


def _zero_side(qtype: int, a: int) -> bool:
    return a == 0 or same_side(qtype, 0, a)


def build_region_complex(T: Triangulation, x: NormalVector) -> RegionComplex:
    return RegionComplex(T, x)


# ------------------------------------------------------------ the sphere S as a cell complex

class SphereCells:
    """Points, arcs and disks of S with their incidences."""

    def __init__(self, rc: RegionComplex):
        T, x = rc.tri, rc.vector
        sk = T.skeleton
        self.rc = rc
        self.weights = []
        self.point_of = {}  # (tet, u, v, local index from u) -> point id
        for e in range(sk.num_edges):
            rep_tet, ru, rv = sk.edge_rep(e)
            w = len(edge_stack(x, rep_tet, ru, rv))
            self.weights.append(w)
        for (tet, k), (e, sign) in sk.edge_of.items():
            u, v = _edge_verts(k)
            w = self.weights[e]
            for i in range(w):
                rep_i = i if sign > 0 else w - 1 - i
                self.point_of[(tet, u, v, i)] = ("pt", e, rep_i)
                self.point_of[(tet, v, u, w - 1 - i)] = ("pt", e, rep_i)
        # canonical arc names: on the first member of each face orbit
        self.arc_name = {}
        for a, f, b, p in T.glued_pairs():
            for v in face_vertices(f):
                for k in range(len(arc_stack(x, a, f, v))):
                    name = ("arc", a, f, v, k)
                    self.arc_name[(a, f, v, k)] = name
                    self.arc_name[(b, p(f), p(v), k)] = name
        self.cells = set()
        self.faces_of = {}  # cell -> cells in its boundary
        disk_pos = {}
        for tet in range(T.size):
            for u in range(4):
                for v in range(4):
                    if u != v:
                        for i, dk in enumerate(edge_stack(x, tet, u, v)):
                            disk_pos.setdefault((dk, u, v), i)
        for name in set(self.arc_name.values()):
            _, a, f, v, k = name
            dk = arc_stack(x, a, f, v)[k]
            ends = []
            for w in face_vertices(f):
                if w != v:
                    ends.append(self.point_of[(a, v, w, disk_pos[(dk, v, w)])])
            self.faces_of[name] = tuple(ends)
            self.cells.add(name)
            self.cells.update(ends)
        for dk in rc.surface.disks:
            tet = dk[0]
            arcs = []
            for f in range(4):
                for v in face_vertices(f):
                    stack = arc_stack(x, tet, f, v)
                    if dk in stack:
                        arcs.append(self.arc_name[(tet, f, v, stack.index(dk))])
            pts = set()
            for arc in arcs:
                pts.update(self.faces_of[arc])
            self.faces_of[("disk",) + dk] = tuple(arcs) + tuple(sorted(pts))
            self.cells.add(("disk",) + dk)
        for c in self.cells:
            self.faces_of.setdefault(c, ())

    def closure(self, cells) -> set:
        out = set()
        for c in cells:
            out.add(c)
            out.update(self.faces_of[c])
        return out

    @staticmethod
    def dim(cell) -> int:
        return {"pt": 0, "arc": 1, "disk": 2}[cell[0]]

    def euler(self, cells) -> int:
        return sum((-1) ** self.dim(c) for c in cells)

    def components_of(self, cells) -> list:
        cells = list(cells)
        idx = {c: i for i, c in enumerate(cells)}
        uf = UnionFind(len(cells))
        for c in cells:
            for f in self.faces_of[c]:
                if f in idx:
                    uf.union(idx[c], idx[f])
        return [[cells[i] for i in g] for g in uf.groups()]

    def fill(self, k0: set, k1: set) -> set:
        """k0 together with the complementary pieces of S that avoid k1."""
        rest = self.cells - k0
        out = set(k0)
        for comp in self.components_of(rest):
            comp = set(comp)
            if not comp & k1:
                out |= comp
        return out


def _edge_verts(k: int) -> tuple:
    from .tri_core import EDGES
    return EDGES[k]


# ------------------------------------------------------------ product region

@dataclass
class ProductComponent:
    elements: list
    twisted: bool
    ends: tuple = (frozenset(), frozenset())
    fills: tuple = (frozenset(), frozenset())
    fills_ok: bool = True
    consumed: frozenset = frozenset()
    skipped: bool = False


@dataclass
class ProductRegion:
    components: list
    twisted: bool
    consumed: frozenset
    greedy_consumed: frozenset
    equals_x: bool


def _segments_and_trapezoids(rc: RegionComplex, cells: SphereCells):
    """Elements of P(C) inside X with their parity relations."""
    T, x = rc.tri, rc.vector
    sk = T.skeleton
    elements = {}  # element -> (lower end, upper end)
    relations = []  # (elem1, elem2, parity)

    def seg_owner(tet, u, v, g):
        # owner of local gap g along edge u -> v in tet
        d = rc.tets[tet]
        w = len(edge_stack(x, tet, u, v))
        tu, tv = d.t[u], d.t[v]
        if g < tu:
            return ("V", tet, u) if g == 0 else ("TG", tet, u, g)
        gv = w - g
        if gv < tv:
            return ("V", tet, v) if gv == 0 else ("TG", tet, v, gv)
        if not d.q:
            return ("C", tet)
        if same_side(d.qtype, u, v):
            return ("P", tet, d.side(u))
        if g == tu:
            return ("P", tet, d.side(u))
        if gv == tv:
            return ("P", tet, d.side(v))
        j = g - tu
        return ("QG", tet, j) if _zero_side(d.qtype, u) else ("QG", tet, d.q - j)

    for e in range(sk.num_edges):
        w = cells.weights[e]
        tet, u, v = sk.edge_rep(e)
        for j in range(1, w):
            if rc.in_x(seg_owner(tet, u, v, j)):
                elements[("seg", e, j)] = (("pt", e, j - 1), ("pt", e, j))
        # segments of the truncated edge when the sphere misses it entirely
    def seg_id(tet, a, b, local_gap):
        e, sign = sk.edge_of[(tet, EDGE_INDEX[(a, b)])]
        w = cells.weights[e]
        forward = (sign > 0) == (a < b)
        if forward:
            return ("seg", e, local_gap), 0
        return ("seg", e, w - local_gap), 1

    for (a, f, piece, b, g, other, oa, ob) in rc.piece_pairs:
        if piece == "mid" or piece[1] == 0:
            continue
        if not (rc.in_x(oa) or rc.in_x(ob)):
            continue
        v, k = piece
        trap = ("trap", a, f, v, k)
        lower = cells.arc_name[(a, f, v, k - 1)]
        upper = cells.arc_name[(a, f, v, k)]
        elements[trap] = (lower, upper)
        for tet, face, vert, owner in ((a, f, v, oa), (b, g, other[0], ob)):
            for w_ in face_vertices(face):
                if w_ != vert:
                    sid, par = seg_id(tet, vert, w_, k)
                    relations.append((trap, sid, par))
            if owner[0] == "TG":
                relations.append((owner, trap, 0))
            elif owner[0] == "QG":
                d = rc.tets[tet]
                relations.append((owner, trap, 0 if _zero_side(d.qtype, vert) else 1))
    for r in rc.regions:
        if r[0] in ("TG", "QG") and rc.in_x(r):
            a = r[1]
            d = rc.tets[a]
            if r[0] == "TG":
                elements[r] = (("disk", a, "T", r[2], r[3] - 1), ("disk", a, "T", r[2], r[3]))
            else:
                elements[r] = (("disk", a, "Q", d.qtype, r[2] - 1), ("disk", a, "Q", d.qtype, r[2]))
    relations = [rel for rel in relations if rel[0] in elements and rel[1] in elements]
    return elements, relations


def product_region(rc: RegionComplex, cells: Optional[SphereCells] = None) -> ProductRegion:
    if rc.x_component is None:
        raise InvalidInput("no vertex-free side to build a product region in")
    if cells is None:
        cells = SphereCells(rc)
    elements, relations = _segments_and_trapezoids(rc, cells)
    names = sorted(elements, key=repr)
    idx = {n: i for i, n in enumerate(names)}
    uf = UnionFind(len(names))
    conflict_roots = set()
    for e1, e2, par in relations:
        if not uf.union(idx[e1], idx[e2], par):
            conflict_roots.add(idx[e1])
    twisted_roots = {uf.root(i) for i in conflict_roots}
    comps = []
    for g in uf.groups():
        elems = [names[i] for i in g]
        root = uf.root(g[0])
        pc = ProductComponent(elems, root in twisted_roots)
        if not pc.twisted:
            ends = (set(), set())
            for n in elems:
                par = uf.rel(idx[n])
                lo, hi = elements[n]
                ends[par].add(lo)
                ends[1 - par].add(hi)
            k0, k1 = cells.closure(ends[0]), cells.closure(ends[1])
            if k0 & k1:
                pc.twisted = True
            else:
                d0, d1 = cells.fill(k0, k1), cells.fill(k1, k0)
                pc.ends = (frozenset(k0), frozenset(k1))
                pc.fills = (frozenset(d0), frozenset(d1))
                pc.fills_ok = (
                    not d0 & d1
                    and len(cells.components_of(d0)) == 1
                    and len(cells.components_of(d1)) == 1
                    and cells.euler(d0) == 1
                    and cells.euler(d1) == 1
                )
        comps.append(pc)
    twisted = any(pc.twisted for pc in comps)

    x_regions = rc.regions_in(rc.x_component, ("C", "P", "TG", "QG"))
    non_product = [r for r in x_regions if r[0] in ("C", "P")]
    equals_x = not non_product

    consumed = set()
    greedy = set()
    covered = set()
    if not twisted:
        for pc in comps:
            pc.consumed = frozenset(_consumed_by(rc, pc))
            consumed |= pc.consumed
            end_cells = pc.ends[0] | pc.ends[1]
            if end_cells and end_cells <= covered:
                pc.skipped = True
                continue
            covered |= pc.fills[0] | pc.fills[1]
            greedy |= pc.consumed
    return ProductRegion(comps, twisted, frozenset(consumed), frozenset(greedy), equals_x)


def _consumed_by(rc: RegionComplex, pc: ProductComponent) -> set:
    """Truncated tetrahedra and prisms of X trapped between the two fills of pc."""
    trap_cut = {(e[1], e[2], e[3], e[4]) for e in pc.elements if e[0] == "trap"}
    disks = {c[1:] for c in pc.fills[0] | pc.fills[1] if c[0] == "disk"}
    x_regions = rc.regions_in(rc.x_component, ("C", "P", "TG", "QG"))
    idx = {r: i for i, r in enumerate(x_regions)}
    uf = UnionFind(len(x_regions))
    for (a, f, piece, b, g, other, oa, ob) in rc.piece_pairs:
        if oa not in idx or ob not in idx:
            continue
        if piece != "mid" and (a, f, piece[0], piece[1]) in trap_cut:
            continue
        uf.union(idx[oa], idx[ob])
    out = set()
    for grp in uf.groups():
        regs = [x_regions[i] for i in grp]
        if all(set(rc.boundary_disks(r)) <= disks for r in regs):
            out.update(r for r in regs if r[0] in ("C", "P"))
    return out


# ------------------------------------------------------------ chains of prisms

@dataclass
class Cycle:
    prisms: list
    single_edge: bool
    annuli: int
    consumed: bool


@dataclass
class ChainReport:
    pairings: dict  # (tet, face) -> (tet', Perm4), for the given Centrals
    cycles: list
    chain_lengths: list


def _mid_owner(rc: RegionComplex, tet: int, face: int) -> tuple:
    return rc.piece_owner(tet, face, "mid")


def _prism_exit(rc: RegionComplex, prism: tuple, face: int) -> int:
    d = rc.tets[prism[1]]
    g1, g2 = d.pair(1 - prism[2])
    return g2 if face == g1 else g1


def trace_chains(rc: RegionComplex, centrals: Optional[list] = None, consumed=frozenset()) -> ChainReport:
    T = rc.tri
    if centrals is None:
        centrals = [r[1] for r in rc.regions if r[0] == "C"]
    pairings = {}
    lengths = []
    visited = set()
    limit = 4 * T.size + 4
    for a in centrals:
        for f in range(4):
            m = Perm4((0, 1, 2, 3))
            tet, face = a, f
            length = 0
            while True:
                b, p = T.gluing(tet, face)
                m = p * m
                tet, face = b, p(face)
                owner = _mid_owner(rc, tet, face)
                if owner[0] == "C":
                    break
                visited.add(owner)
                out = _prism_exit(rc, owner, face)
                m = transposition(face, out) * m
                face = out
                length += 1
                if length > limit:
                    raise AssertionError("prism chain does not terminate")
            pairings[(a, f)] = (tet, m)
            lengths.append(length)
    cycles = []
    seen = set(visited)
    for r in rc.regions:
        if r[0] != "P" or r in seen:
            continue
        # walk the closed loop through this prism
        d = rc.tets[r[1]]
        start_face = d.pair(1 - r[2])[0]
        loop = []
        tet, face, prism = r[1], start_face, r
        m = Perm4((0, 1, 2, 3))
        ok = True
        tube = True  # every hexagon gluing carries axis edge to axis edge
        while True:
            loop.append(prism)
            seen.add(prism)
            out = _prism_exit(rc, prism, face)
            m = transposition(face, out) * m
            axis = rc.tets[tet].pair(prism[2])
            b, p = T.gluing(tet, out)
            m = p * m
            tet, face = b, p(out)
            prism = _mid_owner(rc, tet, face)
            if prism[0] != "P":
                break  # part of a chain between truncated tetrahedra, not a cycle
            if {p(v) for v in axis} != set(rc.tets[tet].pair(prism[2])):
                tube = False
            if prism == r and face == start_face:
                break
            if len(loop) > 2 * T.size + 2:
                ok = False
                break
        if not ok:
            raise AssertionError("prism cycle walk failed")
        if prism[0] != "P":
            continue
        fv = [v for v in range(4) if v != start_face]
        seen_v, cyc = set(), 0
        for v in fv:
            if v in seen_v:
                continue
            cyc += 1
            w = v
            while w not in seen_v:
                seen_v.add(w)
                w = m(w)
        cycles.append(Cycle(loop, tube, cyc, all(pr in consumed for pr in loop)))
    return ChainReport(pairings, cycles, lengths)


def build_crushed(rc: RegionComplex, centrals: list) -> list:
    """Triangulations (one per connected component) from truncated tetrahedra ``centrals``."""
    if not centrals:
        return []
    centrals = sorted(centrals)
    report = trace_chains(rc, centrals)
    index = {a: i for i, a in enumerate(centrals)}
    table = [[None] * 4 for _ in centrals]
    for (a, f), (b, m) in report.pairings.items():
        if b not in index:
            raise AssertionError("chain leaves the chosen set of truncated tetrahedra")
        table[index[a]][f] = (index[b], m)
    T = Triangulation(table)
    return [sub_triangulation(T, comp) for comp in components(T)]


# ------------------------------------------------------------ top level

@dataclass
class CrushOutcome:
    kind: str
    x_parts: list = field(default_factory=list)  # crushed vertex-free side (or everything)
    residue: list = field(default_factory=list)  # crushed vertex side
    separating: bool = True
    vertex_linking: bool = False
    audit: list = field(default_factory=list)
    cycles: list = field(default_factory=list)

    @property
    def pieces(self) -> list:
        return self.x_parts + self.residue

    @property
    def triangulation(self) -> Optional[Triangulation]:
        """The crushed triangulation when it is connected (convenience)."""
        parts = self.pieces
        return parts[0] if len(parts) == 1 else None

    @property
    def tet_count(self) -> int:
        return sum(p.size for p in self.pieces)


def crush_along(T: Triangulation, x: NormalVector) -> CrushOutcome:
    rc = RegionComplex(T, x)
    comp = rc.surface.components[0]
    audit = rc.audit()
    if comp.vertex_linking and not comp.has_quad:
        audit.append("outcome: Crushed (vertex-linking sphere, triangulation unchanged)")
        return CrushOutcome(CRUSHED, x_parts=[T], vertex_linking=True, audit=audit)

    all_centrals = [r[1] for r in rc.regions if r[0] == "C"]
    if rc.x_component is None:
        parts = build_crushed(rc, all_centrals)
        audit.append(f"outcome: {NO_VERTEX_FREE_SIDE} separating={rc.separating}")
        return CrushOutcome(NO_VERTEX_FREE_SIDE, x_parts=parts, separating=rc.separating, audit=audit)

    x_centrals = [a for a in all_centrals if rc.in_x(("C", a))]
    e_centrals = [a for a in all_centrals if not rc.in_x(("C", a))]
    residue = build_crushed(rc, e_centrals)
    cells = SphereCells(rc)
    pr = product_region(rc, cells)
    n_twisted = sum(1 for c in pr.components if c.twisted)
    audit.append(
        f"product: components={len(pr.components)} twisted={n_twisted} "
        f"fills_ok={all(c.fills_ok for c in pr.components if not c.twisted)} equals_x={pr.equals_x}"
    )
    if pr.twisted:
        parts = build_crushed(rc, x_centrals)
        audit.append(f"outcome: {TWISTED}")
        return CrushOutcome(TWISTED, x_parts=parts, residue=residue, audit=audit)
    if not all(c.fills_ok for c in pr.components):
        raise AssertionError("product region end fills are not disks")

    consumed = pr.consumed
    surviving = [a for a in x_centrals if ("C", a) not in consumed]
    chains = trace_chains(rc, surviving, consumed)
    x_cycles = [c for c in chains.cycles if rc.in_x(c.prisms[0])]
    audit.append(
        f"chains: {len(chains.chain_lengths)} cycles={len(x_cycles)} "
        + " ".join(
            f"[{'single' if c.single_edge else 'multi'} annuli={c.annuli} consumed={c.consumed}]"
            for c in x_cycles
        )
    )
    audit.append(
        f"consumed: {len(consumed)} greedy={len(pr.greedy_consumed)} "
        f"surviving_centrals={len(surviving)} of {len(x_centrals)}"
    )
    live = [c for c in x_cycles if not c.consumed]
    if not surviving and not live:
        audit.append(f"outcome: {ALL_CONSUMED}")
        return CrushOutcome(ALL_CONSUMED, residue=residue, audit=audit, cycles=x_cycles)
    parts = build_crushed(rc, surviving)
    kind = CRUSHED
    if any(c.single_edge for c in live):
        kind = SINGLE_EDGE_CYCLE
    elif any(c.annuli == 1 for c in live):
        kind = ONE_ANNULUS_CYCLE
    elif live:
        kind = THREE_ANNULI_CYCLE
    audit.append(f"outcome: {kind}")
    return CrushOutcome(kind, x_parts=parts, residue=residue, audit=audit, cycles=x_cycles)


def check_crushed(outcome: CrushOutcome) -> bool:
    """Every returned piece is a valid closed orientable triangulation."""
    for p in outcome.pieces:
        rep = validate(p)
        if not (rep.closed and rep.orientable and rep.manifold):
            return False
    return True
