"""Pachner (bistellar) moves 2-3, 3-2 and 1-4.

Each move removes some tetrahedra, appends the new ones at the end of the
table and re-glues the outer faces.  An outer face of a new tetrahedron is
described by the old (tet, face) it replaces together with the vertex map
from the new labels to the old ones.
"""
from __future__ import annotations

from ..errors import IllegalMove
from ..tri_core import EDGES, IDENTITY, Perm4, Triangulation, transposition


def _rebuild(T: Triangulation, removed: list, new_count: int, outer: dict, inner: list) -> Triangulation:
    """outer: (old tet, old face) -> (new tet, vertex map new->old); inner: (nt, f, nt2, perm)."""
    keep = [a for a in range(T.size) if a not in set(removed)]
    index = {a: i for i, a in enumerate(keep)}
    base = len(keep)
    t = base + new_count
    table = [[None] * 4 for _ in range(t)]

    def locate(tet, face):
        # new (tet, face, map new->old) for an old face
        if tet in index:
            return index[tet], face, IDENTITY
        nt, phi = outer[(tet, face)]
        return base + nt, phi.inverse()(face), phi

    for a in range(T.size):
        for f in range(4):
            if a not in index and (a, f) not in outer:
                continue  # interior to the replaced region
            g = T.gluing(a, f)
            if g is None:
                continue
            b, p = g
            na, nf, phi_a = locate(a, f)
            nb, _, phi_b = locate(b, p(f))
            table[na][nf] = (nb, phi_b.inverse() * p * phi_a)
    for nt, f, nt2, p in inner:
        table[base + nt][f] = (base + nt2, p)
        table[base + nt2][p(f)] = (base + nt, p.inverse())
    return Triangulation(table)


def move_1_4(T: Triangulation, tet: int) -> Triangulation:
    if not 0 <= tet < T.size:
        raise IllegalMove(f"no tetrahedron {tet}")
    # new tet i is the cone on old face i; vertex i becomes the new vertex
    outer = {(tet, i): (i, IDENTITY) for i in range(4)}
    inner = [(i, j, j, transposition(i, j)) for i in range(4) for j in range(i + 1, 4)]
    return _rebuild(T, [tet], 4, outer, inner)


def move_2_3(T: Triangulation, face_orbit: int) -> Triangulation:
    sk = T.skeleton
    if not 0 <= face_orbit < sk.num_faces:
        raise IllegalMove(f"no face orbit {face_orbit}")
    orbit = sk.face_orbits[face_orbit]
    if len(orbit) != 2:
        raise IllegalMove(f"face orbit {face_orbit} is a boundary face")
    (A, f), _ = orbit
    B, sigma = T.gluing(A, f)
    if A == B:
        raise IllegalMove(f"face orbit {face_orbit} joins a tetrahedron to itself")
    g = sigma(f)
    a = [v for v in range(4) if v != f]
    outer = {}
    for i in range(3):
        ai, aj, ak = a[i], a[(i + 1) % 3], a[(i + 2) % 3]
        # new tet i: 0 = apex of A, 1 = apex of B, 2, 3 = the other two face vertices
        outer[(A, ai)] = (i, Perm4((f, ai, aj, ak)))
        outer[(B, sigma(ai))] = (i, Perm4((sigma(ai), g, sigma(aj), sigma(ak))))
    inner = [(i, 2, (i + 1) % 3, transposition(2, 3)) for i in range(3)]
    return _rebuild(T, [A, B], 3, outer, inner)


def move_3_2(T: Triangulation, edge_orbit: int) -> Triangulation:
    sk = T.skeleton
    if not 0 <= edge_orbit < sk.num_edges:
        raise IllegalMove(f"no edge orbit {edge_orbit}")
    orbit = sk.edge_orbits[edge_orbit]
    if len(orbit) != 3 or len({m[0] for m in orbit}) != 3:
        raise IllegalMove(f"edge orbit {edge_orbit} is not of order 3 in three distinct tetrahedra")
    tet0, k, _ = orbit[0]
    p0, q0 = EDGES[k]
    x0, y0 = [v for v in range(4) if v not in (p0, q0)]
    # walk round the edge: tet j has labels (p, q, x, y); face opposite x leads on
    ring = [(tet0, p0, q0, x0, y0)]
    for _ in range(2):
        a, p, q, x, y = ring[-1]
        g = T.gluing(a, x)
        if g is None:
            raise IllegalMove("edge is on the boundary")
        b, s = g
        ring.append((b, s(p), s(q), s(y), s(x)))
    a, p, q, x, y = ring[-1]
    g = T.gluing(a, x)
    if g is None or g[0] != tet0:
        raise IllegalMove("edge link does not close up")
    s = g[1]
    if (s(p), s(q), s(y), s(x)) != (p0, q0, x0, y0):
        raise IllegalMove("edge link closes with a twist")
    if len({r[0] for r in ring}) != 3:
        raise IllegalMove("edge meets fewer than three distinct tetrahedra")
    outer = {}
    for j, (a, p, q, x, y) in enumerate(ring):
        # ring vertex r_j = x_j, r_{j+1} = y_j; new labels 1 + j for r_j
        opp = 1 + (j + 2) % 3
        images_a = [0] * 4
        images_b = [0] * 4
        images_a[0], images_b[0] = p, q
        images_a[1 + j] = images_b[1 + j] = x
        images_a[1 + (j + 1) % 3] = images_b[1 + (j + 1) % 3] = y
        images_a[opp], images_b[opp] = q, p
        outer[(a, q)] = (0, Perm4(images_a))
        outer[(a, p)] = (1, Perm4(images_b))
    inner = [(0, 0, 1, IDENTITY)]
    return _rebuild(T, [r[0] for r in ring], 2, outer, inner)


MOVES = {"2-3": move_2_3, "3-2": move_3_2, "1-4": move_1_4}


def pachner(T: Triangulation, move: str, location: int) -> Triangulation:
    T.require_nonempty()
    try:
        fn = MOVES[move]
    except KeyError:
        raise IllegalMove(f"unknown move {move!r}; expected one of {sorted(MOVES)}") from None
    return fn(T, location)
