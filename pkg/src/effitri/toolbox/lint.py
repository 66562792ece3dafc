"""Edge-order lint: low-order edges and cone faces."""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import NotClosed
from ..tri_core import EDGE_INDEX, Triangulation, face_vertices


@dataclass(frozen=True)
class EdgeOrderEntry:
    edge: int
    order: int
    order1: bool
    order2: bool
    order3: bool
    cone_faces: tuple  # face orbits in which this edge appears as the two identified sides of a cone


def _directed(sk, tet, u, v):
    """Edge orbit and direction sign for the directed edge u -> v of ``tet``."""
    e, sign = sk.edge_of[(tet, EDGE_INDEX[(u, v)])]
    return e, sign if u < v else -sign


def cone_faces(T: Triangulation) -> dict:
    """Map face orbit -> edge orbit for faces in which exactly two sides are identified as a cone."""
    sk = T.skeleton
    out = {}
    for j, orbit in enumerate(sk.face_orbits):
        a, f = orbit[0]
        verts = face_vertices(f)
        for c in verts:
            x, y = [w for w in verts if w != c]
            e1 = _directed(sk, a, x, c)
            e2 = _directed(sk, a, y, c)
            third = sk.edge_of[(a, EDGE_INDEX[(x, y)])][0]
            if e1 == e2 and third != e1[0]:
                out[j] = e1[0]
    return out


def edge_order_report(T: Triangulation) -> list:
    T.require_nonempty()
    if not T.is_closed:
        raise NotClosed("edge-order report needs a closed triangulation")
    sk = T.skeleton
    cones = cone_faces(T)
    report = []
    for e in range(sk.num_edges):
        order = sk.edge_order(e)
        faces = tuple(sorted(j for j, edge in cones.items() if edge == e))
        report.append(EdgeOrderEntry(e, order, order == 1, order == 2, order == 3, faces))
    return report
