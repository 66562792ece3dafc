"""Integral first homology of the quotient cell complex."""
from __future__ import annotations

from dataclasses import dataclass

from sympy import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

from ..tri_core import EDGE_INDEX, Triangulation, face_vertices


@dataclass(frozen=True)
class HomologyGroup:
    rank: int
    torsion: tuple = ()

    def __str__(self):
        parts = ["Z"] * self.rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __add__(self, other: "HomologyGroup") -> "HomologyGroup":
        return direct_sum([self, other])

    @staticmethod
    def parse(text: str) -> "HomologyGroup":
        text = text.strip()
        if text == "0":
            return HomologyGroup(0)
        rank, tors = 0, []
        for part in text.split("+"):
            part = part.strip()
            if part == "Z":
                rank += 1
            elif part.startswith("Z/"):
                tors.append(int(part[2:]))
            else:
                raise ValueError(f"cannot parse group {text!r}")
        return direct_sum([HomologyGroup(rank)] + [HomologyGroup(0, (d,)) for d in tors])


def _prime_powers(n: int) -> list:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            q = 1
            while n % p == 0:
                n //= p
                q *= p
            out.append((p, q))
        p += 1
    if n > 1:
        out.append((n, n))
    return out


def direct_sum(groups) -> HomologyGroup:
    """Sum of finitely generated abelian groups, torsion in invariant-factor form."""
    rank = 0
    by_prime: dict = {}
    for g in groups:
        rank += g.rank
        for d in g.torsion:
            for p, q in _prime_powers(d):
                by_prime.setdefault(p, []).append(q)
    for qs in by_prime.values():
        qs.sort(reverse=True)
    length = max((len(qs) for qs in by_prime.values()), default=0)
    factors = []
    for i in range(length):
        d = 1
        for qs in by_prime.values():
            if i < len(qs):
                d *= qs[i]
        factors.append(d)
    return HomologyGroup(rank, tuple(sorted(factors)))


def boundary_matrices(T: Triangulation) -> tuple:
    """Integer matrices d2 (edges x faces) and d1 (vertices x edges) as nested lists."""
    sk = T.skeleton
    E, F, V = sk.num_edges, sk.num_faces, sk.num_vertices
    d2 = [[0] * F for _ in range(E)]
    for j, orbit in enumerate(sk.face_orbits):
        a, f = orbit[0]
        i0, i1, i2 = face_vertices(f)
        for (u, v), coeff in (((i1, i2), 1), ((i0, i2), -1), ((i0, i1), 1)):
            e, sign = sk.edge_of[(a, EDGE_INDEX[(u, v)])]
            d2[e][j] += coeff * sign
    d1 = [[0] * E for _ in range(V)]
    for e in range(E):
        a, u, v = sk.edge_rep(e)
        d1[sk.vertex_of[(a, v)]][e] += 1
        d1[sk.vertex_of[(a, u)]][e] -= 1
    return d2, d1


def _factors(rows: list, nrows: int, ncols: int) -> list:
    if nrows == 0 or ncols == 0:
        return []
    m = DomainMatrix([[ZZ(x) for x in r] for r in rows], (nrows, ncols), ZZ)
    return [int(d) for d in invariant_factors(m) if d != 0]


def homology_h1(T: Triangulation) -> HomologyGroup:
    T.require_nonempty()
    sk = T.skeleton
    d2, d1 = boundary_matrices(T)
    f2 = _factors(d2, sk.num_edges, sk.num_faces)
    f1 = _factors(d1, sk.num_vertices, sk.num_edges)
    rank = sk.num_edges - len(f1) - len(f2)
    return HomologyGroup(rank, tuple(sorted(abs(d) for d in f2 if abs(d) > 1)))
