"""Canonical isomorphism signatures.

Every labelling reachable by a breadth-first walk from some (tetrahedron,
vertex permutation) start is encoded; the signature is the least encoding.
Two connected triangulations are isomorphic exactly when some walk of one
reproduces a walk of the other, so the minimum is a complete invariant.
"""
from __future__ import annotations

from ..tri_core import ALL_PERMS, Triangulation, components, sub_triangulation

_ALPHABET = "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def _walk(T: Triangulation, start: int, perm) -> tuple:
    # maps[old] = permutation from new vertex labels to old vertex labels
    t = T.size
    order = [start]
    new_index = {start: 0}
    maps = {start: perm}
    code = []
    head = 0
    while head < len(order):
        old = order[head]
        head += 1
        pi = maps[old]
        for face in range(4):
            g = T.gluing(old, pi(face))
            if g is None:
                code.append(0)
                continue
            b, sigma = g
            if b not in new_index:
                new_index[b] = len(order)
                order.append(b)
                maps[b] = sigma * pi
            rel = maps[b].inverse() * sigma * pi
            code.append(1 + 24 * new_index[b] + rel.index)
    if len(order) != t:
        raise ValueError("walk did not reach every tetrahedron; triangulation is disconnected")
    return tuple(code)


def canonical_code(T: Triangulation) -> tuple:
    best = None
    for start in range(T.size):
        for perm in ALL_PERMS:
            code = _walk(T, start, perm)
            if best is None or code < best:
                best = code
    return best


def _digits(n: int, width: int) -> str:
    out = []
    for _ in range(width):
        n, r = divmod(n, 62)
        out.append(_ALPHABET[r])
    return "".join(reversed(out))


def _width(n: int) -> int:
    w = 1
    while 62 ** w <= n:
        w += 1
    return w


def _encode(t: int, code: tuple) -> str:
    w = _width(1 + 24 * t)
    return _digits(t, _width(t)) + "".join(_digits(c, w) for c in code)


def iso_signature(T: Triangulation) -> str:
    """Filesystem-safe canonical string.  Components are joined by '_' in sorted order."""
    T.require_nonempty()
    comps = components(T)
    if len(comps) == 1:
        return _encode(T.size, canonical_code(T))
    parts = sorted(iso_signature(sub_triangulation(T, c)) for c in comps)
    return "_".join(parts)


def canonical_form(T: Triangulation) -> Triangulation:
    """The relabelled connected triangulation realising the minimal walk."""
    code = canonical_code(T)
    t = T.size
    table = [[None] * 4 for _ in range(t)]
    for i, c in enumerate(code):
        if c:
            b, rel = divmod(c - 1, 24)
            table[i // 4][i % 4] = (b, ALL_PERMS[rel])
    return Triangulation(table)


def is_isomorphic(A: Triangulation, B: Triangulation) -> bool:
    return A.size == B.size and iso_signature(A) == iso_signature(B)
