"""Exhaustive census of small triangulations.

Face pairings are enumerated as connected multigraphs (loops allowed, every
node of degree at most four) up to node relabelling; each multigraph is
realised once with faces taken in increasing order.  Every gluing table on
that realisation is tried, then validated and deduplicated by signature.
"""
from __future__ import annotations

import itertools

from ..errors import BudgetExceeded, InvalidInput
from ..tri_core import ALL_PERMS, Triangulation, UnionFind, validate
from .isosig import iso_signature

FILTERS = ("all", "orientable", "closed", "closed-orientable")
MAX_TETS = 3


def _multigraphs(t: int, closed: bool) -> list:
    slots = [(i, j) for i in range(t) for j in range(i, t)]
    found = {}

    def degree_ok(mult):
        deg = [0] * t
        for (i, j), m in zip(slots, mult):
            deg[i] += m
            deg[j] += m
        if any(d > 4 for d in deg):
            return False
        return not closed or all(d == 4 for d in deg)

    ranges = [range(3) if i == j else range(5) for i, j in slots]
    for mult in itertools.product(*ranges):
        if not degree_ok(mult):
            continue
        uf = UnionFind(t)
        for (i, j), m in zip(slots, mult):
            if m:
                uf.union(i, j)
        if len(uf.groups()) != 1:
            continue
        edges = {s: m for s, m in zip(slots, mult) if m}
        key = min(
            tuple(sorted((min(p[i], p[j]), max(p[i], p[j]), m) for (i, j), m in edges.items()))
            for p in itertools.permutations(range(t))
        )
        found.setdefault(key, key)
    return sorted(found)


def _realise(t: int, graph: tuple) -> list:
    free = [list(range(4)) for _ in range(t)]
    pairs = []
    for i, j, m in graph:
        for _ in range(m):
            fi = free[i].pop(0)
            fj = free[j].pop(0)
            pairs.append((i, fi, j, fj))
    return pairs


def _perm_choices(f: int, g: int, parity: int | None) -> list:
    out = [p for p in ALL_PERMS if p(f) == g]
    if parity is not None:
        out = [p for p in out if p.sign == parity]
    return out


def _product(t, pairs, tree, orientable):
    if not orientable:
        choice_lists = [_perm_choices(f, g, None) for a, f, b, g in pairs]
        for combo in itertools.product(*choice_lists):
            yield combo
        return
    tree_idx = [k for k, is_tree in enumerate(tree) if is_tree]
    other_idx = [k for k, is_tree in enumerate(tree) if not is_tree]
    tree_lists = [_perm_choices(pairs[k][1], pairs[k][3], None) for k in tree_idx]
    for tree_combo in itertools.product(*tree_lists):
        # orientation signs implied by the tree gluings
        sign = [0] * t
        sign[0] = 1
        assigned = {k: p for k, p in zip(tree_idx, tree_combo)}
        changed = True
        while changed:
            changed = False
            for k, p in assigned.items():
                a, _, b, _ = pairs[k]
                s = -p.sign
                if sign[a] and not sign[b]:
                    sign[b] = sign[a] * s
                    changed = True
                elif sign[b] and not sign[a]:
                    sign[a] = sign[b] * s
                    changed = True
        other_lists = [
            _perm_choices(pairs[k][1], pairs[k][3], -sign[pairs[k][0]] * sign[pairs[k][2]])
            for k in other_idx
        ]
        for other_combo in itertools.product(*other_lists):
            combo = [None] * len(pairs)
            for k, p in zip(tree_idx, tree_combo):
                combo[k] = p
            for k, p in zip(other_idx, other_combo):
                combo[k] = p
            yield tuple(combo)


def census(t: int, filter: str = "closed-orientable") -> list:
    """All valid t-tetrahedron triangulations passing ``filter``, sorted by signature."""
    if filter not in FILTERS:
        raise InvalidInput(f"unknown census filter {filter!r}; expected one of {FILTERS}")
    if t < 1:
        raise InvalidInput("census needs at least one tetrahedron")
    if t > MAX_TETS:
        raise BudgetExceeded(f"census is limited to at most {MAX_TETS} tetrahedra")
    closed = filter.startswith("closed")
    orientable = filter.endswith("orientable")
    found = {}
    for graph in _multigraphs(t, closed):
        pairs = _realise(t, graph)
        tree = _spanning(t, pairs)
        for combo in _product(t, pairs, tree, orientable):
            T = Triangulation.from_pairs(t, [(a, f, b, p) for (a, f, b, _), p in zip(pairs, combo)])
            rep = validate(T)
            if not rep.manifold:
                continue
            if orientable and not rep.orientable:
                continue
            sig = iso_signature(T)
            found.setdefault(sig, T)
    return [found[s] for s in sorted(found)]


def _spanning(t: int, pairs: list) -> list:
    uf = UnionFind(t)
    tree = []
    for a, f, b, g in pairs:
        is_tree = a != b and uf.root(a) != uf.root(b)
        if is_tree:
            uf.union(a, b)
        tree.append(is_tree)
    return tree
