"""Extreme rays of {x : Ax = 0, x >= 0} by the double description method.

Rays start as the unit vectors of the free columns; each equation is
intersected in turn.  Two rays on opposite sides of the new hyperplane are
combined only when they are adjacent, which is decided combinatorially: no
third ray vanishes on every coordinate where both of them vanish.  All
arithmetic is on Python integers.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

import numpy
from scipy.optimize import nnls

from .normal_coords import CoordSystem, MatchingSystem, NormalVector


@dataclass(frozen=True)
class RayList:
    system: CoordSystem
    rays: tuple  # NormalVector, sorted by coordinates

    def __len__(self):
        return len(self.rays)

    def __iter__(self):
        return iter(self.rays)

    def serialize(self) -> str:
        return self.system.tag() + "\n" + "".join(" ".join(map(str, r.coords)) + "\n" for r in self.rays)


def _primitive(v: list) -> tuple:
    g = 0
    for c in v:
        if c:
            g = gcd(g, c)
            if g == 1:
                break
    if g > 1:
        v = [c // g for c in v]
    return tuple(v)


def _rank(rows: list, ncols: int) -> int:
    """Exact rank of an integer matrix by fraction-free elimination."""
    m = [list(r) for r in rows if any(r)]
    rank = 0
    col = 0
    while rank < len(m) and col < ncols:
        piv = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank]
        for r in range(rank + 1, len(m)):
            if m[r][col]:
                f = m[r][col]
                m[r] = [p[col] * x - f * y for x, y in zip(m[r], p)]
                g = 0
                for x in m[r]:
                    g = gcd(g, x)
                if g > 1:
                    m[r] = [x // g for x in m[r]]
        rank += 1
        col += 1
    return rank


def _quad_ok(support: int, quad_masks: list) -> bool:
    for masks in quad_masks:
        hits = 0
        for m in masks:
            if support & m:
                hits += 1
                if hits > 1:
                    return False
    return True


def _enumerate(rows: list, ncols: int, active: list, quad_masks: Optional[list]) -> list:
    n = len(active)
    full = (1 << n) - 1
    # rays: (coords over active columns, zero-set bitmask)
    rays = [(tuple(1 if j == k else 0 for j in range(n)), full & ~(1 << k)) for k in range(n)]
    processed = []
    sub_rows = [[r[c] for c in active] for r in rows]
    for h in sub_rows:
        if not any(h):
            continue
        rank_before = _rank(processed, n)
        if _rank(processed + [h], n) == rank_before:
            continue  # redundant equation: every ray already satisfies it
        processed.append(h)
        dim = n - rank_before
        nz = [k for k in range(n) if h[k]]
        zero, pos, neg = [], [], []
        for ray in rays:
            v, z = ray
            s = 0
            for k in nz:
                if v[k]:
                    s += h[k] * v[k]
            if s == 0:
                zero.append(ray)
            elif s > 0:
                pos.append((ray, s))
            else:
                neg.append((ray, -s))
        new = list(zero)
        zsets = [z for _, z in rays]
        need = dim - 2
        for (p, sp) in pos:
            pv, pz = p
            for (q, sq) in neg:
                qv, qz = q
                common = pz & qz
                if bin(common).count("1") < need:
                    continue
                if quad_masks is not None and not _quad_ok(full & ~common, quad_masks):
                    continue
                adjacent = True
                for z in zsets:
                    if z & common == common and z != pz and z != qz:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                combo = [sp * b + sq * a for a, b in zip(pv, qv)]
                v = _primitive(combo)
                zmask = 0
                for k in range(n):
                    if not v[k]:
                        zmask |= 1 << k
                new.append((v, zmask))
        rays = new
    out = set()
    for v, _ in rays:
        full_v = [0] * ncols
        for col, val in zip(active, v):
            full_v[col] = val
        out.add(tuple(full_v))
    return sorted(out)


def extreme_rays(A: MatchingSystem, quad_filter: bool = False) -> RayList:
    """Primitive extreme rays, sorted lexicographically.

    With ``quad_filter`` rays violating the quad condition are discarded during
    the enumeration; the result is then exactly the admissible extreme rays.
    """
    system = A.system
    frozen = set(system.frozen)
    active = [c for c in range(A.ncols) if c not in frozen]
    quad_masks = None
    if quad_filter:
        pos = {c: k for k, c in enumerate(active)}
        quad_masks = []
        for tet in range(system.tets):
            cols = [7 * tet + 4 + i for i in range(3) if 7 * tet + 4 + i in pos]
            if len(cols) > 1:
                quad_masks.append([1 << pos[c] for c in cols])
    raw = _enumerate(list(A.rows), A.ncols, active, quad_masks)
    return RayList(system, tuple(NormalVector(system, r) for r in raw))


# ------------------------------------------------------------------ checking

def is_extreme(A: MatchingSystem, x: Sequence[int]) -> bool:
    """Support-rank test: the solutions supported inside supp(x) form a line."""
    if not any(x) or any(c < 0 for c in x) or not A.is_solution(x):
        return False
    if any(x[c] for c in A.system.frozen):
        return False
    support = [j for j, c in enumerate(x) if c]
    sub = [[r[j] for j in support] for r in A.rows]
    return _rank(sub, len(support)) == len(support) - 1


def _rref(rows: list, ncols: int) -> tuple:
    m = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def bounded_solutions(A: MatchingSystem, bound: int):
    """Every nonzero integer solution with 0 <= x_j <= bound (frozen columns zero).

    Free variables of the reduced row echelon form range over 0..bound; pivot
    variables are then determined and checked.  Free columns are assigned in
    order with the pivots constrained as soon as their row is fully decided.
    """
    frozen = set(A.system.frozen)
    active = [c for c in range(A.ncols) if c not in frozen]
    sub = [[r[c] for c in active] for r in A.rows]
    red, pivots = _rref(sub, len(active))
    free = [k for k in range(len(active)) if k not in pivots]
    # row i: den_i * x[pivot_i] = sum_{free f} num_if x[f], all integers
    coeffs, dens = [], []
    for row in red:
        terms = [(f, -row[f]) for f in free if row[f] != 0]
        den = 1
        for _, c in terms:
            den = den * c.denominator // gcd(den, c.denominator)
        coeffs.append([(f, int(c * den)) for f, c in terms])
        dens.append(den)
    position = {f: k for k, f in enumerate(free)}
    last_free = [max((position[f] for f, _ in cs), default=-1) for cs in coeffs]
    rows_done_at = {}
    for i, lf in enumerate(last_free):
        rows_done_at.setdefault(lf, []).append(i)
    n = len(active)
    x = [0] * n

    def pivot_ok(i):
        val = 0
        for f, c in coeffs[i]:
            val += c * x[f]
        q, r = divmod(val, dens[i])
        if r or not 0 <= q <= bound:
            return False
        x[pivots[i]] = q
        return True

    for i in rows_done_at.get(-1, []):
        if not pivot_ok(i):
            return

    def rec(k):
        if k == len(free):
            if any(x):
                full = [0] * A.ncols
                for pos, c in enumerate(active):
                    full[c] = x[pos]
                yield tuple(full)
            return
        f = free[k]
        for val in range(bound + 1):
            x[f] = val
            if all(pivot_ok(i) for i in rows_done_at.get(k, [])):
                yield from rec(k + 1)
        x[f] = 0

    yield from rec(0)


def _in_cone_lp(target: Sequence[int], gens: list) -> bool:
    """Exact phase-one simplex: is target a nonnegative combination of gens?"""
    if not gens:
        return not any(target)
    rows = [j for j in range(len(target)) if target[j] or any(g[j] for g in gens)]
    m, k = len(rows), len(gens)
    # equations sum_g lambda_g g_j + a_j = target_j with artificials a_j >= 0
    tab = []
    for j in rows:
        row = [Fraction(g[j]) for g in gens] + [Fraction(0)] * m + [Fraction(target[j])]
        if row[-1] < 0:
            row = [-v for v in row]
        tab.append(row)
    for i in range(m):
        tab[i][k + i] = Fraction(1)
    basis = [k + i for i in range(m)]
    ncol = k + m
    # objective: minimise sum of artificials, expressed in reduced costs
    cost = [Fraction(0)] * (ncol + 1)
    for i in range(m):
        for c in range(ncol + 1):
            cost[c] -= tab[i][c]
    for i in range(m):
        cost[k + i] = Fraction(0)
    while True:
        enter = next((c for c in range(ncol) if cost[c] < 0), None)  # Bland's rule
        if enter is None:
            break
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][-1] / tab[i][enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return True  # unbounded; cannot happen for phase one
        _, r = best
        pv = tab[r][enter]
        tab[r] = [v / pv for v in tab[r]]
        for i in range(m):
            if i != r and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [a - f * b for a, b in zip(tab[i], tab[r])]
        f = cost[enter]
        cost = [a - f * b for a, b in zip(cost, tab[r])]
        basis[r] = enter
    return cost[-1] == 0


def in_cone(x: Sequence[int], rays: list) -> bool:
    support = {j for j, c in enumerate(x) if c}
    gens = [r for r in rays if all(j in support for j, c in enumerate(r) if c)]
    covered = set()
    for g in gens:
        covered.update(j for j, c in enumerate(g) if c)
    if covered != support:
        return False  # support closure fails: some coordinate cannot be produced
    return _in_cone_lp(x, gens)


class ConeMembership:
    """Exact membership in the cone spanned by ``rays``, cached per support.

    Only rays supported inside supp(x) can contribute to x.  If those rays are
    linearly independent the coefficients are unique and come from one exact
    inverse shared by every x with the same support.  Otherwise a floating
    point nonnegative least squares fit proposes the active rays, and the
    proposal is certified exactly the same way; an uncertified proposal falls
    back to the exact phase-one simplex, so every answer is exact.
    """

    def __init__(self, rays: list):
        self.rays = [tuple(r) for r in rays]
        self._cache: dict = {}
        self._bases: dict = {}

    def _basis(self, support: tuple, gens: list):
        key = (support, tuple(gens))
        if key not in self._bases:
            coord_rows = [[g[j] for g in gens] for j in support]
            picked = _independent(coord_rows)[: len(gens)]
            rows = [support[i] for i in picked]
            num, den = _inverse([coord_rows[i] for i in picked])
            self._bases[key] = (rows, num, den)
        return self._bases[key]

    def _certify(self, x, support: tuple, gens: list) -> bool:
        return self._check(x, support, gens, *self._basis(support, gens))

    @staticmethod
    def _check(x, support, gens, rows, num, den) -> bool:
        rhs = [x[j] for j in rows]
        lam = [sum(a * b for a, b in zip(r, rhs)) for r in num]  # den * coefficients
        if any(v < 0 for v in lam):
            return False
        return all(sum(l * g[j] for l, g in zip(lam, gens)) == den * x[j] for j in support)

    def _prepare(self, support: tuple):
        sset = set(support)
        gens = [r for r in self.rays if all(j in sset for j, c in enumerate(r) if c)]
        covered = set()
        for g in gens:
            covered.update(j for j, c in enumerate(g) if c)
        if covered != sset:
            return ("outside",)
        cols = [[g[j] for g in gens] for j in support]
        if _rank(cols, len(gens)) == len(gens):
            return ("simplicial", gens)
        return ("face", gens, numpy.array(cols, dtype=float), [])

    def __contains__(self, x) -> bool:
        support = tuple(j for j, c in enumerate(x) if c)
        entry = self._cache.get(support)
        if entry is None:
            entry = self._cache[support] = self._prepare(support)
        if entry[0] == "outside":
            return False
        if entry[0] == "simplicial":
            return self._certify(x, support, entry[1])
        _, gens, mat, used = entry
        for k, basis in enumerate(used):
            if self._check(x, support, *basis):
                if k:
                    used.insert(0, used.pop(k))
                return True
        lam, _ = nnls(mat, numpy.array([x[j] for j in support], dtype=float))
        active = [g for g, v in zip(gens, lam) if v > 1e-9]
        independent = [active[i] for i in _independent([[g[j] for j in support] for g in active])]
        if independent and self._certify(x, support, independent):
            used.insert(0, (independent, *self._basis(support, independent)))
            return True
        return _in_cone_lp(x, gens)


def _independent(vectors: list) -> list:
    """Indices of a greedily chosen linearly independent subfamily (exact)."""
    basis = []  # (pivot position, reduced integer vector)
    keep = []
    for idx, v in enumerate(vectors):
        w = list(v)
        for p, b in basis:
            if w[p]:
                f, g = w[p], b[p]
                w = [g * x - f * y for x, y in zip(w, b)]
        piv = next((k for k, x in enumerate(w) if x), None)
        if piv is not None:
            basis.append((piv, w))
            keep.append(idx)
    return keep


def _inverse(m: list) -> tuple:
    """Integer matrix inverse as (numerators, common denominator)."""
    n = len(m)
    a = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next(r for r in range(c, n) if a[r][c])
        a[c], a[piv] = a[piv], a[c]
        p = a[c]
        for r in range(n):
            if r != c and a[r][c]:
                f, g = a[r][c], p[c]
                row = [g * x - f * y for x, y in zip(a[r], p)]
                d = 0
                for x in row:
                    d = gcd(d, x)
                a[r] = [x // d for x in row] if d > 1 else row
    den = 1
    for i in range(n):
        den = den * abs(a[i][i]) // gcd(den, abs(a[i][i]))
    num = [[x * (den // a[i][i]) for x in a[i][n:]] for i in range(n)]
    return num, den


@dataclass
class OracleReport:
    bound: int
    solutions_checked: int = 0
    outside_cone: list = field(default_factory=list)
    not_solutions: list = field(default_factory=list)
    not_extreme: list = field(default_factory=list)
    not_primitive: list = field(default_factory=list)
    duplicates: int = 0

    @property
    def violations(self) -> int:
        return (len(self.outside_cone) + len(self.not_solutions) + len(self.not_extreme)
                + len(self.not_primitive) + self.duplicates)

    @property
    def ok(self) -> bool:
        return self.violations == 0


def oracle_verify(A: MatchingSystem, rays: RayList, bound: int = 3) -> OracleReport:
    report = OracleReport(bound)
    vecs = [tuple(r.coords) for r in rays]
    report.duplicates = len(vecs) - len(set(vecs))
    for v in vecs:
        if not A.is_solution(v):
            report.not_solutions.append(v)
        elif not is_extreme(A, v):
            report.not_extreme.append(v)
        g = 0
        for c in v:
            g = gcd(g, c)
        if g != 1:
            report.not_primitive.append(v)
    cone = ConeMembership(vecs)
    for x in bounded_solutions(A, bound):
        report.solutions_checked += 1
        if x not in cone:
            report.outside_cone.append(x)
    return report


def admissible_rays(rays: RayList) -> list:
    from .normal_coords import admissible
    return [r for r in rays if admissible(r)]
