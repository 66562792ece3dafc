"""Top-level algorithms: 0-efficiency, connected-sum decomposition, S^3 recognition.

The decomposition driver keeps a worklist of connected triangulations.  A
triangulation without a non-vertex-linking normal sphere is a leaf; otherwise
spheres are tried in the fixed selection order (decreasing weight, then
lexicographic) and the crush outcome is read as a factor plus children.  An
attempt is accepted only if first homology is conserved,
``H1(T) = H1(factor) + sum H1(children)``, which guards every interpretation
of an obstruction against a poorly chosen sphere.
"""
from __future__ import annotations

import hashlib
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .crush import (
    ALL_CONSUMED,
    CRUSHED,
    NO_VERTEX_FREE_SIDE,
    ONE_ANNULUS_CYCLE,
    TWISTED,
    crush_along,
)
from .errors import PreconditionNot0Efficient, SafetyCapExceeded
from .normal_coords import NormalVector, admissible, matching_system, octagon_systems
from .surface_geom import NormalSurface, _require_closed_orientable, sphere_candidates
from .toolbox.homology import HomologyGroup, direct_sum, homology_h1
from .toolbox.isosig import iso_signature
from .tri_core import Triangulation, components, sub_triangulation
from .vertex_enum import extreme_rays

S3, S2XS1, RP3, L31, ZERO_EFFICIENT = "S3", "S2xS1", "RP3", "L31", "ZeroEfficient"

_KNOWN_H1 = {
    S3: HomologyGroup(0, ()),
    S2XS1: HomologyGroup(1, ()),
    RP3: HomologyGroup(0, (2,)),
    L31: HomologyGroup(0, (3,)),
}

NOT_S3_NOTE = (
    "NotS3 rests on the completeness of almost normal spheres: a one-vertex "
    "0-efficient triangulation of S^3 always carries an octagonal almost normal 2-sphere"
)


@dataclass(frozen=True)
class Factor:
    kind: str
    triangulation: Optional[Triangulation] = None

    @property
    def homology(self) -> HomologyGroup:
        if self.kind == ZERO_EFFICIENT:
            return homology_h1(self.triangulation)
        return _KNOWN_H1[self.kind]

    def __str__(self):
        if self.kind == ZERO_EFFICIENT:
            return f"ZeroEfficient[{iso_signature(self.triangulation)}]"
        return self.kind


@dataclass(frozen=True)
class TrailStep:
    step: int
    tets: int
    sphere: str
    outcome: str
    note: str = ""
    seconds: float = 0.0

    def line(self, times: bool = False) -> str:
        out = f"step {self.step}: t={self.tets} sphere={self.sphere} outcome={self.outcome}"
        if self.note:
            out += f" ({self.note})"
        if times:
            out += f" time={self.seconds:.3f}s"
        return out


@dataclass
class DecompositionResult:
    factors: list
    trail: list = field(default_factory=list)

    def names(self) -> list:
        return sorted(f.kind for f in self.factors)

    @property
    def homology(self) -> HomologyGroup:
        return direct_sum(f.homology for f in self.factors)

    def report(self, times: bool = False) -> str:
        lines = [f"factors: {' # '.join(str(f) for f in self.factors) or 'none'}"]
        lines += [s.line(times) for s in self.trail]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class EfficiencyResult:
    efficient: bool
    witness: Optional[NormalVector]


def vector_hash(x: NormalVector) -> str:
    return hashlib.sha256(x.serialize().encode()).hexdigest()[:12]


def decide_zero_efficient(T: Triangulation) -> EfficiencyResult:
    _require_closed_orientable(T)
    cands = sphere_candidates(T)
    if cands:
        return EfficiencyResult(False, cands[0].vector)
    return EfficiencyResult(True, None)


# ------------------------------------------------------------ decomposition

def _interpretations(outcome) -> list:
    """Candidate (factor kinds, children) readings of one crush outcome, most likely first."""
    kind = outcome.kind
    if kind == CRUSHED:
        if not outcome.pieces:
            return [([S3], [])]
        return [([], outcome.pieces)]
    if kind == TWISTED:
        return [([RP3], outcome.residue), ([RP3], outcome.pieces)]
    if kind == ONE_ANNULUS_CYCLE:
        return [([L31], outcome.residue), ([L31], outcome.pieces)]
    if kind == ALL_CONSUMED:
        return [([S3], outcome.residue)]
    if kind == NO_VERTEX_FREE_SIDE:
        if outcome.separating:
            return [([], outcome.x_parts)]
        return [([S2XS1], outcome.x_parts)]
    return []  # single-edge and three-annuli cycles: try another sphere


def _split(T: Triangulation) -> list:
    comps = components(T)
    if len(comps) == 1:
        return [T]
    return [sub_triangulation(T, c) for c in comps]


def _leaf(T: Triangulation) -> Factor:
    if T.skeleton.num_vertices == 2:
        return Factor(S3)
    return Factor(ZERO_EFFICIENT, T)


def decompose(T: Triangulation, keep_s3: bool = False) -> DecompositionResult:
    """Connected-sum decomposition into S3, S2xS1, RP3, L31 and 0-efficient pieces.

    S3 factors are dropped from the result unless nothing else remains, since
    they are the identity for connected sum; ``keep_s3`` retains them.
    """
    _require_closed_orientable(T)
    cap = 5 * T.size * T.size + 5
    factors: list = []
    trail: list = []
    work = _split(T)
    while work:
        cur = work.pop(0)
        h = homology_h1(cur)
        cands = sphere_candidates(cur)
        if not cands:
            leaf = _leaf(cur)
            factors.append(leaf)
            trail.append(TrailStep(len(trail) + 1, cur.size, "-", "ZeroEfficient",
                                   f"factor {leaf.kind}"))
            continue
        resolved = False
        for c in cands:
            if len(trail) >= cap:
                raise SafetyCapExceeded(f"more than {cap} crush attempts")
            t0 = time.perf_counter()
            out = crush_along(cur, c.vector)
            chosen = None
            for kinds, children in _interpretations(out):
                pieces = [p for ch in children for p in _split(ch)]
                if sum(p.size for p in pieces) >= cur.size:
                    continue
                total = direct_sum([_KNOWN_H1[k] for k in kinds] + [homology_h1(p) for p in pieces])
                if total == h:
                    chosen = (kinds, pieces)
                    break
            note = "rejected" if chosen is None else " ".join(chosen[0]) or "recurse"
            if out.kind == NO_VERTEX_FREE_SIDE:
                note += " separating" if out.separating else " cut-and-cap"
            trail.append(TrailStep(len(trail) + 1, cur.size, vector_hash(c.vector), out.kind,
                                   note, time.perf_counter() - t0))
            if chosen is None:
                continue
            factors += [Factor(k) for k in chosen[0]]
            work = chosen[1] + work
            resolved = True
            break
        if not resolved:
            # every sphere obstructed; a maximal sphere then bounds a ball
            if not h.is_trivial:
                raise SafetyCapExceeded("no sphere gives a homology-consistent decomposition")
            factors.append(Factor(S3))
            trail.append(TrailStep(len(trail) + 1, cur.size, "-", "AllObstructed", "S3"))
    if not keep_s3:
        rest = [f for f in factors if f.kind != S3]
        factors = rest if rest else [Factor(S3)]
    return DecompositionResult(factors, trail)


# ------------------------------------------------------------ recognition

def _octagon_search(args) -> Optional[NormalVector]:
    T, system = args
    rays = extreme_rays(matching_system(T, system))
    for r in rays:
        if not r.coords[system.oct_index]:
            continue
        if not admissible(r):
            continue
        for comp in NormalSurface(T, r).components:
            if comp.euler_char == 2 and comp.octagons == 1:
                return comp.vector
    return None


def find_almost_normal_sphere(T: Triangulation, jobs: int = 1) -> Optional[NormalVector]:
    """First octagonal almost normal 2-sphere over the 3t octagon subsystems."""
    if not decide_zero_efficient(T).efficient:
        raise PreconditionNot0Efficient("octagon search needs a 0-efficient triangulation")
    tasks = [(T, s) for s in octagon_systems(T.size)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            found = list(ex.map(_octagon_search, tasks))
        return next((v for v in found if v is not None), None)
    for task in tasks:
        v = _octagon_search(task)
        if v is not None:
            return v
    return None


@dataclass(frozen=True)
class Recognition:
    verdict: str  # "S3" or "NotS3"
    rule: str
    witness: Optional[NormalVector] = None
    note: str = ""


def recognize_s3(T: Triangulation, jobs: int = 1) -> Recognition:
    if not decide_zero_efficient(T).efficient:
        raise PreconditionNot0Efficient("recognition needs a 0-efficient triangulation")
    if T.skeleton.num_vertices == 2:
        return Recognition("S3", "two-vertex", None,
                           "a 0-efficient triangulation with two vertices is a 3-sphere")
    w = find_almost_normal_sphere(T, jobs)
    if w is not None:
        return Recognition("S3", "almost-normal-sphere", w, "octagonal almost normal 2-sphere found")
    return Recognition("NotS3", "no-almost-normal-sphere", None, NOT_S3_NOTE)


@dataclass(frozen=True)
class PrimeFactor:
    name: str
    homology: HomologyGroup
    signature: Optional[str] = None

    def __str__(self):
        if self.signature:
            return f"{self.name}[{self.signature}] H1={self.homology}"
        return self.name


def prime_decomposition(T: Triangulation, jobs: int = 1) -> list:
    result = decompose(T, keep_s3=True)
    out = []
    for f in result.factors:
        if f.kind == ZERO_EFFICIENT:
            if recognize_s3(f.triangulation, jobs).verdict == "S3":
                continue
            out.append(PrimeFactor(ZERO_EFFICIENT, f.homology, iso_signature(f.triangulation)))
        elif f.kind != S3:
            out.append(PrimeFactor(f.kind, f.homology))
    if not out:
        out = [PrimeFactor(S3, _KNOWN_H1[S3])]
    return sorted(out, key=lambda p: (p.name, str(p.homology), p.signature or ""))
