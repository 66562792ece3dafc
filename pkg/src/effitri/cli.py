"""Command-line front end.

Every command builds a report (an ordered mapping of fields) which is printed
either as ``key: value`` lines or as one JSON document.  Exit status is 0 on
success, 2 on invalid input and 1 on an internal failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import __version__
from .crush import crush_along
from .errors import EffitriError, InvalidInput
from .named import NAMES, load
from .normal_coords import admissible, closed_form_chi, matching_system, weight
from .pipeline import decide_zero_efficient, decompose, prime_decomposition, recognize_s3
from .surface_geom import NormalSurface, sphere_candidates
from .toolbox import census, edge_order_report, homology_h1, iso_signature, pachner
from .toolbox.census import FILTERS
from .toolbox.pachner import MOVES
from .tri_core import Triangulation, parse, serialize, validate
from .vertex_enum import extreme_rays


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def read_input(source: str) -> Triangulation:
    if source == "-":
        return parse(sys.stdin.read())
    if source.startswith("name:"):
        return load(source[5:])
    try:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidInput(f"cannot read {source}: {exc.strerror}") from None
    return parse(text)


# ------------------------------------------------------------ commands

def cmd_validate(T: Triangulation, args) -> dict:
    rep = validate(T)
    return {
        "valid": _yes(rep.closed and rep.orientable and rep.manifold),
        "tetrahedra": T.size,
        "closed": _yes(rep.closed),
        "orientable": _yes(rep.orientable),
        "vertex_links_ok": _yes(rep.vertex_links_ok),
        "edges_valid": _yes(rep.edge_valid),
        "manifold": _yes(rep.manifold),
    }


def cmd_info(T: Triangulation, args) -> dict:
    sk = T.skeleton
    out = {
        "tetrahedra": T.size,
        "vertices": sk.num_vertices,
        "edges": sk.num_edges,
        "faces": sk.num_faces,
        "euler_characteristic": sk.euler_characteristic(),
        "closed": _yes(T.is_closed),
        "orientable": _yes(T.is_orientable),
        "signature": iso_signature(T),
    }
    if T.is_closed:
        lint = edge_order_report(T)
        out["homology"] = str(homology_h1(T))
        out["edge_orders"] = [e.order for e in lint]
        out["order_one_edges"] = [e.edge for e in lint if e.order1]
        out["cone_faces"] = sorted({f for e in lint for f in e.cone_faces})
    return out


def cmd_homology(T: Triangulation, args) -> dict:
    return {"homology": str(homology_h1(T))}


def cmd_surfaces(T: Triangulation, args) -> dict:
    A = matching_system(T)
    rays = extreme_rays(A)
    lines = []
    for r in rays:
        if admissible(r):
            surf = NormalSurface(T, r)
            tags = sorted({t for c in surf.components for t in c.tags()})
            lines.append(f"{r} admissible chi={closed_form_chi(T, r)} weight={weight(T, r)}"
                         + (f" [{' '.join(tags)}]" if tags else ""))
        else:
            lines.append(f"{r} not-admissible")
    spheres = sphere_candidates(T, rays)
    return {
        "system": A.system.tag(),
        "extreme_rays": len(rays),
        "admissible_rays": sum(1 for r in rays if admissible(r)),
        "ray": lines,
        "spheres": len(spheres),
        "sphere": [f"{k}: {c.vector} weight={c.weight}" for k, c in enumerate(spheres)],
    }


def cmd_efficiency(T: Triangulation, args) -> dict:
    res = decide_zero_efficient(T)
    out = {"verdict": "0-efficient" if res.efficient else "not 0-efficient",
           "efficient": _yes(res.efficient)}
    if res.witness is not None:
        out["witness"] = str(res.witness)
        out["witness_weight"] = weight(T, res.witness)
    return out


def _write_pieces(pieces: list, out_dir: Optional[str]) -> list:
    names = []
    for k, p in enumerate(pieces):
        name = f"piece{k}_{iso_signature(p)}.tri"
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)
            with open(os.path.join(out_dir, name), "w", encoding="utf-8") as fh:
                fh.write(serialize(p))
        names.append(name)
    return names


def cmd_crush(T: Triangulation, args) -> dict:
    spheres = sphere_candidates(T)
    if not spheres:
        raise InvalidInput("no non-vertex-linking normal sphere to crush along (0-efficient)")
    if not 0 <= args.sphere < len(spheres):
        raise InvalidInput(f"sphere index {args.sphere} out of range 0..{len(spheres) - 1}")
    x = spheres[args.sphere].vector
    out = crush_along(T, x)
    rep = {
        "sphere": str(x),
        "outcome": out.kind,
        "tetrahedra_before": T.size,
        "tetrahedra_after": out.tet_count,
        "pieces": len(out.pieces),
        "piece": [f"{iso_signature(p)} t={p.size} H1={homology_h1(p)}" for p in out.pieces],
        "audit": out.audit,
    }
    if args.out:
        rep["written"] = _write_pieces(out.pieces, args.out)
    return rep


def cmd_decompose(T: Triangulation, args) -> dict:
    res = decompose(T)
    rep = {
        "factors": [str(f) for f in res.factors],
        "homology": str(res.homology),
        "trail": [s.line(args.trail_times) for s in res.trail],
    }
    if args.prime:
        rep["prime"] = [str(p) for p in prime_decomposition(T, args.jobs)]
    return rep


def cmd_recognize(T: Triangulation, args) -> dict:
    res = recognize_s3(T, args.jobs)
    rep = {"verdict": res.verdict, "rule": res.rule}
    if res.witness is not None:
        rep["witness"] = res.witness.serialize().strip().replace("\n", " | ")
    rep["note"] = res.note
    return rep


def cmd_census(args) -> dict:
    found = census(args.tets, args.filter)
    lines = []
    for T in found:
        line = f"{iso_signature(T)} vertices={T.skeleton.num_vertices}"
        if T.is_closed:
            line += f" H1={homology_h1(T)}"
        lines.append(line)
    rep = {"tetrahedra": args.tets, "filter": args.filter, "count": len(found), "triangulation": lines}
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for T in found:
            with open(os.path.join(args.out, f"{iso_signature(T)}.tri"), "w", encoding="utf-8") as fh:
                fh.write(serialize(T))
    return rep


def cmd_pachner(T: Triangulation, args) -> dict:
    R = pachner(T, args.move, args.location)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(serialize(R))
    return {
        "move": args.move,
        "location": args.location,
        "tetrahedra": R.size,
        "signature": iso_signature(R),
        "triangulation": serialize(R).strip().splitlines(),
    }


COMMANDS = {
    "validate": cmd_validate,
    "info": cmd_info,
    "surfaces": cmd_surfaces,
    "efficiency": cmd_efficiency,
    "crush": cmd_crush,
    "decompose": cmd_decompose,
    "recognize-s3": cmd_recognize,
    "pachner": cmd_pachner,
    "homology": cmd_homology,
}


# ------------------------------------------------------------ rendering

def render_text(report: dict) -> str:
    lines = []
    for key, value in report.items():
        if isinstance(value, list):
            if not value:
                lines.append(f"{key}: none")
            elif all(isinstance(v, int) for v in value):
                lines.append(f"{key}: {' '.join(map(str, value))}")
            else:
                lines += [f"{key}: {v}" for v in value]
        else:
            lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    return render_text(report)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="effitri", description="0-efficient triangulations toolkit")
    p.add_argument("--version", action="version", version=f"effitri {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--jobs", type=int, default=1, help="parallelism hint for enumeration")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("input", help=f".tri path, '-' for standard input, or name:<{'|'.join(NAMES)}>")
        if name == "crush":
            sp.add_argument("--sphere", type=int, default=0, help="index into the sphere selection order")
            sp.add_argument("--out", help="directory for the crushed pieces")
        if name == "decompose":
            sp.add_argument("--trail-times", action="store_true", help="append timings to trail lines")
            sp.add_argument("--prime", action="store_true", help="also run recognition on the factors")
        if name == "pachner":
            sp.add_argument("--move", required=True, choices=sorted(MOVES))
            sp.add_argument("--location", type=int, required=True)
            sp.add_argument("--out", help="file for the resulting triangulation")
    sp = sub.add_parser("census", parents=[common])
    sp.add_argument("--tets", type=int, required=True)
    sp.add_argument("--filter", choices=FILTERS, default="closed-orientable")
    sp.add_argument("--out", help="directory to write one .tri file per signature")
    return p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "census":
            report = cmd_census(args)
        else:
            report = COMMANDS[args.command](read_input(args.input), args)
    except InvalidInput as exc:
        print(f"effitri: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (EffitriError, AssertionError) as exc:
        print(f"effitri: internal failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(render(report, args.format))
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
