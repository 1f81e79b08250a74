"""hamflow command line: enumerate, analyze, selftest."""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass

import jsonschema

from . import oracles
from .diagram import DISK, SPHERE, DiagramError
from .enumerate import (AtlasRequest, LimitExceeded, atlas_from_json, atlas_to_json,
                        enumerate_atlas)
from .homotopy import core, homology, order_complex, sphere_report
from .poset import build_poset, hasse_dot

EXIT_OK, EXIT_VALIDATION, EXIT_LIMIT, EXIT_IO, EXIT_SCHEMA = 0, 2, 3, 4, 5

SURFACES = {"sphere": SPHERE, "disk": DISK}

_SADDLE = {
    "type": "object",
    "required": ["placement", "two_k", "count"],
    "properties": {
        "placement": {"enum": ["interior", "boundary"]},
        "two_k": {"type": "integer", "minimum": 1},
        "count": {"type": "integer", "minimum": 1},
    },
}

ATLAS_SCHEMA = {
    "type": "object",
    "required": ["request", "classes"],
    "properties": {
        "request": {
            "type": "object",
            "required": ["i_minus", "i_plus", "surface"],
            "properties": {
                "i_minus": {"type": "integer", "minimum": 0},
                "i_plus": {"type": "integer", "minimum": 0},
                "surface": {"enum": list(SURFACES)},
                "max_codim": {"type": ["integer", "null"]},
                "merge_mirrors": {"type": "boolean"},
            },
        },
        "classes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "codim", "census", "diagram"],
                "properties": {
                    "id": {"type": "string", "pattern": "^[0-9a-f]+$"},
                    "codim": {"type": "integer", "minimum": 0},
                    "census": {
                        "type": "object",
                        "required": ["centers_cw", "centers_ccw", "saddles", "boundary"],
                        "properties": {
                            "centers_cw": {"type": "integer"},
                            "centers_ccw": {"type": "integer"},
                            "saddles": {"type": "array", "items": _SADDLE},
                            "boundary": {"enum": ["periodic", "saddled", None]},
                        },
                    },
                    "diagram": {"type": "object"},
                },
            },
        },
    },
}


class SchemaError(ValueError):
    pass


class IoFailure(OSError):
    pass


@dataclass
class RunConfig:
    command: str
    i_minus: int = 0
    i_plus: int = 0
    surface: str = "disk"
    max_codim: int | None = None
    atlas: str | None = None
    out: str | None = None
    dot: str | None = None
    faces: str | None = None
    paper_orientation: bool = False
    merge_mirrors: bool = False
    single_detach: bool = False
    coefficients: str = "z"
    seed: int = 0
    inject_fault: str | None = None


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def _write(path, text):
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as e:
        raise IoFailure(f"cannot write {path}: {e.strerror}") from e


def load_atlas(path):
    try:
        with open(path) as fh:
            raw = fh.read()
    except OSError as e:
        raise IoFailure(f"cannot read {path}: {e.strerror}") from e
    try:
        obj = json.loads(raw)
        jsonschema.validate(obj, ATLAS_SCHEMA)
        return atlas_from_json(obj)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: not JSON ({e.msg})") from e
    except jsonschema.ValidationError as e:
        raise SchemaError(f"{path}: {e.message}") from e
    except DiagramError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise SchemaError(f"{path}: {e}") from e


def _request(cfg: RunConfig) -> AtlasRequest:
    req = AtlasRequest(cfg.i_minus, cfg.i_plus, SURFACES[cfg.surface], cfg.max_codim,
                       cfg.merge_mirrors)
    req.check()
    return req


def cmd_enumerate(cfg: RunConfig, stdout=None):
    stdout = stdout or sys.stdout
    atlas = enumerate_atlas(_request(cfg))
    if cfg.out:
        _write(cfg.out, dumps(atlas_to_json(atlas)))
    print(atlas.counts_line(), file=stdout)
    print(f"total {len(atlas.classes)}", file=stdout)
    return atlas


def _sphere_dim(h):
    top = max((d for d, b in enumerate(h.betti) if b), default=0)
    return top if top > 0 and sphere_report(h, top) else None


def analyze_atlas(atlas, coefficients="z", multi_detach=True):
    """(report, poset): components, cores and homology of an atlas, JSON-ready."""
    p = build_poset(atlas, multi_detach)
    comps = []
    for comp in p.connected_components():
        c = core(comp)
        h_full = homology(order_complex(comp), coefficients)
        h_core = homology(order_complex(c), coefficients)
        top = [x for x in comp.elements if comp.codim.get(x) == max(comp.codim.values())]
        comps.append({
            "size": len(comp),
            "elements": list(comp.elements),
            "most_degenerate": top,
            "core_size": len(c),
            "core": list(c.elements),
            "contractible": len(c) == 1,
            "homology": h_full.to_json(),
            "core_homology": h_core.to_json(),
            "sphere_dim": _sphere_dim(h_core) if coefficients == "z" else None,
        })
    return {"request": atlas.request.to_json(), "counts": {str(k): n for k, n in atlas.counts().items()},
            "poset": p.to_json(), "components": comps}, p


def cmd_analyze(cfg: RunConfig, stdout=None) -> dict:
    stdout = stdout or sys.stdout
    atlas = load_atlas(cfg.atlas) if cfg.atlas else enumerate_atlas(_request(cfg))
    report, p = analyze_atlas(atlas, cfg.coefficients, not cfg.single_detach)
    for j, c in enumerate(report["components"]):
        b = ",".join(map(str, c["homology"]["betti"]))
        tors = [t for t in c["homology"]["torsion"] if t]
        sphere = f"S^{c['sphere_dim']}" if c["sphere_dim"] is not None else "no"
        print(f"component {j}: size {c['size']} core {c['core_size']} "
              f"contractible {'yes' if c['contractible'] else 'no'} b=({b}) "
              f"torsion {tors or 'none'} sphere {sphere}", file=stdout)
    if cfg.out:
        _write(cfg.out, dumps(report))
    if cfg.dot:
        labels = {c.id: f"{c.id[:8]} c{c.codim}" for c in atlas.classes}
        _write(cfg.dot, hasse_dot(p, cfg.paper_orientation, labels))
    if cfg.faces:
        _write(cfg.faces, "".join(order_complex(comp).face_list() for comp in p.connected_components()))
    return report


def cmd_selftest(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    rng = random.Random(cfg.seed)
    for name, check in oracles.suite(rng, cfg.inject_fault):
        t = time.perf_counter()
        ok, detail = check()
        dt = time.perf_counter() - t
        print(f"{'ok  ' if ok else 'FAIL'} {name} ({dt:.2f}s){': ' + detail if detail else ''}",
              file=stdout)
        if not ok:
            print(f"first failing property: {name}", file=stdout)
            return EXIT_VALIDATION
    return EXIT_OK


def _centers(text):
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected I,J (clockwise and counter-clockwise centers)")
    return a, b


def parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hamflow", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--centers", type=_centers, metavar="I,J",
                        help="clockwise and counter-clockwise center counts")
        sp.add_argument("--surface", choices=list(SURFACES), default="disk")
        sp.add_argument("--max-codim", type=int)
        sp.add_argument("--merge-mirrors", action="store_true",
                        help="identify mirror images (orientation-reversing equivalence)")
        sp.add_argument("--out", help="JSON output path")

    e = sub.add_parser("enumerate", help="enumerate classes and write an atlas")
    common(e)
    a = sub.add_parser("analyze", help="poset, cores and homology of an atlas")
    a.add_argument("atlas", nargs="?", help="atlas JSON; if absent --centers is enumerated in-process")
    common(a)
    a.add_argument("--dot", help="write the Hasse diagram as DOT")
    a.add_argument("--faces", help="write the order complex as a face list")
    a.add_argument("--paper-orientation", action="store_true",
                   help="draw DOT edges from degenerate to generic classes")
    a.add_argument("--coefficients", choices=["z", "q", "z2"], default="z")
    a.add_argument("--single-detach", action="store_true",
                   help="let at most one boundary saddle leave the circle per move")
    s = sub.add_parser("selftest", help="run the oracle suite")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--inject-fault", choices=["cover-codim"], help=argparse.SUPPRESS)
    return ap


def config(argv=None) -> RunConfig:
    ns = parser().parse_args(argv)
    cfg = RunConfig(ns.command)
    for k, v in vars(ns).items():
        if k == "centers":
            if v is not None:
                cfg.i_minus, cfg.i_plus = v
        elif hasattr(cfg, k) and v is not None:
            setattr(cfg, k, v)
    if cfg.command == "enumerate" and ns.centers is None:
        parser().error("enumerate needs --centers")
    if cfg.command == "analyze" and not cfg.atlas and ns.centers is None:
        parser().error("analyze needs an atlas file or --centers")
    return cfg


def main(argv=None) -> int:
    cfg = config(argv)
    try:
        if cfg.command == "enumerate":
            cmd_enumerate(cfg)
        elif cfg.command == "analyze":
            cmd_analyze(cfg)
        else:
            return cmd_selftest(cfg)
    except LimitExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_LIMIT
    except IoFailure as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except SchemaError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    except (DiagramError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
