"""Command-line front end.

Exit codes: 0 when the requested certificate holds (or the command
succeeded), 1 when it fails or a built model does not verify, 2 for usage
and input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass

from .graph import Graph, VertexSet
from .moves import (
    MoveSystem,
    OrbitTooLarge,
    bitstring_to_coords,
    coords_to_bitstring,
    enumerate_orbit,
    orbit_dump_lines,
    system_from_json,
    system_to_json,
)
from .verifier import MODE_CONDITIONS_AB, MODE_LEMMA31, MODES, CacheCorrupt, analyze_state, sweep

BUILD_TARGETS = ("fourcube", "cell24", "cell600-coord", "cell600-grid")
SYSTEMS = ("cell24", "cell600")


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    fmt: str
    workers: int = 1
    cache: str | None = None
    variant: str | None = None
    label_k: int | None = None


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _variant(text: str | None):
    from .polytopes import DEFAULT_VARIANT, grid_variants

    if text is None:
        return DEFAULT_VARIANT
    variants = grid_variants()
    if text.isdigit():
        k = int(text)
        if k >= len(variants):
            raise InputError(f"variant index {k} out of range 0..{len(variants) - 1}")
        return variants[k]
    for v in variants:
        if v.name == text:
            return v
    raise InputError(f"unknown variant {text!r}; known: {', '.join(v.name for v in variants)}")


def _builtin(name: str, cfg: RunConfig) -> tuple[Graph, MoveSystem, VertexSet, str]:
    from .polytopes import DEFAULT_LABEL_K, cell24_system, cell600_system

    if name == "cell24":
        g, ms, s0, _ = cell24_system()
        return g, ms, s0, "cell24"
    k = DEFAULT_LABEL_K if cfg.label_k is None else cfg.label_k
    try:
        g, _, ms, s0 = cell600_system(k=k, variant=_variant(cfg.variant))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return g, ms, s0, "cell600"


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def load_system(source: str, graph_path: str | None, cfg: RunConfig) -> tuple[Graph, MoveSystem, VertexSet, str]:
    """Built-in system name, or a System JSON file plus its Graph JSON."""
    if source in SYSTEMS or source == "cell600-grid":
        return _builtin("cell600" if source == "cell600-grid" else source, cfg)
    if graph_path is None:
        if source.endswith(".system.json"):
            graph_path = source[: -len(".system.json")] + ".graph.json"
        else:
            raise InputError("a System JSON file needs --graph (or a sibling <name>.graph.json)")
    try:
        g = Graph.from_json(_read(graph_path))
        ms, s0 = system_from_json(_read(source))
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"invalid input: {exc}") from None
    if ms.n != g.n:
        raise InputError(f"system has {ms.n} vertices but graph has {g.n}")
    return g, ms, s0, os.path.basename(source)


def _write(path: str, text: str) -> None:
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# -- commands ------------------------------------------------------------------


def cmd_build(args, cfg: RunConfig) -> int:
    from .complex import flag_complex
    from .polytopes import (
        build_600cell_coordinate,
        build_600cell_grid,
        build_hypercube,
        cell24_system,
        cell600_system,
        verify_600cell,
        DEFAULT_LABEL_K,
    )

    target = args.target
    prefix = os.path.join(args.out, target)
    files = {}
    status = 0
    if target == "fourcube":
        g = build_hypercube(4)
    elif target == "cell24":
        g, ms, s0, _ = cell24_system()
        files["system"] = system_to_json(ms, s0)
    elif target == "cell600-coord":
        g = build_600cell_coordinate()
    else:
        k = DEFAULT_LABEL_K if cfg.label_k is None else cfg.label_k
        variant = _variant(cfg.variant)
        g, _ = build_600cell_grid(variant)
        try:
            g, lab, ms, s0 = cell600_system(k=k, variant=variant)
        except ValueError as exc:
            print(f"labeling failed: {exc}", file=sys.stderr)
            return 1
        files["system"] = system_to_json(ms, s0)
        files["labeling"] = lab.to_json()
    if target.startswith("cell600"):
        defects = verify_600cell(g)
        if defects:
            print("600-cell verification failed:", file=sys.stderr)
            for d in defects:
                print(f"  {d}", file=sys.stderr)
            status = 1
    if cfg.fmt == "dot":
        files = {"dot": g.to_dot(target.replace("-", "_"))}
    else:
        files["graph"] = g.to_json()
    for kind, text in files.items():
        ext = "dot" if kind == "dot" else f"{kind}.json"
        _write(f"{prefix}.{ext}", text + ("" if text.endswith("\n") else "\n"))
    fv = flag_complex(g, 3).face_vector().counts
    degs = sorted(set(g.degrees()))
    print(f"{target}: {g.n} vertices, {g.edge_count} edges, degrees {degs}, flag face vector {fv}")
    for kind in files:
        ext = "dot" if kind == "dot" else f"{kind}.json"
        print(f"wrote {prefix}.{ext}")
    return status


def cmd_verify(args, cfg: RunConfig) -> int:
    g, ms, s0, system_id = load_system(args.system, args.graph, cfg)
    mode = args.mode or (MODE_LEMMA31 if system_id == "cell24" else MODE_CONDITIONS_AB)
    progress = None
    if args.progress:
        def progress(done, total):
            if done == total or done % 65536 < 2048:
                print(f"  {done}/{total} states", file=sys.stderr, flush=True)
    try:
        cert = sweep(g, ms, s0, mode=mode, workers=cfg.workers, cache=cfg.cache,
                     system_id=system_id, progress=progress)
    except OrbitTooLarge as exc:
        raise InputError(str(exc)) from None
    except CacheCorrupt as exc:
        raise InputError(str(exc)) from None
    text = cert.to_json()
    out = args.out or f"{system_id.replace('.json', '')}.certificate.json"
    _write(out, text)
    if cfg.fmt == "json":
        sys.stdout.write(text)
    else:
        print("\n".join(cert.summary_lines()))
        print(f"certificate written to {out}")
    return 0 if cert.holds else 1


def _side_record(name: str, side) -> dict:
    return {
        "side": name,
        "f": list(side.f),
        "chi": side.euler,
        "betti": list(side.betti),
        "torsion": [list(t) for t in side.torsion],
        "empty": side.empty,
    }


def _group(b: int, tors) -> str:
    parts = (["Z" if b == 1 else f"Z^{b}"] if b else []) + [f"Z/{t}" for t in tors]
    return " + ".join(parts) or "0"


def cmd_link(args, cfg: RunConfig) -> int:
    g, ms, s0, _ = load_system(args.system, args.graph, cfg)
    orbit = enumerate_orbit(ms, s0)
    if args.coords is not None:
        try:
            c = bitstring_to_coords(args.coords, orbit.rank)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        state = orbit.state(c)
    elif args.state in (None, "start"):
        state, c = s0, 0
    else:
        try:
            vs = [int(x) for x in args.state.replace(" ", "").split(",") if x]
            state = VertexSet.of(g.n, vs)
        except ValueError as exc:
            raise InputError(f"malformed state selector {args.state!r}: {exc}") from None
        c = orbit.coords_of(state)
    coords = coords_to_bitstring(c, orbit.rank) if c is not None else None
    rep = analyze_state(g, state, coords or "")
    records = [_side_record("descending", rep.desc), _side_record("ascending", rep.asc)]
    if cfg.fmt == "json":
        doc = {"coords": coords, "state": state.to_list(), "legal": rep.legal,
               "desc": records[0], "asc": records[1]}
        print(json.dumps(doc))
    elif cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["coords", "side", "e0", "e1", "e2", "e3", "chi", "b0", "b1", "b2", "b3", "torsion"])
        for r in records:
            tors = ";".join(f"{d}:{'/'.join(map(str, t))}" for d, t in enumerate(r["torsion"]) if t)
            w.writerow([coords or "", r["side"], *r["f"], r["chi"], *r["betti"], tors])
        sys.stdout.write(buf.getvalue())
    else:
        where = f"coords {coords}" if coords is not None else "not in the orbit"
        print(f"state ({where}), {len(state)} vertices, legal: {rep.legal}")
        for r in records:
            groups = ", ".join(f"H{d} = {_group(b, t)}" for d, (b, t) in enumerate(zip(r["betti"], r["torsion"])))
            print(f"{r['side']}: face vector {tuple(r['f'])}, chi = {r['chi']}, betti {tuple(r['betti'])}; {groups}")
    return 0


def cmd_orbit(args, cfg: RunConfig) -> int:
    g, ms, s0, _ = load_system(args.system, args.graph, cfg)
    try:
        orbit = enumerate_orbit(ms, s0)
    except OrbitTooLarge as exc:
        raise InputError(str(exc)) from None
    if orbit.size > args.max_states:
        raise InputError(f"orbit has {orbit.size} states; raise --max-states to dump it")
    lines = orbit_dump_lines(g, orbit)
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        if cfg.fmt == "csv":
            out.write("coords,legal,state\n")
            for line in lines:
                doc = json.loads(line)
                out.write(f"{doc['coords']},{str(doc['legal']).lower()},{' '.join(map(str, doc['state']))}\n")
        else:
            for line in lines:
                out.write(line + "\n")
    finally:
        if args.out:
            out.close()
    return 0


def cmd_export_dot(args, cfg: RunConfig) -> int:
    from .polytopes import build_600cell_coordinate, build_600cell_grid, build_hypercube, build_24cell_skeleton

    t = args.target
    if t == "fourcube":
        g = build_hypercube(4)
    elif t == "cell24":
        g = build_24cell_skeleton()[0]
    elif t == "cell600-coord":
        g = build_600cell_coordinate()
    elif t in ("cell600-grid", "cell600"):
        g = build_600cell_grid(_variant(cfg.variant))[0]
    else:
        try:
            g = Graph.from_json(_read(t))
        except (ValueError, KeyError, TypeError) as exc:
            raise InputError(f"invalid graph JSON: {exc}") from None
    name = os.path.basename(t).split(".")[0].replace("-", "_") or "G"
    text = g.to_dot(name)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="racgfib", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats, default="text"):
        sp.add_argument("--format", choices=formats, default=default)
        sp.add_argument("--variant", help="600-cell grid variant: index or name")
        sp.add_argument("--label-k", type=int, help="600-cell label multiplier")

    b = sub.add_parser("build", help="build a model and write its JSON files")
    b.add_argument("target", choices=BUILD_TARGETS)
    b.add_argument("--out", default=".", help="output directory")
    common(b, ("json", "dot"), "json")

    v = sub.add_parser("verify", help="sweep an orbit and write a certificate")
    v.add_argument("system", help="cell24, cell600, or a System JSON path")
    v.add_argument("--graph", help="Graph JSON for a System JSON path")
    v.add_argument("--mode", choices=(MODE_LEMMA31, MODE_CONDITIONS_AB))
    v.add_argument("--workers", type=_positive, default=1)
    v.add_argument("--cache", help="append-only JSONL evidence cache")
    v.add_argument("--out", help="certificate path")
    v.add_argument("--progress", action="store_true")
    common(v, ("text", "json"))

    lk = sub.add_parser("link", help="link homology of one orbit state")
    lk.add_argument("system")
    lk.add_argument("--graph")
    sel = lk.add_mutually_exclusive_group()
    sel.add_argument("--state", help="'start' or a comma-separated vertex list")
    sel.add_argument("--coords", help="coordinate bitstring, character i = generator i")
    common(lk, ("text", "json", "csv"))

    o = sub.add_parser("orbit", help="dump the orbit as JSON lines")
    o.add_argument("system")
    o.add_argument("--graph")
    o.add_argument("--out")
    o.add_argument("--max-states", type=_positive, default=1 << 12)
    common(o, ("json", "csv"), "json")

    d = sub.add_parser("export-dot", help="write a graph in DOT format")
    d.add_argument("target", help="built-in target name or Graph JSON path")
    d.add_argument("--out")
    common(d, ("dot",), "dot")
    return p


COMMANDS = {
    "build": cmd_build,
    "verify": cmd_verify,
    "link": cmd_link,
    "orbit": cmd_orbit,
    "export-dot": cmd_export_dot,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        fmt=args.format,
        workers=getattr(args, "workers", 1),
        cache=getattr(args, "cache", None),
        variant=args.variant,
        label_k=args.label_k,
    )
    try:
        return COMMANDS[args.command](args, cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


__all__ = ["MODES", "RunConfig", "build_parser", "load_system", "main"]
