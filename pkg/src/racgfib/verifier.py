"""Link analysis over an orbit and the fibering / not-FP2 certificates.

For a state ``s`` the descending link is the full subcomplex on ``s`` and
the ascending link the full subcomplex on its complement.  The sweep
computes both for every orbit state, streams one JSON line per state into an
append-only cache, and folds the cache into a certificate.
"""

from __future__ import annotations

import hashlib
import json
import multiprocessing
import os
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Iterator

import numpy as np

from . import __version__
from .complex import full_subcomplex
from .graph import Graph, VertexSet
from .homology import homology_summary, reduced_h0_is_zero
from .moves import (
    DEFAULT_ORBIT_CAP,
    MoveSystem,
    Orbit,
    bitstring_to_coords,
    coords_to_bitstring,
    enumerate_orbit,
    is_admissible,
    system_to_json,
    validate_move_system,
)

MODE_LEMMA31 = "lemma31"
MODE_CONDITIONS_AB = "conditions-ab"
MODES = (MODE_LEMMA31, MODE_CONDITIONS_AB)

CONSEQUENCE = (
    "The certified link conditions are the hypotheses of the Morse-theoretic "
    "finiteness criterion; kernel not FP2 follows from that theorem and is not proved here."
)


class CacheCorrupt(ValueError):
    pass


@dataclass(frozen=True)
class LinkSide:
    f: tuple[int, int, int, int]
    betti: tuple[int, ...]  # b0..b3
    torsion: tuple[tuple[int, ...], ...]

    @property
    def empty(self) -> bool:
        return self.f[0] == 0

    @property
    def connected(self) -> bool:
        return not self.empty and self.betti[0] == 1

    @property
    def euler(self) -> int:
        return self.f[0] - self.f[1] + self.f[2] - self.f[3]

    @property
    def betti_euler(self) -> int:
        return sum((-1) ** d * b for d, b in enumerate(self.betti))

    def to_dict(self) -> dict:
        return {"f": list(self.f), "betti": list(self.betti), "torsion": [list(t) for t in self.torsion]}

    @classmethod
    def from_dict(cls, doc: dict) -> LinkSide:
        return cls(
            tuple(doc["f"]), tuple(doc["betti"]), tuple(tuple(t) for t in doc["torsion"])
        )  # type: ignore[arg-type]


@dataclass(frozen=True)
class LinkReport:
    coords: str
    legal: bool
    desc: LinkSide
    asc: LinkSide

    def to_line(self) -> str:
        return json.dumps(
            {"coords": self.coords, "legal": self.legal, "desc": self.desc.to_dict(), "asc": self.asc.to_dict()}
        )

    @classmethod
    def from_line(cls, text: str) -> LinkReport:
        doc = json.loads(text)
        return cls(doc["coords"], bool(doc["legal"]), LinkSide.from_dict(doc["desc"]), LinkSide.from_dict(doc["asc"]))


def link_side(g: Graph, s: VertexSet | int) -> LinkSide:
    """Exact face vector and homology through dimension 3 of the full subcomplex."""
    K = full_subcomplex(g, s, 3)
    h = homology_summary(K, 3)
    fv = K.face_vector().counts
    if h.empty:
        return LinkSide(fv, (0, 0, 0, 0), ((),) * 4)  # type: ignore[arg-type]
    betti = h.betti + (0,) * (4 - len(h.betti))
    torsion = h.torsion + ((),) * (4 - len(h.torsion))
    if reduced_h0_is_zero(K) != (betti[0] == 1):
        raise AssertionError("component count and H0 disagree")
    return LinkSide(fv, betti, torsion)  # type: ignore[arg-type]


def analyze_state(g: Graph, s: VertexSet | int, coords: str = "") -> LinkReport:
    bits = s.bits if isinstance(s, VertexSet) else s
    desc = link_side(g, bits)
    asc = link_side(g, g.full_mask ^ bits)
    return LinkReport(coords, desc.connected and asc.connected, desc, asc)


def _side_from_row(row) -> LinkSide:
    f = tuple(int(x) for x in row[0:4])
    if f[0] == 0:
        return LinkSide(f, (0, 0, 0, 0), ((),) * 4)  # type: ignore[arg-type]
    return LinkSide(f, tuple(int(x) for x in row[4:8]), ((),) * 4)  # type: ignore[arg-type]


# -- certificates --------------------------------------------------------------


@dataclass
class Certificate:
    system_id: str
    mode: str
    valid_move_system: bool
    admissible: bool
    states: int
    illegal_count: int
    first_illegal: str | None
    f1_fibering: bool
    all_links_connected: bool = False
    all_links_h2_zero: bool = False
    all_links_torsion_free: bool = False
    chi_consistent: bool = False
    h1_nonzero_count: int = 0  # descending links with H1 != 0
    h1_rank_histogram: dict[str, int] = field(default_factory=dict)
    lemma31_holds: bool = False
    conditions_ab_hold: bool = False
    holds: bool = False  # the predicate selected by ``mode``
    witness: str | None = None
    evidence_digest: dict = field(default_factory=dict)
    consequence: str = CONSEQUENCE
    tool_version: str = __version__
    input_digest: str = ""

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    def summary_lines(self) -> list[str]:
        out = [
            f"system: {self.system_id}",
            f"valid move system: {self.valid_move_system}",
            f"admissible: {self.admissible} ({self.states - self.illegal_count}/{self.states} states legal)",
            f"F1 fibering (finitely generated kernel): {self.f1_fibering}",
        ]
        if self.first_illegal is not None:
            out.append(f"first illegal state: {self.first_illegal}")
        if self.admissible:
            out += [
                f"all links connected: {self.all_links_connected}",
                f"all links H2 = 0: {self.all_links_h2_zero}",
                f"all links torsion-free: {self.all_links_torsion_free}",
                f"descending links with H1 != 0: {self.h1_nonzero_count}",
                "descending H1 rank histogram: "
                + ", ".join(f"rank {k}: {v}" for k, v in sorted(self.h1_rank_histogram.items(), key=lambda kv: int(kv[0]))),
                f"lemma31 conditions: {self.lemma31_holds}",
                f"conditions (a)/(b): {self.conditions_ab_hold}",
            ]
            out.append("descending link multiset (face vector | betti : count):")
            for item in self.evidence_digest.get("desc", []):
                out.append(f"  {tuple(item['f'])} | {tuple(item['betti'])} : {item['count']}")
        out.append(f"mode {self.mode}: {'HOLDS' if self.holds else 'FAILS'}")
        if self.witness is not None:
            out.append(f"witness: {self.witness}")
        return out


def input_digest(g: Graph, ms: MoveSystem, s0: VertexSet) -> str:
    h = hashlib.sha256()
    h.update(g.to_json().encode())
    h.update(b"\0")
    h.update(system_to_json(ms, s0).encode())
    return h.hexdigest()


class _Fold:
    """Deterministic, order-independent aggregation of link reports."""

    def __init__(self, rank: int) -> None:
        self.rank = rank
        self.seen = bytearray(1 << rank)
        self.count = 0
        self.hist: dict[str, Counter] = {"desc": Counter(), "asc": Counter()}
        self.h1 = Counter()
        self.h1_nonzero = 0
        self.first_bad: dict[str, int | None] = {"connected": None, "h2": None, "torsion": None, "h1": None, "chi": None}
        self.digest = 0

    def _mark(self, key: str, c: int) -> None:
        cur = self.first_bad[key]
        if cur is None or coords_to_bitstring(c, self.rank) < coords_to_bitstring(cur, self.rank):
            self.first_bad[key] = c

    def add(self, c: int, rep: LinkReport, line: str) -> None:
        if self.seen[c]:
            return
        self.seen[c] = 1
        self.count += 1
        self.digest = (self.digest + int.from_bytes(hashlib.sha256(line.encode()).digest(), "big")) % (1 << 256)
        for name, side in (("desc", rep.desc), ("asc", rep.asc)):
            self.hist[name][(side.f, side.betti, side.torsion)] += 1
            if not side.connected:
                self._mark("connected", c)
            if len(side.betti) > 2 and side.betti[2] != 0:
                self._mark("h2", c)
            if any(side.torsion[:3]):
                self._mark("torsion", c)
            if side.betti[1] == 0:
                self._mark("h1", c)
            if side.euler != side.betti_euler and not side.empty:
                self._mark("chi", c)
        self.h1[rep.desc.betti[1]] += 1
        if rep.desc.betti[1] != 0:
            self.h1_nonzero += 1

    def histogram(self, name: str) -> list[dict]:
        return [
            {"f": list(f), "betti": list(b), "torsion": [list(t) for t in tor], "count": n}
            for (f, b, tor), n in sorted(self.hist[name].items())
        ]


def _finish(cert: Certificate, fold: _Fold, mode: str) -> Certificate:
    bad = fold.first_bad
    cert.all_links_connected = bad["connected"] is None
    cert.all_links_h2_zero = bad["h2"] is None
    cert.all_links_torsion_free = bad["torsion"] is None
    cert.chi_consistent = bad["chi"] is None
    cert.h1_nonzero_count = fold.h1_nonzero
    cert.h1_rank_histogram = {str(k): v for k, v in sorted(fold.h1.items())}
    cert.lemma31_holds = cert.all_links_connected and cert.all_links_h2_zero and bad["h1"] is None
    cert.conditions_ab_hold = cert.all_links_connected and cert.all_links_h2_zero and fold.h1_nonzero > 0
    cert.evidence_digest = {
        "desc": fold.histogram("desc"),
        "asc": fold.histogram("asc"),
        "reports": fold.count,
        "multiset_sha256": f"{fold.digest:064x}",
    }
    cert.holds = cert.f1_fibering and (cert.lemma31_holds if mode == MODE_LEMMA31 else cert.conditions_ab_hold)
    if not cert.holds:
        order = ["connected", "h2"] + (["h1"] if mode == MODE_LEMMA31 else [])
        for key in order:
            if bad[key] is not None:
                cert.witness = f"{key} fails at coords {coords_to_bitstring(bad[key], fold.rank)}"
                break
        else:
            if mode == MODE_CONDITIONS_AB and fold.h1_nonzero == 0:
                cert.witness = "no descending link has H1 != 0"
    return cert


@dataclass(frozen=True)
class F1Result:
    valid: bool
    violations: list
    admissible: bool
    states: int
    illegal_count: int
    first_illegal: str | None

    @property
    def f1_fibering(self) -> bool:
        return self.valid and self.admissible

    @property
    def all_links_connected(self) -> bool:
        # a descending/ascending link is the flag complex of the induced
        # subgraph, so it is nonempty and connected iff the state is legal
        return self.f1_fibering


def verify_f1(g: Graph, ms: MoveSystem, s0: VertexSet, cap: int = DEFAULT_ORBIT_CAP) -> F1Result:
    violations = validate_move_system(g, ms)
    adm = is_admissible(g, ms, s0, cap)
    return F1Result(not violations, violations, adm.admissible, adm.checked, adm.illegal_count, adm.first_illegal)


def _base_certificate(g, ms, s0, system_id, mode, cap) -> tuple[Certificate, F1Result]:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    f1 = verify_f1(g, ms, s0, cap)
    cert = Certificate(
        system_id=system_id,
        mode=mode,
        valid_move_system=f1.valid,
        admissible=f1.admissible,
        states=f1.states,
        illegal_count=f1.illegal_count,
        first_illegal=f1.first_illegal,
        f1_fibering=f1.f1_fibering,
        input_digest=input_digest(g, ms, s0),
    )
    if not f1.valid:
        v = f1.violations[0]
        cert.witness = f"move axiom {v.prop} fails at vertex {v.vertex} (witness {v.witness})"
    elif not f1.admissible:
        cert.witness = f"illegal state at coords {f1.first_illegal}"
    return cert, f1


# -- sweep ---------------------------------------------------------------------

_WORKER: dict = {}


def _init_worker(g: Graph, orbit: Orbit) -> None:
    from ._kernel import adjacency_words

    _WORKER["g"] = g
    _WORKER["orbit"] = orbit
    _WORKER["adjw"] = adjacency_words(g)


def _compute_range(bounds: tuple[int, int]) -> list[str]:
    from ._kernel import LINK_WIDTH, orbit_block

    lo, hi = bounds
    g, orbit, adjw = _WORKER["g"], _WORKER["orbit"], _WORKER["adjw"]
    rows = orbit_block(g, orbit, lo, hi, adjw)
    lines = []
    for i, row in enumerate(rows):
        c = lo + i
        if row[8] and row[8 + LINK_WIDTH]:
            desc, asc = _side_from_row(row[:LINK_WIDTH]), _side_from_row(row[LINK_WIDTH:])
            rep = LinkReport(coords_to_bitstring(c, orbit.rank), desc.connected and asc.connected, desc, asc)
        else:
            rep = analyze_state(g, orbit.state_mask(c), coords_to_bitstring(c, orbit.rank))
        lines.append(rep.to_line())
    return lines


def _missing_ranges(done: bytearray, chunk: int) -> list[tuple[int, int]]:
    out = []
    arr = np.frombuffer(bytes(done), dtype=np.uint8)
    for lo in range(0, len(done), chunk):
        hi = min(lo + chunk, len(done))
        block = arr[lo:hi]
        if block.all():
            continue
        # split into maximal runs of missing coordinates
        idx = np.flatnonzero(block == 0) + lo
        start = prev = int(idx[0])
        for x in idx[1:]:
            x = int(x)
            if x != prev + 1:
                out.append((start, prev + 1))
                start = x
            prev = x
        out.append((start, prev + 1))
    return out


def _read_cache(path: str, rank: int) -> Iterator[tuple[int, LinkReport, str]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, text in enumerate(fh, 1):
            text = text.rstrip("\n")
            if not text:
                continue
            try:
                rep = LinkReport.from_line(text)
                c = bitstring_to_coords(rep.coords, rank)
            except (ValueError, KeyError, TypeError) as exc:
                raise CacheCorrupt(f"{path}:{lineno}: malformed cache line ({exc})") from None
            yield c, rep, text


def _truncate_partial_tail(path: str) -> None:
    # an interrupted writer can leave a final line without its newline
    with open(path, "rb+") as fh:
        fh.seek(0, os.SEEK_END)
        size = fh.tell()
        if size == 0:
            return
        fh.seek(size - 1)
        if fh.read(1) == b"\n":
            return
        fh.seek(0)
        data = fh.read()
        fh.truncate(data.rfind(b"\n") + 1)


def sweep(
    g: Graph,
    ms: MoveSystem,
    s0: VertexSet,
    *,
    mode: str = MODE_CONDITIONS_AB,
    workers: int = 1,
    cache: str | None = None,
    chunk: int = 2048,
    system_id: str = "custom",
    cap: int = DEFAULT_ORBIT_CAP,
    cross_check: int = 16,
    progress: Callable[[int, int], None] | None = None,
) -> Certificate:
    """Analyse every orbit state and fold the reports into a certificate.

    With ``cache`` set, reports are appended as JSON lines keyed by
    coordinates; states already present are not recomputed, so an
    interrupted run resumes where it stopped.  The certificate does not
    depend on ``workers`` or on the order in which ranges complete.
    """
    if workers < 1:
        raise ValueError("workers must be at least 1")
    cert, f1 = _base_certificate(g, ms, s0, system_id, mode, cap)
    if not f1.f1_fibering:
        return cert
    orbit = enumerate_orbit(ms, s0, cap)
    fold = _Fold(orbit.rank)

    if cache is not None and os.path.exists(cache):
        _truncate_partial_tail(cache)
        for c, rep, text in _read_cache(cache, orbit.rank):
            fold.add(c, rep, text)
    ranges = _missing_ranges(fold.seen, chunk)
    total_missing = sum(hi - lo for lo, hi in ranges)

    out = open(cache, "a", encoding="utf-8") if cache is not None else None
    try:
        done = 0

        def consume(lines: list[str], lo: int) -> None:
            nonlocal done
            for i, text in enumerate(lines):
                fold.add(lo + i, LinkReport.from_line(text), text)
            if out is not None:
                out.write("".join(t + "\n" for t in lines))
                out.flush()
            done += len(lines)
            if progress is not None:
                progress(done, total_missing)

        if ranges:
            if workers == 1 or len(ranges) == 1:
                _init_worker(g, orbit)
                for lo, hi in ranges:
                    consume(_compute_range((lo, hi)), lo)
            else:
                _init_worker(g, orbit)  # compile the kernel once before forking
                _compute_range((0, 1))
                ctx = multiprocessing.get_context("fork")
                with ctx.Pool(workers, _init_worker, (g, orbit)) as pool:
                    for (lo, _), lines in zip(ranges, pool.imap(_compute_range, ranges)):
                        consume(lines, lo)
    finally:
        if out is not None:
            out.close()

    if fold.count != orbit.size:
        raise CacheCorrupt(f"sweep covered {fold.count} of {orbit.size} states")
    if cross_check:
        _cross_check(g, orbit, cache, fold, cross_check)
    return _finish(cert, fold, mode)


def _cross_check(g: Graph, orbit: Orbit, cache: str | None, fold: _Fold, samples: int) -> None:
    """Recompute evenly spaced states on the exact path and compare to the compiled one."""
    from ._kernel import LINK_WIDTH, adjacency_words, orbit_block

    adjw = adjacency_words(g)
    step = max(1, orbit.size // samples)
    for c in range(0, orbit.size, step):
        row = orbit_block(g, orbit, c, c + 1, adjw)[0]
        exact = analyze_state(g, orbit.state_mask(c))
        for side, part in ((exact.desc, row[:LINK_WIDTH]), (exact.asc, row[LINK_WIDTH:])):
            if not part[8]:
                continue
            fast = _side_from_row(part)
            if fast.f != side.f or fast.betti != side.betti or any(side.torsion):
                raise AssertionError(f"compiled and exact link analysis disagree at coords {c}")


def verify_not_fp2(
    g: Graph,
    ms: MoveSystem,
    s0: VertexSet,
    mode: str = MODE_LEMMA31,
    system_id: str = "custom",
    **kwargs,
) -> Certificate:
    """Sweep the orbit and report the selected not-FP2 hypothesis."""
    return sweep(g, ms, s0, mode=mode, system_id=system_id, **kwargs)


def orbit_reports(g: Graph, orbit: Orbit, coords: Iterable[int] | None = None) -> list[LinkReport]:
    """Exact-path reports for the given coordinates (all by default)."""
    cs = range(orbit.size) if coords is None else coords
    return [analyze_state(g, orbit.state_mask(c), coords_to_bitstring(c, orbit.rank)) for c in cs]


def sorted_cache_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return sorted(line for line in fh if line.strip())
