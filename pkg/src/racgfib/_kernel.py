"""Compiled fast path for link face counts, Betti numbers and legality.

The exhaustive sweep analyses two links for each of 2**20 states, which is
out of reach for the pure-Python complex/SNF path on one core.  This module
does the same computation with numba on fixed-size bitwords.

Ranks of the boundary maps come from integer row elimination that only
accepts pivots equal to +-1.  When every pivot is a unit, the pivot block is
triangular with unit diagonal, so every invariant factor is 1: the ranks
are exact and the homology is torsion-free.  Any other outcome (a non-unit
leading entry, or entries that grow past 2**40) clears the ``certified``
flag and the caller must redo that link with exact Smith normal form.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .graph import Graph

# columns of a link row
E0, E1, E2, E3, B0, B1, B2, B3, CERT = range(9)
LINK_WIDTH = 9

_ONE = np.uint64(1)
_GROWTH_LIMIT = 1 << 40


def adjacency_words(g: Graph) -> np.ndarray:
    words = np.zeros((g.n, 2), dtype=np.uint64)
    for v, nb in enumerate(g.adj):
        words[v, 0] = np.uint64(nb & 0xFFFFFFFFFFFFFFFF)
        words[v, 1] = np.uint64(nb >> 64)
    return words


def split_mask(mask: int) -> np.ndarray:
    return np.array([mask & 0xFFFFFFFFFFFFFFFF, mask >> 64], dtype=np.uint64)


@njit(cache=True)
def _has(lo, hi, v):
    if v < 64:
        return (lo >> np.uint64(v)) & _ONE
    return (hi >> np.uint64(v - 64)) & _ONE


@njit(cache=True)
def _connected(adjw, n, lo, hi):
    if lo == 0 and hi == 0:
        return False
    rlo = np.uint64(0)
    rhi = np.uint64(0)
    for v in range(n):
        if _has(lo, hi, v):
            if v < 64:
                rlo = _ONE << np.uint64(v)
            else:
                rhi = _ONE << np.uint64(v - 64)
            break
    flo = rlo
    fhi = rhi
    while flo != 0 or fhi != 0:
        nlo = np.uint64(0)
        nhi = np.uint64(0)
        for v in range(n):
            if _has(flo, fhi, v):
                nlo |= adjw[v, 0]
                nhi |= adjw[v, 1]
        nlo &= lo
        nhi &= hi
        flo = nlo & ~rlo
        fhi = nhi & ~rhi
        rlo |= nlo
        rhi |= nhi
    return rlo == lo and rhi == hi


@njit(cache=True)
def _unit_rank(M, nrows, ncols):
    """Rank of the rows of M by unit-pivot elimination; returns (rank, certified)."""
    pivrow = np.empty(nrows, np.int64)
    pivcol = np.empty(nrows, np.int64)
    npiv = 0
    for r in range(nrows):
        for p in range(npiv):
            a = M[r, pivcol[p]]
            if a != 0:
                q = pivrow[p]
                for j in range(ncols):
                    if M[q, j] != 0:
                        x = M[r, j] - a * M[q, j]
                        if x > _GROWTH_LIMIT or x < -_GROWTH_LIMIT:
                            return npiv, False
                        M[r, j] = x
        found = -1
        nonzero = False
        for j in range(ncols):
            x = M[r, j]
            if x != 0:
                nonzero = True
                if x == 1 or x == -1:
                    found = j
                    break
        if found < 0:
            if nonzero:
                return npiv, False
            continue
        if M[r, found] == -1:
            for j in range(ncols):
                M[r, j] = -M[r, j]
        pivrow[npiv] = r
        pivcol[npiv] = found
        npiv += 1
    return npiv, True


@njit(cache=True)
def _link(adjw, n, lo, hi, out):
    vs = np.empty(n, np.int64)
    m = 0
    for v in range(n):
        if _has(lo, hi, v):
            vs[m] = v
            m += 1
    A = np.zeros((m, m), np.bool_)
    for i in range(m):
        u = vs[i]
        for j in range(m):
            if _has(adjw[u, 0], adjw[u, 1], vs[j]):
                A[i, j] = True

    eid = np.full((m, m), -1, np.int64)
    ea = np.empty(m * m, np.int64)
    eb = np.empty(m * m, np.int64)
    e1 = 0
    for i in range(m):
        for j in range(i + 1, m):
            if A[i, j]:
                eid[i, j] = e1
                ea[e1] = i
                eb[e1] = j
                e1 += 1

    cap = e1 * m + 1
    ta = np.empty(cap, np.int64)
    tb = np.empty(cap, np.int64)
    tc = np.empty(cap, np.int64)
    e2 = 0
    for k in range(e1):
        i = ea[k]
        j = eb[k]
        for l in range(j + 1, m):
            if A[i, l] and A[j, l]:
                ta[e2] = i
                tb[e2] = j
                tc[e2] = l
                e2 += 1

    cap3 = e2 * m + 1
    qa = np.empty(cap3, np.int64)
    qb = np.empty(cap3, np.int64)
    qc = np.empty(cap3, np.int64)
    qd = np.empty(cap3, np.int64)
    e3 = 0
    for t in range(e2):
        i = ta[t]
        j = tb[t]
        k = tc[t]
        for l in range(k + 1, m):
            if A[i, l] and A[j, l] and A[k, l]:
                qa[e3] = i
                qb[e3] = j
                qc[e3] = k
                qd[e3] = l
                e3 += 1

    # components of the 1-skeleton
    parent = np.arange(m)
    comps = m
    for k in range(e1):
        a = ea[k]
        while parent[a] != a:
            a = parent[a]
        b = eb[k]
        while parent[b] != b:
            b = parent[b]
        if a != b:
            parent[a] = b
            comps -= 1
    r1 = m - comps

    cert = True
    r2 = 0
    if e2 > 0:
        M2 = np.zeros((e2, e1), np.int64)
        for t in range(e2):
            i = ta[t]
            j = tb[t]
            k = tc[t]
            M2[t, eid[j, k]] += 1
            M2[t, eid[i, k]] -= 1
            M2[t, eid[i, j]] += 1
        r2, ok = _unit_rank(M2, e2, e1)
        cert = cert and ok

    r3 = 0
    if e3 > 0:
        keys = np.empty(e2, np.int64)
        for t in range(e2):
            keys[t] = (ta[t] * m + tb[t]) * m + tc[t]
        M3 = np.zeros((e3, e2), np.int64)
        for q in range(e3):
            a = qa[q]
            b = qb[q]
            c = qc[q]
            d = qd[q]
            M3[q, np.searchsorted(keys, (b * m + c) * m + d)] += 1
            M3[q, np.searchsorted(keys, (a * m + c) * m + d)] -= 1
            M3[q, np.searchsorted(keys, (a * m + b) * m + d)] += 1
            M3[q, np.searchsorted(keys, (a * m + b) * m + c)] -= 1
        r3, ok = _unit_rank(M3, e3, e2)
        cert = cert and ok

    out[0] = m
    out[1] = e1
    out[2] = e2
    out[3] = e3
    out[4] = m - r1
    out[5] = e1 - r1 - r2
    out[6] = e2 - r2 - r3
    out[7] = e3 - r3
    out[8] = 1 if cert else 0


@njit(cache=True)
def _orbit_block(adjw, n, gens, start, full, c0, c1, out):
    r = gens.shape[0]
    for c in range(c0, c1):
        lo = start[0]
        hi = start[1]
        for i in range(r):
            if (c >> i) & 1:
                lo ^= gens[i, 0]
                hi ^= gens[i, 1]
        row = out[c - c0]
        _link(adjw, n, lo, hi, row[0:LINK_WIDTH])
        _link(adjw, n, lo ^ full[0], hi ^ full[1], row[LINK_WIDTH:2 * LINK_WIDTH])


@njit(cache=True)
def _orbit_legal(adjw, n, gens, start, full, size, out):
    r = gens.shape[0]
    for c in range(size):
        lo = start[0]
        hi = start[1]
        for i in range(r):
            if (c >> i) & 1:
                lo ^= gens[i, 0]
                hi ^= gens[i, 1]
        out[c] = _connected(adjw, n, lo, hi) and _connected(
            adjw, n, lo ^ full[0], hi ^ full[1]
        )


def link_row(g: Graph, mask: int, adjw: np.ndarray | None = None) -> np.ndarray:
    """Face counts, Betti numbers and certification flag of the flag complex on ``mask``."""
    if adjw is None:
        adjw = adjacency_words(g)
    out = np.zeros(LINK_WIDTH, np.int64)
    w = split_mask(mask)
    _link(adjw, g.n, w[0], w[1], out)
    return out


def _orbit_arrays(g: Graph, orbit) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    gens = np.zeros((max(orbit.rank, 1), 2), np.uint64)[: orbit.rank]
    for i, m in enumerate(orbit.generators):
        gens[i] = split_mask(m)
    return gens, split_mask(orbit.start), split_mask(g.full_mask)


def orbit_block(g: Graph, orbit, lo: int, hi: int, adjw: np.ndarray | None = None) -> np.ndarray:
    """Descending and ascending link rows for coordinates ``lo <= c < hi``.

    Row ``c - lo`` holds the descending link of state ``c`` in columns
    0..8 and the ascending link (the complement) in columns 9..17.
    """
    if adjw is None:
        adjw = adjacency_words(g)
    gens, start, full = _orbit_arrays(g, orbit)
    out = np.zeros((hi - lo, 2 * LINK_WIDTH), np.int64)
    _orbit_block(adjw, g.n, gens, start, full, lo, hi, out)
    return out


def orbit_legality(g: Graph, orbit) -> np.ndarray:
    """Boolean array, indexed by integer coordinates, of legal orbit states."""
    gens, start, full = _orbit_arrays(g, orbit)
    out = np.zeros(orbit.size, np.bool_)
    _orbit_legal(adjacency_words(g), g.n, gens, start, full, orbit.size, out)
    return out
