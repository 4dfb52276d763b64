"""Integral simplicial homology through the Smith normal form.

All arithmetic uses Python integers, so there is no overflow to guard
against.  Boundary matrices of flag complexes are sparse with +-1 entries,
so invariant factors are computed in two phases: unit pivots are eliminated
sparsely (each contributes a factor 1), and whatever is left goes through the
dense minimal-pivot algorithm.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .complex import FlagComplex, boundary_columns


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` with ``D`` diagonal; ``U``/``V`` only if requested."""

    shape: tuple[int, int]
    invariant_factors: tuple[int, ...]  # nonzero diagonal, each dividing the next
    U: list[list[int]] | None = None
    V: list[list[int]] | None = None

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def D(self) -> list[list[int]]:
        m, n = self.shape
        out = [[0] * n for _ in range(m)]
        for i, d in enumerate(self.invariant_factors):
            out[i][i] = d
        return out

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d > 1)


def _identity(k: int) -> list[list[int]]:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def _dense_snf(M: list[list[int]], m: int, n: int, U=None, V=None) -> list[int]:
    """Diagonalise ``M`` in place; row ops are mirrored into U, column ops into V."""

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row dst += f * row src
        rs, rd = M[src], M[dst]
        for k in range(n):
            if rs[k]:
                rd[k] += f * rs[k]
        if U is not None:
            us, ud = U[src], U[dst]
            for k in range(m):
                if us[k]:
                    ud[k] += f * us[k]

    def add_col(dst, src, f):  # col dst += f * col src
        for row in M:
            if row[src]:
                row[dst] += f * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] += f * row[src]

    factors = []
    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            row = M[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = M[t][t]
            for i in range(t + 1, m):
                if M[i][t]:
                    add_row(i, t, -(M[i][t] // p))
            for j in range(t + 1, n):
                if M[t][j]:
                    add_col(j, t, -(M[t][j] // p))
            rest = [(abs(M[i][t]), i, t) for i in range(t + 1, m) if M[i][t]]
            rest += [(abs(M[t][j]), t, j) for j in range(t + 1, n) if M[t][j]]
            if rest:
                _, i, j = min(rest)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if M[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if M[t][t] < 0:
            M[t] = [-x for x in M[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        factors.append(M[t][t])
    return factors


def _as_rows(A) -> tuple[list[list[int]], int, int]:
    if isinstance(A, np.ndarray):
        if A.ndim != 2:
            raise ValueError("matrix must be two-dimensional")
        m, n = A.shape
        return [[int(x) for x in row] for row in A], m, n
    rows = [[int(x) for x in row] for row in A]
    m = len(rows)
    n = len(rows[0]) if rows else 0
    if any(len(r) != n for r in rows):
        raise ValueError("ragged matrix")
    return rows, m, n


def smith_normal_form(A, with_transforms: bool = False) -> SmithDecomposition:
    """Smith normal form of an integer matrix (nested lists or numpy array)."""
    rows, m, n = _as_rows(A)
    if with_transforms:
        U, V = _identity(m), _identity(n)
        factors = _dense_snf(rows, m, n, U, V)
        return SmithDecomposition((m, n), tuple(factors), U, V)
    cols: list[dict[int, int]] = [{} for _ in range(n)]
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            if x:
                cols[j][i] = x
    return SmithDecomposition((m, n), invariant_factors_sparse(cols, m))


def invariant_factors_sparse(columns: Sequence[dict[int, int]], nrows: int) -> tuple[int, ...]:
    """Invariant factors of the matrix given column-wise as ``{row: value}``."""
    # work row-wise: row r -> {col: value}
    rows: dict[int, dict[int, int]] = {}
    colrows: dict[int, set[int]] = {}
    for j, col in enumerate(columns):
        for i, x in col.items():
            if x:
                rows.setdefault(i, {})[j] = x
                colrows.setdefault(j, set()).add(i)

    ones = 0
    progress = True
    while progress:
        progress = False
        for r in sorted(rows, key=lambda r: len(rows[r])):
            row = rows.get(r)
            if row is None:
                continue
            pivot = None
            for c, x in row.items():
                if (x == 1 or x == -1) and (pivot is None or len(colrows[c]) < len(colrows[pivot])):
                    pivot = c
            if pivot is None:
                continue
            v = row[pivot]
            for r2 in list(colrows[pivot]):
                if r2 == r:
                    continue
                row2 = rows[r2]
                f = row2[pivot] * v
                for c, x in row.items():
                    y = row2.get(c, 0) - f * x
                    if y:
                        if c not in row2:
                            colrows[c].add(r2)
                        row2[c] = y
                    elif c in row2:
                        del row2[c]
                        colrows[c].discard(r2)
                if not row2:
                    del rows[r2]
            for c in row:
                colrows[c].discard(r)
                if not colrows[c]:
                    del colrows[c]
            colrows.pop(pivot, None)
            del rows[r]
            ones += 1
            progress = True

    if not rows:
        return (1,) * ones
    live_rows = sorted(rows)
    live_cols = sorted(colrows)
    cidx = {c: k for k, c in enumerate(live_cols)}
    M = [[0] * len(live_cols) for _ in live_rows]
    for k, r in enumerate(live_rows):
        for c, x in rows[r].items():
            M[k][cidx[c]] = x
    rest = _dense_snf(M, len(live_rows), len(live_cols))
    return (1,) * ones + tuple(rest)


@dataclass(frozen=True)
class HomologySummary:
    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]
    empty: bool = False
    face_counts: tuple[int, ...] = field(default=(), compare=False)

    @property
    def reduced_b0(self) -> int:
        if self.empty:
            raise ValueError("reduced H0 of the empty complex is not reported")
        return self.betti[0] - 1

    @property
    def euler(self) -> int:
        return sum((-1) ** d * b for d, b in enumerate(self.betti))

    @property
    def torsion_free(self) -> bool:
        return not any(self.torsion)

    def to_dict(self) -> dict:
        return {
            "betti": list(self.betti),
            "torsion": [list(t) for t in self.torsion],
            "empty": self.empty,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def group(self, d: int) -> str:
        """Human-readable ``H_d``, e.g. ``Z^2 + Z/3``."""
        parts = []
        if self.betti[d]:
            parts.append("Z" if self.betti[d] == 1 else f"Z^{self.betti[d]}")
        parts += [f"Z/{t}" for t in self.torsion[d]]
        return " + ".join(parts) if parts else "0"


def homology_summary(K: FlagComplex, through_dim: int = 2) -> HomologySummary:
    """``H_d(K; Z)`` for ``d <= through_dim`` from ranks and invariant factors."""
    top = min(through_dim, K.max_dim)
    counts = K.face_vector().counts
    if K.is_empty:
        return HomologySummary((0,) * (top + 1), ((),) * (top + 1), True, counts)
    factors: dict[int, tuple[int, ...]] = {}
    for d in range(1, min(top + 1, K.max_dim) + 1):
        cols = boundary_columns(K, d)
        factors[d] = invariant_factors_sparse(cols, len(K.faces[d - 1]))
    betti = []
    torsion = []
    for d in range(top + 1):
        rank_d = len(factors.get(d, ()))
        rank_up = len(factors.get(d + 1, ()))
        betti.append(len(K.faces[d]) - rank_d - rank_up)
        torsion.append(tuple(x for x in factors.get(d + 1, ()) if x > 1))
    return HomologySummary(tuple(betti), tuple(torsion), False, counts)


def reduced_h0_is_zero(K: FlagComplex) -> bool:
    """Nonempty and connected, by union-find on the 1-skeleton."""
    if K.is_empty:
        return False
    parent = {v: v for (v,) in K.faces[0]}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = len(parent)
    if K.max_dim >= 1:
        for u, v in K.faces[1]:
            a, b = find(u), find(v)
            if a != b:
                parent[a] = b
                comps -= 1
    return comps == 1
