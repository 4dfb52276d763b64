"""Flag (clique) complexes of graphs and their boundary operators.

Faces are stored as increasing vertex tuples and sorted lexicographically;
that global vertex order fixes the orientation of every simplex.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import Graph, VertexSet, iter_bits

MAX_DIM = 3


@dataclass(frozen=True)
class FaceVector:
    counts: tuple[int, ...]  # (e0, e1, e2, e3)

    @property
    def euler(self) -> int:
        return sum((-1) ** d * c for d, c in enumerate(self.counts))

    def __getitem__(self, d: int) -> int:
        return self.counts[d] if d < len(self.counts) else 0

    def as_list(self) -> list[int]:
        return list(self.counts)


def euler_characteristic(fv: FaceVector | Sequence[int]) -> int:
    counts = fv.counts if isinstance(fv, FaceVector) else tuple(fv)
    return sum((-1) ** d * c for d, c in enumerate(counts))


@dataclass(frozen=True)
class FlagComplex:
    faces: tuple[tuple[tuple[int, ...], ...], ...]  # faces[d] = sorted d-simplices

    @property
    def max_dim(self) -> int:
        return len(self.faces) - 1

    @property
    def is_empty(self) -> bool:
        return not self.faces or not self.faces[0]

    def face_vector(self) -> FaceVector:
        counts = [len(f) for f in self.faces]
        counts += [0] * (MAX_DIM + 1 - len(counts))
        return FaceVector(tuple(counts))

    def index(self, d: int) -> dict[tuple[int, ...], int]:
        return {f: i for i, f in enumerate(self.faces[d])}

    def to_json(self) -> str:
        return json.dumps({"faces": {str(d): [list(f) for f in fs] for d, fs in enumerate(self.faces)}})

    @classmethod
    def from_json(cls, text: str) -> FlagComplex:
        doc = json.loads(text)["faces"]
        dims = sorted(int(k) for k in doc)
        return cls(tuple(tuple(tuple(f) for f in doc[str(d)]) for d in dims))


def _cliques(adj: Sequence[int], s: int, max_dim: int) -> list[list[tuple[int, ...]]]:
    faces: list[list[tuple[int, ...]]] = [[] for _ in range(max_dim + 1)]

    def grow(clique: tuple[int, ...], cands: int) -> None:
        faces[len(clique) - 1].append(clique)
        if len(clique) == max_dim + 1:
            return
        for v in iter_bits(cands):
            grow(clique + (v,), cands & adj[v] & ~((2 << v) - 1))

    for v in iter_bits(s):
        grow((v,), s & adj[v] & ~((2 << v) - 1))
    for fs in faces:
        fs.sort()
    return faces


def flag_complex(g: Graph, max_dim: int = MAX_DIM) -> FlagComplex:
    """All cliques of ``g`` with at most ``max_dim + 1`` vertices."""
    return full_subcomplex(g, g.vertices, max_dim)


def full_subcomplex(g: Graph, s: VertexSet | int, max_dim: int = MAX_DIM) -> FlagComplex:
    """Flag complex of the subgraph induced on ``s``, in the ambient numbering."""
    if not 0 <= max_dim <= MAX_DIM:
        raise ValueError(f"max_dim must lie in 0..{MAX_DIM}")
    bits = s.bits if isinstance(s, VertexSet) else s
    return FlagComplex(tuple(tuple(f) for f in _cliques(g.adj, bits, max_dim)))


def boundary_columns(K: FlagComplex, d: int) -> list[dict[int, int]]:
    """Sparse form of the boundary map: column ``j`` as ``{row: coefficient}``."""
    if not 1 <= d <= K.max_dim:
        raise ValueError(f"boundary dimension {d} outside 1..{K.max_dim}")
    rows = K.index(d - 1)
    cols = []
    for face in K.faces[d]:
        col = {}
        for i in range(len(face)):
            col[rows[face[:i] + face[i + 1:]]] = -1 if i % 2 else 1
        cols.append(col)
    return cols


def boundary_matrix(K: FlagComplex, d: int) -> np.ndarray:
    """Dense boundary matrix: rows are (d-1)-faces, columns d-faces.

    Deleting the ``i``-th vertex of a column's tuple gives coefficient ``(-1)**i``.
    """
    mat = np.zeros((len(K.faces[d - 1]), len(K.faces[d])), dtype=np.int64)
    for j, col in enumerate(boundary_columns(K, d)):
        for r, v in col.items():
            mat[r, j] = v
    return mat


def check_closure(K: FlagComplex) -> list[tuple[int, ...]]:
    """Faces whose codimension-1 subfaces are missing (empty when closed)."""
    missing = []
    for d in range(1, K.max_dim + 1):
        lower = set(K.faces[d - 1])
        for face in K.faces[d]:
            for i in range(len(face)):
                if face[:i] + face[i + 1:] not in lower:
                    missing.append(face)
                    break
    return missing
