"""Independent brute-force oracles shared by the test modules."""

import itertools
import math
from fractions import Fraction


def det(m):
    n = len(m)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        term = -1 if inv % 2 else 1
        for i in range(n):
            term *= m[i][perm[i]]
            if not term:
                break
        total += term
    return total


def exact_det(m):
    a = [[Fraction(x) for x in row] for row in m]
    n, sign, out = len(a), 1, Fraction(1)
    for i in range(n):
        p = next((r for r in range(i, n) if a[r][i]), None)
        if p is None:
            return 0
        if p != i:
            a[i], a[p] = a[p], a[i]
            sign = -sign
        out *= a[i][i]
        for r in range(i + 1, n):
            f = a[r][i] / a[i][i]
            a[r] = [x - f * y for x, y in zip(a[r], a[i])]
    return sign * out


def determinantal_factors(A):
    """Invariant factors from gcds of k x k minors (independent oracle)."""
    m, n = len(A), len(A[0]) if A else 0
    divisors = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                g = math.gcd(g, det([[A[r][c] for c in cols] for r in rows]))
        if g == 0:
            break
        divisors.append(g)
    return tuple(divisors[k] // divisors[k - 1] for k in range(1, len(divisors)))


def brute_cliques(g, s, max_dim):
    verts = [v for v in range(g.n) if s >> v & 1]
    out = []
    for d in range(max_dim + 1):
        out.append(tuple(
            c for c in itertools.combinations(verts, d + 1)
            if all(g.has_edge(u, v) for u, v in itertools.combinations(c, 2))
        ))
    return out
