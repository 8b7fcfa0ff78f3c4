"""Independent oracles used to cross-check the package's exact routines.

Everything here is deliberately naive: cofactor determinants, support-set
circuit search, augmenting-path max flow.  Slow is fine, different is the
point.
"""

from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
import random

from circuitkit.ratmat import RatMatrix


def naive_det(M: RatMatrix) -> Fraction:
    n = M.rows
    if n != M.cols:
        raise ValueError("square only")
    if n == 0:
        return Fraction(1)
    if n == 1:
        return M.entry(0, 0)
    total = Fraction(0)
    for j in range(n):
        a = M.entry(0, j)
        if a == 0:
            continue
        minor_rows = [
            [M.entry(i, k) for k in range(n) if k != j] for i in range(1, n)
        ]
        sub = RatMatrix.from_rows(minor_rows, cols=n - 1)
        total += (-1) ** j * a * naive_det(sub)
    return total


def _nullvector_on(A: RatMatrix, cols):
    """A kernel vector supported inside `cols`, or None; Gaussian, dense."""
    m, k = A.rows, len(cols)
    rows = [[A.entry(i, c) for c in cols] for i in range(m)]
    # Row reduce [rows | 0]; find a free column, back-substitute.
    pivots = {}
    r = 0
    for c in range(k):
        pr = None
        for i in range(r, m):
            if rows[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots[c] = r
        r += 1
    free = [c for c in range(k) if c not in pivots]
    if not free:
        return None
    f = free[0]
    x = [Fraction(0)] * k
    x[f] = Fraction(1)
    for c, pr in pivots.items():
        x[c] = -rows[pr][f]
    return x


def brute_circuits(A: RatMatrix):
    """All circuits of ker(A) as sign-canonical integer tuples.

    A support is a circuit support iff the restricted kernel is 1-dim and
    no proper subset supports a kernel vector; minimal supports are found
    by increasing size.
    """
    n = A.cols
    found = []
    supports = []
    for size in range(1, n + 1):
        for cols in combinations(range(n), size):
            if any(set(s) <= set(cols) for s in supports):
                continue
            x = _nullvector_on(A, cols)
            if x is None:
                continue
            if any(v == 0 for v in x):
                continue
            full = [Fraction(0)] * n
            for c, v in zip(cols, x):
                full[c] = v
            mult = lcm(*[v.denominator for v in full if v != 0])
            ints = [int(v * mult) for v in full]
            g = gcd(*[abs(v) for v in ints if v])
            ints = [v // g for v in ints]
            lead = next(v for v in ints if v)
            if lead < 0:
                ints = [-v for v in ints]
            supports.append(cols)
            found.append(tuple(ints))
    return sorted(found)


def brute_kappa(A: RatMatrix) -> Fraction:
    best = Fraction(1)
    for g in brute_circuits(A):
        nz = [abs(v) for v in g if v]
        best = max(best, Fraction(max(nz), min(nz)))
    return best


def brute_kappa_dot(A: RatMatrix) -> int:
    out = 1
    for g in brute_circuits(A):
        out = lcm(out, *[abs(v) for v in g if v])
    return out


def brute_kappa_bar(A: RatMatrix) -> int:
    out = 1
    for g in brute_circuits(A):
        out = max(out, max(abs(v) for v in g))
    return out


def ford_fulkerson(n_nodes, arcs, capacities, s, t) -> Fraction:
    """Max s-t flow, BFS augmenting paths on an explicit residual graph."""
    cap = {}
    adj = {v: set() for v in range(n_nodes)}
    for (u, v), c in zip(arcs, capacities):
        cap[(u, v)] = cap.get((u, v), Fraction(0)) + Fraction(c)
        cap.setdefault((v, u), Fraction(0))
        adj[u].add(v)
        adj[v].add(u)
    total = Fraction(0)
    while True:
        prev = {s: None}
        queue = [s]
        while queue and t not in prev:
            x = queue.pop(0)
            for y in adj[x]:
                if y not in prev and cap.get((x, y), 0) > 0:
                    prev[y] = x
                    queue.append(y)
        if t not in prev:
            return total
        path = []
        y = t
        while prev[y] is not None:
            path.append((prev[y], y))
            y = prev[y]
        push = min(cap[e] for e in path)
        for u, v in path:
            cap[(u, v)] -= push
            cap[(v, u)] += push
        total += push


def random_int_matrix(rng: random.Random, m: int, n: int, lo=-4, hi=4) -> RatMatrix:
    while True:
        rows = [[rng.randint(lo, hi) for _ in range(n)] for _ in range(m)]
        if any(any(v for v in row) for row in rows):
            return RatMatrix.from_rows(rows, cols=n)
