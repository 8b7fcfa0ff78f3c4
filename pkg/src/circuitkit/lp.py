"""Exact rational linear programming.

Two-phase primal simplex with Bland's rule over Fractions.  Instances come
in three flavors: standard form (min cx, Ax = b, x >= 0), upper-bounded
standard form (0 <= x <= u, with None entries meaning unbounded), and the
affine-subspace form (x in W + d, x >= 0) which standardizes immediately.

Vertex enumeration, the vertex-edge graph, and fractionality (the lcm of
vertex denominators) run over the standardized system and are exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BadParameters,
    CircuitKitError,
    DimensionMismatch,
    InfeasibleSystem,
    UnboundedRegion,
)
from .ratmat import (
    RatMatrix,
    bareiss_det,
    rank,
    solve_linear,
    vec,
    vec_zero,
)
from .subspace import Subspace

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPInstance:
    """min <c, x> subject to Ax = b, 0 <= x (<= u when bounds are present)."""

    A: RatMatrix
    b: tuple
    c: tuple
    u: tuple | None = None  # entries Fraction or None (no upper bound)

    def __post_init__(self):
        if len(self.b) != self.A.rows or len(self.c) != self.A.cols:
            raise DimensionMismatch("LP data shapes disagree")
        if self.u is not None and len(self.u) != self.A.cols:
            raise DimensionMismatch("bound vector has the wrong length")

    @classmethod
    def standard(cls, A: RatMatrix, b, c) -> "LPInstance":
        return cls(A=A, b=vec(b), c=vec(c))

    @classmethod
    def bounded(cls, A: RatMatrix, b, c, u) -> "LPInstance":
        uu = tuple(None if x is None else Fraction(x) for x in u)
        if any(x is not None and x < 0 for x in uu):
            raise BadParameters("upper bounds must be nonnegative")
        return cls(A=A, b=vec(b), c=vec(c), u=uu)

    @classmethod
    def from_subspace(cls, W: Subspace, d, c) -> "LPInstance":
        """Feasible set {x : x in W + d, x >= 0} as a standard form LP."""
        dv = vec(d)
        A = W.kernel_rep
        return cls(A=A, b=A.matvec(dv), c=vec(c))

    @property
    def n(self) -> int:
        return self.A.cols

    @property
    def is_bounded_form(self) -> bool:
        return self.u is not None

    def upper(self, i: int):
        if self.u is None:
            return None
        return self.u[i]

    def standardized(self):
        """(rows, b, c, n_orig, bounded_idx) with slack rows for finite bounds."""
        rows = [list(r) for r in self.A.data]
        b = list(self.b)
        c = list(self.c)
        n = self.A.cols
        bounded_idx = []
        if self.u is not None:
            bounded_idx = [i for i, x in enumerate(self.u) if x is not None]
            f = len(bounded_idx)
            for r in rows:
                r.extend([Fraction(0)] * f)
            for k, i in enumerate(bounded_idx):
                row = [Fraction(0)] * (n + f)
                row[i] = Fraction(1)
                row[n + k] = Fraction(1)
                rows.append(row)
                b.append(self.u[i])
            c.extend([Fraction(0)] * f)
        return rows, b, c, n, bounded_idx


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple | None = None
    objective: Fraction | None = None
    basis: tuple | None = None
    y: tuple | None = None  # one dual per row of the instance's A
    dual_upper: tuple | None = None  # t >= 0 per coordinate, bounded form only
    certificate: tuple | None = None  # Farkas vector or improving ray
    pivots: int = 0


class _Tableau:
    """Dense simplex tableau with artificial columns kept for dual extraction."""

    def __init__(self, rows: list[list[Fraction]], b: list[Fraction]):
        self.m = len(rows)
        self.n = len(rows[0]) if rows else 0
        self.flip = [Fraction(1)] * self.m
        self.T: list[list[Fraction]] = []
        for i in range(self.m):
            r = list(rows[i])
            rhs = b[i]
            if rhs < 0:
                r = [-x for x in r]
                rhs = -rhs
                self.flip[i] = Fraction(-1)
            art = [Fraction(0)] * self.m
            art[i] = Fraction(1)
            self.T.append(r + art + [rhs])
        self.basis = [self.n + i for i in range(self.m)]
        self.orig_row = list(range(self.m))  # live row -> original row index
        self.pivots = 0

    @property
    def width(self) -> int:
        return self.n + self.m

    def rhs(self, r: int) -> Fraction:
        return self.T[r][-1]

    def pivot(self, r: int, j: int):
        piv = self.T[r][j]
        self.T[r] = [x / piv for x in self.T[r]]
        for i in range(len(self.T)):
            if i != r and self.T[i][j] != 0:
                f = self.T[i][j]
                row_r = self.T[r]
                self.T[i] = [a - f * b for a, b in zip(self.T[i], row_r)]
        self.basis[r] = j
        self.pivots += 1

    def reduced_costs(self, costs: list[Fraction]) -> list[Fraction]:
        cb = [costs[j] for j in self.basis]
        out = []
        for j in range(self.width):
            acc = costs[j]
            for r in range(len(self.T)):
                if cb[r] != 0 and self.T[r][j] != 0:
                    acc -= cb[r] * self.T[r][j]
            out.append(acc)
        return out

    def objective(self, costs: list[Fraction]) -> Fraction:
        return sum(
            (costs[self.basis[r]] * self.rhs(r) for r in range(len(self.T))),
            Fraction(0),
        )

    def duals(self, costs: list[Fraction]) -> list[Fraction]:
        """y with y_i = (c_B B^{-1})_i per original row, zeros for dropped rows."""
        y = [Fraction(0)] * self.m
        for orig in range(self.m):
            col = self.n + orig
            acc = Fraction(0)
            for r in range(len(self.T)):
                cb = costs[self.basis[r]]
                if cb != 0 and self.T[r][col] != 0:
                    acc += cb * self.T[r][col]
            y[orig] = acc * self.flip[orig]
        return y

    def run(self, costs: list[Fraction], allow_artificial: bool, track=None):
        """Bland iterations to optimality or unboundedness."""
        limit = self.width
        while True:
            if track is not None:
                key = tuple(sorted(self.basis))
                if key in track:
                    raise CircuitKitError("Bland's rule revisited a basis")
                track.add(key)
            red = self.reduced_costs(costs)
            enter = None
            for j in range(limit if allow_artificial else self.n):
                if red[j] < 0:
                    enter = j
                    break
            if enter is None:
                return OPTIMAL, None
            leave = None
            best = None
            for r in range(len(self.T)):
                a = self.T[r][enter]
                if a > 0:
                    ratio = self.rhs(r) / a
                    key = (ratio, self.basis[r])
                    if best is None or key < best:
                        best = key
                        leave = r
            if leave is None:
                return UNBOUNDED, enter
            self.pivot(leave, enter)

    def drive_out_artificials(self):
        """Pivot artificial basics to original columns; drop redundant rows."""
        r = 0
        while r < len(self.T):
            if self.basis[r] >= self.n:
                col = next((j for j in range(self.n) if self.T[r][j] != 0), None)
                if col is None:
                    del self.T[r]
                    del self.basis[r]
                    del self.orig_row[r]
                    continue
                self.pivot(r, col)
            r += 1

    def solution(self) -> list[Fraction]:
        x = [Fraction(0)] * self.width
        for r in range(len(self.T)):
            x[self.basis[r]] = self.rhs(r)
        return x


def _solve_standard(rows, b, c, track_bases=False):
    """Two-phase simplex on min c x, rows x = b, x >= 0 (lists of Fractions)."""
    m = len(rows)
    n = len(rows[0]) if rows else len(c)
    if m == 0:
        neg = next((j for j in range(n) if c[j] < 0), None)
        if neg is not None:
            ray = [Fraction(0)] * n
            ray[neg] = Fraction(1)
            return {"status": UNBOUNDED, "certificate": ray, "pivots": 0}
        return {
            "status": OPTIMAL,
            "x": [Fraction(0)] * n,
            "objective": Fraction(0),
            "basis": [],
            "y": [],
            "pivots": 0,
        }
    tab = _Tableau(rows, b)
    phase1 = [Fraction(0)] * tab.n + [Fraction(1)] * tab.m
    status, _ = tab.run(
        phase1, allow_artificial=True, track=set() if track_bases else None
    )
    assert status == OPTIMAL
    if tab.objective(phase1) > 0:
        farkas = tab.duals(phase1)
        return {"status": INFEASIBLE, "certificate": farkas, "pivots": tab.pivots}
    tab.drive_out_artificials()
    costs = list(c) + [Fraction(0)] * tab.m
    status, enter = tab.run(
        costs, allow_artificial=False, track=set() if track_bases else None
    )
    if status == UNBOUNDED:
        ray = [Fraction(0)] * tab.width
        ray[enter] = Fraction(1)
        for r in range(len(tab.T)):
            ray[tab.basis[r]] = -tab.T[r][enter]
        return {"status": UNBOUNDED, "certificate": ray[: tab.n], "pivots": tab.pivots}
    x = tab.solution()
    return {
        "status": OPTIMAL,
        "x": x[: tab.n],
        "objective": tab.objective(costs),
        "basis": sorted(tab.basis),
        "y": tab.duals(costs),
        "pivots": tab.pivots,
    }


def solve(lp: LPInstance, track_bases: bool = False) -> LPResult:
    """Exact optimum with duals and certificates.

    infeasible -> certificate y with y^T A_std <= 0 and y^T b_std > 0;
    unbounded  -> certificate d >= 0 with A d = 0, c d < 0 (original coords).
    """
    rows, b, c, n, bounded_idx = lp.standardized()
    out = _solve_standard(rows, b, c, track_bases=track_bases)
    if out["status"] == INFEASIBLE:
        return LPResult(
            status=INFEASIBLE, certificate=tuple(out["certificate"]), pivots=out["pivots"]
        )
    if out["status"] == UNBOUNDED:
        ray = tuple(out["certificate"][:n])
        return LPResult(status=UNBOUNDED, certificate=ray, pivots=out["pivots"])
    x = tuple(out["x"][:n])
    y_std = out["y"]
    y = tuple(y_std[: lp.A.rows])
    dual_upper = None
    if lp.u is not None:
        t = [Fraction(0)] * n
        for k, i in enumerate(bounded_idx):
            t[i] = -y_std[lp.A.rows + k]
        dual_upper = tuple(t)
    return LPResult(
        status=OPTIMAL,
        x=x,
        objective=out["objective"],
        basis=tuple(j for j in out["basis"] if j < n),
        y=y,
        dual_upper=dual_upper,
        pivots=out["pivots"],
    )


def _row_basis(rows, width) -> list[int]:
    """Indices of a maximal independent subset of rows, greedily."""
    keep: list[int] = []
    cur = 0
    for i, r in enumerate(rows):
        cand = [rows[k] for k in keep] + [r]
        M = RatMatrix.from_rows(cand, cols=width)
        if rank(M) > cur:
            keep.append(i)
            cur += 1
    return keep


def _std_vertices(lp: LPInstance):
    """Vertices of the standardized region, as full standardized vectors."""
    rows, b, c, n, bounded_idx = lp.standardized()
    width = len(rows[0]) if rows else n
    if not rows:
        return {tuple([Fraction(0)] * n): ()}, n
    keep = _row_basis(rows, width)
    A_full = RatMatrix.from_rows(rows, cols=width)
    bv = vec(b)
    # Consistency of dropped rows is checked per candidate solution below via
    # the full system, so redundant-but-inconsistent data cannot slip through.
    A_red = RatMatrix.from_rows([rows[i] for i in keep], cols=width)
    b_red = tuple(b[i] for i in keep)
    m = A_red.rows
    seen = {}
    for B in itertools.combinations(range(width), m):
        sub = A_red.take_cols(B)
        if bareiss_det(sub) == 0:
            continue
        xb = solve_linear(sub, b_red)
        if xb is None:
            continue
        x = [Fraction(0)] * width
        for pos, j in enumerate(B):
            x[j] = xb[pos]
        if any(v < 0 for v in x):
            continue
        xt = tuple(x)
        if A_full.matvec(xt) != bv:
            continue
        seen.setdefault(xt, B)
    return seen, n


def vertices(lp: LPInstance) -> list[tuple]:
    """All (vertex, basis) pairs, exactly, one per vertex.

    Vertices come back in the instance's original coordinates; the basis is
    a representative column set of the standardized system (slack columns
    for finite upper bounds sit at indices >= n).  Degenerate bases of the
    same vertex are deduplicated.
    """
    seen, n = _std_vertices(lp)
    out = {}
    for v, B in seen.items():
        out.setdefault(v[:n], B)
    return sorted(out.items())


def _region_is_unbounded(lp: LPInstance) -> bool:
    """True when a nonzero recession direction exists."""
    rows, b, c, n, bounded_idx = lp.standardized()
    width = len(rows[0]) if rows else n
    if width == 0:
        return False
    # max 1^T d  s.t.  A d = 0, 0 <= d <= 1; positive optimum == unbounded.
    A = RatMatrix.from_rows(rows, cols=width) if rows else RatMatrix.zeros(0, width)
    box = LPInstance.bounded(
        A,
        vec_zero(len(rows)),
        tuple(Fraction(-1) for _ in range(width)),
        tuple(Fraction(1) for _ in range(width)),
    )
    res = solve(box)
    assert res.status == OPTIMAL
    return res.objective < 0


def edge_graph(lp: LPInstance):
    """Vertex list plus adjacency via the union-of-supports rank test.

    Two vertices are adjacent iff the minimal face containing both is a
    segment: |S| - rank(A_S) = 1 for S the union of their supports.  The
    test is basis-free, so degeneracy cannot split or merge vertices.
    """
    seen, n = _std_vertices(lp)
    std_verts = list(seen)
    if not std_verts:
        raise InfeasibleSystem("empty region has no vertex-edge graph")
    rows, b, c, _, _ = lp.standardized()
    width = len(rows[0]) if rows else n
    A = RatMatrix.from_rows(rows, cols=width) if rows else RatMatrix.zeros(0, width)
    verts = sorted(std_verts)
    adj = {i: set() for i in range(len(verts))}
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            S = sorted(
                set(k for k, v in enumerate(verts[i]) if v != 0)
                | set(k for k, v in enumerate(verts[j]) if v != 0)
            )
            if not S:
                continue
            if len(S) - rank(A.take_cols(S)) == 1:
                adj[i].add(j)
                adj[j].add(i)
    return [v[:n] for v in verts], adj


def edge_graph_diameter(lp: LPInstance) -> int:
    """Exact graph diameter of the polytope's vertex-edge graph."""
    verts, adj = edge_graph(lp)
    if _region_is_unbounded(lp):
        raise UnboundedRegion("vertex-edge diameter needs a bounded region")
    k = len(verts)
    if k <= 1:
        return 0
    diam = 0
    for s in range(k):
        dist = {s: 0}
        queue = [s]
        for v in queue:
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        if len(dist) < k:
            raise CircuitKitError("internal error: polytope graph disconnected")
        diam = max(diam, max(dist.values()))
    return diam


def fractionality(lp: LPInstance) -> int:
    """Least k such that every vertex of the region is 1/k-integral."""
    verts = vertices(lp)
    if not verts:
        raise InfeasibleSystem("empty region has no vertices")
    dens = [x.denominator for v, _ in verts for x in v]
    return math.lcm(*dens) if dens else 1
