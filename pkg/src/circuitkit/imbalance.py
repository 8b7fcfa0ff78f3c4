"""Circuit imbalance measures of a rational subspace.

Three exact measures are computed from the enumerated circuits:

* kappa      -- largest |g_j / g_i| over circuits g and i, j in the support
* kappa_dot  -- lcm of the entries of the gcd-normalized circuit vectors
* kappa_bar  -- largest absolute entry of a normalized circuit vector

plus the optimal-rescaling value kappa_star (a geometric mean over cycles
of the circuit ratio digraph), a rescaled-total-unimodularity decision
procedure, and two floating-point estimators (spectral norm analogue,
minimum principal angle) that are this package's only inexact paths.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (
    BadParameters,
    CircuitKitError,
    DeskScaleExceeded,
    NonIntegerMatrix,
    RankDeficient,
    SeparableInput,
)
from .ratmat import (
    RatMatrix,
    Vec,
    bareiss_det,
    basis_form,
    check_desk_scale,
    fraction_nth_root,
    integer_normalize,
    rank,
    rref,
    rref_nonzero,
    solve_linear,
    vec,
    vec_dot,
)
from .subspace import ElementaryVector, Subspace, components, dual, is_separable


@dataclass(frozen=True)
class MeasureWitnesses:
    """Certificates for each measure.

    kappa: (circuit, (i, j)) attaining the ratio; kappa_bar: (circuit, j)
    attaining the max entry; kappa_dot: per prime power p^a || kappa_dot,
    a (p, a, circuit, j) with p^a dividing entry j of that circuit.
    """

    kappa: tuple | None
    kappa_bar: tuple | None
    kappa_dot: tuple = ()


@dataclass(frozen=True)
class ImbalanceReport:
    kappa: Fraction
    kappa_dot: int
    kappa_bar: int
    witnesses: MeasureWitnesses


def _prime_factors(x: int) -> dict:
    out = {}
    d = 2
    while d * d <= x:
        while x % d == 0:
            out[d] = out.get(d, 0) + 1
            x //= d
        d += 1
    if x > 1:
        out[x] = out.get(x, 0) + 1
    return out


def imbalances(W: Subspace) -> ImbalanceReport:
    """All three measures with verifiable witnesses.

    Trivial subspaces ({0} and R^n) have no ratio structure: all measures 1.
    """
    circuits = W.circuit_list
    if not circuits:
        return ImbalanceReport(Fraction(1), 1, 1, MeasureWitnesses(None, None))
    best_ratio = Fraction(0)
    ratio_wit = None
    best_entry = 0
    entry_wit = None
    acc = 1
    for ev in circuits:
        for i in ev.support:
            for j in ev.support:
                r = ev.ratio(i, j)
                if r > best_ratio:
                    best_ratio, ratio_wit = r, (ev, (i, j))
        for j in ev.support:
            if abs(ev.vector[j]) > best_entry:
                best_entry, entry_wit = abs(ev.vector[j]), (ev, j)
        acc = math.lcm(acc, ev.entries_lcm())
    dot_wits = []
    for p, a in sorted(_prime_factors(acc).items()):
        pa = p**a
        found = next(
            (ev, j)
            for ev in circuits
            for j in ev.support
            if ev.vector[j] % pa == 0
        )
        dot_wits.append((p, a, found[0], found[1]))
    return ImbalanceReport(
        kappa=best_ratio,
        kappa_dot=acc,
        kappa_bar=best_entry,
        witnesses=MeasureWitnesses(ratio_wit, entry_wit, tuple(dot_wits)),
    )


def kappa_via_basis_forms(A: RatMatrix) -> Fraction:
    """max over nonsingular bases B of the largest |entry| of A_B^{-1} A.

    Independent route to kappa(ker A); must agree with the circuit route.
    """
    m, n = A.shape
    if rank(A) != m:
        raise RankDeficient("basis-form scan needs a full row rank matrix")
    check_desk_scale(n, "basis enumeration")
    best = Fraction(0)
    for B in itertools.combinations(range(n), m):
        if bareiss_det(A.take_cols(B)) == 0:
            continue
        M = basis_form(A, B)
        cand = max(abs(x) for r in M.data for x in r)
        best = max(best, cand)
    if best == 0:
        raise RankDeficient("no nonsingular basis found")
    return best


@dataclass
class CircuitRatioDigraph:
    """Complete digraph on the ground set with K_ij ratio sets as arc data."""

    n: int
    kappa: dict  # (i, j) -> Fraction, max of K_ij
    sets: dict  # (i, j) -> frozenset of Fraction

    def cycle_product(self, cycle: Sequence[int]) -> Fraction:
        prod = Fraction(1)
        for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
            prod *= self.kappa[(a, b)]
        return prod


def pairwise(W: Subspace) -> CircuitRatioDigraph:
    """K_ij = { |g_j/g_i| : g a circuit with i, j in its support } for i != j.

    Requires a non-separable ground set so every pair is covered.
    """
    if W.ambient_dim >= 2 and is_separable(W):
        raise SeparableInput("pairwise ratios need a non-separable subspace")
    sets: dict = {}
    for ev in W.circuit_list:
        for i in ev.support:
            for j in ev.support:
                if i != j:
                    sets.setdefault((i, j), set()).add(ev.ratio(i, j))
    return CircuitRatioDigraph(
        n=W.ambient_dim,
        kappa={k: max(v) for k, v in sets.items()},
        sets={k: frozenset(v) for k, v in sets.items()},
    )


@dataclass(frozen=True)
class GeoMeanValue:
    """product^(1/length), compared exactly by cross-powering."""

    product: Fraction
    length: int

    def __post_init__(self):
        if self.length < 1 or self.product <= 0:
            raise BadParameters("geometric mean needs positive product, length >= 1")

    def _cmp(self, other: "GeoMeanValue") -> int:
        lhs = self.product**other.length
        rhs = other.product**self.length
        return (lhs > rhs) - (lhs < rhs)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def equivalent(self, other: "GeoMeanValue") -> bool:
        return self._cmp(other) == 0

    def normalized(self) -> "GeoMeanValue":
        """Reduce to length 1 when the root is rational."""
        root = fraction_nth_root(self.product, self.length)
        if root is not None:
            return GeoMeanValue(root, 1)
        return self

    def as_rational(self) -> Fraction | None:
        norm = self.normalized()
        return norm.product if norm.length == 1 else None

    def to_float(self) -> float:
        return float(self.product) ** (1.0 / self.length)


@dataclass(frozen=True)
class KappaStarResult:
    value: GeoMeanValue
    witness_cycle: tuple
    rescaling: tuple | None  # rational d attaining the optimum, when it exists
    rescaling_pow: tuple  # exact vector of d_i^length, always rational
    power: int


def kappa_star(W: Subspace) -> KappaStarResult:
    """Best achievable kappa over positive diagonal rescalings.

    Equal to the maximum over simple cycles H of the circuit ratio digraph
    of (prod of kappa along H)^(1/|H|).  The maximum is found by an exact
    bitmask DP over simple paths; comparisons cross-power, never float.

    The rescaling d satisfies kappa_ij * d_j / d_i <= value for every pair,
    with equality along the witness cycle.  When value is rational, d is the
    returned rational vector; otherwise `rescaling` is None and
    `rescaling_pow` carries the exact vector of d_i^length.
    """
    G = pairwise(W)
    n = W.ambient_dim
    nodes = sorted({i for (i, _) in G.kappa})
    if not nodes:
        one = GeoMeanValue(Fraction(1), 1)
        return KappaStarResult(one, (), (Fraction(1),) * n, (Fraction(1),) * n, 1)

    best_prod: Fraction | None = None
    best_cycle: tuple = ()

    for s_pos, s in enumerate(nodes):
        later = nodes[s_pos + 1 :]
        # dp: (visited mask over `later`, end node) -> (max product, path)
        dp: dict = {}
        for idx, v in enumerate(later):
            if (s, v) in G.kappa:
                dp[(1 << idx, v)] = (G.kappa[(s, v)], (s, v))
        frontier = dict(dp)
        while frontier:
            upd: dict = {}
            for (mask, v), (prod, path) in frontier.items():
                if (v, s) in G.kappa:
                    cyc_prod = prod * G.kappa[(v, s)]
                    length = len(path)
                    if best_prod is None or GeoMeanValue(cyc_prod, length) > GeoMeanValue(
                        best_prod, len(best_cycle)
                    ):
                        best_prod, best_cycle = cyc_prod, path
                for idx, u in enumerate(later):
                    if mask & (1 << idx):
                        continue
                    if (v, u) not in G.kappa:
                        continue
                    cand = prod * G.kappa[(v, u)]
                    state = (mask | (1 << idx), u)
                    cur = dp.get(state)
                    if cur is None or cand > cur[0]:
                        dp[state] = (cand, path + (u,))
                        upd[state] = dp[state]
            frontier = upd

    if best_prod is None:
        value = GeoMeanValue(Fraction(1), 1)
        best_cycle = ()
    else:
        if G.cycle_product(best_cycle) != best_prod:
            raise CircuitKitError("internal error: witness cycle product mismatch")
        value = GeoMeanValue(best_prod, len(best_cycle)).normalized()

    d_rat = None
    if value.length == 1:
        t = value.product
        d_rat = _mult_bellman_ford(G, nodes, n, t, power=1)
        _check_feasible(G, d_rat, t, 1)
    ell = value.length
    d_pow = _mult_bellman_ford(G, nodes, n, value.product, power=ell)
    _check_feasible(G, d_pow, value.product, ell)
    return KappaStarResult(
        value=value,
        witness_cycle=best_cycle,
        rescaling=d_rat,
        rescaling_pow=d_pow,
        power=ell,
    )


def _mult_bellman_ford(G: CircuitRatioDigraph, nodes, n, rho: Fraction, power: int):
    """Feasible point of kappa_ij^power * e_j <= rho * e_i via min path products.

    All cycles of the powered system have product >= 1 by optimality of rho,
    so the Bellman-Ford fixpoint exists and is reached within n rounds.
    """
    d = {v: Fraction(1) for v in nodes}
    for _ in range(len(nodes)):
        changed = False
        for (i, j), k in G.kappa.items():
            cand = d[i] * rho / (k**power)
            if cand < d[j]:
                d[j] = cand
                changed = True
        if not changed:
            break
    else:  # pragma: no cover - guarded by the max-cycle optimality of rho
        raise CircuitKitError("rescaling system failed to converge")
    return tuple(d.get(i, Fraction(1)) for i in range(n))


def _check_feasible(G: CircuitRatioDigraph, d, rho: Fraction, power: int):
    tight = False
    for (i, j), k in G.kappa.items():
        lhs = (k**power) * d[j]
        rhs = rho * d[i]
        if lhs > rhs:
            raise CircuitKitError("internal error: rescaling infeasible")
        if lhs == rhs:
            tight = True
    if not tight:
        raise CircuitKitError("internal error: rescaling does not attain the optimum")


def rescale(W: Subspace, d: Sequence) -> Subspace:
    """Multiply coordinate i of every vector of W by d_i."""
    dv = vec(d)
    if any(x <= 0 for x in dv):
        raise BadParameters("rescaling needs positive entries")
    S = W.span_rep
    rows = [tuple(x * dv[j] for j, x in enumerate(r)) for r in S.data]
    if not rows:
        return W
    return Subspace.from_span_matrix(RatMatrix.from_rows(rows, cols=W.ambient_dim))


def estimate_kappa(W: Subspace):
    """One-circuit-per-pair lower estimate.

    For each ordered pair, the circuit with lexicographically smallest
    support containing both indices supplies |g_j/g_i|.  Returns the max
    over pairs and the per-pair table {(i, j): (ratio, circuit)}.
    """
    if W.ambient_dim >= 2 and is_separable(W):
        raise SeparableInput("pair estimates need a non-separable subspace")
    table: dict = {}
    for ev in sorted(W.circuit_list, key=lambda e: e.support):
        for i in ev.support:
            for j in ev.support:
                if i != j and (i, j) not in table:
                    table[(i, j)] = (ev.ratio(i, j), ev)
    xi = max((r for r, _ in table.values()), default=Fraction(1))
    return xi, table


@dataclass(frozen=True)
class RescaleCheckResult:
    """Outcome of the rescaled-TU decision.

    Either `rescaled_tu` with an integer diagonal `scaling` (kappa of the
    column-scaled matrix is 1), or a cycle witness with product > 1.
    """

    rescaled_tu: bool
    scaling: tuple | None
    witness_cycle: tuple | None
    witness_product: Fraction | None


def check_kappa_star_one(A: RatMatrix) -> RescaleCheckResult:
    """Decide kappa_star(ker A) = 1 without computing kappa_star.

    Estimates a single ratio per pair, propagates a candidate rescaling
    along the estimates, and confirms with a total-unimodularity test of a
    basis form of the rescaled matrix.  On failure a 2-cycle of exact
    pairwise ratios with product > 1 is returned (such a 2-cycle always
    exists when kappa_star > 1).
    """
    W = Subspace.from_kernel_matrix(A)
    n = W.ambient_dim
    report = imbalances(W)
    d = [Fraction(1)] * n
    ok = True
    for block in components(W):
        block_circuits = [ev for ev in W.circuit_list if set(ev.support) <= set(block)]
        if not _propagate_block(block, block_circuits, d):
            ok = False
            break
    if ok:
        # d solves hat_kappa_ij d_j = d_i; undoing it means scaling column i
        # of A by something proportional to 1/d_i.
        den = math.lcm(*(x.denominator for x in d))
        ints = [int(x * den) for x in d]
        g = math.gcd(*ints)
        ints = [x // g for x in ints]
        L = math.lcm(*ints)
        scaling = tuple(L // x for x in ints)
        scaled = RatMatrix.from_rows(
            [tuple(x * scaling[j] for j, x in enumerate(r)) for r in A.data],
            cols=n,
        )
        M = rref_nonzero(scaled)
        tu, _ = is_TU(M) if _entries_tu_candidate(M) else (False, None)
        if tu:
            kd = report.kappa_dot
            if any(kd % s != 0 for s in scaling):
                raise CircuitKitError(
                    "internal error: scaling entries must divide kappa_dot"
                )
            return RescaleCheckResult(True, scaling, None, None)
    # Witness branch: some 2-cycle has product > 1 whenever kappa_star > 1.
    best = None
    G_sets: dict = {}
    for ev in W.circuit_list:
        for i in ev.support:
            for j in ev.support:
                if i != j:
                    G_sets.setdefault((i, j), set()).add(ev.ratio(i, j))
    for (i, j), vals in G_sets.items():
        if i < j:
            prod = max(vals) * max(G_sets[(j, i)])
            if prod > 1 and (best is None or prod > best[1]):
                best = ((i, j), prod)
    if best is None:
        raise CircuitKitError("internal error: no witness cycle despite TU failure")
    return RescaleCheckResult(False, None, best[0], best[1])


def _propagate_block(block, block_circuits, d) -> bool:
    """BFS-propagate hat_kappa_ij d_j = d_i within one component.

    Returns False when the estimate system is inconsistent.
    """
    est: dict = {}
    for ev in sorted(block_circuits, key=lambda e: e.support):
        for i in ev.support:
            for j in ev.support:
                if i != j and (i, j) not in est:
                    est[(i, j)] = ev.ratio(i, j)
    if not est:
        return True
    root = block[0]
    val = {root: Fraction(1)}
    queue = [root]
    while queue:
        i = queue.pop()
        for (a, b), r in est.items():
            if a == i and b not in val:
                # hat_kappa_ab * d_b = d_a
                val[b] = val[a] / r
                queue.append(b)
            elif b == i and a not in val:
                val[a] = val[b] * r
                queue.append(a)
    for (a, b), r in est.items():
        if val[a] != r * val[b]:
            return False
    for i in block:
        d[i] = val.get(i, Fraction(1))
    return True


def _entries_tu_candidate(M: RatMatrix) -> bool:
    return all(x in (0, 1, -1) for r in M.data for x in r)


def is_TU(A: RatMatrix):
    """Brute-force total unimodularity test.

    Returns (True, None) or (False, (rows, cols, det)) with the smallest
    offending submatrix.  Entries outside {0, +1, -1} fail immediately with
    a 1x1 witness.
    """
    check_desk_scale(A.cols, "unimodularity enumeration")
    for i, r in enumerate(A.data):
        for j, x in enumerate(r):
            if x not in (0, 1, -1):
                return False, ((i,), (j,), x)
    for k in range(2, min(A.rows, A.cols) + 1):
        for ri in itertools.combinations(range(A.rows), k):
            for ci in itertools.combinations(range(A.cols), k):
                det = bareiss_det(A.submatrix(ri, ci))
                if det not in (0, 1, -1):
                    return False, (ri, ci, det)
    return True, None


def int_representation(W: Subspace) -> RatMatrix:
    """An integer kernel matrix for W whose nonzero entries divide kappa_dot.

    Prefers an integral basis form (exists whenever the dual is anchored);
    otherwise scales each basis form row by its denominator.  Either way the
    rows are elementary vectors of the dual, so divisibility holds.
    """
    if W.is_trivial():
        raise BadParameters("integer representation needs a proper subspace")
    A = W.kernel_rep
    m, n = A.shape
    check_desk_scale(n, "basis enumeration")
    kd = imbalances(W).kappa_dot
    fallback = None
    for B in itertools.combinations(range(n), m):
        if bareiss_det(A.take_cols(B)) == 0:
            continue
        M = basis_form(A, B)
        if M.is_integral():
            _assert_divides(M, kd)
            return M
        if fallback is None:
            fallback = M
    if fallback is None:
        raise RankDeficient("kernel representation lost rank")
    rows = []
    for r in fallback.data:
        ints, scale = integer_normalize(r)
        if scale < 0:
            ints = tuple(-x for x in ints)
        rows.append(ints)
    M = RatMatrix.from_rows(rows, cols=n)
    _assert_divides(M, kd)
    if Subspace.from_kernel_matrix(M) != W:
        raise CircuitKitError("internal error: representation changed the kernel")
    return M


def _assert_divides(M: RatMatrix, kd: int):
    for r in M.data:
        for x in r:
            if x != 0 and kd % int(x) != 0 and kd % -int(x) != 0:
                raise CircuitKitError(
                    f"internal error: entry {x} does not divide kappa_dot {kd}"
                )


# ---------------------------------------------------------------------------
# Floating-point estimators.  These two functions and diameter_bound's log
# factor are the only places the package leaves exact arithmetic.
# ---------------------------------------------------------------------------


def _power_iteration_sq(M: list[list[float]], tol: float = 1e-9) -> float:
    """Largest eigenvalue of M^T M by power iteration; returns sigma_max^2."""
    m = len(M)
    n = len(M[0]) if m else 0
    if m == 0 or n == 0:
        return 0.0
    v = [1.0 + 1e-3 * i for i in range(n)]
    lam_prev = 0.0
    for _ in range(200000):
        w = [sum(M[i][j] * v[j] for j in range(n)) for i in range(m)]
        z = [sum(M[i][j] * w[i] for i in range(m)) for j in range(n)]
        norm = math.sqrt(sum(x * x for x in z))
        if norm == 0.0:
            return 0.0
        v = [x / norm for x in z]
        lam = sum(
            v[j] * sum(M[i][j] * sum(M[i][k] * v[k] for k in range(n)) for i in range(m))
            for j in range(n)
        )
        if abs(lam - lam_prev) <= tol * max(1.0, abs(lam)):
            return lam
        lam_prev = lam
    return lam_prev


def chibar(A: RatMatrix) -> float:
    """max over bases of the spectral norm of A_B^{-1} A (power iteration)."""
    m, n = A.shape
    if rank(A) != m:
        raise RankDeficient("spectral scan needs a full row rank matrix")
    check_desk_scale(n, "basis enumeration")
    best = 0.0
    for B in itertools.combinations(range(n), m):
        if bareiss_det(A.take_cols(B)) == 0:
            continue
        M = basis_form(A, B)
        flo = [[float(x) for x in r] for r in M.data]
        best = max(best, math.sqrt(_power_iteration_sq(flo)))
    return best


def delta_min_angle(vectors: Sequence[Vec]) -> float:
    """min over independent subsets I and v not in span(I) of sin(angle).

    Residuals are computed exactly (rational normal equations); only the
    final square root is floating point.
    """
    vs = [vec(v) for v in vectors]
    if not vs:
        raise BadParameters("need at least one vector")
    nonzero = [v for v in vs if any(x != 0 for x in v)]
    if len(nonzero) != len(vs):
        raise BadParameters("zero vectors have no direction")
    best = None
    idx = range(len(vs))
    for size in range(1, len(vs)):
        for I in itertools.combinations(idx, size):
            B = RatMatrix.from_rows([vs[i] for i in I])
            if rank(B) != size:
                continue
            gram = B.mul(B.transpose())
            for j in idx:
                if j in I:
                    continue
                target = vs[j]
                mu = solve_linear(gram, B.matvec(target))
                resid = tuple(a - b for a, b in zip(target, B.vecmat(mu)))
                r2 = sum((x * x for x in resid), Fraction(0))
                if r2 == 0:
                    continue  # v_j in span(I)
                sin2 = r2 / sum((x * x for x in target), Fraction(0))
                s = math.sqrt(float(sin2))
                if best is None or s < best:
                    best = s
    return 1.0 if best is None else best


def knuth_basis(A: RatMatrix, mu) -> tuple:
    """Local determinant maximization: swap while some |entry| > mu.

    Every swap multiplies |det A_B| by more than mu, so the loop terminates.
    Returns (basis, basis_form, swap_count).
    """
    mu = Fraction(mu)
    if mu < 1:
        raise BadParameters("mu must be at least 1")
    m, n = A.shape
    if rank(A) != m:
        raise RankDeficient("basis search needs a full row rank matrix")
    _, pivots, _ = rref(A)
    B = list(pivots)
    swaps = 0
    limit = 10000
    while True:
        M = basis_form(A, B)
        swap = None
        for i in range(m):
            for j in range(n):
                if abs(M.entry(i, j)) > mu:
                    swap = (i, j)
                    break
            if swap:
                break
        if swap is None:
            return tuple(B), M, swaps
        B[swap[0]] = swap[1]
        swaps += 1
        if swaps > limit:  # pragma: no cover
            raise CircuitKitError("swap budget exhausted; mu too close to 1?")


def diameter_bound(n: int, m: int, kappa) -> Fraction:
    """(n - m)^3 * m * kappa * log2(kappa + n).

    The log factor is evaluated in floating point and embedded exactly, so
    repeated calls are deterministic and comparisons downstream stay exact.
    """
    kappa = Fraction(kappa)
    if n < m or m < 1 or kappa < 1:
        raise BadParameters("need n >= m >= 1 and kappa >= 1")
    log_term = Fraction(math.log2(float(kappa) + n))
    return Fraction((n - m) ** 3 * m) * kappa * log_term
