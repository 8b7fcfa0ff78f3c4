"""Hoffman-type proximity bounds with exact verification.

Every bound computed here is also checked: the attained distance comes from
an independent exact LP minimization, and a distance exceeding its bound
raises AuditFailure instead of returning quietly.  The black-box feasibility
solver at the bottom composes the same pieces with a simulated approximate
oracle whose error budget is rational and seed-deterministic.

LP(W, d, c) throughout means: minimize <c, x> over x in W + d, x >= 0.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .errors import (
    AuditFailure,
    BadParameters,
    DimensionMismatch,
    InfeasibleSystem,
    NegativeCost,
    NotOptimalPair,
    OracleInfeasible,
    UnboundedDirection,
)
from .imbalance import imbalances
from .lp import INFEASIBLE, OPTIMAL, UNBOUNDED, LPInstance, solve
from .ratmat import (
    RatMatrix,
    Vec,
    neg_part,
    norm1,
    norm2_sq,
    vec,
    vec_add,
    vec_dot,
    vec_sub,
    vec_zero,
)
from .subspace import Subspace, lift_min_norm, minor


@dataclass(frozen=True)
class ProximityWitness:
    """A feasible (or optimal) point together with its distance guarantee.

    `slack` is bound minus the attained sup-norm distance, so nonnegative
    slack is the bound holding exactly.
    """

    point: Vec
    bound: Fraction
    slack: Fraction

    @property
    def distance(self) -> Fraction:
        return self.bound - self.slack


@dataclass(frozen=True)
class ApxSolution:
    """Output of the simulated approximate solver.

    x_tilde lies in W + d exactly; the two approximation constraints
    (cost within epsilon*|c|*|d| of optimal, negative part at most
    epsilon*|d| in Euclidean norm) are certified by squared-norm
    comparisons before this object is built.
    """

    x_tilde: Vec
    epsilon: Fraction
    seed: int


def lambda_set(d, c) -> tuple[int, ...]:
    """supp(d^-) union supp(c^+)."""
    d = vec(d)
    c = vec(c)
    if len(d) != len(c):
        raise DimensionMismatch("d and c length mismatch")
    out = {i for i, x in enumerate(d) if x < 0}
    out |= {i for i, x in enumerate(c) if x > 0}
    return tuple(sorted(out))


def _nearest_point(rows, b, anchor):
    """Two-stage exact minimization of ||x - anchor|| over Ax = b, x >= 0.

    Stage one minimizes the sup-norm distance, stage two the 1-norm among
    points attaining it.  Returns (x, sup_distance).  The rows already
    include any optimal-face equality; infeasibility here means the caller
    screwed up, so it raises rather than certifying.
    """
    n = len(anchor)
    m = len(rows)
    zero = Fraction(0)
    one = Fraction(1)

    # Stage 1: variables x (n), tau (1), p (n), q (n).
    width = 3 * n + 1
    ext_rows = []
    ext_b = []
    for r in range(m):
        row = [zero] * width
        row[:n] = [Fraction(v) for v in rows[r]]
        ext_rows.append(row)
        ext_b.append(b[r])
    for i in range(n):
        row = [zero] * width
        row[i] = one
        row[n] = -one
        row[n + 1 + i] = one
        ext_rows.append(row)
        ext_b.append(anchor[i])
        row = [zero] * width
        row[i] = one
        row[n] = one
        row[2 * n + 1 + i] = -one
        ext_rows.append(row)
        ext_b.append(anchor[i])
    cost = [zero] * width
    cost[n] = one
    res = solve(LPInstance.standard(RatMatrix.from_rows(ext_rows, cols=width), ext_b, cost))
    if res.status != OPTIMAL:
        raise InfeasibleSystem("distance stage on an empty region", certificate=res.certificate)
    tau = res.objective

    # Stage 2: variables x (n), r (n), s (n), w (n); minimize 1-norm subject
    # to the stage-1 sup-norm.
    width = 4 * n
    ext_rows = []
    ext_b = []
    for r in range(m):
        row = [zero] * width
        row[:n] = [Fraction(v) for v in rows[r]]
        ext_rows.append(row)
        ext_b.append(b[r])
    for i in range(n):
        row = [zero] * width
        row[i] = one
        row[n + i] = -one
        row[2 * n + i] = one
        ext_rows.append(row)
        ext_b.append(anchor[i])
        row = [zero] * width
        row[n + i] = one
        row[2 * n + i] = one
        row[3 * n + i] = one
        ext_rows.append(row)
        ext_b.append(tau)
    cost = [zero] * width
    for i in range(n):
        cost[n + i] = one
        cost[2 * n + i] = one
    res2 = solve(LPInstance.standard(RatMatrix.from_rows(ext_rows, cols=width), ext_b, cost))
    assert res2.status == OPTIMAL
    x = vec(res2.x[:n])
    return x, tau


def hoffman_feasibility_witness(W: Subspace, d) -> ProximityWitness:
    """A feasible x in W + d, x >= 0 with ||x - d||_inf <= kappa * ||d^-||_1.

    The point minimizes the sup-norm distance to d (1-norm tie-break), so
    the returned slack is the sharpest possible for this subspace and shift.
    """
    d = vec(d)
    if len(d) != W.ambient_dim:
        raise DimensionMismatch("shift vector length mismatch")
    A = W.kernel_rep
    b = A.matvec(d)
    feas = solve(LPInstance.standard(A, b, vec_zero(len(d))))
    if feas.status == INFEASIBLE:
        raise InfeasibleSystem("no nonnegative point in W + d", certificate=feas.certificate)
    kappa = imbalances(W).kappa
    bound = kappa * norm1(neg_part(d))
    x, tau = _nearest_point(list(A.data), list(b), d)
    if tau > bound:
        raise AuditFailure("hoffman-feasibility", detail=f"distance {tau} exceeds bound {bound}")
    return ProximityWitness(point=x, bound=bound, slack=bound - tau)


def hoffman_opt_witness(W: Subspace, d, c) -> ProximityWitness:
    """An optimal x for LP(W, d, c) with ||x - d||_inf <= kappa * ||d_L||_1,
    L the index set from lambda_set.  Requires c >= 0."""
    d = vec(d)
    c = vec(c)
    if len(d) != W.ambient_dim or len(c) != W.ambient_dim:
        raise DimensionMismatch("vector length mismatch")
    if any(ci < 0 for ci in c):
        raise NegativeCost("the optimality bound needs a nonnegative cost")
    A = W.kernel_rep
    b = A.matvec(d)
    res = solve(LPInstance.standard(A, b, c))
    if res.status == INFEASIBLE:
        raise InfeasibleSystem("no nonnegative point in W + d", certificate=res.certificate)
    if res.status == UNBOUNDED:  # unreachable with c >= 0, kept for safety
        raise UnboundedDirection("objective unbounded below", ray=res.certificate)
    lam = lambda_set(d, c)
    kappa = imbalances(W).kappa
    bound = kappa * sum((abs(d[i]) for i in lam), Fraction(0))
    face_rows = list(A.data) + [list(c)]
    face_b = list(b) + [res.objective]
    x, tau = _nearest_point(face_rows, face_b, d)
    if tau > bound:
        raise AuditFailure("hoffman-optimality", detail=f"distance {tau} exceeds bound {bound}")
    return ProximityWitness(point=x, bound=bound, slack=bound - tau)


def _dual_face_max(W: Subspace, cost: Vec, x_opt: Vec, i: int) -> Fraction:
    """Exact max of s_i over the dual optimal face of LP(W, d, cost).

    The face is the dual-feasible set {s in W-perp + cost, s >= 0} cut by
    complementary slackness with any one primal optimal point.
    """
    n = len(cost)
    keep = [j for j in range(n) if x_opt[j] == 0]
    if i not in keep:
        return Fraction(0)
    M = W.span_rep
    if M.rows == 0:
        # W = {0}: the dual face is every nonnegative vector vanishing on
        # supp(x_opt), so s_i is unbounded whenever unconstrained.
        raise AuditFailure("transfer-dual", detail="dual face unbounded in a coordinate")
    rows = [[M.entry(r, j) for j in keep] for r in range(M.rows)]
    b = M.matvec(cost)
    c = [Fraction(0)] * len(keep)
    c[keep.index(i)] = Fraction(-1)
    res = solve(LPInstance.standard(RatMatrix.from_rows(rows, cols=len(keep)), b, c))
    if res.status == UNBOUNDED:
        raise AuditFailure("transfer-dual", detail=f"s_{i} unbounded over the dual face")
    assert res.status == OPTIMAL
    return -res.objective


def transfer_bound(W: Subspace, x_tilde, s, d) -> tuple[Fraction, tuple[int, ...]]:
    """Carry optimality from anchor x_tilde to shift d.

    Given (x_tilde, s) forming an optimal pair for LP(W, x_tilde, s) --
    which is exactly x_tilde >= 0, s >= 0, <x_tilde, s> = 0 -- returns

        bound = (kappa + 1) * ||proj_{W-perp}(d - x_tilde)||_1
        R     = {i : x_tilde_i > bound}

    and verifies both conclusions against LP(W, d, s): some optimal point
    lies within `bound` of x_tilde in sup-norm, and every coordinate in R
    has every dual-optimal s* vanishing there (max over the dual face is 0).
    """
    xt = vec(x_tilde)
    sv = vec(s)
    dv = vec(d)
    n = W.ambient_dim
    if len(xt) != n or len(sv) != n or len(dv) != n:
        raise DimensionMismatch("vector length mismatch")
    if any(v < 0 for v in xt) or any(v < 0 for v in sv) or vec_dot(xt, sv) != 0:
        raise NotOptimalPair("need x >= 0, s >= 0 and <x, s> = 0")
    kappa = imbalances(W).kappa
    bound = (kappa + 1) * norm1(W.project_onto_perp(vec_sub(dv, xt)))
    R = tuple(i for i in range(n) if xt[i] > bound)

    A = W.kernel_rep
    b = A.matvec(dv)
    res = solve(LPInstance.standard(A, b, sv))
    if res.status == INFEASIBLE:
        raise InfeasibleSystem("no nonnegative point in W + d", certificate=res.certificate)
    assert res.status == OPTIMAL  # s >= 0 dual-feasible, so never unbounded
    face_rows = list(A.data) + [list(sv)]
    face_b = list(b) + [res.objective]
    x_star, tau = _nearest_point(face_rows, face_b, xt)
    if tau > bound:
        raise AuditFailure("transfer-primal", detail=f"nearest optimal at {tau}, bound {bound}")
    for i in R:
        top = _dual_face_max(W, sv, x_star, i)
        if top != 0:
            raise AuditFailure("transfer-dual", detail=f"max s_{i} over the dual face is {top}")
    return bound, R


def fixing_sets_bounds(A, b, u, c1, c2, x1, y1) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Variables forced to their bounds after a cost change.

    (x1, y1) must be an optimal primal-dual pair for min <c1, x>, Ax = b,
    0 <= x <= u.  With kappa of ker(A) and t = (kappa + 1) * ||c1 - c2||_1,

        R0 = {i : <a_i, y1> < c1_i - t}     (x_i = 0 in every c2-optimum)
        Ru = {i : <a_i, y1> > c1_i + t}     (x_i = u_i in every c2-optimum)

    Both conclusions are verified by optimizing each coordinate over the
    exact c2-optimal face.
    """
    A = A if isinstance(A, RatMatrix) else RatMatrix.from_rows(A)
    b = vec(b)
    c1 = vec(c1)
    c2 = vec(c2)
    x1 = vec(x1)
    y1 = vec(y1)
    n = A.cols
    if len(c1) != n or len(c2) != n or len(x1) != n or len(u) != n or len(y1) != A.rows:
        raise DimensionMismatch("vector length mismatch")
    uv = tuple(None if ui is None else Fraction(ui) for ui in u)
    if A.matvec(x1) != b or any(v < 0 for v in x1):
        raise NotOptimalPair("x1 is not feasible")
    if any(uv[i] is not None and x1[i] > uv[i] for i in range(n)):
        raise NotOptimalPair("x1 violates an upper bound")
    col_costs = A.vecmat(y1)
    for i in range(n):
        below_upper = uv[i] is None or x1[i] < uv[i]
        if below_upper and col_costs[i] > c1[i]:
            raise NotOptimalPair(f"dual slack negative at {i} with x below its bound")
        if x1[i] > 0 and col_costs[i] < c1[i]:
            raise NotOptimalPair(f"dual surplus at {i} with x positive")

    kappa = imbalances(Subspace.from_kernel_matrix(A)).kappa
    thr = (kappa + 1) * norm1(vec_sub(c1, c2))
    R0 = tuple(i for i in range(n) if col_costs[i] < c1[i] - thr)
    Ru = tuple(i for i in range(n) if col_costs[i] > c1[i] + thr)

    res2 = solve(LPInstance.bounded(A, b, c2, uv))
    if res2.status == INFEASIBLE:
        raise InfeasibleSystem("region became empty", certificate=res2.certificate)
    if res2.status == UNBOUNDED:
        raise UnboundedDirection("second cost is unbounded below", ray=res2.certificate)
    face_A = A.vstack(RatMatrix.from_rows([list(c2)], cols=n))
    face_b = list(b) + [res2.objective]
    for i in R0:
        c = [Fraction(0)] * n
        c[i] = Fraction(-1)
        top = solve(LPInstance.bounded(face_A, face_b, c, uv))
        assert top.status == OPTIMAL
        if -top.objective != 0:
            raise AuditFailure("fixing-zero", detail=f"max x_{i} over the face is {-top.objective}")
    for i in Ru:
        c = [Fraction(0)] * n
        c[i] = Fraction(1)
        bot = solve(LPInstance.bounded(face_A, face_b, c, uv))
        assert bot.status == OPTIMAL
        if bot.objective != uv[i]:
            raise AuditFailure("fixing-upper", detail=f"min x_{i} over the face is {bot.objective}")
    return R0, Ru


def apx_oracle(W: Subspace, d, c, epsilon, seed: int) -> ApxSolution:
    """Solve LP(W, d, c) exactly, then perturb inside W + d within budget.

    The perturbation direction is a seeded integer combination of the span
    rows; its scale lambda is the rational floor of the square root of half
    the norm budget, so both approximation constraints hold exactly and the
    output is identical for identical seeds.
    """
    d = vec(d)
    c = vec(c)
    n = W.ambient_dim
    if len(d) != n or len(c) != n:
        raise DimensionMismatch("vector length mismatch")
    epsilon = Fraction(epsilon)
    if epsilon < 0:
        raise BadParameters("epsilon must be nonnegative")
    A = W.kernel_rep
    res = solve(LPInstance.standard(A, A.matvec(d), c))
    if res.status == INFEASIBLE:
        raise InfeasibleSystem("no nonnegative point in W + d", certificate=res.certificate)
    if res.status == UNBOUNDED:
        raise UnboundedDirection("objective unbounded below", ray=res.certificate)
    opt = res.objective
    x_star = res.x
    d_sq = norm2_sq(d)
    if epsilon == 0 or d_sq == 0 or W.span_rep.rows == 0:
        return ApxSolution(x_tilde=x_star, epsilon=epsilon, seed=seed)

    rng = random.Random(seed)
    coeffs = [Fraction(rng.randint(-9, 9)) for _ in range(W.span_rep.rows)]
    w = W.span_rep.vecmat(coeffs)
    w_sq = norm2_sq(w)
    if w_sq == 0:
        return ApxSolution(x_tilde=x_star, epsilon=epsilon, seed=seed)
    rho = (epsilon / 2) ** 2 * d_sq / w_sq
    lam = Fraction(isqrt(rho.numerator * rho.denominator), rho.denominator)
    x_tilde = vec_add(x_star, tuple(lam * wi for wi in w))

    c_sq = norm2_sq(c)
    excess = vec_dot(c, x_tilde) - opt
    if excess > 0 and excess * excess > epsilon * epsilon * c_sq * d_sq:
        raise AuditFailure("apx-cost", detail=f"cost excess {excess} beyond budget")
    if norm2_sq(neg_part(x_tilde)) > epsilon * epsilon * d_sq:
        raise AuditFailure("apx-negative", detail="negative part beyond budget")
    return ApxSolution(x_tilde=x_tilde, epsilon=epsilon, seed=seed)


def _feasibility_rec(W: Subspace, d: Vec, eps: Fraction, seed: int, depth: int, budget: int) -> Vec:
    n = W.ambient_dim
    d = W.project_onto_perp(d)
    if all(v == 0 for v in d):
        return vec_zero(n)
    try:
        apx = apx_oracle(W, d, vec_zero(n), eps, seed + depth)
    except InfeasibleSystem as exc:
        raise OracleInfeasible("the oracle reports W + d misses the nonnegative orthant") from exc
    xt = apx.x_tilde
    if all(v >= 0 for v in xt):
        return xt
    kappa = imbalances(W).kappa
    neg_sq = norm2_sq(neg_part(xt))
    I = [i for i in range(n) if xt[i] >= 0 and xt[i] * xt[i] >= kappa * kappa * neg_sq]
    if not I or budget == 0:
        # No coordinate is confidently large (or the recursion allowance is
        # spent): fall back to the exact solve the oracle already proved
        # feasible.
        res = solve(LPInstance.standard(W.kernel_rep, W.kernel_rep.matvec(d), vec_zero(n)))
        assert res.status == OPTIMAL
        return res.x
    J = [i for i in range(n) if i not in I]
    WJ = minor(W, J, "project")
    z = _feasibility_rec(WJ, vec(d[j] for j in J), eps, seed, depth + 1, budget - 1)
    p = vec_sub(z, vec(xt[j] for j in J))
    h = lift_min_norm(W, J, p)
    x = vec_add(xt, h)
    if any(v < 0 for v in x):
        # The lifted correction overshot a coordinate in I; the simplified
        # recursion does not enforce the proximity condition that would rule
        # this out, so use the exact fallback rather than fail.
        res = solve(LPInstance.standard(W.kernel_rep, W.kernel_rep.matvec(d), vec_zero(n)))
        assert res.status == OPTIMAL
        return res.x
    assert W.kernel_rep.matvec(x) == W.kernel_rep.matvec(d)
    return x


def feasibility_simplified(W: Subspace, d, epsilon=None, seed: int = 0) -> Vec:
    """Find x in W + d with x >= 0 through recursive projection.

    Each level asks the approximate oracle for a near-feasible point, keeps
    the coordinates that are provably positive in some exact solution,
    projects them out, recurses, and lifts the recursive answer back.  The
    output is exactly feasible; recursion depth never exceeds the
    codimension of W.  epsilon defaults to 1/(kappa_bar + n)^3 and may not
    exceed that ceiling.
    """
    d = vec(d)
    n = W.ambient_dim
    if len(d) != n:
        raise DimensionMismatch("shift vector length mismatch")
    kappa_bar = imbalances(W).kappa_bar
    ceiling = Fraction(1, (kappa_bar + n) ** 3)
    eps = ceiling if epsilon is None else Fraction(epsilon)
    if eps < 0 or eps > ceiling:
        raise BadParameters(f"epsilon must lie in [0, {ceiling}]")
    return _feasibility_rec(W, d, eps, seed, 0, max(W.codim, 0))
