"""Circuit augmentation: direction rules, maximal steps, traces, and audits.

Directions are computed twice wherever a second route exists (exhaustive
circuit scan vs. an exact LP formulation) and the two must agree; a
disagreement raises AuditFailure rather than silently preferring one.

Orientation convention: returned directions g satisfy <c, g> < 0, except
support_circuit which allows <c, g> = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    AlreadyBasic,
    AlreadyOptimal,
    AuditFailure,
    BadParameters,
    CircuitKitError,
    DimensionMismatch,
    InfeasibleSystem,
    NoAugmentingCircuit,
    TargetNotBasic,
    UnbalancedDemands,
    UnboundedDirection,
)
from .imbalance import imbalances
from .lp import INFEASIBLE, OPTIMAL, UNBOUNDED, LPInstance, LPResult, solve
from .ratmat import RatMatrix, norm1, rank, vec, vec_dot
from .subspace import ElementaryVector, Subspace, conformal_decompose

STEEPEST = "steepest"
DANTZIG = "dantzig"
DEEPEST = "deepest"
RATIO = "ratio"
SUPPORT = "support"
GUIDED = "guided"

RULES = (STEEPEST, DANTZIG, DEEPEST, RATIO, SUPPORT, GUIDED)


@dataclass(frozen=True)
class AugmentStep:
    direction: ElementaryVector  # oriented
    alpha: Fraction
    x_after: tuple
    objective_after: Fraction


@dataclass(frozen=True)
class AugmentationTrace:
    rule: str
    start: tuple
    objective_start: Fraction
    steps: tuple
    terminated: str  # "optimal" | "iteration-cap" | "basic" | "target-reached"
    epsilons: tuple | None = None  # aligned with iterates(), steepest only

    def iterates(self) -> list:
        return [self.start] + [s.x_after for s in self.steps]

    @property
    def final_x(self) -> tuple:
        return self.steps[-1].x_after if self.steps else self.start

    @property
    def final_objective(self) -> Fraction:
        return self.steps[-1].objective_after if self.steps else self.objective_start


@dataclass(frozen=True)
class AuditReport:
    steps: int
    epsilon_monotone_checks: int
    window_decay_checks: int
    decay_factor: Fraction
    freezing: tuple  # (coordinate, first step frozen, "zero" | "upper")


def _oriented(ev: ElementaryVector, sign: int) -> ElementaryVector:
    if sign == 1:
        return ev
    return ElementaryVector(ev.support, tuple(-v for v in ev.vector))


def _feasible_directions(W: Subspace, x, u):
    """Oriented circuits g with g_i >= 0 where x_i = 0, g_i <= 0 where x_i = u_i."""
    out = []
    for ev in W.circuit_list:
        for sign in (1, -1):
            g = ev.as_fractions(sign)
            ok = True
            for i, gi in enumerate(g):
                if x[i] == 0 and gi < 0:
                    ok = False
                    break
                if u is not None and u[i] is not None and x[i] == u[i] and gi > 0:
                    ok = False
                    break
            if ok:
                out.append((ev, sign, g))
    return out


def _residual_set(x, u, n: int) -> list:
    """N(x) in [2n]: i while x_i is below its cap, n+j while x_j > 0."""
    N = []
    for i in range(n):
        if u is None or u[i] is None or x[i] < u[i]:
            N.append(i)
    for j in range(n):
        if x[j] > 0:
            N.append(n + j)
    return N


def _split_lp(A: RatMatrix, c, x, u, with_norm_row: bool):
    """Columns of (A | -A) restricted to N(x); optional 1^T z = 1 row."""
    n = A.cols
    N = _residual_set(x, u, n)
    if not N:
        return None, N
    rows = []
    for r in range(A.rows):
        row = []
        for i in N:
            if i < n:
                row.append(A.entry(r, i))
            else:
                row.append(-A.entry(r, i - n))
        rows.append(row)
    b = [Fraction(0)] * A.rows
    if with_norm_row:
        rows.append([Fraction(1)] * len(N))
        b.append(Fraction(1))
    cost = [c[i] if i < n else -c[i - n] for i in N]
    M = RatMatrix.from_rows(rows, cols=len(N))
    return LPInstance.standard(M, b, cost), N


def steepest_direction(W: Subspace, c, x, u=None):
    """Most negative <c,g>/||g||_1 among augmenting circuits, plus that value.

    Computed by exhaustive scan and, independently, by the exact split LP
    (minimize <c,z> over z >= 0 supported on the residual set with
    1^T z = 1); the two optima must agree.
    """
    cv = vec(c)
    xv = vec(x)
    best = None
    for ev, sign, g in _feasible_directions(W, xv, u):
        cg = vec_dot(cv, g)
        if cg >= 0:
            continue
        steep = -cg / norm1(g)
        key = (-steep, ev.support, _oriented(ev, sign).vector)
        if best is None or key < best[0]:
            best = (key, _oriented(ev, sign), steep)
    if best is None:
        raise AlreadyOptimal("no augmenting circuit improves the objective")
    lp, _ = _split_lp(W.kernel_rep, cv, xv, u, with_norm_row=True)
    res = solve(lp)
    if res.status != OPTIMAL or -res.objective != best[2]:
        raise AuditFailure(
            "steepest-direction",
            0,
            f"scan value {best[2]} vs LP value "
            f"{-res.objective if res.status == OPTIMAL else res.status}",
        )
    return best[1], best[2]


def dantzig_direction(W: Subspace, c, x, u=None) -> ElementaryVector:
    """Most negative <c,g> over gcd-normalized augmenting circuits."""
    cv = vec(c)
    xv = vec(x)
    best = None
    for ev, sign, _ in _feasible_directions(W, xv, u):
        g = _oriented(ev, sign)
        cg = vec_dot(cv, g.as_fractions())
        if cg >= 0:
            continue
        key = (cg, ev.support, g.vector)
        if best is None or key < best[0]:
            best = (key, g)
    if best is None:
        raise AlreadyOptimal("no augmenting circuit improves the objective")
    return best[1]


def maximal_step(x, g, u=None) -> Fraction:
    """Largest alpha keeping x + alpha*g within the bounds."""
    xv = vec(x)
    gv = vec(g) if not isinstance(g, ElementaryVector) else g.as_fractions()
    alphas = []
    for i, gi in enumerate(gv):
        if gi < 0:
            alphas.append(xv[i] / -gi)
        elif gi > 0 and u is not None and u[i] is not None:
            alphas.append((u[i] - xv[i]) / gi)
    if not alphas:
        raise UnboundedDirection("no constraint limits the step", ray=tuple(gv))
    return min(alphas)


def deepest_direction(W: Subspace, c, x, u=None):
    """Maximize -alpha*<c,g> over augmenting circuits, alpha the maximal step."""
    cv = vec(c)
    xv = vec(x)
    best = None
    for ev, sign, g in _feasible_directions(W, xv, u):
        cg = vec_dot(cv, g)
        if cg >= 0:
            continue
        alpha = maximal_step(xv, g, u)  # UnboundedDirection flags LP unboundedness
        depth = -alpha * cg
        key = (-depth, ev.support, _oriented(ev, sign).vector)
        if best is None or key < best[0]:
            best = (key, _oriented(ev, sign), alpha)
    if best is None:
        raise AlreadyOptimal("no augmenting circuit improves the objective")
    return best[1], best[2]


def ratio_circuit(A: RatMatrix, c, w) -> ElementaryVector:
    """Minimum cost-to-weight circuit: basic optimum of the weighted system.

    The system is min <c,z> over Az = 0 with <w, z^-> <= 1; w_i may be None
    (infinite weight), which forbids decreasing coordinate i.  The optimal
    basic solution is reduced to a single circuit by conformal decomposition
    (choosing the term with the smallest cost/weight ratio) and cross-checked
    against an exhaustive scan over circuits.
    """
    cv = vec(c)
    n = A.cols
    finite = [i for i in range(n) if w[i] is not None]
    # variables: p (n increases), q (len(finite) decreases), slack r
    width = n + len(finite) + 1
    rows = []
    for r in range(A.rows):
        row = [A.entry(r, i) for i in range(n)]
        row += [-A.entry(r, i) for i in finite]
        row.append(Fraction(0))
        rows.append(row)
    wrow = [Fraction(0)] * n + [Fraction(w[i]) for i in finite] + [Fraction(1)]
    rows.append(wrow)
    b = [Fraction(0)] * A.rows + [Fraction(1)]
    cost = list(cv) + [-cv[i] for i in finite] + [Fraction(0)]
    lp = LPInstance.standard(RatMatrix.from_rows(rows, cols=width), b, cost)
    res = solve(lp)
    if res.status == UNBOUNDED:
        ray = res.certificate
        g = [ray[i] for i in range(n)]
        for pos, i in enumerate(finite):
            g[i] -= ray[n + pos]
        raise UnboundedDirection("weighted system is unbounded", ray=tuple(g))
    assert res.status == OPTIMAL
    if res.objective >= 0:
        raise NoAugmentingCircuit("the weighted system has no negative circuit")
    z = [res.x[i] for i in range(n)]
    for pos, i in enumerate(finite):
        z[i] -= res.x[n + pos]
    W = Subspace.from_kernel_matrix(A)
    decomp = conformal_decompose(W, tuple(z))
    best = None
    for coeff, gint in decomp.terms:
        gfrac = tuple(Fraction(v) for v in gint)
        cg = vec_dot(cv, gfrac)
        if cg >= 0:
            continue
        wneg = sum(
            (Fraction(w[i]) * -gfrac[i] for i in range(n) if gfrac[i] < 0 and w[i] is not None),
            Fraction(0),
        )
        if wneg == 0:
            raise UnboundedDirection("circuit decreases cost with no weight to pay", ray=gfrac)
        ratio = cg / wneg
        support = tuple(i for i in range(n) if gint[i] != 0)
        key = (ratio, support, gint)
        if best is None or key < best[0]:
            best = (key, ElementaryVector(support, gint), ratio)
    if best is None:
        raise CircuitKitError("internal error: negative optimum without negative term")
    # cross-oracle: exhaustive scan over oriented circuits
    scan = None
    for ev in W.circuit_list:
        for sign in (1, -1):
            g = ev.as_fractions(sign)
            if any(g[i] < 0 and w[i] is None for i in range(n)):
                continue
            cg = vec_dot(cv, g)
            if cg >= 0:
                continue
            wneg = sum(
                (Fraction(w[i]) * -g[i] for i in range(n) if g[i] < 0 and w[i] is not None),
                Fraction(0),
            )
            if wneg == 0:
                raise UnboundedDirection("circuit decreases cost with no weight to pay", ray=g)
            scan = min(scan, cg / wneg) if scan is not None else cg / wneg
    if scan != res.objective or best[2] != scan:
        raise AuditFailure(
            "ratio-circuit",
            0,
            f"scan ratio {scan}, LP optimum {res.objective}, chosen term {best[2]}",
        )
    return best[1]


def support_circuit(A: RatMatrix, c, x) -> ElementaryVector:
    """A circuit inside supp(x) with <c,g> <= 0, oriented to zero a coordinate."""
    cv = vec(c)
    xv = vec(x)
    supp = frozenset(i for i, v in enumerate(xv) if v != 0)
    W = Subspace.from_kernel_matrix(A)
    best = None
    for ev in W.circuit_list:
        if not set(ev.support) <= supp:
            continue
        for sign in (1, -1):
            g = ev.as_fractions(sign)
            cg = vec_dot(cv, g)
            if cg > 0:
                continue
            if all(v >= 0 for v in g):
                if cg < 0:
                    raise UnboundedDirection("nonnegative circuit decreases cost", ray=g)
                continue  # <c,g> = 0 with nothing to zero; the flip covers it
            key = (cg, ev.support, _oriented(ev, sign).vector)
            if best is None or key < best[0]:
                best = (key, _oriented(ev, sign))
    if best is None:
        raise AlreadyBasic("supp(x) holds no circuit; x is a basic solution")
    return best[1]


def epsilon_of(A: RatMatrix, c, x, u=None) -> Fraction:
    """Optimum of the residual dual system: min eps, <a_i, y> <= c_i + eps
    over the residual index set (split columns).  Zero or negative exactly
    when x is optimal; returns 0 when no residual directions exist at all.
    """
    cv = vec(c)
    xv = vec(x)
    n = A.cols
    m = A.rows
    N = _residual_set(xv, u, n)
    if not N:
        return Fraction(0)
    # variables: y+ (m), y- (m), e+ , e-, slack per constraint
    k = len(N)
    width = 2 * m + 2 + k
    rows = []
    b = []
    for pos, i in enumerate(N):
        col = (
            [A.entry(r, i) for r in range(m)]
            if i < n
            else [-A.entry(r, i - n) for r in range(m)]
        )
        ci = cv[i] if i < n else -cv[i - n]
        row = col + [-v for v in col] + [Fraction(-1), Fraction(1)]
        row += [Fraction(1) if j == pos else Fraction(0) for j in range(k)]
        rows.append(row)
        b.append(ci)
    cost = [Fraction(0)] * (2 * m) + [Fraction(1), Fraction(-1)] + [Fraction(0)] * k
    lp = LPInstance.standard(RatMatrix.from_rows(rows, cols=width), b, cost)
    res = solve(lp)
    if res.status == UNBOUNDED:
        return Fraction(0)
    assert res.status == OPTIMAL
    return res.objective


def _default_cap(lp: LPInstance, W: Subspace) -> int:
    kappa = imbalances(W).kappa
    n = lp.n
    m = lp.A.rows
    return 1 + int(10 * n * n * max(m, 1) * float(kappa) * (math.log2(float(kappa) + n) + 1))


def run(lp: LPInstance, rule: str, cap: int | None = None, x0=None) -> AugmentationTrace:
    """Instrumented circuit walk under the given rule, from x0 or a phase-1 point."""
    if rule not in (STEEPEST, DANTZIG, DEEPEST, RATIO, SUPPORT):
        raise BadParameters(f"run does not drive rule {rule!r}")
    if rule == RATIO and lp.u is not None and any(ui is not None for ui in lp.u):
        # The weighted system only prices decreases, so a coordinate parked
        # at its cap can stall the walk; the rule is for uncapped instances.
        raise BadParameters("the weighted rule needs an instance without upper bounds")
    W = Subspace.from_kernel_matrix(lp.A)
    u = lp.u
    if x0 is None:
        feas = solve(LPInstance(A=lp.A, b=lp.b, c=tuple(Fraction(0) for _ in range(lp.n)), u=u))
        if feas.status == INFEASIBLE:
            raise InfeasibleSystem(
                "no feasible starting point", certificate=feas.certificate
            )
        x = feas.x
    else:
        x = vec(x0)
        if lp.A.matvec(x) != tuple(lp.b) or any(v < 0 for v in x):
            raise BadParameters("starting point is not feasible")
        if u is not None and any(ui is not None and xi > ui for xi, ui in zip(x, u)):
            raise BadParameters("starting point violates an upper bound")
    x_start = x
    if cap is None:
        cap = _default_cap(lp, W)
    cv = vec(lp.c)
    obj = vec_dot(cv, x)
    steps = []
    epsilons = [epsilon_of(lp.A, cv, x, u)] if rule == STEEPEST else None
    opt_for_decay = None
    if rule == RATIO:
        ref = solve(lp)
        if ref.status == UNBOUNDED:
            raise UnboundedDirection("objective unbounded below", ray=ref.certificate)
        opt_for_decay = ref.objective
    terminated = None
    while len(steps) < cap:
        try:
            if rule == STEEPEST:
                g, _steep = steepest_direction(W, cv, x, u)
            elif rule == DANTZIG:
                g = dantzig_direction(W, cv, x, u)
            elif rule == DEEPEST:
                g, _alpha = deepest_direction(W, cv, x, u)
            elif rule == RATIO:
                wvec = tuple(None if xi == 0 else 1 / xi for xi in x)
                g = ratio_circuit(lp.A, cv, wvec)
            else:
                g = support_circuit(lp.A, cv, x)
        except AlreadyOptimal:
            terminated = "optimal"
            break
        except NoAugmentingCircuit:
            terminated = "optimal"
            break
        except AlreadyBasic:
            terminated = "basic"
            break
        gv = g.as_fractions()
        alpha = maximal_step(x, gv, u)
        x_prev = x
        x = tuple(xi + alpha * gi for xi, gi in zip(x, gv))
        new_obj = vec_dot(cv, x)
        if rule == SUPPORT:
            if new_obj > obj:
                raise AuditFailure(SUPPORT, len(steps), "objective increased")
            before = sum(1 for v in x_prev if v != 0)
            after = sum(1 for v in x if v != 0)
            if after >= before:
                raise AuditFailure(SUPPORT, len(steps), "support did not shrink")
        elif new_obj >= obj:
            raise AuditFailure(rule, len(steps), "objective did not strictly decrease")
        if rule == RATIO and opt_for_decay is not None:
            gap_before = obj - opt_for_decay
            gap_after = new_obj - opt_for_decay
            if gap_after > (1 - Fraction(1, lp.n)) * gap_before:
                raise AuditFailure(
                    "ratio-decay", len(steps), f"{gap_after} > (1-1/n)*{gap_before}"
                )
        obj = new_obj
        steps.append(AugmentStep(direction=g, alpha=alpha, x_after=x, objective_after=obj))
        if rule == STEEPEST:
            epsilons.append(epsilon_of(lp.A, cv, x, u))
    if terminated is None:
        terminated = "iteration-cap"
    if terminated == "optimal":
        ref = solve(lp)
        if ref.status != OPTIMAL or ref.objective != obj:
            raise AuditFailure(
                "optimal-crosscheck",
                len(steps),
                f"walk stopped at {obj}, solver reports "
                f"{ref.objective if ref.status == OPTIMAL else ref.status}",
            )
    return AugmentationTrace(
        rule=rule,
        start=x_start,
        objective_start=vec_dot(cv, x_start),
        steps=tuple(steps),
        terminated=terminated,
        epsilons=tuple(epsilons) if epsilons is not None else None,
    )


def audit_trace(trace: AugmentationTrace, A: RatMatrix, c, u=None) -> AuditReport:
    """Check the steepest-descent decay statements exactly on a finished trace."""
    if trace.rule != STEEPEST:
        raise BadParameters("audit_trace expects a steepest-descent trace")
    cv = vec(c)
    W = Subspace.from_kernel_matrix(A)
    eps = list(trace.epsilons) if trace.epsilons else [
        epsilon_of(A, cv, it, u) for it in trace.iterates()
    ]
    n = A.cols
    m = A.rows
    kappa = imbalances(W).kappa
    factor = 1 - 1 / (1 + (m - 1) * Fraction(kappa))
    for t in range(len(eps) - 1):
        if eps[t + 1] > eps[t]:
            raise AuditFailure("epsilon-monotone", t, f"{eps[t + 1]} > {eps[t]}")
    windows = 0
    for t in range(len(eps) - n):
        if eps[t + n] > factor * eps[t]:
            raise AuditFailure(
                "epsilon-window-decay", t, f"{eps[t + n]} > {factor} * {eps[t]}"
            )
        windows += 1
    # feasibility and maximality of every recorded step
    prev = trace.start
    for t, step in enumerate(trace.steps):
        gv = step.direction.as_fractions()
        expect = tuple(xi + step.alpha * gi for xi, gi in zip(prev, gv))
        if expect != step.x_after:
            raise AuditFailure("step-consistency", t, "iterate does not match step data")
        if any(v < 0 for v in step.x_after):
            raise AuditFailure("feasibility", t, "negative coordinate")
        if u is not None and any(
            ui is not None and v > ui for v, ui in zip(step.x_after, u)
        ):
            raise AuditFailure("feasibility", t, "upper bound violated")
        tight = any(
            (gi < 0 and xi == 0)
            or (gi > 0 and u is not None and u[i] is not None and xi == u[i])
            for i, (xi, gi) in enumerate(zip(step.x_after, gv))
        )
        if not tight:
            raise AuditFailure("maximal-step", t, "no new tight constraint")
        prev = step.x_after
    freezing = []
    iterates = trace.iterates()
    for i in range(n):
        for kind, level in (("zero", Fraction(0)), ("upper", None)):
            if kind == "upper":
                if u is None or u[i] is None:
                    continue
                level = u[i]
            at = [it[i] == level for it in iterates]
            if at[-1]:
                first = len(at) - 1
                while first > 0 and at[first - 1]:
                    first -= 1
                if first < len(at) - 1:
                    freezing.append((i, first, kind))
    return AuditReport(
        steps=len(trace.steps),
        epsilon_monotone_checks=max(len(eps) - 1, 0),
        window_decay_checks=windows,
        decay_factor=factor,
        freezing=tuple(freezing),
    )


def steepness_spectrum(W: Subspace, c) -> frozenset:
    """All values of <c,g>/||g||_1 over oriented elementary vectors."""
    cv = vec(c)
    values = set()
    for ev in W.circuit_list:
        for sign in (1, -1):
            g = ev.as_fractions(sign)
            values.add(vec_dot(cv, g) / norm1(g))
    n = W.ambient_dim
    m = W.codim
    if values and all(x.denominator == 1 for x in cv):
        ninf = max(abs(x) for x in cv) if any(cv) else Fraction(0)
        if ninf > 0 and norm1(cv) <= (n - m + 1) * ninf:
            kbar = imbalances(W).kappa_bar
            bound = Fraction(1, 2) * ninf * (n - m + 1) * kbar * ((n - m + 1) * kbar + 1)
            if len(values) > bound:
                raise AuditFailure(
                    "spectrum-bound", 0, f"{len(values)} distinct values exceed {bound}"
                )
    return frozenset(values)


def guided_walk(lp: LPInstance, x_start, x_target) -> AugmentationTrace:
    """Walk to a basic solution along conformal pieces of the remaining gap.

    Each step decomposes x_target - x conformally, picks the term with the
    largest mass on the non-basic coordinates, and steps maximally.  The
    step length in units of the chosen term must land in [1, n].
    """
    A = lp.A
    u = lp.u
    n = A.cols
    x = vec(x_start)
    xt = vec(x_target)
    if A.matvec(x) != tuple(lp.b) or any(v < 0 for v in x):
        raise BadParameters("x_start is not feasible")
    if A.matvec(xt) != tuple(lp.b) or any(v < 0 for v in xt):
        raise TargetNotBasic("x_target is not feasible")
    supp = [i for i, v in enumerate(xt) if v != 0]
    if supp and rank(A.take_cols(supp)) < len(supp):
        raise TargetNotBasic("support columns of x_target are dependent")
    B = list(supp)
    for j in range(n):
        if j in B:
            continue
        if rank(A.take_cols(sorted(B + [j]))) > len(B):
            B.append(j)
    Bset = set(B)
    W = Subspace.from_kernel_matrix(A)
    cost = tuple(Fraction(0) if i in Bset else Fraction(1) for i in range(n))
    obj = vec_dot(cost, x)
    steps = []
    while x != xt:
        diff = tuple(ti - xi for ti, xi in zip(xt, x))
        decomp = conformal_decompose(W, diff)
        best = None
        for coeff, gint in decomp.terms:
            mass = coeff * sum(abs(Fraction(gint[i])) for i in range(n) if i not in Bset)
            support = tuple(i for i in range(n) if gint[i] != 0)
            key = (-mass, support, gint)
            if best is None or key < best[0]:
                best = (key, coeff, gint, mass)
        _, coeff, gint, mass = best
        h = tuple(coeff * Fraction(v) for v in gint)
        alpha = maximal_step(x, h, u)
        if not (1 <= alpha <= n):
            raise AuditFailure("guided-step-range", len(steps), f"alpha = {alpha}")
        x = tuple(xi + alpha * hi for xi, hi in zip(x, h))
        new_obj = vec_dot(cost, x)
        if mass > 0 and new_obj >= obj:
            raise AuditFailure("guided-decrease", len(steps), "||x_N||_1 did not drop")
        obj = new_obj
        support = tuple(i for i in range(n) if gint[i] != 0)
        steps.append(
            AugmentStep(
                direction=ElementaryVector(support, gint),
                alpha=alpha * coeff,
                x_after=x,
                objective_after=obj,
            )
        )
        if len(steps) > 4 * n * n * (n + 2):
            raise CircuitKitError("guided walk failed to converge")
    return AugmentationTrace(
        rule=GUIDED,
        start=vec(x_start),
        objective_start=vec_dot(cost, vec(x_start)),
        steps=tuple(steps),
        terminated="target-reached",
    )


def flow_to_lp(nodes, arcs, capacities, costs, demands) -> LPInstance:
    """Min-cost flow as a bounded LP over the node-arc incidence matrix.

    Row convention: inflow minus outflow equals the node's demand.
    """
    if len(arcs) != len(costs) or len(arcs) != len(capacities):
        raise DimensionMismatch("arc data lengths disagree")
    if len(nodes) != len(demands):
        raise DimensionMismatch("one demand per node required")
    if sum(Fraction(d) for d in demands) != 0:
        raise UnbalancedDemands("node demands must sum to zero")
    index = {v: i for i, v in enumerate(nodes)}
    rows = [[Fraction(0)] * len(arcs) for _ in nodes]
    for j, (tail, head) in enumerate(arcs):
        rows[index[tail]][j] -= 1
        rows[index[head]][j] += 1
    A = RatMatrix.from_rows(rows, cols=len(arcs))
    u = tuple(None if cap is None else Fraction(cap) for cap in capacities)
    return LPInstance.bounded(A, [Fraction(d) for d in demands], vec(costs), u)


def max_flow_encoding(nodes, arcs, capacities, s, t):
    """Max s-t flow as min-cost circulation: extra (t, s) arc at cost -1."""
    all_arcs = list(arcs) + [(t, s)]
    caps = list(capacities) + [None]
    costs = [Fraction(0)] * len(arcs) + [Fraction(-1)]
    lp = flow_to_lp(nodes, all_arcs, caps, costs, [Fraction(0)] * len(nodes))
    return lp, all_arcs
