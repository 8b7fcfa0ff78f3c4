import random
from fractions import Fraction
from math import lcm

import pytest

from circuitkit.errors import InfeasibleSystem, UnboundedRegion
from circuitkit.lp import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LPInstance,
    edge_graph,
    edge_graph_diameter,
    fractionality,
    solve,
    vertices,
)
from circuitkit.ratmat import RatMatrix, vec
from circuitkit.subspace import Subspace
from util import random_int_matrix


def simplex3():
    return LPInstance.standard(
        RatMatrix.from_rows([[1, 1, 1]], cols=3), [1], [0, 0, 0]
    )


def test_solve_optimal_and_duals():
    lp = LPInstance.standard(
        RatMatrix.from_rows([[1, 1, 1]], cols=3), [1], [3, 1, 2]
    )
    res = solve(lp)
    assert res.status == OPTIMAL
    assert res.objective == 1
    assert res.x == (0, 1, 0)
    # strong duality for standard form
    assert sum(yi * bi for yi, bi in zip(res.y, lp.b)) == res.objective
    # dual feasibility: c - y^T A >= 0
    for j in range(3):
        reduced = lp.c[j] - sum(res.y[i] * lp.A.entry(i, j) for i in range(1))
        assert reduced >= 0


def test_solve_infeasible_farkas():
    lp = LPInstance.standard(RatMatrix.from_rows([[1, 1]], cols=2), [-1], [0, 0])
    res = solve(lp)
    assert res.status == INFEASIBLE
    y = res.certificate
    yA = [sum(y[i] * lp.A.entry(i, j) for i in range(1)) for j in range(2)]
    yb = sum(yi * bi for yi, bi in zip(y, lp.b))
    assert all(v <= 0 for v in yA) and yb > 0


def test_solve_unbounded_ray():
    lp = LPInstance.standard(RatMatrix.from_rows([[1, -1]], cols=2), [0], [-1, 0])
    res = solve(lp)
    assert res.status == UNBOUNDED
    ray = res.certificate
    assert lp.A.matvec(ray) == (0,)
    assert all(v >= 0 for v in ray)
    assert sum(ci * ri for ci, ri in zip(lp.c, ray)) < 0


def test_bounded_form_hits_caps():
    lp = LPInstance.bounded(
        RatMatrix.from_rows([[1, 1]], cols=2), [4], [-2, -1], [3, 3]
    )
    res = solve(lp)
    assert res.status == OPTIMAL
    assert res.x == (3, 1)
    assert res.objective == -7


def test_vertices_simplex():
    vs = vertices(simplex3())
    pts = [v for v, _ in vs]
    assert pts == [
        (0, 0, 1),
        (0, 1, 0),
        (1, 0, 0),
    ]
    for v, basis in vs:
        assert len(basis) == 1
        assert v[basis[0]] == 1


def test_vertices_are_basic():
    rng = random.Random(9)
    for _ in range(8):
        A = random_int_matrix(rng, 2, 4, lo=0, hi=3)
        b = A.matvec(vec([rng.randint(0, 2) for _ in range(4)]))
        lp = LPInstance.standard(A, b, [1, 1, 1, 1])
        for v, basis in vertices(lp):
            assert A.matvec(v) == tuple(b)
            assert all(x >= 0 for x in v)
            # nonzero coordinates sit inside the basis
            assert set(i for i, x in enumerate(v) if x != 0) <= set(basis)


def test_cube_diameter():
    A = RatMatrix.zeros(1, 3)
    lp = LPInstance.bounded(A, [0], [0, 0, 0], [1, 1, 1])
    vs = vertices(lp)
    assert len(vs) == 8
    assert edge_graph_diameter(lp) == 3


def test_edge_graph_simplex():
    verts, adj = edge_graph(simplex3())
    assert len(verts) == 3
    assert all(len(adj[i]) == 2 for i in adj)


def test_diameter_unbounded_region():
    lp = LPInstance.standard(RatMatrix.from_rows([[1, -1]], cols=2), [0], [0, 0])
    with pytest.raises(UnboundedRegion):
        edge_graph_diameter(lp)


def test_fractionality():
    # vertex (1/2, 1/2): x1 + x2 = 1, x1 - x2 = 0
    A = RatMatrix.from_rows([[1, 1], [1, -1]], cols=2)
    lp = LPInstance.standard(A, [1, 0], [0, 0])
    assert fractionality(lp) == 2
    with pytest.raises(InfeasibleSystem):
        fractionality(
            LPInstance.standard(RatMatrix.from_rows([[1, 1]], cols=2), [-1], [0, 0])
        )


def test_fractionality_divides_kappa_dot(A_app):
    # every vertex denominator of {x in ker+d, x >= 0} divides kappa_dot
    rng = random.Random(12)
    W = Subspace.from_kernel_matrix(A_app)
    for _ in range(6):
        d = vec([rng.randint(-4, 4) for _ in range(4)])
        lp = LPInstance.from_subspace(W, d, [0, 0, 0, 0])
        try:
            k = fractionality(lp)
        except InfeasibleSystem:
            continue
        assert 5850 % k == 0


def test_solve_agrees_with_vertex_scan():
    rng = random.Random(77)
    for _ in range(10):
        A = random_int_matrix(rng, 2, 4, lo=0, hi=3)
        b = A.matvec(vec([rng.randint(0, 2) for _ in range(4)]))
        c = [rng.randint(-3, 3) for _ in range(4)]
        lp = LPInstance.standard(A, b, c)
        res = solve(lp)
        vs = vertices(lp)
        if res.status != OPTIMAL:
            continue
        best = min(sum(ci * xi for ci, xi in zip(c, v)) for v, _ in vs)
        assert res.objective <= best
        # an optimal vertex exists when the optimum is attained at a vertex
        if res.objective == best:
            assert any(
                sum(ci * xi for ci, xi in zip(c, v)) == res.objective for v, _ in vs
            )
