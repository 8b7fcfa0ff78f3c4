from fractions import Fraction

import pytest

from circuitkit.errors import (
    AuditFailure,
    BoxTooLarge,
    NonIntegerMatrix,
    NotIntegerKernelVector,
)
from circuitkit.graver import (
    COUNTEREXAMPLE_MATRIX,
    appendix_counterexample,
    conjecture_decompose,
    ej_check,
    graver_basis,
    hk_check,
    ip_proximity_check,
)
from circuitkit.imbalance import imbalances
from circuitkit.ratmat import RatMatrix, vec
from circuitkit.subspace import Subspace


def test_graver_single_circuit(A_int):
    gb = graver_basis(A_int)
    assert sorted(gb.elements) == [(-1, 1, -1), (1, -1, 1)]
    assert gb.g1 == 3
    assert gb.ginf == 1


def test_graver_dumbbell(A_db):
    gb = graver_basis(A_db)
    assert gb.ginf == 2
    for g in gb.elements:
        assert tuple(-v for v in g) in gb.elements
        assert all(int(v) == v for v in g)
        assert any(v != 0 for v in g)
        assert all(x == 0 for x in A_db.matvec(vec(g)))


def test_graver_sandwich(A_int, A_db):
    for A in (A_int, A_db):
        gb = graver_basis(A)
        n = A.cols
        kb = imbalances(Subspace.from_kernel_matrix(A)).kappa_bar
        assert kb <= gb.ginf <= n * kb
        assert gb.ginf <= gb.g1


def test_graver_minimality(A_db):
    gb = graver_basis(A_db)
    elems = set(gb.elements)
    for g in elems:
        for h in elems:
            if h == g:
                continue
            # no distinct element fits conformally under another
            if all(hv * gv >= 0 and abs(hv) <= abs(gv) for hv, gv in zip(h, g)):
                raise AssertionError(f"{h} sits under {g}")


def test_ip_proximity_fractional_relaxation():
    A = RatMatrix.from_rows([[2, 1]], cols=2)
    x_lp, x_ip, distance, bound = ip_proximity_check(A, [3], [-1, 0])
    assert x_lp == (Fraction(3, 2), Fraction(0))
    assert tuple(x_ip) == (1, 1)
    assert distance == Fraction(3, 2)
    assert bound == 4
    assert distance <= bound


def test_ip_proximity_integral_relaxation(A_int):
    x_lp, x_ip, distance, bound = ip_proximity_check(A_int, [2, 2], [1, 0, 1])
    assert distance == 0
    assert tuple(x_ip) == tuple(x_lp) == (0, 2, 0)


def test_ip_proximity_box_guard():
    A = RatMatrix.from_rows([[1, 1000]], cols=2)
    with pytest.raises(BoxTooLarge):
        ip_proximity_check(A, [1000], [0, 0])


def test_conjecture_holds_single(A_int):
    W = Subspace.from_kernel_matrix(A_int)
    rep = conjecture_decompose(W, [2, -2, 2])
    assert rep.status == "holds"
    total = [Fraction(0)] * 3
    for coeff, g in rep.decomposition:
        kd = imbalances(W).kappa_dot
        assert (coeff * kd).denominator == 1
        assert coeff > 0
        for i in range(3):
            total[i] += coeff * g[i]
            assert g[i] * rep.target[i] >= 0
    assert tuple(total) == rep.target


def test_conjecture_holds_dumbbell(A_db):
    W = Subspace.from_kernel_matrix(A_db)
    g = W.circuit_list[0].vector
    z = [int(2 * v) for v in g] if any(v.denominator == 2 for v in g) else [int(v) for v in g]
    rep = conjecture_decompose(W, z)
    assert rep.status == "holds"
    assert rep.searched >= 0


def test_conjecture_zero_target(A_int):
    W = Subspace.from_kernel_matrix(A_int)
    rep = conjecture_decompose(W, [0, 0, 0])
    assert rep.status == "holds"
    assert rep.decomposition == ()


def test_conjecture_rejects_bad_targets(A_int):
    W = Subspace.from_kernel_matrix(A_int)
    with pytest.raises(NotIntegerKernelVector):
        conjecture_decompose(W, [1, 0, 0])
    with pytest.raises(NotIntegerKernelVector):
        conjecture_decompose(W, [Fraction(1, 2), Fraction(-1, 2), Fraction(1, 2)])


def test_hk_dumbbell_witness_lcm(A_db):
    W = Subspace.from_kernel_matrix(A_db)
    rep = hk_check(W, trials=50, seed=11)
    assert rep.kappa_dot == 2
    assert rep.witness_lcm == 2
    assert rep.kappa_dot % rep.random_lcm == 0
    assert rep.feasible_trials <= rep.trials == 50


def test_hk_trivial_denominators(A_int):
    W = Subspace.from_kernel_matrix(A_int)
    rep = hk_check(W, trials=30, seed=5)
    assert rep.kappa_dot == 1
    assert rep.random_lcm == 1
    assert rep.witness_lcm == 1


def test_appendix_report():
    rep = appendix_counterexample()
    assert rep.kappa_dot == 5850
    assert sorted(rep.vectors) == [(0, 1), (9, -4), (10, -3), (13, -3)]
    assert len(rep.products) == 6
    assert len(rep.witnesses) == 6
    for (v, w, rows), (i, j) in zip(rep.products, rep.witnesses):
        assert 0 <= i < j < 4
        M = RatMatrix.from_rows(rows, cols=4)
        S = M.submatrix([0, 1], [i, j])
        from circuitkit.ratmat import bareiss_det, invert

        assert bareiss_det(S) != 0
        inv = invert(S)
        assert any(
            (5850 * inv.entry(r, s)).denominator != 1 for r in range(2) for s in range(2)
        )


def test_appendix_matrix_is_the_fixture(A_app):
    assert COUNTEREXAMPLE_MATRIX.data == A_app.data


def test_ej_small_column_sums(A_db):
    assert ej_check(A_db) is True


def test_ej_declines_large_columns(A_app):
    assert ej_check(A_app) is False


def test_ej_rejects_fractions():
    A = RatMatrix.from_rows([[Fraction(1, 2), 1]], cols=2)
    with pytest.raises(NonIntegerMatrix):
        ej_check(A)
