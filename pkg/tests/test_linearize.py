import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import M1, N1, P0, P1, P2, diag_poly, make_e2, poly
from polystruct.analysis import pm_kstruct, realization_kstruct
from polystruct.errors import GradeZero, NotStrictlyProper, SingularD, SingularT
from polystruct.linearize import (build_companion, fraction_linearize, pencil_to_descriptor,
                                  polypart_descriptor_real, polypart_pencil_real,
                                  recover_structure, rm_linearize, sp_realize, spm_linearize)
from polystruct.pencil import pkstruct
from polystruct.polymat import PolyMatrix, RationalMatrix, pm_divrem, pm_eval, rm_eval
from polystruct.system import PencilRealization, PolySystemMatrix

PROBES = np.array([0.37 + 0.81j, -1.6 + 0.2j, 2.3 - 1.1j, 0.05 - 2.4j])


def assert_realizes(L: PencilRealization, target, rtol=1e-9):
    for z in PROBES:
        want = pm_eval(target, z) if isinstance(target, PolyMatrix) else rm_eval(target, z)
        got = L.transfer(z)
        np.testing.assert_allclose(got, want, rtol=rtol, atol=rtol * max(1.0, np.abs(want).max()))


def sp_part():
    return pm_divrem(make_e2())[1]


def pol_part():
    return pm_divrem(make_e2())[0]


def test_first_companion_of_e1_matches_display(e1):
    C = build_companion(e1, "CF1")
    np.testing.assert_array_equal(C.M, M1)
    np.testing.assert_array_equal(C.N, N1)


def test_second_companion_of_e1(e1):
    C = build_companion(e1, "CF2")
    assert C.M.shape == (6, 6)
    # second form is the transpose of the first form of the transpose
    T = build_companion(e1.T, "CF1")
    np.testing.assert_array_equal(C.M, T.M.T)
    ks2, inf2 = recover_structure(pkstruct(C), "CF2", 3, 3, 2)
    ks1, inf1 = recover_structure(pkstruct(build_companion(e1, "CF1")), "CF1", 3, 3, 2)
    assert (ks1.rank, ks1.right_indices, ks1.left_indices, ks1.inf_degrees) == \
        (ks2.rank, ks2.right_indices, ks2.left_indices, ks2.inf_degrees)
    assert inf1 == inf2


def test_companion_of_a_pencil_is_the_pencil():
    J = np.array([[0.0, 1.0], [0.0, 0.0]])
    C = build_companion(poly(-J, np.eye(2)), "CF1")
    ks = pkstruct(C)
    assert ks.finite_eigs[0][0] == pytest.approx(0.0, abs=1e-12)
    assert ks.finite_eigs[0][1] == (2,)


def test_companion_rejects_constant():
    with pytest.raises(GradeZero):
        build_companion(PolyMatrix(np.eye(2)))


def test_recover_structure_of_e1(e1):
    ks, inf = recover_structure(pkstruct(build_companion(e1)), "CF1", 3, 3, 2)
    assert ks.rank == 2
    assert ks.right_indices == (0,)
    assert ks.left_indices == (1,)
    assert inf.indices == (-2, 0)


def test_recover_structure_grade_one_keeps_indices():
    C = build_companion(diag_poly([-1, 1], [-2, 1]), "CF1")
    S = pkstruct(C)
    ks, inf = recover_structure(S, "CF1", 2, 2, 1)
    assert (ks.rank, ks.right_indices, ks.left_indices) == (S.rank, S.right_indices,
                                                            S.left_indices)
    assert inf.indices == (-1, -1)


def test_sp_realize_columnwise_order_three():
    L = sp_realize(sp_part(), "columnwise")
    assert L.order == 3
    assert_realizes(L, sp_part())


def test_sp_realize_rowwise_order_three():
    L = sp_realize(sp_part(), "rowwise")
    assert L.order == 3
    assert_realizes(L, sp_part())


def test_sp_realize_entrywise_order_eight():
    L = sp_realize(sp_part(), "entrywise")
    assert L.order == 8
    assert_realizes(L, sp_part())


def test_sp_realize_scalar():
    L = sp_realize(RationalMatrix([[[1.0]]], [[[1.0, 1.0]]]))
    np.testing.assert_allclose(L.A, [[-1.0]])
    assert abs(L.B[0, 0] * L.C[0, 0] - 1.0) < 1e-15


def test_sp_realize_rejects_proper_input(e2):
    with pytest.raises(NotStrictlyProper):
        sp_realize(e2)


def test_pencil_polynomial_part_of_e1(e1):
    L = polypart_pencil_real(e1, "controllable")
    assert L.order == 3
    assert_realizes(L, e1)
    L = polypart_pencil_real(e1, "observable")
    assert L.order == 3
    assert_realizes(L, e1)


def test_pencil_polynomial_part_of_e2_is_static():
    L = polypart_pencil_real(pol_part())
    assert L.order == 0
    np.testing.assert_allclose(L.D, [[0, -1, -2], [1, 4, 2], [-1, -5, -4]])
    np.testing.assert_allclose(L.H, -np.array(P2, float))


def test_constant_polynomial_parts():
    P = PolyMatrix(np.array(P0, float))
    for L in (polypart_pencil_real(P), polypart_descriptor_real(P)):
        assert L.order == 0
        np.testing.assert_array_equal(L.D, P0)


def test_descriptor_polynomial_part_orders(e1):
    L = polypart_descriptor_real(pol_part(), "controllable")
    assert L.order == 6
    assert_realizes(L, pol_part())
    L = polypart_descriptor_real(e1, "observable")
    assert L.order == 9
    assert_realizes(L, e1)
    np.testing.assert_array_equal(L.F, 0)
    np.testing.assert_array_equal(L.G, 0)
    np.testing.assert_array_equal(L.H, 0)


def test_linearize_e2_pencil_minimal(e2):
    L = rm_linearize(e2, "pencil", True)
    assert_realizes(L, e2)
    ks = pkstruct(L.system_pencil())
    assert ks.right_indices == (0,) and ks.left_indices == (1,)
    assert ks.finite_eigs[0][0] == pytest.approx(1.0, abs=1e-8)
    rep = realization_kstruct(L, minimal=False)
    assert rep.inf_zeros == [1]
    assert rep.mu == 1


def test_linearize_e2_descriptor_minimal(e2):
    L = rm_linearize(e2, "descriptor", True)
    assert L.is_descriptor
    assert_realizes(L, e2)
    # two finite states from the strictly proper part, two infinite ones
    assert L.order == 4
    assert realization_kstruct(L, minimal=False).finite_poles[0][1] == (1, 1)


def test_linearize_e1_strongly_minimal(e1):
    L = rm_linearize(e1, "pencil", True)
    assert L.order == 1
    assert_realizes(L, e1)


def test_psm_left_fraction_scalar():
    # (lam - 1) / (lam + 1)
    S = PolySystemMatrix(poly([[1.0]], [[1.0]]), poly([[-1.0]], [[1.0]]),
                         PolyMatrix(np.eye(1)), PolyMatrix(np.zeros((1, 1))))
    L = spm_linearize(S)
    rep = realization_kstruct(L)
    assert [v for v, _ in rep.finite_poles] == pytest.approx([-1.0])
    assert [v for v, _ in rep.finite_zeros] == pytest.approx([1.0])


def test_psm_inverse_of_lambda():
    S = PolySystemMatrix(poly([[0.0]], [[1.0]]), PolyMatrix(np.eye(1)),
                         PolyMatrix(np.eye(1)), PolyMatrix(np.zeros((1, 1))))
    L = spm_linearize(S)
    assert L.transfer(2.0)[0, 0] == pytest.approx(0.5)
    rep = realization_kstruct(L)
    assert [v for v, _ in rep.finite_poles] == pytest.approx([0.0], abs=1e-12)


def test_psm_feedthrough_only_matches_direct(e1):
    S = PolySystemMatrix(PolyMatrix(np.eye(1)), PolyMatrix(np.zeros((1, 3))),
                         PolyMatrix(np.zeros((3, 1))), e1)
    for kind in ("descriptor", "pencil"):
        a = realization_kstruct(spm_linearize(S, kind))
        b = realization_kstruct(rm_linearize(e1, kind))
        assert (a.rank, a.right_indices, a.left_indices, a.inf_indices) == \
            (b.rank, b.right_indices, b.left_indices, b.inf_indices)
        assert len(a.finite_zeros) == len(b.finite_zeros) == 1


def test_psm_singular_state_matrix():
    S = PolySystemMatrix(PolyMatrix(np.zeros((1, 1))), PolyMatrix(np.eye(1)),
                         PolyMatrix(np.eye(1)), PolyMatrix(np.zeros((1, 1))))
    with pytest.raises(SingularT):
        spm_linearize(S)


def test_left_fraction_row_of_e2():
    D = poly([[1.0]], [[1.0]])
    N = PolyMatrix(np.array([P0, P1, P2], float)[:, :1, :])
    L = fraction_linearize(N, D, "lpmfd")
    row = RationalMatrix([make_e2().num[0]], [make_e2().den[0]])
    assert_realizes(L, row)


def test_inverse_of_diagonal():
    L = fraction_linearize(None, diag_poly([-1, 1], [-2, 1]), "pminv")
    rep = realization_kstruct(L)
    assert sorted(v.real for v, _ in rep.finite_poles) == pytest.approx([1.0, 2.0])
    assert rep.finite_zeros == ()


def test_right_fraction_with_identity_denominator(e1):
    L = fraction_linearize(e1, PolyMatrix(np.eye(3)), "rpmfd")
    assert_realizes(L, e1)
    rep = realization_kstruct(L)
    assert rep.rank == 2 and rep.right_indices == (0,) and rep.left_indices == (1,)


def test_singular_denominator_rejected(e1):
    with pytest.raises(SingularD):
        fraction_linearize(None, e1, "pminv")


def test_pencil_to_descriptor_preserves_transfer(e2):
    L = rm_linearize(e2, "pencil", True)
    Ld = pencil_to_descriptor(L)
    assert Ld.is_descriptor
    assert Ld.order == L.order + 6
    assert_realizes(Ld, e2)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**31),
       st.sampled_from(["pencil", "descriptor"]))
def test_linearization_realizes_random_polynomial(p, m, d, seed, kind):
    rng = np.random.default_rng(seed)
    P = PolyMatrix(rng.integers(-3, 4, (d + 1, p, m)).astype(float))
    for minimal in (False, True):
        assert_realizes(rm_linearize(P, kind, minimal), P, rtol=1e-8)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 2), st.integers(0, 2**31))
def test_companion_grade_shift(p, m, d, seed):
    rng = np.random.default_rng(seed)
    c = rng.integers(-3, 4, (d + 1, p, m)).astype(float)
    c[-1, 0, 0] = 1.0
    P = PolyMatrix(c)
    a = pm_kstruct(P, d)
    b = pm_kstruct(P, d + 1)
    assert (a.rank, a.right_indices, a.left_indices) == (b.rank, b.right_indices,
                                                         b.left_indices)
    assert a.inf_indices == b.inf_indices
    assert [x + 1 for x in a.inf_mults] == list(b.inf_mults)
