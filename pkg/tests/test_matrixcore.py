import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from gendirac import matrixcore as mc
from gendirac.errors import ContractViolation, DimensionError, NumericalFailure, SingularMatrix


def random_complex(rng, n, m=None):
    m = n if m is None else m
    return rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))


finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


def square_arrays(max_n=6):
    return st.integers(1, max_n).flatmap(lambda n: arrays(np.float64, (n, n), elements=finite))


class TestShapes:
    def test_as_matrix_promotes_vector(self):
        assert mc.as_matrix([1, 2, 3]).shape == (1, 3)

    def test_rejects_3d(self):
        with pytest.raises(DimensionError):
            mc.as_matrix(np.zeros((2, 2, 2)))

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            mc.as_matrix([[np.nan]])

    def test_square_required(self):
        with pytest.raises(DimensionError):
            mc.det(np.ones((2, 3)))

    def test_dimension_error_is_value_error(self):
        assert issubclass(DimensionError, ValueError)


@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**31))
def test_kron_matches_numpy(a, b, c, d, seed):
    rng = np.random.default_rng(seed)
    A, B = random_complex(rng, a, b), random_complex(rng, c, d)
    assert np.allclose(mc.kron(A, B), np.kron(A, B), atol=0)


@pytest.mark.filterwarnings("ignore:divide by zero:RuntimeWarning")
@given(square_arrays())
@settings(max_examples=60)
def test_det_matches_lapack(A):
    assert np.isclose(mc.det(A), np.linalg.det(A), rtol=1e-9, atol=1e-9)


def test_kron_examples():
    from gendirac.algebra import GAMMA, epsilon
    assert np.array_equal(mc.kron(np.eye(2), np.eye(2)), np.eye(4))
    assert np.array_equal(mc.kron(np.diag([2, 3]), np.eye(2)), np.diag([2, 2, 3, 3]))
    K = mc.kron(epsilon(0, 0), GAMMA[4])
    assert np.count_nonzero(K) == 4
    assert np.array_equal(K[:4, :4], GAMMA[4])


def test_kron_mixed_product_and_bilinearity(rng):
    for n in (2, 3):
        A, B, C, D = (random_complex(rng, n) for _ in range(4))
        assert np.max(np.abs(mc.kron(A, B) @ mc.kron(C, D) - mc.kron(A @ C, B @ D))) <= 1e-13 * 100
        assert np.max(np.abs(mc.kron(A + 2 * C, B) - mc.kron(A, B) - 2 * mc.kron(C, B))) <= 1e-13


def test_det_examples():
    from gendirac.algebra import GAMMA
    assert mc.det(np.eye(5)) == 1
    assert mc.det(np.diag([2, 3, 4])) == 24
    assert abs(mc.det(GAMMA[1]) - 1) < 1e-15


@pytest.mark.parametrize("seed", range(5))
def test_det_multiplicative(seed):
    rng = np.random.default_rng(seed)
    A, B = random_complex(rng, 5), random_complex(rng, 5)
    assert abs(mc.det(A @ B) - mc.det(A) * mc.det(B)) <= 1e-10 * abs(mc.det(A @ B))


def test_inverse_examples():
    from gendirac.algebra import GAMMA
    assert np.array_equal(mc.inverse(np.eye(4)), np.eye(4))
    assert np.allclose(mc.inverse(np.diag([2, 4])), np.diag([0.5, 0.25]), atol=0)
    assert np.allclose(mc.inverse(GAMMA[4]), GAMMA[4], atol=0)


def test_det_of_permutation_sign():
    P = np.eye(4)[[1, 0, 2, 3]]
    assert mc.det(P) == -1


def test_inverse_and_solve(rng):
    A = random_complex(rng, 7)
    b = rng.normal(size=7)
    assert np.max(np.abs(mc.inverse(A) @ A - np.eye(7))) < 1e-12
    assert np.allclose(mc.solve(A, b), np.linalg.solve(A, b), atol=1e-12)


def test_singular_inverse_reports_pivot():
    A = np.array([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(SingularMatrix) as info:
        mc.inverse(A)
    assert info.value.pivot < 1e-12


def test_lu_reconstructs(rng):
    A = random_complex(rng, 5)
    LU, perm, sign, pivots = mc.lu(A)
    L = np.tril(LU, -1) + np.eye(5)
    U = np.triu(LU)
    assert np.allclose(L @ U, A[perm], atol=1e-12)
    assert np.isclose(sign * np.prod(np.diag(U)), np.linalg.det(A))
    assert len(pivots) == 5


@pytest.mark.parametrize("r", [0, 1, 3, 6])
def test_rank_of_products(rng, r):
    A = random_complex(rng, 6, r) @ random_complex(rng, r, 6) if r else np.zeros((6, 6))
    assert mc.rank(A) == np.linalg.matrix_rank(A) == r
    assert mc.nullity(A) == 6 - r


def test_column_basis_skips_dependent_columns():
    A = np.array([[1, 2, 0], [0, 0, 1], [1, 2, 1]], dtype=float)
    assert mc.column_basis(A) == [0, 2]
    assert mc.column_basis(np.zeros((3, 3))) == []


class TestMatrixExp:
    # scipy's Pade expm is itself only good to ~1e-12 relative on large
    # arguments, so it is held to 1e-10 here and exact forms are checked below
    @given(square_arrays(5), st.floats(0.01, 20))
    @settings(max_examples=60)
    def test_against_scipy(self, A, scale):
        A = A * scale
        ref = scipy.linalg.expm(A)
        assert np.max(np.abs(mc.matrix_exp(A) - ref)) <= 1e-10 * max(1, np.max(np.abs(ref)))

    @pytest.mark.parametrize("s", [0.3, 4.0, 20.0, 60.0])
    def test_rank_one_closed_form(self, s):
        # exp(s J) with J the all-ones 2x2: I + (e^{2s} - 1)/2 J
        E = mc.matrix_exp(s * np.ones((2, 2)))
        off = (np.exp(2 * s) - 1) / 2
        assert np.allclose(E, [[1 + off, off], [off, 1 + off]], rtol=1e-13, atol=0)

    def test_diag_i_pi(self):
        assert np.allclose(mc.matrix_exp(np.diag([1j * np.pi, 0])), np.diag([-1, 1]), atol=1e-15)

    def test_quarter_turn(self):
        J = np.array([[0, -1], [1, 0]])
        assert np.allclose(mc.matrix_exp(np.pi / 2 * J), J, atol=1e-15)

    @pytest.mark.parametrize("seed", range(5))
    def test_inverse_property_bounded_norm(self, seed):
        rng = np.random.default_rng(seed)
        A = random_complex(rng, 6)
        A *= 5 / np.linalg.norm(A, 2)
        assert np.max(np.abs(mc.matrix_exp(A) @ mc.matrix_exp(-A) - np.eye(6))) <= 1e-11

    def test_complex_against_scipy(self, rng):
        A = 3 * random_complex(rng, 8)
        ref = scipy.linalg.expm(A)
        assert np.max(np.abs(mc.matrix_exp(A) - ref)) <= 1e-12 * np.max(np.abs(ref))

    def test_zero(self):
        assert np.array_equal(mc.matrix_exp(np.zeros((3, 3))), np.eye(3))

    def test_inverse_property(self, rng):
        A = random_complex(rng, 6)
        assert np.max(np.abs(mc.matrix_exp(A) @ mc.matrix_exp(-A) - np.eye(6))) < 1e-12

    def test_rotation(self):
        t = 0.7
        R = mc.matrix_exp(np.array([[0, -t], [t, 0]]))
        assert np.allclose(R, [[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]], atol=1e-15)


class TestPolynomials:
    def test_charpoly_matches_numpy(self, rng):
        A = random_complex(rng, 6)
        # numpy.poly returns descending coefficients
        assert np.allclose(mc.charpoly(A).coef, np.poly(A)[::-1], atol=1e-10)

    def test_cayley_hamilton(self, rng):
        A = random_complex(rng, 5)
        assert np.max(np.abs(mc.poly_eval(mc.charpoly(A), A))) < 1e-9

    def test_poly_eval_examples(self):
        from gendirac.algebra import GAMMA
        assert np.array_equal(mc.poly_eval([0, 0, 1], np.eye(3)), np.eye(3))
        assert np.max(np.abs(mc.poly_eval([-1, 0, 1], GAMMA[1]))) == 0

    def test_eigenvalue_examples(self):
        from gendirac.algebra import GAMMA
        for method in ("lapack", "charpoly"):
            assert np.allclose(np.sort_complex(mc.eigenvalues(np.diag([1.0, 2.0, 3.0]), method)), [1, 2, 3])
        assert np.allclose(np.sort(mc.eigenvalues(GAMMA[4]).real), [-1, -1, 1, 1])

    @pytest.mark.parametrize("seed", range(5))
    def test_eigenvalue_trace_and_det(self, seed):
        rng = np.random.default_rng(seed)
        A = random_complex(rng, 8)
        for method in ("lapack", "charpoly"):
            ev = mc.eigenvalues(A, method)
            assert abs(ev.sum() - np.trace(A)) <= 1e-9 * abs(np.trace(A))
            assert abs(np.prod(ev) - mc.det(A)) <= 1e-9 * abs(mc.det(A))

    def test_poly_eval_horner(self):
        A = np.diag([2.0, 3.0])
        # 1 + x^2
        assert np.allclose(mc.poly_eval([1, 0, 1], A), np.diag([5, 10]))

    def test_roots_of_cubic(self):
        # (x-1)(x-2)(x-3) = -6 + 11x - 6x^2 + x^3
        z = np.sort_complex(mc.polyroots([-6, 11, -6, 1]))
        assert np.allclose(z, [1, 2, 3], atol=1e-12)

    def test_roots_raise_when_not_converged(self):
        with pytest.raises(NumericalFailure) as info:
            mc.polyroots([-6, 11, -6, 1], maxiter=1)
        assert info.value.residual > 0

    def test_constant_has_no_roots(self):
        assert mc.polyroots([3.0]).size == 0

    def test_eigen_routes_agree(self, rng):
        A = np.diag([1.0, -2.0, 3.5, 0.5]) + 0.1 * rng.normal(size=(4, 4))
        a = np.sort_complex(mc.eigenvalues(A, "lapack"))
        b = np.sort_complex(mc.eigenvalues(A, "charpoly"))
        assert np.allclose(a, b, atol=1e-10)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            mc.eigenvalues(np.eye(2), "qr")

    def test_polynomial_remainder(self):
        # x^3 divided by x^2 - 1 leaves x
        rem = mc.polynomial_remainder(np.polynomial.Polynomial([0, 0, 0, 1]), [-1, 0, 1])
        assert np.allclose(rem.coef, [0, 1])


class TestMinimalPolynomial:
    def test_repeated_semisimple(self):
        p = mc.minimal_polynomial(np.diag([1.0, 1.0, 2.0]))
        assert np.allclose(p.coef, [2, -3, 1], atol=1e-10)

    def test_nilpotent_jordan_block(self):
        N = np.diag([1.0, 1.0], 1)
        assert np.allclose(mc.minimal_polynomial(N).coef, [0, 0, 0, 1], atol=1e-10)

    def test_identity(self):
        assert np.allclose(mc.minimal_polynomial(np.eye(4)).coef, [-1, 1])

    def test_sigma_p_along_z(self):
        from gendirac.spectral import spin_operator
        # (x^2 - 1/4)(x^2 - 9/4) = 9/16 - 5/2 x^2 + x^4
        p = mc.minimal_polynomial(spin_operator((0, 0, 1)))
        assert np.allclose(p.coef, [9 / 16, 0, -5 / 2, 0, 1], atol=1e-12)

    def test_alpha4_quintic(self):
        from gendirac.algebra import ModelParameters, build_operators
        A4 = build_operators(ModelParameters(1.0, 2.0)).alpha[4]
        p = mc.minimal_polynomial(A4)
        # x (x^4 - 5x^2 + 4)
        assert np.allclose(p.coef, [0, 4, 0, -5, 0, 1], atol=1e-10)

    @pytest.mark.parametrize("seed", range(3))
    def test_divides_characteristic_polynomial(self, seed):
        rng = np.random.default_rng(seed)
        S = random_complex(rng, 6)
        A = S @ np.diag([1, 1, 2, 2, 2, -1]) @ np.linalg.inv(S)
        rem = mc.polynomial_remainder(mc.charpoly(A), mc.minimal_polynomial(A, tol=1e-9))
        assert np.max(np.abs(rem.coef)) <= 1e-9 * np.max(np.abs(mc.charpoly(A).coef))

    def test_annihilates_similar_matrix(self, rng):
        S = random_complex(rng, 5)
        A = S @ np.diag([1, 1, -1, 2, 2]) @ np.linalg.inv(S)
        p = mc.minimal_polynomial(A, tol=1e-9)
        assert p.degree() == 3
        assert np.max(np.abs(mc.poly_eval(p, A))) < 1e-8 * np.max(np.abs(A)) ** 3


class TestRestrict:
    def test_identity_projector(self, rng):
        A = random_complex(rng, 4)
        assert np.allclose(mc.restrict(A, np.eye(4)), A)

    def test_upper_block(self):
        assert np.allclose(mc.restrict(np.diag([1.0, 2.0, 3.0]), np.diag([1.0, 1.0, 0.0])), np.diag([1, 2]))

    def test_alpha4_on_dynamical_subspace(self):
        from gendirac.algebra import ModelParameters, build_operators
        ops = build_operators(ModelParameters(1.0, 2.0))
        R = mc.restrict(ops.alpha[4], ops.P_dyn)
        assert R.shape == (8, 8)
        assert np.allclose(np.sort(mc.eigenvalues(R).real), [-2, -2, -1, -1, 1, 1, 2, 2], atol=1e-12)

    def test_diagonal(self):
        A = np.diag([1.0, 2.0, 3.0])
        P = np.diag([1.0, 0.0, 1.0])
        assert np.allclose(np.sort(np.linalg.eigvals(mc.restrict(A, P)).real), [1, 3])

    def test_requires_idempotent(self):
        with pytest.raises(ContractViolation):
            mc.restrict(np.eye(2), 2 * np.eye(2))

    def test_requires_commuting(self):
        A = np.array([[0.0, 1.0], [1.0, 0.0]])
        with pytest.raises(ContractViolation):
            mc.restrict(A, np.diag([1.0, 0.0]))

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            mc.restrict(np.eye(2), np.eye(3))


def test_collect_groups_with_mean():
    groups = mc.collect([1.0, 1.0 + 1e-9, 2.0, -1.0])
    assert [k for _, k in groups] == [1, 2, 1]
    assert abs(groups[1][0] - (1 + 0.5e-9)) < 1e-15


def test_commutators():
    X, Y = np.array([[0, 1], [1, 0]]), np.array([[1, 0], [0, -1]])
    assert np.array_equal(mc.commutator(X, Y), X @ Y - Y @ X)
    assert np.array_equal(mc.anticommutator(X, Y), np.zeros((2, 2)))
    assert mc.scale_of() == 1.0
    assert mc.norm(np.eye(4)) == 2.0


def test_det_with_subnormal_entries():
    tiny = 2.22507386e-309
    A = np.array([[tiny, 1.0], [tiny, tiny]])
    assert np.isclose(mc.det(A), tiny * tiny - tiny, rtol=1e-12, atol=0)
    assert mc.det(np.full((2, 2), 5e-324)) == 0
    assert mc.det(np.eye(3) * 1e200) == np.inf
