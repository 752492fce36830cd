import itertools
import math

import numpy as np
import pytest

from gendirac import matrixcore as mc
from gendirac.algebra import (
    DIM,
    GAMMA,
    INDICES,
    PAIRS,
    SPATIAL,
    ModelParameters,
    alpha4_drazin,
    alpha4_minimal_structure,
    alpha_munu,
    alpha_munu_expansion,
    block_of,
    build_alpha,
    build_eta,
    build_operators,
    build_subspace_projectors,
    dirac_embedding,
    epsilon,
    generator,
    slash,
)
from gendirac.errors import DegenerateParameter

from conftest import SWEEP

TOL = 1e-12


def maxabs(X):
    return float(np.max(np.abs(X)))


class TestParameters:
    def test_defaults(self):
        p = ModelParameters()
        assert (p.m, p.a) == (1.0, 2.0)
        assert p.two_mass and p.real_masses and not p.degenerate

    @pytest.mark.parametrize("m", [0.0, -1.0, math.inf, math.nan])
    def test_rejects_bad_mass(self, m):
        with pytest.raises(ValueError):
            ModelParameters(m=m)

    def test_rejects_nonfinite_a(self):
        with pytest.raises(ValueError):
            ModelParameters(a=math.nan)

    def test_flags(self):
        assert ModelParameters(a=-0.25).degenerate
        assert not ModelParameters(a=-0.3).real_masses
        assert not ModelParameters(a=0.0).two_mass

    def test_hashable_and_frozen(self):
        p = ModelParameters()
        assert hash(p) == hash(ModelParameters())
        with pytest.raises(AttributeError):
            p.a = 1.0


class TestGamma:
    def test_gamma4_squares_to_identity(self):
        assert np.array_equal(GAMMA[4] @ GAMMA[4], np.eye(4))

    def test_gamma12_anticommute(self):
        assert maxabs(mc.anticommutator(GAMMA[1], GAMMA[2])) == 0

    def test_all_anticommutators_exact(self):
        for mu, nu in itertools.combinations_with_replacement(INDICES, 2):
            assert maxabs(mc.anticommutator(GAMMA[mu], GAMMA[nu]) - 2 * (mu == nu) * np.eye(4)) == 0

    def test_hermitian(self):
        for mu in INDICES:
            assert np.array_equal(GAMMA[mu], GAMMA[mu].conj().T)

    def test_read_only(self):
        with pytest.raises(ValueError):
            GAMMA[1][0, 0] = 1

    def test_slash(self):
        p = np.array([0.1, 0.2, 0.3, 0.4j])
        assert np.allclose(slash(p) @ slash(p), (p @ p) * np.eye(4))


class TestEpsilon:
    def test_unit_entry(self):
        e = epsilon(0, 0)
        assert e[0, 0] == 1 and np.count_nonzero(e) == 1

    def test_products(self):
        assert np.array_equal(epsilon(1, 3) @ epsilon(3, 2), epsilon(1, 2))
        assert not np.any(epsilon(1, 3) @ epsilon(2, 4))

    def test_all_products(self):
        for M, A, B, N in itertools.product(range(5), repeat=4):
            assert np.array_equal(epsilon(M, A) @ epsilon(B, N), (A == B) * epsilon(M, N))

    @pytest.mark.parametrize("M,N", [(5, 0), (0, -1), (7, 7)])
    def test_out_of_range(self, M, N):
        with pytest.raises(IndexError):
            epsilon(M, N)


class TestAlpha:
    def test_dirac_limit_block(self):
        alpha = build_alpha(ModelParameters(a=0.0))
        for nu in INDICES:
            assert np.array_equal(block_of(alpha[nu], 0, 0), GAMMA[nu])
            assert np.array_equal(alpha[nu], dirac_embedding(nu))

    def test_nonzero_counts(self):
        alpha = build_alpha(ModelParameters(a=2.0))
        assert np.count_nonzero(alpha[4]) == 12
        # 4 (epsilon(1,0)) + 4 (a epsilon(0,1)) + nonzeros of gamma_1
        assert np.count_nonzero(GAMMA[1]) == 4
        assert np.count_nonzero(alpha[1]) == 8 + np.count_nonzero(GAMMA[1])

    def test_block_layout(self):
        a = 2.0
        alpha = build_alpha(ModelParameters(a=a))
        for nu in INDICES:
            assert np.array_equal(block_of(alpha[nu], nu, 0), np.eye(4))
            assert np.array_equal(block_of(alpha[nu], 0, nu), a * np.eye(4))

    def test_alpha4_kernel_blocks_vanish(self):
        A4 = build_alpha(ModelParameters(a=2.0))[4]
        assert not np.any(A4[4:16, :]) and not np.any(A4[:, 4:16])

    @pytest.mark.parametrize("a", [1e-3, 1e-6, -1e-4])
    def test_small_a_distance_from_dirac(self, a):
        alpha = build_alpha(ModelParameters(a=a))
        for nu in INDICES:
            assert maxabs(alpha[nu] - dirac_embedding(nu)) == pytest.approx(abs(a), rel=1e-15)


class TestEta:
    @pytest.mark.parametrize("a", SWEEP)
    def test_relations(self, a):
        p = ModelParameters(a=a)
        eta, alpha = build_eta(p), build_alpha(p)
        for k in SPATIAL:
            assert maxabs(eta @ alpha[k] + alpha[k].conj().T @ eta) <= TOL
        assert maxabs(eta @ alpha[4] - alpha[4].conj().T @ eta) <= TOL

    def test_block_signs_at_a_one(self):
        eta = build_eta(ModelParameters(a=1.0))
        for M, s in enumerate((-1, 1, 1, 1, -1)):
            assert np.array_equal(block_of(eta, M, M), s * GAMMA[4])
        assert np.count_nonzero(eta) == 20


class TestGenerators:
    def test_antisymmetric(self):
        for mu, nu in PAIRS:
            assert np.array_equal(generator(nu, mu), -generator(mu, nu))

    def test_lorentz_algebra_all_36(self):
        d = lambda i, j: float(i == j)
        J = generator
        for (m, n), (p, q) in itertools.product(PAIRS, repeat=2):
            rhs = d(n, p) * J(m, q) + d(m, q) * J(n, p) - d(n, q) * J(m, p) - d(m, p) * J(n, q)
            assert maxabs(mc.commutator(J(m, n), J(p, q)) - rhs) <= 1e-13

    @pytest.mark.parametrize("a", SWEEP)
    def test_form_invariance(self, a):
        alpha = build_alpha(ModelParameters(a=a))
        d = lambda i, j: float(i == j)
        for lam in INDICES:
            for m, n in PAIRS:
                rhs = d(lam, m) * alpha[n] - d(lam, n) * alpha[m]
                assert maxabs(mc.commutator(alpha[lam], generator(m, n)) - rhs) <= TOL

    def test_alpha1_rotates_into_alpha2(self):
        alpha = build_alpha(ModelParameters(a=2.0))
        assert maxabs(mc.commutator(alpha[1], generator(1, 2)) - alpha[2]) <= 1e-13

    def test_spin_half_block(self):
        B = block_of(generator(1, 2), 0, 0)
        assert np.allclose(B, 0.25 * mc.commutator(GAMMA[1], GAMMA[2]))
        assert np.allclose(np.sort_complex(np.linalg.eigvals(B)), [-0.5j, -0.5j, 0.5j, 0.5j])


class TestAlphaMuNu:
    @pytest.mark.parametrize("a", SWEEP)
    def test_expansion_equals_commutator(self, a):
        ops = build_operators(ModelParameters(a=a))
        for mu in INDICES:
            for nu in INDICES:
                assert maxabs(alpha_munu_expansion(ops.params, mu, nu) - ops.alpha_munu[(mu, nu)]) <= 1e-13

    @pytest.mark.parametrize("a", [0.0, 0.5, 2.0, 10.0, -0.24])
    def test_printed_form_defect_is_one_minus_a(self, a):
        # the printed expansion lacks the factor a on the (0, nu) blocks,
        # so it is off by (1 - a) gamma there: exact at a = 1 only
        ops = build_operators(ModelParameters(a=a))
        defect = max(maxabs(alpha_munu_expansion(ops.params, mu, nu, as_printed=True) - ops.alpha_munu[(mu, nu)])
                     for mu, nu in PAIRS)
        assert defect == pytest.approx(abs(1 - a), abs=1e-15)

    def test_printed_form_exact_at_a_one(self):
        ops = build_operators(ModelParameters(a=1.0))
        for mu, nu in PAIRS:
            assert maxabs(alpha_munu_expansion(ops.params, mu, nu, as_printed=True) - ops.alpha_munu[(mu, nu)]) == 0

    def test_diagonal_vanishes(self):
        ops = build_operators(ModelParameters(a=2.0))
        for mu in INDICES:
            assert not np.any(ops.alpha_munu[(mu, mu)])

    def test_dirac_limit_block(self):
        ops = build_operators(ModelParameters(a=0.0))
        assert np.array_equal(block_of(ops.alpha_munu[(1, 2)], 0, 0), mc.commutator(GAMMA[1], GAMMA[2]))

    def test_antisymmetry(self):
        alpha = build_alpha(ModelParameters(a=0.3))
        assert np.array_equal(alpha_munu(alpha, 2, 3), -alpha_munu(alpha, 3, 2))


class TestProjectors:
    def test_traces_and_relations(self):
        P0, P1 = build_subspace_projectors()
        assert np.trace(P0) == 4 and np.trace(P1) == 16
        assert not np.any(P0 @ P1)
        assert np.array_equal(P0 @ P0, P0) and np.array_equal(P1 @ P1, P1)
        assert np.array_equal(P0 + P1, np.eye(DIM))


class TestDrazin:
    @pytest.mark.parametrize("a", SWEEP)
    def test_group_inverse_identities(self, a):
        p = ModelParameters(a=a)
        B, Pd = alpha4_drazin(p)
        A4 = build_alpha(p)[4]
        assert maxabs(A4 @ B @ A4 - A4) <= TOL
        assert maxabs(B @ A4 @ B - B) <= TOL * max(1, maxabs(B))
        assert maxabs(A4 @ B - B @ A4) <= TOL
        assert maxabs(Pd @ Pd - Pd) <= TOL
        assert abs(np.trace(Pd) - 8) <= TOL

    def test_not_a_two_sided_inverse(self):
        B, Pd = alpha4_drazin(ModelParameters(a=2.0))
        A4 = build_alpha(ModelParameters(a=2.0))[4]
        assert maxabs(A4 @ B - np.eye(DIM)) == pytest.approx(1.0, abs=1e-12)

    def test_a_zero_raises(self):
        with pytest.raises(DegenerateParameter):
            alpha4_drazin(ModelParameters(a=0.0))

    def test_operators_at_dirac_limit(self):
        ops = build_operators(ModelParameters(a=0.0))
        assert ops.alpha4_drazin is None and ops.P_dyn is None


class TestMinimalStructure:
    @pytest.mark.parametrize("a", SWEEP)
    def test_structure(self, a):
        st = alpha4_minimal_structure(ModelParameters(a=a))
        assert st.quintic <= TOL
        assert st.quartic_restricted <= TOL
        assert st.kernel_dim == 12

    @pytest.mark.parametrize("a", SWEEP)
    def test_full_space_quartic_fails_at_a_squared_sqrt12(self, a):
        # on the 12-dim kernel the quartic reduces to a^2 I
        st = alpha4_minimal_structure(ModelParameters(a=a))
        assert st.quartic_full == pytest.approx(a**2 * math.sqrt(12), rel=1e-12)

    def test_a_zero_raises(self):
        with pytest.raises(DegenerateParameter):
            alpha4_minimal_structure(ModelParameters(a=0.0))

    def test_restricted_spectrum(self):
        st = alpha4_minimal_structure(ModelParameters(a=2.0))
        assert np.allclose(np.sort(np.linalg.eigvals(st.restricted).real), [-2, -2, -1, -1, 1, 1, 2, 2])


def test_operators_cached_and_immutable():
    p = ModelParameters(a=0.5)
    assert build_operators(p) is build_operators(ModelParameters(a=0.5))
    with pytest.raises(ValueError):
        build_operators(p).alpha[1][0, 0] = 3
