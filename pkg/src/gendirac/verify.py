"""Identity battery aggregated into a machine-readable report."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__
from . import matrixcore as mc
from .algebra import (
    DIM,
    GAMMA,
    INDICES,
    PAIRS,
    SPATIAL,
    ModelParameters,
    alpha4_minimal_structure,
    alpha_munu_expansion,
    build_operators,
    dirac_embedding,
    epsilon,
    generator,
)
from .conservation import (
    SpacetimePoint,
    adjoint_residual,
    bilinear,
    current20,
    current_bispinor,
    divergence_check,
    emt20,
    emt_bispinor,
    evaluate,
    evaluate_bispinor,
    lagrangian_density,
    lorentz_transform,
    superpose,
)
from .em import (
    Couplings,
    FieldConfiguration,
    characteristic_analysis,
    covariant_symbol,
    eliminate_vector_bispinor,
    em_symbol,
    field_strength,
    hamiltonian,
    hamiltonian_rhs,
    hermiticity_signature,
    interaction_operator,
    singular_field_strength,
    tensor_form,
)
from .errors import ComplexMass, SingularElimination
from .spectral import (
    FourMomentum,
    bispinor_symbol,
    dispersion,
    energy_projector,
    evolve,
    expected_reduced_spectrum,
    free_symbol,
    mass_shell_residual,
    mass_spectrum,
    plane_wave,
    reconstruct,
    reduced_free_hamiltonian,
    spin_operator,
    spin_projectors,
)

IDENTITY_TOL = 1e-12
SWEEP = (-0.24, -3 / 16, -0.1, 0.5, 3 / 4, 2.0, 10.0)


@dataclass
class Check:
    id: str
    description: str
    paper_ref: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(math.isfinite(self.residual) and self.residual <= self.tolerance)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "description": self.description,
            "paper_ref": self.paper_ref,
            "residual": float(self.residual),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
        }


@dataclass
class VerificationReport:
    meta: dict
    checks: list[Check] = field(default_factory=list)
    findings: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, id, description, paper_ref, residual, tolerance):
        if any(c.id == id for c in self.checks):
            raise ValueError(f"duplicate check id {id}")
        self.checks.append(Check(id, description, paper_ref, float(residual), float(tolerance)))

    def to_dict(self) -> dict:
        return {
            "meta": self.meta,
            "checks": [c.to_dict() for c in sorted(self.checks, key=lambda c: c.id)],
            "findings": self.findings,
            "pass": self.passed,
        }


def _maxabs(X) -> float:
    return float(np.max(np.abs(X))) if np.size(X) else 0.0


def spectrum_error(computed, expected, degenerate: bool) -> float:
    """Max deviation between two spectra.

    A double root of a defective matrix is only resolved to ~sqrt(eps), while
    the mean of its cluster stays accurate, so degenerate spectra are compared
    through cluster means and multiplicities.
    """
    computed = np.asarray(computed, dtype=complex)
    expected = np.asarray(expected, dtype=complex)
    if not degenerate:
        return _maxabs(np.sort_complex(computed) - np.sort_complex(expected))
    got, want = mc.collect(computed, 1e-5), mc.collect(expected, 1e-5)
    if [k for _, k in got] != [k for _, k in want]:
        return float("inf")
    return max(abs(g - w) for (g, _), (w, _) in zip(got, want))


def random_momenta(rng, n, scale=3.0):
    out = []
    while len(out) < n:
        v = rng.uniform(-1, 1, size=3)
        if 0 < np.linalg.norm(v) <= 1:
            out.append(v * scale * rng.uniform(0.05, 1.0))
    return out


def algebra_checks(rep: VerificationReport, params: ModelParameters):
    ops = build_operators(params)
    tol = IDENTITY_TOL
    g = GAMMA
    rep.add("algebra.clifford", "gamma anticommutators equal 2 delta I", "Clifford relations",
            max(_maxabs(mc.anticommutator(g[m], g[n]) - 2 * (m == n) * np.eye(4))
                for m, n in itertools.combinations_with_replacement(INDICES, 2)), tol)
    rep.add("algebra.gamma_hermitian", "gamma matrices are Hermitian", "Euclidean gamma convention",
            max(_maxabs(g[m] - g[m].conj().T) for m in INDICES), tol)
    rep.add("algebra.epsilon_products", "matrix-unit products e(M,A) e(B,N) = delta_AB e(M,N)",
            "matrix-unit algebra",
            max(_maxabs(epsilon(M, A) @ epsilon(B, N) - (A == B) * epsilon(M, N))
                for M, A, B, N in itertools.product(range(5), repeat=4)), tol)

    d = lambda i, j: float(i == j)
    J = generator
    worst = 0.0
    for (m, n), (p, q) in itertools.product(PAIRS, repeat=2):
        rhs = d(n, p) * J(m, q) + d(m, q) * J(n, p) - d(n, q) * J(m, p) - d(m, p) * J(n, q)
        worst = max(worst, _maxabs(mc.commutator(J(m, n), J(p, q)) - rhs))
    rep.add("algebra.lorentz_algebra", "generator commutators, all 36 pair combinations",
            "Lorentz algebra", worst, tol)
    worst = max(
        _maxabs(mc.commutator(ops.alpha[lam], J(m, n)) - (d(lam, m) * ops.alpha[n] - d(lam, n) * ops.alpha[m]))
        for lam in INDICES for m, n in PAIRS
    )
    rep.add("algebra.form_invariance", "[alpha_l, J_mn] = d_lm alpha_n - d_ln alpha_m, 24 combinations",
            "form invariance", worst, tol)

    eta = ops.eta
    rep.add("algebra.eta_spatial", "eta alpha_k = -alpha_k^+ eta (k = 1..3)", "Hermitianizing matrix",
            max(_maxabs(eta @ ops.alpha[k] + ops.alpha[k].conj().T @ eta) for k in SPATIAL), tol)
    rep.add("algebra.eta_temporal", "eta alpha_4 = alpha_4^+ eta", "Hermitianizing matrix",
            _maxabs(eta @ ops.alpha[4] - ops.alpha[4].conj().T @ eta), tol)
    rep.add("algebra.eta_hermitian", "eta is Hermitian", "bilinear form", _maxabs(eta - eta.conj().T), tol)

    P0, P1 = ops.P0, ops.P1
    rep.add("algebra.subspace_projectors", "P0^2 = P0, P1^2 = P1, P0 + P1 = 1, P0 P1 = 0",
            "scalar/vector projectors",
            max(_maxabs(P0 @ P0 - P0), _maxabs(P1 @ P1 - P1), _maxabs(P0 + P1 - np.eye(DIM)), _maxabs(P0 @ P1)),
            tol)
    rep.add("algebra.alpha_munu_expansion", "block expansion of alpha_{mu nu} equals the commutator",
            "alpha_{mu nu}",
            max(_maxabs(alpha_munu_expansion(params, m, n) - ops.alpha_munu[(m, n)])
                for m in INDICES for n in INDICES), tol)
    rep.findings["alpha_munu_as_printed_defect"] = max(
        _maxabs(alpha_munu_expansion(params, m, n, as_printed=True) - ops.alpha_munu[(m, n)])
        for m in INDICES for n in INDICES)

    if params.a != 0:
        B, Pd = ops.alpha4_drazin, ops.P_dyn
        A4 = ops.alpha[4]
        rep.add("algebra.drazin", "group-inverse identities A B A = A, B A B = B, [A, B] = 0",
                "inverse of alpha_4",
                max(_maxabs(A4 @ B @ A4 - A4), _maxabs(B @ A4 @ B - B), _maxabs(A4 @ B - B @ A4)), tol)
        rep.add("algebra.dynamical_projector", "P_dyn idempotent with trace 8", "inverse of alpha_4",
                max(_maxabs(Pd @ Pd - Pd), abs(np.trace(Pd) - 8)), tol)
        st = alpha4_minimal_structure(params)
        rep.add("algebra.quintic", "alpha_4^5 - (1+2a) alpha_4^3 + a^2 alpha_4 = 0 on the full space",
                "minimal equation of alpha_4", st.quintic, tol)
        rep.add("algebra.quartic_restricted", "quartic minimal equation on range(P_dyn)",
                "minimal equation of alpha_4", st.quartic_restricted, tol)
        rep.add("algebra.kernel_dimension", "alpha_4 has a 12-dimensional kernel", "minimal equation of alpha_4",
                abs(st.kernel_dim - 12), 0)
        rep.findings["quartic_full_space_residual"] = st.quartic_full
        rep.findings["quartic_full_space_expected"] = params.a**2 * math.sqrt(12)
        rep.findings["alpha4_invertible"] = False
    else:
        rep.add("algebra.dirac_limit", "a = 0: alpha_nu equals the Dirac embedding", "Dirac limit",
                max(_maxabs(ops.alpha[n] - dirac_embedding(n)) for n in INDICES), tol)


def spectrum_checks(rep: VerificationReport, params: ModelParameters):
    if params.a == 0:
        return
    ops = build_operators(params)
    ms = mass_spectrum(params)
    m = params.m
    etol = 1e-8 if ms.degenerate else 1e-9
    st = alpha4_minimal_structure(params)
    deg = ms.degenerate
    ev = mc.eigenvalues(st.restricted)
    expected = np.array([ms.lambda1, -ms.lambda1, ms.lambda2, -ms.lambda2] * 2, dtype=complex)
    rep.add("spectrum.alpha4_restricted", "eigenvalues of alpha_4 on range(P_dyn) are +-lambda_1, +-lambda_2 (x2)",
            "eigenvalues of alpha_4", spectrum_error(ev, expected, deg), etol)
    full = mc.eigenvalues(ops.alpha[4])
    rep.add("spectrum.alpha4_full", "full spectrum adds 0 with multiplicity 12", "eigenvalues of alpha_4",
            spectrum_error(full, np.concatenate([expected, np.zeros(12)]), deg), etol)
    lam_dk = np.sort_complex(mc.polyroots(mc.minimal_polynomial(ops.alpha[4])))
    lam_expected = np.sort_complex(np.array([0, ms.lambda1, -ms.lambda1, ms.lambda2, -ms.lambda2]))
    if not ms.degenerate:
        rep.add("spectrum.minimal_polynomial_roots", "Durand-Kerner roots of the minimal polynomial of alpha_4",
                "eigenvalues of alpha_4", _maxabs(lam_dk - lam_expected), etol)
    rep.add("spectrum.mass_consistency", "{m / lambda} = {+-m1, +-m2}", "masses from alpha_4 eigenvalues",
            spectrum_error(m / ev, np.array([ms.m1, -ms.m1, ms.m2, -ms.m2] * 2), deg),
            etol * max(1, abs(ms.m2)))
    rep.add("spectrum.sum_rule", "m1 + m2 = -m/a (relative)", "mass formula",
            abs(ms.m1 + ms.m2 + m / params.a) / max(abs(m / params.a), 1e-300), 1e-12)
    if ms.degenerate:
        rep.add("spectrum.degenerate_masses", "a = -1/4: m1 = m2 = 2m", "degenerate masses",
                max(abs(ms.m1 - 2 * m), abs(ms.m2 - 2 * m)), 1e-8)


def projector_checks(rep: VerificationReport, params: ModelParameters, rng):
    if params.a == 0:
        return
    worst_idem = worst_kernel = worst_comp = worst_trace = 0.0
    for b in (1, 2):
        for pv in random_momenta(rng, 5):
            p = FourMomentum(tuple(pv), dispersion(pv, b, params))
            for s in (1, -1):
                L = energy_projector(p, s, params)
                worst_idem = max(worst_idem, _maxabs(L @ L - L))
                worst_kernel = max(worst_kernel, _maxabs(bispinor_symbol(p, s, params) @ L))
                worst_trace = max(worst_trace, abs(np.trace(L) - 2))
            Lp, Lm = energy_projector(p, 1, params), energy_projector(p, -1, params)
            worst_comp = max(worst_comp, _maxabs(Lp + Lm - np.eye(4)), _maxabs(Lp @ Lm),
                             abs(mc.rank(Lp) - 2))
    rep.add("projectors.energy_idempotent", "on-shell Lambda^2 = Lambda", "energy projectors", worst_idem, 1e-10)
    rep.add("projectors.energy_kernel", "(+-i pslash + a p^2/m + m) Lambda_+- = 0", "energy projectors",
            worst_kernel, 1e-10)
    rep.add("projectors.energy_completeness", "Lambda_+ + Lambda_- = 1, Lambda_+ Lambda_- = 0, rank 2",
            "energy projectors", worst_comp, 1e-10)
    rep.add("projectors.energy_trace", "trace Lambda_+- = 2", "energy projectors", worst_trace, 1e-10)

    mp = mc.minimal_polynomial(spin_operator((0, 0, 1)))
    target = np.polynomial.Polynomial([9 / 16, 0, -10 / 4, 0, 1])
    coeff_err = _maxabs(mp.coef - target.coef) if len(mp.coef) == 5 else float("inf")
    rep.add("projectors.spin_minimal_polynomial", "minimal polynomial of sigma_p is (x^2-1/4)(x^2-9/4)",
            "spin projection operator", coeff_err, IDENTITY_TOL)
    worst_poly = worst_sp = worst_comm = 0.0
    moms = random_momenta(rng, 20)
    for pv in moms:
        s = spin_operator(pv)
        worst_poly = max(worst_poly, _maxabs(mc.poly_eval(target.coef, s)))
        Pp, Pm = spin_projectors(pv)
        worst_sp = max(worst_sp, _maxabs(Pp @ Pp - Pp), _maxabs(Pm @ Pm - Pm),
                       _maxabs(s @ Pp - 0.5 * Pp), _maxabs(s @ Pm + 0.5 * Pm), _maxabs(Pp @ Pm),
                       abs(np.trace(Pp) - 8), abs(np.trace(Pm) - 8))
        b = int(rng.integers(1, 3))
        k = FourMomentum(tuple(pv), dispersion(pv, b, params))
        worst_comm = max(worst_comm, _maxabs(mc.commutator(free_symbol(k, params), s)))
    rep.add("projectors.spin_polynomial_identity", "(s^2-1/4)(s^2-9/4) = 0 on 20 random momenta",
            "spin projection operator", worst_poly, IDENTITY_TOL)
    rep.add("projectors.spin_projectors", "P_+-1/2 idempotent, orthogonal, trace 8, eigen-equations",
            "spin projectors", worst_sp, IDENTITY_TOL)
    rep.add("projectors.spin_commutes", "[i alpha.p + m, sigma_p] = 0 on 20 random on-shell momenta",
            "spin projection operator", worst_comm, IDENTITY_TOL)


def solution_battery(params: ModelParameters, magnitudes=(0.0, 0.75, 2.5)):
    states = []
    for mag in magnitudes:
        pv = (0.0, 0.0, mag)
        for b in (1, 2):
            for s in (1, -1):
                for sp in (0.5, -0.5):
                    states.append(plane_wave(pv, b, s, sp, params))
    return states


def planewave_checks(rep: VerificationReport, params: ModelParameters, rng):
    if params.a == 0:
        return
    states = solution_battery(params)
    rep.add("planewave.equation_residual", "(i alpha.k + m) Psi = 0 for branches x signs x spins x |p| in {0, 0.75, 2.5}",
            "first-order equation", max(s.residual() for s in states), 1e-10)
    rep.add("planewave.mass_shell", "plane-wave momenta satisfy the quartic mass shell",
            "mass shell", max(mass_shell_residual(s.momentum, params) for s in states), 1e-12)
    lift_err = 0.0
    spin_err = 0.0
    for s in states:
        k = s.momentum.components
        lift_err = max(lift_err, max(_maxabs(s.amplitude[4 * (mu + 1):4 * (mu + 2)] + 1j * k[mu] / params.m * s.bispinor)
                                     for mu in range(4)))
        direction = s.momentum.p_vec if s.momentum.magnitude > 0 else (0, 0, 1)
        sigma = spin_operator(direction)
        # k = -p for negative energy, so helicity is measured along sign * k
        axis = s.energy_sign if s.momentum.magnitude > 0 else 1
        spin_err = max(spin_err, _maxabs(axis * sigma @ s.amplitude - s.spin * s.amplitude))
    rep.add("planewave.lift", "psi_mu = -(i k_mu/m) psi", "20-component wave function", lift_err, 1e-12)
    rep.add("planewave.spin", "sigma_p Psi = s Psi", "spin projection operator", spin_err, 1e-10)


def hamiltonian_checks(rep: VerificationReport, params: ModelParameters, rng):
    if params.a == 0:
        return
    ms = mass_spectrum(params)
    etol = 1e-8 if ms.degenerate else 1e-9
    worst = 0.0
    for pv in random_momenta(rng, 20):
        ev = mc.eigenvalues(reduced_free_hamiltonian(pv, params))
        worst = max(worst, spectrum_error(ev, expected_reduced_spectrum(pv, params), ms.degenerate))
    rep.add("hamiltonian.reduced_spectrum", "reduced free Hamiltonian spectrum +-E_1, +-E_2 (x2), 20 momenta",
            "Hamiltonian form", worst, etol)
    H = reduced_free_hamiltonian((0.3, -0.2, 0.5), params)
    vals, vecs = np.linalg.eig(H)
    phase = 0.0
    for j in range(8):
        v = vecs[:, j]
        phase = max(phase, _maxabs(evolve(H, v, 1.0) - np.exp(-1j * vals[j]) * v))
    rep.add("hamiltonian.evolution_phase", "exp(-iHt) on eigenstates gives exp(-iEt), t = 1",
            "Hamiltonian form", phase, 1e-11)


def conservation_checks(rep: VerificationReport, params: ModelParameters, rng):
    if params.a == 0:
        return
    ops = build_operators(params)
    cur = emt = lag = adj = 0.0
    for _ in range(10):
        pv1, pv2 = random_momenta(rng, 2, scale=1.5)
        s1 = plane_wave(pv1, 1, int(rng.choice([1, -1])), float(rng.choice([0.5, -0.5])), params)
        s2 = plane_wave(pv2, 2, int(rng.choice([1, -1])), float(rng.choice([0.5, -0.5])), params)
        state = superpose([(complex(*rng.normal(size=2)), s1), (complex(*rng.normal(size=2)), s2)])
        x = SpacetimePoint(tuple(rng.normal(size=3)), float(rng.normal()))
        Psi, dPsi = evaluate(state, x)
        psi, d1, d2 = evaluate_bispinor(state, x)
        cur = max(cur, _maxabs(current20(Psi, params) - current_bispinor(psi, d1, params)))
        emt = max(emt, _maxabs(emt20(Psi, dPsi, params) - emt_bispinor(psi, d1, d2, params)))
        lag = max(lag, abs(lagrangian_density(Psi, dPsi, params)))
        adj = max(adj, adjoint_residual(s1), adjoint_residual(s2))
    rep.add("conservation.current_forms", "20-component current equals the bispinor form", "current density",
            cur, IDENTITY_TOL)
    rep.add("conservation.emt_forms", "20-component tensor equals the six-term bispinor form",
            "energy-momentum tensor", emt, IDENTITY_TOL)
    for s in solution_battery(params):
        Psi, dPsi = s.amplitude, 1j * np.outer(s.momentum.components, s.amplitude)
        lag = max(lag, abs(lagrangian_density(Psi, dPsi, params)))
    rep.add("conservation.lagrangian_zero", "Lagrangian density vanishes on solutions", "Lagrangian", lag, 1e-11)
    rep.add("conservation.adjoint_equation", "Psi-bar (i alpha.k + m) = 0", "adjoint equation", adj, 1e-10)

    inv = 0.0
    for _ in range(10):
        Psi = rng.normal(size=DIM) + 1j * rng.normal(size=DIM)
        w = {(1, 2): rng.normal(), (1, 3): rng.normal(), (2, 3): rng.normal(),
             (1, 4): 1j * rng.normal(), (2, 4): 1j * rng.normal(), (3, 4): 1j * rng.normal()}
        Pt = lorentz_transform(Psi, w)
        b0 = bilinear(Psi, Psi, ops.eta)
        inv = max(inv, abs(bilinear(Pt, Pt, ops.eta) - b0) / max(1.0, abs(b0)))
    rep.add("conservation.bilinear_invariance", "Psi-bar Psi invariant under rotations and boosts",
            "bilinear form", inv, 1e-11)

    s1 = plane_wave((0.3, 0.0, 0.2), 1, 1, 0.5, params)
    s2 = plane_wave((0.0, 0.5, 0.1), 2, 1, -0.5, params)
    state = superpose([(1.0, s1), (0.7 - 0.2j, s2)])
    x = SpacetimePoint((0.3, -0.2, 0.5), 0.4)
    for q in ("current", "emt"):
        res = divergence_check(state, q, x, 1e-2)
        rep.add(f"conservation.divergence_order_{q}", f"finite-difference divergence of the {q} converges at order 2",
                "conservation law", abs(res.order - 2.0), 0.3)


def random_field(rng, with_potential=True) -> FieldConfiguration:
    return FieldConfiguration(
        E_vec=tuple(rng.normal(size=3)), B_vec=tuple(rng.normal(size=3)),
        A0=float(rng.normal()) if with_potential else 0.0,
        A_vec=tuple(rng.normal(size=3)) if with_potential else (0.0, 0.0, 0.0),
    )


def em_checks(rep: VerificationReport, params: ModelParameters, rng, draws: int = 10):
    equiv = 0.0
    for _ in range(draws):
        fld = random_field(rng)
        cp = Couplings(*rng.normal(size=3))
        pv, p0 = rng.normal(size=3), float(rng.normal())
        equiv = max(equiv, _maxabs(em_symbol(pv, p0, params, cp, fld) - tensor_form(params, cp, fld, FourMomentum(pv, p0))))
    rep.add("em.tensor_form_equivalence", f"matrix equation with non-minimal terms equals the tensor system ({draws} draws)",
            "tensor form", equiv, IDENTITY_TOL)

    fld = random_field(rng)
    cp = Couplings(float(rng.normal()), float(rng.normal()), 0.0)
    el = eliminate_vector_bispinor(params, cp, fld)
    p = FourMomentum(tuple(rng.normal(size=3)), float(rng.normal()))
    X = el.vector_bispinor_map(p)
    d = covariant_symbol(p, cp, fld)
    rep.add("em.elimination_kappa1_zero", "kappa1 = 0: psi_nu = -D_nu psi / m", "elimination of psi_mu",
            max(_maxabs(el.G - np.eye(4) / params.m), max(_maxabs(X[n] + d[n] / params.m * np.eye(4)) for n in range(4))),
            1e-14)
    if params.a != 0:
        k1 = 0.7
        b_star = singular_field_strength(params, Couplings(0, 0, k1))
        rep.add("em.elimination_threshold", "elimination tensor degenerates at |B| = m/(kappa1 a)",
                "elimination of psi_mu", abs(b_star - params.m / abs(k1 * params.a)), 1e-9)

        worst_gauge = worst_free = worst_cons = 0.0
        for _ in range(max(1, draws // 2)):
            fld = random_field(rng)
            cp = Couplings(*rng.normal(size=3))
            pv = rng.normal(size=3)
            c = float(rng.normal())
            shifted = FieldConfiguration(fld.E_vec, fld.B_vec, fld.A0 + c, fld.A_vec)
            L1, _ = hamiltonian(params, cp, fld, pv)
            L2, _ = hamiltonian(params, cp, shifted, pv)
            worst_gauge = max(worst_gauge, _maxabs(L2 - L1 - cp.e * c * build_operators(params).P_dyn))
            _, R0 = hamiltonian(params, Couplings(), FieldConfiguration(), pv)
            worst_free = max(worst_free, _maxabs(R0 - reduced_free_hamiltonian(pv, params)))
            try:
                _, R = hamiltonian(params, cp, fld, pv)
            except SingularElimination:
                continue
            Q = hamiltonian_rhs(params, cp, fld, pv)
            vals, vecs = np.linalg.eig(R)
            for j in range(8):
                Psi = reconstruct(vecs[:, j], Q)
                worst_cons = max(worst_cons, float(np.linalg.norm(em_symbol(pv, vals[j], params, cp, fld) @ Psi)
                                                   / np.linalg.norm(Psi)))
        rep.add("em.gauge_shift", "A0 -> A0 + c shifts the literal Hamiltonian by e c P_dyn", "Hamiltonian",
                worst_gauge, IDENTITY_TOL)
        rep.add("em.free_reduced_hamiltonian", "zero field: reduced Hamiltonian equals the free one", "Hamiltonian",
                worst_free, IDENTITY_TOL)
        rep.add("em.elimination_consistency", "eigenstates of the reduced Hamiltonian solve the full system",
                "Hamiltonian", worst_cons, 1e-11)

        X = interaction_operator(params, Couplings(0, 0.6, -0.4), field_strength(random_field(rng, False)))
        rep.findings["interaction_hermiticity"] = hermiticity_signature(params, X)
        rep.findings["mass_term_hermiticity"] = hermiticity_signature(params, params.m * np.eye(DIM))


def causality_checks(rep: VerificationReport, params: ModelParameters, rng, samples: int = 50) -> dict:
    ca = characteristic_analysis(params, samples=samples, seed=int(rng.integers(2**31)))
    if params.a != 0:
        rep.add("causality.first_order_determinant", f"det(alpha.n) = 0 for n = e_4 and {samples} random n",
                "characteristic surfaces", ca["max_det_scaled"], IDENTITY_TOL)
        rep.add("causality.symbol_rank", "rank(alpha.n) = 8", "characteristic surfaces",
                max(abs(r - 8) for r in ca["ranks"]), 0)
        rep.add("causality.second_order", "second-order characteristics lie on n^2 = 0 (speed <= 1)",
                "characteristic surfaces", max(0.0, ca["second_order"]["max_speed"] - 1.0), 1e-12)
    rep.findings["characteristic_condition"] = ca["second_order"]["characteristic_condition"]
    if params.a != 0:
        rep.findings["first_order_determinant_identically_zero"] = True
    return ca


def mode_of(params: ModelParameters) -> str:
    if params.a < -0.25 and not params.degenerate:
        raise ComplexMass(f"a = {params.a} < -1/4: complex masses")
    return "dirac-limit" if params.a == 0 else ("degenerate" if params.degenerate else "two-mass")


def new_report(params: ModelParameters, seed: int) -> VerificationReport:
    mode = mode_of(params)
    meta = {
        "m": params.m, "a": params.a, "tol": params.tol, "seed": seed, "version": __version__,
        "mode": mode,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    if mode == "degenerate":
        meta["widened_tolerance"] = 1e-8
    return VerificationReport(meta)


def verify(params: ModelParameters, seed: int = 0) -> VerificationReport:
    """Run the full identity battery for one parameter set."""
    rep = new_report(params, seed)
    rng = np.random.default_rng(seed)
    algebra_checks(rep, params)
    spectrum_checks(rep, params)
    projector_checks(rep, params, rng)
    planewave_checks(rep, params, rng)
    hamiltonian_checks(rep, params, rng)
    conservation_checks(rep, params, rng)
    em_checks(rep, params, rng)
    causality_checks(rep, params, rng)
    return rep
