"""Masses, projectors, plane-wave solutions and free Hamiltonians.

Momenta are Euclidean four-vectors p = (p_1, p_2, p_3, i p_0) with
p^2 = |p|^2 - p_0^2; a plane wave is Psi e^{i(p.x - p_0 t)}, so in momentum
space the first-order operator becomes i alpha_mu p_mu + m.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import matrixcore as mc
from .algebra import (
    DIM,
    SPATIAL,
    ModelParameters,
    build_operators,
    generator,
    slash,
)
from .errors import (
    ComplexMass,
    ComplexMassWarning,
    DegenerateParameter,
    NoSuchState,
    OffShell,
    SeedExhausted,
    SingularElimination,
    SingularMatrix,
)

DYNAMICAL = np.r_[0:4, 16:20]
CONSTRAINED = np.r_[4:16]
SHELL_TOL = 1e-8


@dataclass(frozen=True)
class FourMomentum:
    p_vec: tuple[float, float, float]
    p0: float

    def __post_init__(self):
        object.__setattr__(self, "p_vec", tuple(float(x) for x in self.p_vec))
        if len(self.p_vec) != 3 or not all(map(math.isfinite, (*self.p_vec, self.p0))):
            raise ValueError("momentum needs three finite spatial components and a finite p0")

    @property
    def p4(self) -> complex:
        return 1j * self.p0

    @property
    def components(self) -> np.ndarray:
        return np.array([*self.p_vec, self.p4], dtype=complex)

    @property
    def magnitude(self) -> float:
        return math.sqrt(sum(x * x for x in self.p_vec))

    @property
    def square(self) -> float:
        return sum(x * x for x in self.p_vec) - self.p0**2

    def slash(self) -> np.ndarray:
        return slash(self.components)

    def __neg__(self) -> "FourMomentum":
        return FourMomentum(tuple(-x for x in self.p_vec), -self.p0)

    def on_shell(self, params: ModelParameters, branch: int | None = None, tol: float = SHELL_TOL) -> bool:
        if branch is None:
            return mass_shell_residual(self, params) <= tol
        mass = branch_mass(branch, params)
        return abs(self.square + mass**2) <= tol * max(1.0, mass**2)


@dataclass(frozen=True)
class MassSpectrum:
    """Signed masses as in the closed-form root formulas, plus alpha_4 eigenvalues."""

    m1: float
    m2: float
    lambda1: float
    lambda2: float
    degenerate: bool

    @property
    def abs_masses(self) -> tuple[float, float]:
        return abs(self.m1), abs(self.m2)


@dataclass(frozen=True)
class DiracLimit:
    mass: float


def params_from_barut(alpha1: float, alpha2: float, kappa: float, tol: float = 1e-10) -> ModelParameters:
    """Map (alpha1 gamma.d + alpha2 d^2 + kappa) psi = 0 onto (m, a)."""
    if alpha1 == 0:
        raise ValueError("alpha1 must be nonzero")
    m = kappa / alpha1
    a = -m * alpha2 / alpha1
    if a < -0.25:
        warnings.warn(f"a = {a} < -1/4: masses are complex", ComplexMassWarning, stacklevel=2)
    return ModelParameters(m=m, a=a + 0.0, tol=tol)


def mass_spectrum(params: ModelParameters) -> MassSpectrum | DiracLimit:
    m, a = params.m, params.a
    if a == 0:
        return DiracLimit(mass=m)
    if a < -0.25:
        raise ComplexMass(f"a = {a} < -1/4 gives complex masses")
    s = math.sqrt(4 * a + 1)
    # 2m/(1+s) and 2a/(1+s) avoid cancellation as a -> 0
    return MassSpectrum(
        m1=2 * m / (1 + s),
        m2=-m * (1 + s) / (2 * a),
        lambda1=(-1 - s) / 2,
        lambda2=2 * a / (1 + s),
        degenerate=params.degenerate or s < 1e-12,
    )


def branch_mass(branch: int, params: ModelParameters) -> float:
    if branch not in (1, 2):
        raise ValueError(f"branch must be 1 or 2, got {branch}")
    ms = mass_spectrum(params)
    if isinstance(ms, DiracLimit):
        if branch == 2:
            raise DegenerateParameter("a = 0 has a single mass branch")
        return ms.mass
    return ms.abs_masses[branch - 1]


def solve_a_for_ratio(R: float) -> float:
    """Negative a for which |m2| / |m1| = R."""
    if R < 1:
        raise ValueError(f"mass ratio must be >= 1, got {R}")
    return -R / (R + 1) ** 2


def mass_shell_residual(p: FourMomentum, params: ModelParameters) -> float:
    m, a = params.m, params.a
    p2 = p.square
    return abs(a**2 * p2**2 + (2 * a + 1) * m**2 * p2 + m**4) / m**4


def dispersion(p_vec, branch: int, params: ModelParameters) -> float:
    mass = branch_mass(branch, params)
    return math.sqrt(sum(float(x) ** 2 for x in p_vec) + mass**2)


def energy_projector(p: FourMomentum, sign: int, params: ModelParameters) -> np.ndarray:
    """Lambda_{+-} = (a p^2 + m^2 -/+ i m pslash) / (2 (a p^2 + m^2)).

    Idempotent only on the mass shell, which is therefore enforced.
    """
    sign = _sign(sign)
    m, a = params.m, params.a
    res = mass_shell_residual(p, params)
    if res > SHELL_TOL:
        raise OffShell(f"mass-shell residual {res:.3e}")
    den = a * p.square + m**2
    if abs(den) <= 1e-12 * m**2:
        raise SingularMatrix("vanishing projector denominator", abs(den))
    return (den * np.eye(4) - sign * 1j * m * p.slash()) / (2 * den)


def bispinor_symbol(p: FourMomentum, sign: int, params: ModelParameters) -> np.ndarray:
    """+-i pslash + a p^2/m + m, the operator annihilated by Lambda_{+-}."""
    m, a = params.m, params.a
    return _sign(sign) * 1j * p.slash() + (a * p.square / m + m) * np.eye(4)


def free_symbol(k: FourMomentum, params: ModelParameters) -> np.ndarray:
    """i alpha_mu k_mu + m on the 20-dim space."""
    alpha = build_operators(params).alpha
    kc = k.components
    return 1j * sum(kc[mu - 1] * alpha[mu] for mu in alpha) + params.m * np.eye(DIM)


def spin_operator(p_vec) -> np.ndarray:
    """-(i / 2|p|) eps_abc p_a J_bc."""
    p = np.asarray(p_vec, dtype=float)
    n = float(np.linalg.norm(p))
    if n == 0:
        raise ValueError("spin projection needs a nonzero momentum direction")
    rot = p[0] * generator(2, 3) + p[1] * generator(3, 1) + p[2] * generator(1, 2)
    return -1j * rot / n


def spin_projectors(p_vec) -> tuple[np.ndarray, np.ndarray]:
    """(P_{+1/2}, P_{-1/2}); both annihilate the +-3/2 eigenspaces."""
    s = spin_operator(p_vec)
    I = np.eye(DIM)
    q = s @ s - 2.25 * I
    return -0.5 * (s + 0.5 * I) @ q, 0.5 * (s - 0.5 * I) @ q


def lift(psi, k: FourMomentum, params: ModelParameters) -> np.ndarray:
    """(psi, psi_mu) with psi_mu = -(i k_mu / m) psi."""
    psi = np.asarray(psi, dtype=complex)
    kc = k.components
    return np.concatenate([psi] + [-1j * kc[mu] / params.m * psi for mu in range(4)])


@dataclass(frozen=True)
class PlaneWaveState:
    """Plane wave amplitude * exp(i(k.x - k_0 t)) with k the phase momentum.

    For negative energy k = -(p_vec, E), so k_0 = -E.
    """

    momentum: FourMomentum
    branch: int
    energy_sign: int
    spin: float
    amplitude: np.ndarray = field(repr=False)
    params: ModelParameters = field(repr=False)

    @property
    def energy(self) -> float:
        return abs(self.momentum.p0)

    @property
    def bispinor(self) -> np.ndarray:
        return self.amplitude[:4]

    def residual(self) -> float:
        """||(i alpha.k + m) Psi|| / ||Psi||."""
        r = free_symbol(self.momentum, self.params) @ self.amplitude
        return float(np.linalg.norm(r) / np.linalg.norm(self.amplitude))

    def eta_norm(self) -> complex:
        eta = build_operators(self.params).eta
        return complex(self.amplitude.conj() @ eta @ self.amplitude)


def _sign(s) -> int:
    if s in (1, "+", "+1"):
        return 1
    if s in (-1, "-", "-1"):
        return -1
    raise ValueError(f"sign must be + or -, got {s!r}")


def _spin(s) -> float:
    if s in (0.5, "+", "+1/2", 1):
        return 0.5
    if s in (-0.5, "-", "-1/2", -1):
        return -0.5
    raise ValueError(f"spin must be +1/2 or -1/2, got {s!r}")


def _project_seed(seed, k, sign, p, spin, params) -> np.ndarray:
    psi = energy_projector(p, sign, params) @ seed
    Psi = lift(psi, k, params)
    direction = p.p_vec if p.magnitude > 0 else (0.0, 0.0, 1.0)
    Pp, Pm = spin_projectors(direction)
    Psi = (Pp if spin > 0 else Pm) @ Psi
    norm = float(np.linalg.norm(Psi[:4]))
    if norm <= 1e-8:
        raise SeedExhausted("projectors annihilate this seed")
    return Psi / norm, norm


def plane_wave(p_vec, branch: int, energy_sign, spin, params: ModelParameters) -> PlaneWaveState:
    """Solution with definite branch, energy sign and helicity.

    Of the canonical bispinor seeds e_1..e_4 the one surviving the projectors
    with the largest norm is used, so a nearly annihilated seed never gets
    amplified. The spin axis is the momentum direction, or z at rest.
    """
    sign, spin = _sign(energy_sign), _spin(spin)
    E = dispersion(p_vec, branch, params)
    p = FourMomentum(tuple(p_vec), E)
    k = p if sign > 0 else -p
    best, best_norm = None, 0.0
    for seed in np.eye(4, dtype=complex):
        try:
            Psi, norm = _project_seed(seed, k, sign, p, spin, params)
        except SeedExhausted:
            continue
        if norm > best_norm:
            best, best_norm = Psi, norm
    if best is None:
        raise NoSuchState(f"no state for branch={branch}, sign={sign}, spin={spin}")
    return PlaneWaveState(k, branch, sign, spin, best, params)


def reduce_hamiltonian(Q: np.ndarray, params: ModelParameters) -> np.ndarray:
    """8x8 Hamiltonian for i alpha_4 d_t Psi = Q Psi on (psi, psi_4).

    Rows of blocks 1..3 carry no time derivative; they are solved for
    psi_1..psi_3 and substituted (Schur complement), then the invertible
    restriction of alpha_4 to blocks {0, 4} is divided out.
    """
    if params.a == 0:
        raise DegenerateParameter("a = 0: alpha_4 restricted to (psi, psi_4) is not invertible")
    d, c = DYNAMICAL, CONSTRAINED
    Qcc = Q[np.ix_(c, c)]
    try:
        Qcc_inv = mc.inverse(Qcc)
    except SingularMatrix as exc:
        raise SingularElimination("constraint block is singular", mc.det(Qcc)) from exc
    S = Q[np.ix_(d, d)] - Q[np.ix_(d, c)] @ Qcc_inv @ Q[np.ix_(c, d)]
    A4 = build_operators(params).alpha[4][np.ix_(d, d)]
    return mc.inverse(A4) @ S


def free_rhs(p_vec, params: ModelParameters) -> np.ndarray:
    """alpha_k (i p_k) + m, the right-hand side of i alpha_4 d_t Psi = Q Psi."""
    alpha = build_operators(params).alpha
    Q = params.m * np.eye(DIM, dtype=complex)
    for k in SPATIAL:
        Q = Q + 1j * float(p_vec[k - 1]) * alpha[k]
    return Q


def reduced_free_hamiltonian(p_vec, params: ModelParameters) -> np.ndarray:
    return reduce_hamiltonian(free_rhs(p_vec, params), params)


def literal_free_hamiltonian(p_vec, params: ModelParameters) -> np.ndarray:
    """B (alpha_k i p_k + m) with B the group inverse of alpha_4 (acts on range(P_dyn) only)."""
    ops = build_operators(params)
    if ops.alpha4_drazin is None:
        raise DegenerateParameter("a = 0")
    return ops.alpha4_drazin @ free_rhs(p_vec, params)


def reconstruct(psi8: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Full 20-vector from (psi, psi_4) using the constraint rows of Q."""
    d, c = DYNAMICAL, CONSTRAINED
    out = np.zeros(DIM, dtype=complex)
    out[d] = psi8
    out[c] = -mc.solve(Q[np.ix_(c, c)], Q[np.ix_(c, d)] @ psi8)
    return out


def evolve(H: np.ndarray, state0, t: float) -> np.ndarray:
    """exp(-i H t) state0."""
    H = np.asarray(H, dtype=complex)
    state0 = np.asarray(state0, dtype=complex)
    if H.shape[0] != H.shape[1] or H.shape[0] != state0.shape[0]:
        raise ValueError(f"dimension mismatch: H {H.shape}, state {state0.shape}")
    return mc.matrix_exp(-1j * t * H) @ state0


def expected_reduced_spectrum(p_vec, params: ModelParameters) -> np.ndarray:
    E1, E2 = (dispersion(p_vec, b, params) for b in (1, 2))
    return np.sort(np.array([E1, E1, -E1, -E1, E2, E2, -E2, -E2]))

