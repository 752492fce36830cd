"""Bilinear form, currents, energy-momentum tensor and conservation checks.

Derivatives follow the Euclidean convention d_4 = d/d(it) = -i d_t, applied
formally to both Psi and its adjoint Psi-bar = Psi^dagger eta. For a field
built from plane waves this means d_mu Psi-bar = s_mu (d_mu Psi)^dagger eta
with s = (+1, +1, +1, -1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import matrixcore as mc
from .algebra import GAMMA, INDICES, PAIRS, ModelParameters, build_operators, generator
from .errors import ContractViolation
from .spectral import FourMomentum, PlaneWaveState, free_symbol

BAR_SIGN = np.array([1, 1, 1, -1])


@dataclass(frozen=True)
class SpacetimePoint:
    x_vec: tuple[float, float, float] = (0.0, 0.0, 0.0)
    t: float = 0.0

    def shifted(self, mu: int, h: float) -> "SpacetimePoint":
        """Move by h along x_mu (mu = 1..3) or along t (mu = 4)."""
        if mu == 4:
            return SpacetimePoint(self.x_vec, self.t + h)
        x = list(self.x_vec)
        x[mu - 1] += h
        return SpacetimePoint(tuple(x), self.t)


@dataclass(frozen=True)
class SuperpositionState:
    """Finite sum of plane waves sharing one parameter set."""

    terms: tuple[tuple[complex, PlaneWaveState], ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("superposition needs at least one term")

    @classmethod
    def single(cls, state: PlaneWaveState, c: complex = 1.0) -> "SuperpositionState":
        return cls(((c, state),))

    @property
    def params(self) -> ModelParameters:
        return self.terms[0][1].params


@dataclass(frozen=True)
class TensorSample:
    T: np.ndarray
    j: np.ndarray
    L: complex
    point: SpacetimePoint

    @property
    def energy_density(self) -> complex:
        return self.T[3, 3]

    @property
    def momentum_density(self) -> np.ndarray:
        return 1j * self.T[:3, 3]

    @property
    def charge_density(self) -> complex:
        return -1j * self.j[3]


def _phase(k: FourMomentum, x: SpacetimePoint) -> complex:
    return np.exp(1j * (np.dot(k.p_vec, x.x_vec) - k.p0 * x.t))


def evaluate(state: SuperpositionState, x: SpacetimePoint):
    """Psi(x) and its four derivatives d_mu Psi (array of shape (4, 20))."""
    Psi = np.zeros(20, dtype=complex)
    dPsi = np.zeros((4, 20), dtype=complex)
    for c, w in state.terms:
        term = c * w.amplitude * _phase(w.momentum, x)
        Psi += term
        dPsi += 1j * np.outer(w.momentum.components, term)
    return Psi, dPsi


def evaluate_bispinor(state: SuperpositionState, x: SpacetimePoint):
    """psi, d_mu psi (4, 4) and d_mu d_nu psi (4, 4, 4) of the bispinor block."""
    psi = np.zeros(4, dtype=complex)
    d1 = np.zeros((4, 4), dtype=complex)
    d2 = np.zeros((4, 4, 4), dtype=complex)
    for c, w in state.terms:
        term = c * w.bispinor * _phase(w.momentum, x)
        k = w.momentum.components
        psi += term
        d1 += 1j * np.outer(k, term)
        d2 += -np.einsum("m,n,a->mna", k, k, term)
    return psi, d1, d2


def bar(Psi, eta) -> np.ndarray:
    return np.conj(Psi) @ eta


def bar_derivatives(dPsi, eta) -> np.ndarray:
    """d_mu (Psi-bar) from d_mu Psi, rows indexed by mu."""
    return BAR_SIGN[:, None] * (np.conj(dPsi) @ eta)


def bilinear(Psi1, Psi2, eta) -> complex:
    return complex(np.conj(Psi1) @ eta @ Psi2)


def _check_omega(omega) -> np.ndarray:
    w = np.zeros((4, 4), dtype=complex)
    if isinstance(omega, dict):
        for (mu, nu), v in omega.items():
            w[mu - 1, nu - 1] = v
            w[nu - 1, mu - 1] = -v
    else:
        w = np.asarray(omega, dtype=complex)
        if w.shape != (4, 4) or np.max(np.abs(w + w.T)) > 0:
            raise ContractViolation("omega must be a 4x4 antisymmetric array or a dict of pairs")
    for mu, nu in PAIRS:
        v = w[mu - 1, nu - 1]
        if nu < 4 and abs(v.imag) > 1e-15 * max(1, abs(v)):
            raise ContractViolation(f"rotation parameter omega_{mu}{nu} must be real")
        if nu == 4 and abs(v.real) > 1e-15 * max(1, abs(v)):
            raise ContractViolation(f"boost parameter omega_{mu}4 must be imaginary")
    return w


def lorentz_matrix(omega) -> np.ndarray:
    """exp(1/2 omega_{mu nu} J_{mu nu}) with the sum over ordered pairs."""
    w = _check_omega(omega)
    X = sum(w[mu - 1, nu - 1] * generator(mu, nu) for mu, nu in PAIRS)
    return mc.matrix_exp(X)


def lorentz_transform(Psi, omega) -> np.ndarray:
    return lorentz_matrix(omega) @ np.asarray(Psi, dtype=complex)


def current20(Psi, params: ModelParameters) -> np.ndarray:
    """j_mu = i Psi-bar alpha_mu Psi."""
    ops = build_operators(params)
    Pb = bar(Psi, ops.eta)
    return np.array([1j * Pb @ ops.alpha[mu] @ Psi for mu in INDICES])


def current_bispinor(psi, dpsi, params: ModelParameters) -> np.ndarray:
    """Dirac current plus the convective a/m terms, from psi and d_mu psi."""
    m, a = params.m, params.a
    g4 = GAMMA[4]
    pb = np.conj(psi) @ g4
    dpb = BAR_SIGN[:, None] * (np.conj(dpsi) @ g4)
    return np.array([
        -1j * pb @ GAMMA[mu] @ psi
        + 1j * a / m * pb @ dpsi[mu - 1]
        - 1j * a / m * dpb[mu - 1] @ psi
        for mu in INDICES
    ])


def emt20(Psi, dPsi, params: ModelParameters) -> np.ndarray:
    """Canonical T_{mu nu} = 1/2 (d_nu Psi-bar) alpha_mu Psi - 1/2 Psi-bar alpha_mu d_nu Psi."""
    ops = build_operators(params)
    Pb = bar(Psi, ops.eta)
    dPb = bar_derivatives(dPsi, ops.eta)
    T = np.zeros((4, 4), dtype=complex)
    for mu in INDICES:
        A = ops.alpha[mu]
        for nu in INDICES:
            T[mu - 1, nu - 1] = 0.5 * dPb[nu - 1] @ A @ Psi - 0.5 * Pb @ A @ dPsi[nu - 1]
    return T


def emt_bispinor(psi, dpsi, ddpsi, params: ModelParameters) -> np.ndarray:
    """Six-term bispinor form of the canonical tensor."""
    m, a = params.m, params.a
    g4 = GAMMA[4]
    c = a / (2 * m)
    pb = np.conj(psi) @ g4
    dpb = BAR_SIGN[:, None] * (np.conj(dpsi) @ g4)
    ddpb = np.einsum("m,n,mna->mna", BAR_SIGN, BAR_SIGN, np.conj(ddpsi) @ g4)
    T = np.zeros((4, 4), dtype=complex)
    for mu in range(4):
        G = GAMMA[mu + 1]
        for nu in range(4):
            T[mu, nu] = (
                0.5 * pb @ G @ dpsi[nu]
                - 0.5 * dpb[nu] @ G @ psi
                + c * dpb[mu] @ dpsi[nu]
                - c * ddpb[mu, nu] @ psi
                + c * dpb[nu] @ dpsi[mu]
                - c * pb @ ddpsi[nu, mu]
            )
    return T


def lagrangian_density(Psi, dPsi, params: ModelParameters) -> complex:
    """-1/2 [Psi-bar (alpha.d + m) Psi - Psi-bar (alpha.d_left - m) Psi]."""
    ops = build_operators(params)
    m = params.m
    Pb = bar(Psi, ops.eta)
    dPb = bar_derivatives(dPsi, ops.eta)
    right = sum(Pb @ ops.alpha[mu] @ dPsi[mu - 1] for mu in INDICES) + m * Pb @ Psi
    left = sum(dPb[mu - 1] @ ops.alpha[mu] @ Psi for mu in INDICES) - m * Pb @ Psi
    return complex(-0.5 * (right - left))


def adjoint_residual(state: PlaneWaveState, params: ModelParameters | None = None) -> float:
    """||Psi-bar (i alpha.k + m)||, zero for solutions by the eta relations."""
    params = params or state.params
    eta = build_operators(params).eta
    row = bar(state.amplitude, eta) @ free_symbol(state.momentum, params)
    return float(np.linalg.norm(row))


def sample(state: SuperpositionState, x: SpacetimePoint) -> TensorSample:
    params = state.params
    Psi, dPsi = evaluate(state, x)
    return TensorSample(
        T=emt20(Psi, dPsi, params),
        j=current20(Psi, params),
        L=lagrangian_density(Psi, dPsi, params),
        point=x,
    )


def _divergence(state: SuperpositionState, quantity: str, x: SpacetimePoint, h: float) -> np.ndarray:
    """Central-difference d_mu Q_mu(...) with d_4 = -i d_t."""
    params = state.params

    def field(pt):
        Psi, dPsi = evaluate(state, pt)
        if quantity == "current":
            return current20(Psi, params)[:, None]
        return emt20(Psi, dPsi, params)

    div = 0
    for mu in INDICES:
        fd = (field(x.shifted(mu, h)) - field(x.shifted(mu, -h)))[mu - 1] / (2 * h)
        div = div + (-1j * fd if mu == 4 else fd)
    return np.atleast_1d(div)


@dataclass(frozen=True)
class DivergenceResult:
    value: float
    coarse: float
    order: float


def divergence_check(state: SuperpositionState, quantity: str, x: SpacetimePoint, h: float = 1e-2) -> DivergenceResult:
    """Finite-difference divergence at steps h and h/2 with its observed order.

    ``quantity`` is "current" or "emt"; for "emt" the largest |d_mu T_{mu nu}|
    over nu is reported.
    """
    if h <= 0:
        raise ValueError("step must be positive")
    if quantity not in ("current", "emt"):
        raise ValueError(f"quantity must be 'current' or 'emt', got {quantity!r}")
    coarse = float(np.max(np.abs(_divergence(state, quantity, x, h))))
    fine = float(np.max(np.abs(_divergence(state, quantity, x, h / 2))))
    order = math.log2(coarse / fine) if coarse > 0 and fine > 0 else float("nan")
    return DivergenceResult(value=fine, coarse=coarse, order=order)


def off_shell(state: PlaneWaveState, dp0: float) -> PlaneWaveState:
    """Same amplitude with the energy perturbed: no longer a solution."""
    k = state.momentum
    return PlaneWaveState(
        FourMomentum(k.p_vec, k.p0 + dp0), state.branch, state.energy_sign, state.spin,
        state.amplitude, state.params,
    )


def superpose(terms: Sequence[tuple[complex, PlaneWaveState]]) -> SuperpositionState:
    return SuperpositionState(tuple((complex(c), s) for c, s in terms))
