"""Electromagnetic coupling with constant external fields.

Conventions: D_mu = d_mu - i e A_mu with A_4 = i A_0; in momentum space
D_mu -> d_mu = i p_mu - i e A_mu. Field strength F_mn = eps_mnk B_k and
F_m4 = -i E_m. The non-minimal term is (i/2)(kappa0 P0 + kappa1 P1)
alpha_{mu nu} F_{mu nu} summed over all ordered pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import matrixcore as mc
from .algebra import DIM, GAMMA, INDICES, SPATIAL, ModelParameters, block, build_operators
from .errors import DegenerateParameter, SingularElimination
from .spectral import FourMomentum, reduce_hamiltonian

LEVI_CIVITA = np.zeros((3, 3, 3))
for _i, _j, _k, _s in [(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1), (0, 2, 1, -1), (2, 1, 0, -1), (1, 0, 2, -1)]:
    LEVI_CIVITA[_i, _j, _k] = _s


@dataclass(frozen=True)
class FieldConfiguration:
    E_vec: tuple[float, float, float] = (0.0, 0.0, 0.0)
    B_vec: tuple[float, float, float] = (0.0, 0.0, 0.0)
    A0: float = 0.0
    A_vec: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        vals = (*self.E_vec, *self.B_vec, self.A0, *self.A_vec)
        if not np.all(np.isfinite(vals)):
            raise ValueError("field values must be finite")

    @property
    def potential(self) -> np.ndarray:
        return np.array([*self.A_vec, 1j * self.A0], dtype=complex)


@dataclass(frozen=True)
class Couplings:
    e: float = 0.0
    kappa0: float = 0.0
    kappa1: float = 0.0


def field_strength(fld: FieldConfiguration) -> np.ndarray:
    F = np.zeros((4, 4), dtype=complex)
    F[:3, :3] = np.einsum("mnk,k->mn", LEVI_CIVITA, np.asarray(fld.B_vec, dtype=float))
    E = np.asarray(fld.E_vec, dtype=float)
    F[:3, 3] = -1j * E
    F[3, :3] = 1j * E
    return F


def covariant_symbol(p, couplings: Couplings, fld: FieldConfiguration) -> np.ndarray:
    """d_mu = i p_mu - i e A_mu; ``p`` is a FourMomentum or Euclidean components."""
    pc = p.components if isinstance(p, FourMomentum) else np.asarray(p, dtype=complex)
    return 1j * pc - 1j * couplings.e * fld.potential


def interaction_operator(params: ModelParameters, couplings: Couplings, F: np.ndarray) -> np.ndarray:
    ops = build_operators(params)
    S = np.zeros((DIM, DIM), dtype=complex)
    for mu in INDICES:
        for nu in INDICES:
            if F[mu - 1, nu - 1] != 0:
                S += F[mu - 1, nu - 1] * ops.alpha_munu[(mu, nu)]
    return 0.5j * (couplings.kappa0 * ops.P0 + couplings.kappa1 * ops.P1) @ S


def em_symbol(p_vec, p0: float, params: ModelParameters, couplings: Couplings, fld: FieldConfiguration) -> np.ndarray:
    """alpha_mu (i p_mu - i e A_mu) + non-minimal term + m.

    ``p0`` may be complex (eigenvalues of the interacting Hamiltonian need not be real).
    """
    ops = build_operators(params)
    d = covariant_symbol(np.array([*p_vec, 1j * p0], dtype=complex), couplings, fld)
    out = params.m * np.eye(DIM, dtype=complex)
    for mu in INDICES:
        out = out + d[mu - 1] * ops.alpha[mu]
    return out + interaction_operator(params, couplings, field_strength(fld))


def tensor_form(params: ModelParameters, couplings: Couplings, fld: FieldConfiguration,
                p: FourMomentum, as_printed: bool = False) -> np.ndarray:
    """Stack the bispinor row and the four vector rows into one 20x20 operator.

    Row 0:  (gamma.D + i k0 gamma_mu gamma_nu F_mu nu + m) psi
            + (a D_mu + i a k0 gamma_nu F_nu mu) psi_mu
    Row mu: (D_mu + i k1 gamma_nu F_mu nu) psi + (m delta_mu nu + i k1 a F_mu nu) psi_nu

    The factor ``a`` on the kappa0 term of row 0 follows from the commutator
    alpha_{mu nu}; ``as_printed=True`` omits it.
    """
    m, a = params.m, params.a
    k0, k1 = couplings.kappa0, couplings.kappa1
    F = field_strength(fld)
    d = covariant_symbol(p, couplings, fld)
    g = GAMMA
    I4 = np.eye(4)
    c0 = 1.0 if as_printed else a

    b00 = m * I4 + sum(d[nu - 1] * g[nu] for nu in INDICES)
    b00 = b00 + 1j * k0 * sum(F[mu - 1, nu - 1] * g[mu] @ g[nu] for mu in INDICES for nu in INDICES)
    out = block(0, 0, b00)
    for mu in INDICES:
        row0 = a * d[mu - 1] * I4 + 1j * c0 * k0 * sum(F[nu - 1, mu - 1] * g[nu] for nu in INDICES)
        out += block(0, mu, row0)
        col0 = d[mu - 1] * I4 + 1j * k1 * sum(F[mu - 1, nu - 1] * g[nu] for nu in INDICES)
        out += block(mu, 0, col0)
        for nu in INDICES:
            out += block(mu, nu, ((m if mu == nu else 0) + 1j * k1 * a * F[mu - 1, nu - 1]) * I4)
    return out


def elimination_tensor(params: ModelParameters, couplings: Couplings, fld: FieldConfiguration) -> np.ndarray:
    """m delta_{mu nu} + i kappa1 a F_{mu nu} acting on the vector index."""
    return params.m * np.eye(4) + 1j * couplings.kappa1 * params.a * field_strength(fld)


def _singular_scale(M: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(M)))) ** 4


@dataclass(frozen=True)
class Elimination:
    """Inverse G of the vector-index tensor and the resulting bispinor operator."""

    G: np.ndarray
    det: complex
    params: ModelParameters = field(repr=False)
    couplings: Couplings = field(repr=False)
    fld: FieldConfiguration = field(repr=False)

    def source(self, p: FourMomentum) -> list[np.ndarray]:
        """4x4 operators (D_mu + i kappa1 gamma_lambda F_mu lambda) for mu = 1..4."""
        F = field_strength(self.fld)
        d = covariant_symbol(p, self.couplings, self.fld)
        k1 = self.couplings.kappa1
        return [
            d[mu] * np.eye(4) + 1j * k1 * sum(F[mu, lam] * GAMMA[lam + 1] for lam in range(4))
            for mu in range(4)
        ]

    def vector_bispinor_map(self, p: FourMomentum) -> list[np.ndarray]:
        """psi_nu = X_nu psi with X_nu = -G_{nu mu} (D_mu + ...)."""
        src = self.source(p)
        return [-sum(self.G[nu, mu] * src[mu] for mu in range(4)) for nu in range(4)]

    def effective_operator(self, p: FourMomentum) -> np.ndarray:
        """4x4 bispinor operator after substituting psi_nu into the bispinor row."""
        T = tensor_form(self.params, self.couplings, self.fld, p)
        X = self.vector_bispinor_map(p)
        out = T[:4, :4].copy()
        for nu in range(4):
            out += T[:4, 4 * (nu + 1):4 * (nu + 2)] @ X[nu]
        return out


def eliminate_vector_bispinor(params: ModelParameters, couplings: Couplings, fld: FieldConfiguration) -> Elimination:
    M = elimination_tensor(params, couplings, fld)
    dt = mc.det(M)
    if abs(dt) <= 1e-10 * _singular_scale(M):
        raise SingularElimination(f"elimination tensor is singular (det = {dt:.3e})", dt)
    return Elimination(mc.inverse(M), dt, params, couplings, fld)


def singular_field_strength(params: ModelParameters, couplings: Couplings, direction=(0.0, 0.0, 1.0),
                            b_max: float | None = None, tol: float = 1e-13) -> float:
    """Smallest |B| along ``direction`` where the elimination tensor degenerates.

    The determinant is real along a pure magnetic ray; its first sign change is
    located by bisection.
    """
    u = np.asarray(direction, dtype=float)
    u = u / np.linalg.norm(u)

    def det_at(b):
        return mc.det(elimination_tensor(params, couplings, FieldConfiguration(B_vec=tuple(b * u)))).real

    b_max = b_max or 10 * params.m / max(abs(couplings.kappa1 * params.a), 1e-300)
    grid = np.linspace(0.0, b_max, 2001)
    vals = [det_at(b) for b in grid]
    for lo, hi, flo, fhi in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if flo == 0:
            return float(lo)
        if np.sign(flo) != np.sign(fhi):
            break
    else:
        raise ValueError("no singular field strength below b_max")
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        fm = det_at(mid)
        if fm == 0:
            return float(mid)
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    return float(0.5 * (lo + hi))


def hamiltonian_rhs(params: ModelParameters, couplings: Couplings, fld: FieldConfiguration, p_vec) -> np.ndarray:
    """alpha_k D_k + m + e A_0 alpha_4 + non-minimal term (right side of i alpha_4 d_t Psi)."""
    ops = build_operators(params)
    d = covariant_symbol(FourMomentum(tuple(p_vec), 0.0), couplings, fld)
    Q = params.m * np.eye(DIM, dtype=complex) + couplings.e * fld.A0 * ops.alpha[4]
    for k in SPATIAL:
        Q = Q + d[k - 1] * ops.alpha[k]
    return Q + interaction_operator(params, couplings, field_strength(fld))


def hamiltonian(params: ModelParameters, couplings: Couplings, fld: FieldConfiguration, p_vec):
    """(literal 20x20 with the group inverse of alpha_4, reduced 8x8 on (psi, psi_4))."""
    ops = build_operators(params)
    if ops.alpha4_drazin is None:
        raise DegenerateParameter("a = 0")
    Q = hamiltonian_rhs(params, couplings, fld, p_vec)
    return ops.alpha4_drazin @ Q, reduce_hamiltonian(Q, params)


def hermiticity_signature(params: ModelParameters, X: np.ndarray) -> dict[str, float]:
    """Distance of eta X from Hermitian and from anti-Hermitian."""
    eta = build_operators(params).eta
    Y = eta @ X
    return {
        "hermitian_defect": mc.norm(Y - Y.conj().T),
        "antihermitian_defect": mc.norm(Y + Y.conj().T),
    }


def characteristic_analysis(params: ModelParameters, samples: int = 50, seed: int = 0) -> dict:
    """Determinant and rank of alpha_mu n_mu, plus the second-order characteristics."""
    rng = np.random.default_rng(seed)
    alpha = build_operators(params).alpha
    normals = [np.array([0.0, 0.0, 0.0, 1.0])] + [rng.normal(size=4) for _ in range(samples)]
    rows = []
    for n in normals:
        S = sum(n[mu - 1] * alpha[mu] for mu in INDICES)
        scale = max(1.0, float(np.max(np.abs(S)))) ** DIM
        rows.append({
            "n": [float(x) for x in n],
            "det": float(abs(mc.det(S))),
            "det_scaled": float(abs(mc.det(S))) / scale,
            "rank": mc.rank(S),
        })
    # principal part of the second-order equation: -(a/m) n_mu n_mu; with
    # n_4 = i n_0 the characteristic condition |n|^2 - n_0^2 = 0 has speed 1
    speeds = []
    for _ in range(samples):
        nv = rng.normal(size=3)
        roots = np.roots([params.a / params.m, 0.0, -params.a / params.m * float(nv @ nv)]) if params.a else []
        speeds += [abs(r.real) / np.linalg.norm(nv) for r in roots]
    return {
        "first_order": rows,
        "max_det_scaled": max(r["det_scaled"] for r in rows),
        "ranks": sorted({r["rank"] for r in rows}),
        "second_order": {
            "principal_symbol": "-(a/m) n^2",
            "characteristic_condition": "n^2=0",
            "max_speed": float(max(speeds)) if speeds else None,
            "causal": bool(speeds) and bool(max(speeds) <= 1 + 1e-12),
        },
    }
