"""Matrix objects of the 20-component first-order equation.

Component layout of a 20-vector: five blocks of four bispinor components,
block 0 the bispinor psi and blocks 1..4 the vector-bispinor psi_1..psi_4.
Every operator is assembled from the 5x5 matrix units ``epsilon(M, N)``
tensored with 4x4 bispinor matrices.

Gamma matrices use the Euclidean convention (x_4 = it): all four are
Hermitian and anticommute to 2 delta_{mu nu}.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import matrixcore as mc
from .errors import DegenerateParameter

INDICES = (1, 2, 3, 4)
SPATIAL = (1, 2, 3)
PAIRS = tuple(itertools.combinations(INDICES, 2))
DIM = 20

SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
I4 = np.eye(4, dtype=complex)
I5 = np.eye(5, dtype=complex)


def _frozen(A: np.ndarray) -> np.ndarray:
    A.setflags(write=False)
    return A


@dataclass(frozen=True)
class ModelParameters:
    """Mass scale ``m`` and dimensionless ``a`` of the second-order equation.

    ``a = 0`` is the Dirac limit; ``a < -1/4`` is accepted for algebraic work
    but has complex masses.
    """

    m: float = 1.0
    a: float = 2.0
    tol: float = 1e-10

    def __post_init__(self):
        if not (math.isfinite(self.m) and self.m > 0):
            raise ValueError(f"m must be positive and finite, got {self.m}")
        if not math.isfinite(self.a):
            raise ValueError(f"a must be finite, got {self.a}")

    @property
    def two_mass(self) -> bool:
        return self.a != 0

    @property
    def real_masses(self) -> bool:
        return self.a >= -0.25

    @property
    def degenerate(self) -> bool:
        return abs(self.a + 0.25) <= 1e-12


def build_gamma() -> dict[int, np.ndarray]:
    """gamma_k = [[0, -i sigma_k], [i sigma_k, 0]], gamma_4 = diag(1, 1, -1, -1)."""
    Z = np.zeros((2, 2), dtype=complex)
    g = {k + 1: np.block([[Z, -1j * s], [1j * s, Z]]) for k, s in enumerate(SIGMA)}
    g[4] = np.diag([1, 1, -1, -1]).astype(complex)
    return {k: _frozen(v) for k, v in g.items()}


GAMMA = build_gamma()


def slash(p) -> np.ndarray:
    """gamma_mu p_mu for a Euclidean four-vector (p_4 = i p_0)."""
    return sum(p[mu - 1] * GAMMA[mu] for mu in INDICES)


def epsilon(M: int, N: int) -> np.ndarray:
    """5x5 matrix unit with a single 1 at row M, column N."""
    if M not in range(5) or N not in range(5):
        raise IndexError(f"matrix-unit indices must lie in 0..4, got ({M}, {N})")
    e = np.zeros((5, 5), dtype=complex)
    e[M, N] = 1
    return e


def block(M: int, N: int, X: np.ndarray) -> np.ndarray:
    """epsilon(M, N) tensor X: places the 4x4 X in block (M, N)."""
    return mc.kron(epsilon(M, N), X)


def block_of(A: np.ndarray, M: int, N: int) -> np.ndarray:
    return A[4 * M:4 * M + 4, 4 * N:4 * N + 4]


def build_alpha(params: ModelParameters) -> dict[int, np.ndarray]:
    a = params.a
    return {
        nu: _frozen(mc.kron(epsilon(nu, 0) + a * epsilon(0, nu), I4) + block(0, 0, GAMMA[nu]))
        for nu in INDICES
    }


def build_eta(params: ModelParameters) -> np.ndarray:
    a = params.a
    h = a * sum(epsilon(k, k) for k in SPATIAL) - a * epsilon(4, 4) - epsilon(0, 0)
    return _frozen(mc.kron(h, GAMMA[4]))


def spin_half_generator(mu: int, nu: int) -> np.ndarray:
    return 0.25 * mc.commutator(GAMMA[mu], GAMMA[nu])


def vector_generator(mu: int, nu: int) -> np.ndarray:
    return epsilon(mu, nu) - epsilon(nu, mu)


@functools.lru_cache(maxsize=None)
def generator(mu: int, nu: int) -> np.ndarray:
    """Lorentz generator J_{mu nu} on the 20-dim space (antisymmetric in mu, nu)."""
    J = mc.kron(vector_generator(mu, nu), I4) + mc.kron(I5, spin_half_generator(mu, nu))
    return _frozen(J)


def build_generators() -> dict[tuple[int, int], np.ndarray]:
    return {pair: generator(*pair) for pair in PAIRS}


def alpha_munu(alpha: dict[int, np.ndarray], mu: int, nu: int) -> np.ndarray:
    return alpha[mu] @ alpha[nu] - alpha[nu] @ alpha[mu]


def alpha_munu_expansion(params: ModelParameters, mu: int, nu: int, as_printed: bool = False) -> np.ndarray:
    """Block expansion of alpha_mu alpha_nu - alpha_nu alpha_mu.

    The (0, nu) and (0, mu) blocks carry a factor ``a`` because they come
    from the ``a epsilon(0, nu)`` part of alpha_nu. ``as_printed=True``
    drops that factor, reproducing the commonly quoted form for comparison;
    it only agrees with the commutator at a = 1.
    """
    a = params.a
    g = GAMMA
    c = 1.0 if as_printed else a
    return (
        block(0, 0, mc.commutator(g[mu], g[nu]))
        + block(mu, 0, g[nu]) - block(nu, 0, g[mu])
        + c * (block(0, nu, g[mu]) - block(0, mu, g[nu]))
        + a * mc.kron(epsilon(mu, nu) - epsilon(nu, mu), I4)
    )


def build_alpha_munu(params: ModelParameters) -> dict[tuple[int, int], np.ndarray]:
    """All sixteen alpha_{mu nu}, as commutators."""
    alpha = build_alpha(params)
    return {(mu, nu): _frozen(alpha_munu(alpha, mu, nu)) for mu in INDICES for nu in INDICES}


def build_subspace_projectors() -> tuple[np.ndarray, np.ndarray]:
    P0 = mc.kron(epsilon(0, 0), I4)
    P1 = mc.kron(sum(epsilon(k, k) for k in INDICES), I4)
    return _frozen(P0), _frozen(P1)


def alpha4_drazin(params: ModelParameters) -> tuple[np.ndarray, np.ndarray]:
    """((2a+1)/a^2) alpha_4 - alpha_4^3 / a^2 and the projector alpha_4 B.

    alpha_4 has a 12-dimensional kernel (blocks 1..3), so this is its group
    inverse: alpha_4 B alpha_4 = alpha_4, B alpha_4 B = B, [alpha_4, B] = 0.
    """
    a = params.a
    if a == 0:
        raise DegenerateParameter("a = 0: the inverse formula divides by a^2")
    A4 = build_alpha(params)[4]
    B = (2 * a + 1) / a**2 * A4 - A4 @ A4 @ A4 / a**2
    return _frozen(B), _frozen(A4 @ B)


@dataclass(frozen=True)
class Alpha4Structure:
    quartic_full: float
    quintic: float
    quartic_restricted: float
    kernel_dim: int
    restricted: np.ndarray = field(repr=False)


def alpha4_quartic(params: ModelParameters) -> np.ndarray:
    """Coefficients (ascending) of x^4 - (1+2a) x^2 + a^2."""
    a = params.a
    return np.array([a**2, 0, -(1 + 2 * a), 0, 1], dtype=complex)


def alpha4_minimal_structure(params: ModelParameters) -> Alpha4Structure:
    if params.a == 0:
        raise DegenerateParameter("a = 0: the quartic degenerates")
    A4 = build_alpha(params)[4]
    _, Pdyn = alpha4_drazin(params)
    q = alpha4_quartic(params)
    R = mc.restrict(A4, Pdyn)
    return Alpha4Structure(
        quartic_full=mc.norm(mc.poly_eval(q, A4)),
        quintic=mc.norm(mc.poly_eval(np.concatenate([[0], q]), A4)),
        quartic_restricted=mc.norm(mc.poly_eval(q, R)),
        kernel_dim=mc.nullity(A4),
        restricted=R,
    )


def dirac_embedding(nu: int) -> np.ndarray:
    """a = 0 reference: alpha_nu with the a-term removed."""
    return mc.kron(epsilon(nu, 0), I4) + block(0, 0, GAMMA[nu])


@dataclass(frozen=True)
class FogdeOperators:
    """Every fixed matrix of the 20-component theory for one parameter set."""

    params: ModelParameters
    alpha: dict
    eta: np.ndarray
    generators: dict
    alpha_munu: dict
    P0: np.ndarray
    P1: np.ndarray
    alpha4_drazin: np.ndarray | None
    P_dyn: np.ndarray | None


@functools.lru_cache(maxsize=64)
def build_operators(params: ModelParameters) -> FogdeOperators:
    P0, P1 = build_subspace_projectors()
    B, Pdyn = alpha4_drazin(params) if params.a != 0 else (None, None)
    return FogdeOperators(
        params=params,
        alpha=build_alpha(params),
        eta=build_eta(params),
        generators=build_generators(),
        alpha_munu=build_alpha_munu(params),
        P0=P0,
        P1=P1,
        alpha4_drazin=B,
        P_dyn=Pdyn,
    )
