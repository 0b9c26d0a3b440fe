"""Exact quantum cat map on the N-dimensional torus Hilbert space.

Position states ``|q_k>`` sit at ``q_k = k / N`` and ``hbar = 1 / (2 pi N)``.
Operators are plain ``N x N`` complex arrays in the position basis; the
arrays handed out by this module are read-only.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.typing import NDArray

from .classical_catmap import CatMap, center_windings, power
from .elements import CSElement, Method
from .exceptions import EvenNUnsupported, NotFound
from .phase_space import PhasePoint, PointLike, as_vector

logger = logging.getLogger(__name__)

OperatorMatrix = NDArray[np.complex128]

GAUSSIAN_CUTOFF = 41.4  # e^-41.4 ~ 1e-18
NILPOTENCY_TOL = 1e-10
MAX_NILPOTENCY_N = 64


@dataclass(frozen=True)
class TorusHilbert:
    """Hilbert space of dimension ``N = 1 / (2 pi hbar)``."""

    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"Dimension must be a positive integer, got {self.N}.")
        object.__setattr__(self, "N", int(self.N))

    @property
    def hbar(self) -> float:
        return 1.0 / (2.0 * math.pi * self.N)

    @property
    def is_odd(self) -> bool:
        return self.N % 2 == 1

    def require_odd(self) -> None:
        if not self.is_odd:
            raise EvenNUnsupported(f"Only odd N is supported here, got N = {self.N}.")


@dataclass(frozen=True)
class TorusCoherentState:
    """Periodic coherent state, kept unnormalized.

    Args:
        X: Label ``(P, Q)``.
        coeffs: Position amplitudes ``<q_k|X>``.
        trunc: Number of images summed on each side of the center.
    """

    X: PhasePoint
    coeffs: NDArray
    trunc: int


@dataclass(frozen=True)
class NilpotencyPeriod:
    """Smallest ``k`` with ``U^k = e^{i phi} 1``.

    ``site_residual`` is the largest distance of an eigenvalue ``u`` of ``U``
    from the sites ``exp[i (2 pi m + phi) / k]``, measured as ``|u^k - e^{i phi}|``.
    """

    N: int
    k: int
    phi: float
    site_residual: float


def _readonly(array: NDArray) -> NDArray:
    array.setflags(write=False)
    return array


@lru_cache(maxsize=128)
def _hannay_berry(N: int) -> OperatorMatrix:
    k = np.arange(N)[:, None]
    j = np.arange(N)[None, :]
    # integer exponent reduced mod N before the complex exponential
    exponent = (k * k - j * k + j * j) % N
    return _readonly(np.sqrt(1j / N) * np.exp(2j * np.pi * exponent / N))


def hannay_berry(space: TorusHilbert) -> OperatorMatrix:
    """Propagator of the default cat map, ``(i/N)^{1/2} e^{2 pi i (k^2 - jk + j^2)/N}``.

    The principal root is used for ``(i/N)^{1/2}``.
    """
    return _hannay_berry(space.N)


def lift_phase(t: int) -> complex:
    """Global phase ``i^t`` between ``hannay_berry`` powers and the plane propagator."""
    return (1, 1j, -1, -1j)[t % 4]


def propagator(space: TorusHilbert, t: int) -> OperatorMatrix:
    """``U^t``; negative powers use the adjoint."""
    U = hannay_berry(space)
    if t < 0:
        return np.linalg.matrix_power(U.conj().T, -t)
    return np.linalg.matrix_power(U, t)


def periodic_gaussian(space: TorusHilbert, X: PointLike, images: int | None = None):
    """Position amplitudes of the periodic coherent state labelled ``X``.

    ``X`` may be any point of the plane; unreduced labels give the state of
    the corresponding translated plane coherent state.

    Returns:
        The coefficient vector and the number of images used per side.
    """
    P, Q = as_vector(X)
    hbar = space.hbar
    if images is None:
        images = math.ceil(math.sqrt(2.0 * hbar * GAUSSIAN_CUTOFF)) + 2
    k = np.arange(space.N)[:, None] / space.N
    j = (math.floor(-Q) + np.arange(-images, images + 2))[None, :].astype(float)
    shifted = j + Q - k
    exponent = -(1j * P * (j + 0.5 * Q - k) + 0.5 * shifted**2) / hbar
    return np.exp(exponent).sum(axis=1), images


def coherent_state(
    space: TorusHilbert, X: PointLike, images: int | None = None
) -> TorusCoherentState:
    """Periodic coherent state of a torus point ``X`` in ``[0, 1)^2``."""
    X = X if isinstance(X, PhasePoint) else PhasePoint.from_vector(as_vector(X))
    if not X.on_torus():
        raise ValueError(f"Torus labels must lie in [0, 1)^2, got ({X.p}, {X.q}).")
    coeffs, trunc = periodic_gaussian(space, X, images)
    return TorusCoherentState(X, _readonly(coeffs), trunc)


def exact_cs_element(
    space: TorusHilbert, X1: PointLike, X2: PointLike, t: int, images: int | None = None
) -> CSElement:
    """``<X1|U^t|X2>`` between unnormalized periodic coherent states."""
    bra = coherent_state(space, X1, images)
    ket = coherent_state(space, X2, images)
    value = complex(np.vdot(bra.coeffs, propagator(space, t) @ ket.coeffs))
    return CSElement(value, Method.EXACT)


def nilpotency_period(
    space: TorusHilbert, U: OperatorMatrix | None = None, max_power: int | None = None
) -> NilpotencyPeriod:
    """Search the smallest power of ``U`` proportional to the identity.

    Raises:
        ValueError: If ``N > 64``.
        NotFound: If no power up to ``max_power`` (default ``4N``) qualifies.
    """
    if space.N > MAX_NILPOTENCY_N:
        raise ValueError(f"Brute-force search is limited to N <= {MAX_NILPOTENCY_N}.")
    U = hannay_berry(space) if U is None else np.asarray(U)
    cap = 4 * space.N if max_power is None else max_power
    current = np.eye(space.N, dtype=complex)
    for k in range(1, cap + 1):
        current = current @ U
        diagonal = np.diag(current)
        off_diagonal = current - np.diag(diagonal)
        if (
            np.max(np.abs(off_diagonal), initial=0.0) < NILPOTENCY_TOL
            and np.max(np.abs(diagonal - diagonal[0])) < NILPOTENCY_TOL
        ):
            phi = float(np.angle(diagonal[0]))
            eigenvalues = np.linalg.eigvals(U)
            residual = float(np.max(np.abs(eigenvalues**k - np.exp(1j * phi))))
            logger.debug("N = %d: U^%d = exp(%.6f i)", space.N, k, phi)
            return NilpotencyPeriod(space.N, k, phi, residual)
    raise NotFound(f"No power U^k proportional to 1 for k <= {cap} at N = {space.N}.")


def torus_weyl_symbol(space: TorusHilbert, A: OperatorMatrix) -> NDArray:
    """Weyl symbol ``Tr[R_x A]`` on the grid ``x = (a/N, b/N)``.

    Returns:
        Array ``W[a, b]``, with ``a`` the momentum and ``b`` the position index.
    """
    space.require_odd()
    N = space.N
    A = np.asarray(A)
    m = np.arange(N)
    a = np.arange(N)
    fourier = np.exp(2j * np.pi * ((2 * np.outer(a, m)) % N) / N)
    b = np.arange(N)[:, None]
    # diagonals[b, m] = <q_{b-m}|A|q_{b+m}>
    diagonals = A[(b - m[None, :]) % N, (b + m[None, :]) % N]
    return fourier @ diagonals.T


def winding_sum_symbol(space: TorusHilbert, cat: CatMap | None = None, t: int = 1) -> NDArray:
    """Weyl symbol of the t-th power of a cat map from its classical orbits.

    ``|det(M^t + 1)|^{-1/2} sum_m exp(2 pi i N S(x, m))`` with one winding
    per torus orbit centered at ``x``. Phases are reduced exactly in integers.
    Equals ``torus_weyl_symbol(U^t) / lift_phase(t)`` for the default map.
    """
    space.require_odd()
    cat_t = power(cat or CatMap(), t)
    N = space.N
    (m11, m12), (m21, m22) = cat_t.entries
    D = cat_t.det_plus
    one_minus = np.array([[1 - m11, -m12], [-m21, 1 - m22]], dtype=np.int64)
    adj_plus = np.array([[m22 + 1, -m12], [-m21, m11 + 1]], dtype=np.int64)
    J_int = np.array([[0, -1], [1, 0]], dtype=np.int64)
    Jt_int = np.array([[0, 1], [1, 0]], dtype=np.int64)
    Bd = -J_int @ one_minus @ adj_plus

    windings = np.array(center_windings(cat_t), dtype=np.int64)
    grid = np.indices((N, N)).reshape(2, -1).T.astype(np.int64)
    xx = np.einsum("gi,ij,gj->g", grid, Bd, grid)
    xm = np.einsum("gi,ij,wj->gw", grid, Bd - D * J_int, windings)
    mm = np.einsum("wi,ij,wj->w", windings, Bd + D * Jt_int, windings)
    numerator = 4 * xx[:, None] + 4 * N * xm + N * N * mm[None, :]
    modulus = 4 * N * D
    phases = np.exp(2j * np.pi * (numerator % modulus) / modulus)
    return (phases.sum(axis=1) / math.sqrt(abs(D))).reshape(N, N)
