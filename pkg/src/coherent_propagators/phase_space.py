"""Symplectic geometry of the plane and the matrix families of a monodromy.

Points are ordered ``x = (p, q)`` everywhere and matrices act on the column
``(p, q)``. The symplectic form is ``a ^ b = p_a q_b - q_a p_b = (J a) . b``
with ``J = [[0, -1], [1, 0]]``.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .exceptions import CausticError, NotSymplecticError, SingularVError

logger = logging.getLogger(__name__)

J = np.array([[0.0, -1.0], [1.0, 0.0]])
J_TILDE = np.array([[0.0, 1.0], [1.0, 0.0]])
IDENTITY = np.eye(2)

CAUSTIC_TOL = 1e-12
DET_TOL = 1e-12
SINGULAR_V_TOL = 1e-12


def _frozen(array: ArrayLike, dtype=float) -> NDArray:
    out = np.array(array, dtype=dtype)
    out.setflags(write=False)
    return out


def _sym(a: NDArray) -> NDArray:
    return 0.5 * (a + a.T)


@dataclass(frozen=True)
class PhasePoint:
    """A point ``(p, q)`` of the plane or of the unit torus."""

    p: float
    q: float

    def __post_init__(self):
        if not (math.isfinite(self.p) and math.isfinite(self.q)):
            raise ValueError(f"Phase-space point must be finite, got ({self.p}, {self.q}).")
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "q", float(self.q))

    @classmethod
    def from_vector(cls, vector: ArrayLike) -> PhasePoint:
        p, q = np.asarray(vector, dtype=float).reshape(2)
        return cls(p, q)

    @classmethod
    def parse(cls, text: str) -> PhasePoint:
        """Parse a ``"p,q"`` pair."""
        parts = [part.strip() for part in text.split(",")]
        if len(parts) != 2:  # noqa: PLR2004
            raise ValueError(f"Expected a 'p,q' pair, got {text!r}.")
        return cls(float(parts[0]), float(parts[1]))

    @property
    def vector(self) -> NDArray:
        return np.array([self.p, self.q])

    def on_torus(self) -> bool:
        return 0.0 <= self.p < 1.0 and 0.0 <= self.q < 1.0

    def __add__(self, other: PhasePoint) -> PhasePoint:
        return PhasePoint(self.p + other.p, self.q + other.q)

    def __sub__(self, other: PhasePoint) -> PhasePoint:
        return PhasePoint(self.p - other.p, self.q - other.q)

    def __neg__(self) -> PhasePoint:
        return PhasePoint(-self.p, -self.q)

    def __mul__(self, factor: float) -> PhasePoint:
        return PhasePoint(factor * self.p, factor * self.q)

    __rmul__ = __mul__


PointLike = PhasePoint | Sequence[float] | NDArray


def as_vector(x: PointLike) -> NDArray:
    """Return ``x`` as a float array of shape (2,)."""
    if isinstance(x, PhasePoint):
        return x.vector
    vector = np.asarray(x, dtype=float)
    if vector.shape != (2,):
        raise ValueError(f"Expected a phase-space 2-vector, got shape {vector.shape}.")
    return vector


def wedge(a: PointLike, b: PointLike) -> float:
    """Symplectic product ``P_a Q_b - Q_a P_b``."""
    va, vb = as_vector(a), as_vector(b)
    return float(va[0] * vb[1] - va[1] * vb[0])


@dataclass(frozen=True)
class SymplecticMap2:
    """A real 2x2 matrix with unit determinant."""

    matrix: NDArray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (2, 2) or not np.all(np.isfinite(m)):
            raise NotSymplecticError(f"Expected a finite 2x2 matrix, got {m!r}.")
        det = np.linalg.det(m)
        scale = max(1.0, float(np.max(np.abs(m))) ** 2)
        if abs(det - 1.0) > DET_TOL * scale:
            raise NotSymplecticError(f"Matrix is not symplectic: det = {det!r}.")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_entries(cls, m11: float, m12: float, m21: float, m22: float) -> SymplecticMap2:
        return cls(np.array([[m11, m12], [m21, m22]]))

    @classmethod
    def identity(cls) -> SymplecticMap2:
        return cls(IDENTITY)

    @property
    def m11(self) -> float:
        return float(self.matrix[0, 0])

    @property
    def m12(self) -> float:
        return float(self.matrix[0, 1])

    @property
    def m21(self) -> float:
        return float(self.matrix[1, 0])

    @property
    def m22(self) -> float:
        return float(self.matrix[1, 1])

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix))

    def __matmul__(self, other: SymplecticMap2) -> SymplecticMap2:
        return SymplecticMap2(self.matrix @ other.matrix)

    def power(self, t: int) -> SymplecticMap2:
        return SymplecticMap2(np.linalg.matrix_power(self.matrix, t))

    def apply(self, x: PointLike) -> NDArray:
        return self.matrix @ as_vector(x)


def _matrix(M: SymplecticMap2 | ArrayLike) -> NDArray:
    return M.matrix if isinstance(M, SymplecticMap2) else np.asarray(M, dtype=float)


@dataclass(frozen=True)
class HyperbolicFrame:
    """Unstable and stable directions of a hyperbolic map.

    Args:
        zeta_u: Expanding eigenvector, ``M zeta_u = e^lyapunov zeta_u``.
        zeta_s: Contracting eigenvector with ``zeta_u ^ zeta_s = 1``.
        lyapunov: Lyapunov exponent per unit time.
    """

    zeta_u: PhasePoint
    zeta_s: PhasePoint
    lyapunov: float

    def __post_init__(self):
        if abs(wedge(self.zeta_u, self.zeta_s) - 1.0) > DET_TOL:
            raise ValueError("Frame vectors must satisfy zeta_u ^ zeta_s = 1.")

    @classmethod
    def from_map(cls, M: SymplecticMap2 | ArrayLike) -> HyperbolicFrame:
        m = _matrix(M)
        eigenvalues, eigenvectors = np.linalg.eig(m)
        if np.any(np.abs(eigenvalues.imag) > 0) or np.any(eigenvalues.real <= 0):
            raise ValueError("A hyperbolic frame needs real positive eigenvalues.")
        order = np.argsort(eigenvalues.real)[::-1]
        unstable = eigenvectors[:, order[0]].real
        stable = eigenvectors[:, order[1]].real
        # unit momentum component, or unit position component for a vertical direction
        pivot = 0 if abs(unstable[0]) > DET_TOL else 1
        unstable = unstable / unstable[pivot]
        stable = stable / wedge(unstable, stable)
        return cls(
            PhasePoint.from_vector(unstable),
            PhasePoint.from_vector(stable),
            float(np.log(eigenvalues.real[order[0]])),
        )

    @property
    def basis(self) -> NDArray:
        """Column matrix ``T = [zeta_u | zeta_s]``; symplectic."""
        return np.column_stack([self.zeta_u.vector, self.zeta_s.vector])


@dataclass(frozen=True)
class FrameMatrixSet:
    """Matrices attached to one ``(M, C)`` pair.

    ``V = C - iB`` and ``J^T V^-1 J = Cbar - i Bbar``; ``D`` and ``E`` are
    ``Bbar`` and ``Cbar`` pulled back through ``(M + 1)^-1``.
    """

    M: NDArray
    C: NDArray
    B: NDArray
    V: NDArray
    detV_mod: float
    epsilon: float
    Cbar: NDArray
    Bbar: NDArray
    D: NDArray
    E: NDArray
    detM1: float

    @property
    def detV(self) -> complex:
        return complex(self.detV_mod * np.exp(1j * self.epsilon))

    @property
    def V_tilde(self) -> NDArray:
        return self.Cbar - 1j * self.Bbar


def cayley_of(M: SymplecticMap2 | ArrayLike) -> NDArray:
    """Cayley matrix ``B`` with ``J B = (1 - M)(1 + M)^-1``.

    Raises:
        CausticError: If ``|det(M + 1)| < 1e-12``.
    """
    m = _matrix(M)
    det_plus = np.linalg.det(m + IDENTITY)
    if abs(det_plus) < CAUSTIC_TOL:
        raise CausticError(f"det(M + 1) = {det_plus:.3e}: the map sits on a caustic.")
    # X (1 + M) = (1 - M)  <=>  (1 + M)^T X^T = (1 - M)^T
    ratio = np.linalg.solve((m + IDENTITY).T, (IDENTITY - m).T).T
    return _frozen(_sym(-J @ ratio))


def metric_of(frame: HyperbolicFrame) -> NDArray:
    """Scalar-product matrix of the frame vectors; unit determinant."""
    zu, zs = frame.zeta_u.vector, frame.zeta_s.vector
    cross = float(zu @ zs)
    return _frozen([[zu @ zu, cross], [cross, zs @ zs]])


def matrix_set_general(
    M: SymplecticMap2 | ArrayLike, C: ArrayLike | None = None
) -> FrameMatrixSet:
    """Build the full matrix family of ``M`` for the metric ``C``.

    Args:
        M: Monodromy matrix.
        C: Symmetric positive metric with unit determinant. Defaults to the
            identity, the metric of isotropic coherent states.

    Returns:
        The matrix set, with ``det V`` in polar form (principal argument).

    Raises:
        CausticError: If ``det(M + 1)`` vanishes.
        SingularVError: If ``det V`` vanishes.
    """
    m = _matrix(M)
    c = IDENTITY if C is None else np.asarray(C, dtype=float)
    B = np.asarray(cayley_of(m))
    V = c - 1j * B
    detV = complex(np.linalg.det(V))
    if abs(detV) < SINGULAR_V_TOL:
        raise SingularVError(f"det V = {detV:.3e} vanishes.")
    V_tilde = J.T @ np.linalg.inv(V) @ J
    Cbar, Bbar = _sym(V_tilde.real), _sym(-V_tilde.imag)
    inv_plus = np.linalg.inv(m + IDENTITY)
    return FrameMatrixSet(
        M=_frozen(m),
        C=_frozen(c),
        B=_frozen(B),
        V=_frozen(V, complex),
        detV_mod=abs(detV),
        epsilon=float(np.angle(detV)),
        Cbar=_frozen(Cbar),
        Bbar=_frozen(Bbar),
        D=_frozen(_sym(inv_plus.T @ Bbar @ inv_plus)),
        E=_frozen(_sym(inv_plus.T @ Cbar @ inv_plus)),
        detM1=abs(float(np.linalg.det(m + IDENTITY))),
    )


def matrix_set_hyperbolic(
    frame: HyperbolicFrame,
    t: float,
    basis: Literal["cartesian", "frame"] = "cartesian",
) -> FrameMatrixSet:
    """Closed-form matrix family of a hyperbolic map after time ``t``.

    Everything is evaluated in the ``(zeta_u, zeta_s)`` basis from
    ``tanh(lyapunov t / 2)`` and the frame metric. With ``basis="cartesian"``
    the quadratic forms are carried back by congruence with ``T^-1``, which
    yields the set of ``M^t`` for isotropic coherent states.
    """
    if basis not in ("cartesian", "frame"):
        raise ValueError(f"Unknown basis {basis!r}; use 'cartesian' or 'frame'.")
    half = 0.5 * frame.lyapunov * t
    tau = math.tanh(half)
    C = np.asarray(metric_of(frame))
    cross = C[0, 1]

    B = np.array([[0.0, tau], [tau, 0.0]])
    detV = complex(1.0 + tau**2, 2.0 * cross * tau)
    a, b = detV.real, detV.imag
    norm = abs(detV) ** 2
    Cbar = (a * C - b * B) / norm
    Bbar = (b * C + a * B) / norm
    P = np.diag([math.exp(-half), math.exp(half)]) / (2.0 * math.cosh(half))
    D, E = P @ Bbar @ P, P @ Cbar @ P
    M = np.diag([math.exp(2.0 * half), math.exp(-2.0 * half)])

    if basis == "cartesian":
        T = frame.basis
        T_inv = np.linalg.inv(T)

        def carry(form: NDArray) -> NDArray:
            return _sym(T_inv.T @ form @ T_inv)

        M = T @ M @ T_inv
        C, B, Cbar, Bbar, D, E = (carry(f) for f in (C, B, Cbar, Bbar, D, E))

    return FrameMatrixSet(
        M=_frozen(M),
        C=_frozen(C),
        B=_frozen(B),
        V=_frozen(C - 1j * B, complex),
        detV_mod=abs(detV),
        epsilon=float(np.angle(detV)),
        Cbar=_frozen(Cbar),
        Bbar=_frozen(Bbar),
        D=_frozen(D),
        E=_frozen(E),
        detM1=4.0 * math.cosh(half) ** 2,
    )
