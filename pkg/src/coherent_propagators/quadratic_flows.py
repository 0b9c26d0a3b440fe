"""Quadratic Hamiltonian flows in the plane and their caustic bookkeeping."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import bisect

from .phase_space import (
    CAUSTIC_TOL,
    IDENTITY,
    J,
    PointLike,
    SymplecticMap2,
    as_vector,
    cayley_of,
)

logger = logging.getLogger(__name__)

ROOT_XTOL = 1e-10


@dataclass(frozen=True)
class QuadraticHamiltonian:
    """``H(x) = x.H x / 2`` with a symmetric Hessian ``H``."""

    hessian: NDArray
    hbar: float = 1.0

    def __post_init__(self):
        hessian = np.array(self.hessian, dtype=float)
        if hessian.shape != (2, 2) or not np.allclose(hessian, hessian.T, atol=1e-14):
            raise ValueError(f"Hessian must be a symmetric 2x2 matrix, got {hessian!r}.")
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}.")
        hessian.setflags(write=False)
        object.__setattr__(self, "hessian", hessian)
        object.__setattr__(self, "hbar", float(self.hbar))

    @classmethod
    def harmonic(cls, hbar: float = 1.0) -> QuadraticHamiltonian:
        """Unit-frequency, unit-mass oscillator."""
        return cls(IDENTITY, hbar)

    @classmethod
    def inverted(cls, hbar: float = 1.0) -> QuadraticHamiltonian:
        """``H = (p^2 - q^2) / 2``."""
        return cls(np.diag([1.0, -1.0]), hbar)

    @property
    def generator(self) -> NDArray:
        """``J H``; the flow is ``exp(t J H)``."""
        return J @ self.hessian

    @property
    def frequency(self) -> float:
        """Rotation or growth rate ``sqrt(|det H|)``."""
        return math.sqrt(abs(float(np.linalg.det(self.hessian))))


@dataclass(frozen=True)
class FlowState:
    """Monodromy and Morse data of a flow after time ``t``.

    Args:
        t: Elapsed time.
        M: Monodromy ``exp(t J H)``.
        B: Cayley matrix, ``None`` at a caustic.
        alpha: Number of caustics met in ``(0, t]``.
        caustic_times: Times of those caustics.
        phase_index: Integer index ``mu`` entering the SC3 phase as
            ``pi mu / 2``; ``None`` at a caustic.
        theta: Continuous argument of ``det[C(M + 1) + iJ(1 - M)]`` with
            ``C = 1``.
    """

    t: float
    M: SymplecticMap2
    B: NDArray | None
    alpha: int
    caustic_times: tuple[float, ...] = field(default_factory=tuple)
    phase_index: int | None = 0
    theta: float = 0.0

    @property
    def at_caustic(self) -> bool:
        return self.B is None


def _flow_matrix(h: QuadraticHamiltonian, t: float) -> NDArray:
    K = h.generator
    det_h = float(np.linalg.det(h.hessian))
    # K^2 = -det(H) 1 for a traceless 2x2 generator
    if det_h > 0:
        omega = math.sqrt(det_h)
        return math.cos(omega * t) * IDENTITY + (math.sin(omega * t) / omega) * K
    if det_h < 0:
        kappa = math.sqrt(-det_h)
        return math.cosh(kappa * t) * IDENTITY + (math.sinh(kappa * t) / kappa) * K
    return IDENTITY + t * K


def monodromy(h: QuadraticHamiltonian, t: float) -> SymplecticMap2:
    """Closed-form ``exp(t J H)``: rotation, shear or hyperbolic boost."""
    return SymplecticMap2(_flow_matrix(h, t))


def center_action_quadratic(h: QuadraticHamiltonian, x: PointLike, t: float) -> float:
    """Exact center action ``x.B_t x`` of the flow.

    Raises:
        CausticError: When ``t`` is a caustic time.
    """
    xv = as_vector(x)
    return float(xv @ cayley_of(monodromy(h, t)) @ xv)


def _det_plus(h: QuadraticHamiltonian, s: float) -> float:
    return 2.0 + float(np.trace(_flow_matrix(h, s)))


def _det_plus_rate(h: QuadraticHamiltonian, s: float) -> float:
    return float(np.trace(h.generator @ _flow_matrix(h, s)))


def _det_w(h: QuadraticHamiltonian, s: float) -> complex:
    M = _flow_matrix(h, s)
    return complex(np.linalg.det((M + IDENTITY) + 1j * J @ (IDENTITY - M)))


def _root(func, a: float, b: float) -> float:
    fa, fb = func(a), func(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    return float(bisect(func, a, b, xtol=ROOT_XTOL))


def _caustics_between(h: QuadraticHamiltonian, a: float, b: float) -> list[float]:
    found = []
    fa, fb = _det_plus(h, a), _det_plus(h, b)
    if fa * fb < 0 or (fb == 0.0 and fa != 0.0):
        found.append(_root(lambda s: _det_plus(h, s), a, b))
    ga, gb = _det_plus_rate(h, a), _det_plus_rate(h, b)
    if ga < 0 <= gb:
        s = _root(lambda s: _det_plus_rate(h, s), a, b)
        if abs(_det_plus(h, s)) < CAUSTIC_TOL:
            found.append(s)
    return found


def morse_track(h: QuadraticHamiltonian, t: float, dt: float | None = None) -> FlowState:
    """Follow ``det(M^s + 1)`` over ``s`` in ``[0, t]`` and count its zeros.

    Args:
        h: The Hamiltonian.
        t: Final time, non-negative.
        dt: Grid step. Defaults to ``pi / (16 max(omega, 1))``, well below the
            caustic spacing ``pi / omega`` of an oscillator.

    Returns:
        The flow state at ``t``, with caustic times located to ``1e-10``.
    """
    if t < 0:
        raise ValueError(f"Flow time must be non-negative, got {t}.")
    if dt is None:
        dt = math.pi / (16.0 * max(h.frequency, 1.0))
    if not dt > 0:
        raise ValueError(f"Grid step must be positive, got {dt}.")

    steps = max(1, math.ceil(t / dt))
    grid = np.linspace(0.0, t, steps + 1)
    caustics: list[float] = []
    for a, b in zip(grid[:-1], grid[1:]):
        for s in _caustics_between(h, float(a), float(b)):
            if not caustics or s - caustics[-1] > 1e3 * ROOT_XTOL:
                caustics.append(s)
    if abs(_det_plus(h, t)) < CAUSTIC_TOL and (
        not caustics or t - caustics[-1] > 1e3 * ROOT_XTOL
    ):
        caustics.append(float(t))
    if caustics:
        logger.debug("Caustics of the flow in (0, %g]: %s", t, caustics)

    theta = float(np.unwrap(np.angle([_det_w(h, float(s)) for s in grid]))[-1])
    M = monodromy(h, t)
    det_plus = _det_plus(h, t)
    if abs(det_plus) < CAUSTIC_TOL:
        B, phase_index = None, None
    else:
        B = cayley_of(M)
        reference = 0.0 if det_plus > 0 else math.pi
        epsilon = math.remainder(theta - reference, 2.0 * math.pi)
        phase_index = round((epsilon - theta) / math.pi)
    return FlowState(
        t=float(t),
        M=M,
        B=B,
        alpha=len(caustics),
        caustic_times=tuple(caustics),
        phase_index=phase_index,
        theta=theta,
    )
