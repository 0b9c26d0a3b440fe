"""Classical cat maps on the unit torus: orbits, windings, chords and actions."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.typing import NDArray

from .exceptions import NotSymplecticError, PowerOverflowError
from .phase_space import (
    IDENTITY,
    J,
    J_TILDE,
    HyperbolicFrame,
    PhasePoint,
    PointLike,
    SymplecticMap2,
    as_vector,
    cayley_of,
    wedge,
)

logger = logging.getLogger(__name__)

MAX_POWER = 30
MAX_ENTRY = 2**62

IntMatrix = tuple[tuple[int, int], tuple[int, int]]
Winding = tuple[int, int]

CAT_ENTRIES: IntMatrix = ((2, 3), (1, 2))


def _int_matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def _winding(m) -> Winding:
    m0, m1 = (int(v) for v in np.asarray(m).reshape(2))
    if (m0, m1) != tuple(np.asarray(m).reshape(2)):
        raise ValueError(f"Winding vectors are integer, got {m!r}.")
    return m0, m1


@dataclass(frozen=True)
class CatMap:
    """A hyperbolic linear automorphism of the 2-torus.

    The default matrix is ``[[2, 3], [1, 2]]``, acting on ``(p, q)``.
    """

    entries: IntMatrix = CAT_ENTRIES

    def __post_init__(self):
        try:
            entries = tuple(tuple(int(v) for v in row) for row in self.entries)
        except (TypeError, ValueError) as exc:
            raise NotSymplecticError(f"Cat map entries must be integers: {exc}") from exc
        if np.shape(entries) != (2, 2) or entries != tuple(
            tuple(row) for row in self.entries
        ):
            raise NotSymplecticError(f"Expected a 2x2 integer matrix, got {self.entries!r}.")
        (a, b), (c, d) = entries
        if a * d - b * c != 1:
            raise NotSymplecticError(f"det M = {a * d - b * c}, expected 1.")
        if abs(a + d) <= 2:  # noqa: PLR2004
            raise NotSymplecticError(f"Trace {a + d} is not hyperbolic.")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_matrix(cls, matrix) -> CatMap:
        return cls(tuple(tuple(int(v) for v in row) for row in np.asarray(matrix)))

    @cached_property
    def M(self) -> SymplecticMap2:
        return SymplecticMap2(np.array(self.entries, dtype=float))

    @cached_property
    def B(self) -> NDArray:
        return cayley_of(self.M)

    @cached_property
    def frame(self) -> HyperbolicFrame:
        return HyperbolicFrame.from_map(self.M)

    @property
    def lyapunov(self) -> float:
        return self.frame.lyapunov

    @property
    def trace(self) -> int:
        return self.entries[0][0] + self.entries[1][1]

    @property
    def det_plus(self) -> int:
        """``det(M + 1) = 2 + tr M``."""
        return 2 + self.trace

    @property
    def det_minus(self) -> int:
        """``det(M - 1) = 2 - tr M``."""
        return 2 - self.trace


@dataclass(frozen=True)
class OrbitSegment:
    """A t-step orbit segment ``x_plus = M^t x_minus - m``."""

    x_minus: PhasePoint
    x_plus: PhasePoint
    m: Winding
    t: int
    action: float

    @property
    def center(self) -> PhasePoint:
        return (self.x_plus + self.x_minus) * 0.5

    @property
    def chord(self) -> PhasePoint:
        return self.x_plus - self.x_minus


def _check_torus(x: PhasePoint, name: str) -> None:
    if not x.on_torus():
        raise ValueError(f"{name} must lie in [0, 1)^2, got ({x.p}, {x.q}).")


def _point(x: PointLike) -> PhasePoint:
    return x if isinstance(x, PhasePoint) else PhasePoint.from_vector(as_vector(x))


def power(cat: CatMap, t: int) -> CatMap:
    """Return the cat map of ``M^t``.

    Raises:
        PowerOverflowError: If ``t > 30`` or an entry leaves the exact integer range.
    """
    if t < 1:
        raise ValueError(f"Power must be a positive integer, got {t}.")
    if t > MAX_POWER:
        raise PowerOverflowError(f"Powers above {MAX_POWER} are not supported, got {t}.")
    result = cat.entries
    for _ in range(t - 1):
        result = _int_matmul(result, cat.entries)
        if max(abs(v) for row in result for v in row) > MAX_ENTRY:
            raise PowerOverflowError(f"Entries of M^{t} overflow the integer range.")
    return CatMap(result)


def center_action(cat: CatMap, x: PointLike, m: Winding = (0, 0)) -> float:
    """Center generating function ``xBx + x(B - J)m + m(B + J~)m / 4``."""
    xv = as_vector(x)
    mv = np.asarray(m, dtype=float)
    B = cat.B
    return float(xv @ B @ xv + xv @ (B - J) @ mv + 0.25 * mv @ (B + J_TILDE) @ mv)


def step(cat: CatMap, x: PointLike) -> OrbitSegment:
    """Apply the map once and reduce the image into the unit square."""
    x = _point(x)
    _check_torus(x, "x")
    image = cat.M.apply(x)
    m = [math.floor(v) for v in image]
    reduced = image - np.array(m, dtype=float)
    for i in range(2):
        # floating rounding can leave an exact 1.0 after the floor
        if reduced[i] >= 1.0:
            reduced[i] = 0.0
            m[i] += 1
    x_plus = PhasePoint.from_vector(reduced)
    center = (x_plus + x) * 0.5
    return OrbitSegment(x, x_plus, (m[0], m[1]), 1, center_action(cat, center, m))


def orbit_through(cat: CatMap, x_start: PointLike, t: int) -> OrbitSegment:
    """Compose ``t`` steps from ``x_start``, accumulating the total winding."""
    x_start = _point(x_start)
    _check_torus(x_start, "x_start")
    if t < 1:
        raise ValueError(f"Step count must be a positive integer, got {t}.")
    x = x_start
    total = np.zeros(2, dtype=np.int64)
    matrix = np.array(cat.entries, dtype=np.int64)
    for _ in range(t):
        segment = step(cat, x)
        total = matrix @ total + np.array(segment.m, dtype=np.int64)
        x = segment.x_plus
    m = (int(total[0]), int(total[1]))
    center = (x + x_start) * 0.5
    return OrbitSegment(x_start, x, m, t, center_action(power(cat, t), center, m))


def orbit_with_center(cat: CatMap, X: PointLike, m: Winding, t: int) -> OrbitSegment:
    """The t-step orbit with winding ``m`` whose center is ``X``.

    Solves ``(M^t + 1) x_minus = 2X + m``.
    """
    X, m = _point(X), _winding(m)
    cat_t = power(cat, t)
    Mt = cat_t.M.matrix
    x_minus = np.linalg.solve(Mt + IDENTITY, 2.0 * X.vector + np.asarray(m, dtype=float))
    x_plus = Mt @ x_minus - np.asarray(m, dtype=float)
    return OrbitSegment(
        PhasePoint.from_vector(x_minus),
        PhasePoint.from_vector(x_plus),
        m,
        t,
        center_action(cat_t, X, m),
    )


def orbit_with_chord(cat: CatMap, xi0: PointLike, m: Winding, t: int) -> OrbitSegment:
    """The t-step orbit with winding ``m`` whose chord is ``xi0``.

    Solves ``(M^t - 1) x_minus = xi0 + m``; the action stored is the chord
    action.
    """
    xi0, m = _point(xi0), _winding(m)
    cat_t = power(cat, t)
    Mt = cat_t.M.matrix
    x_minus = np.linalg.solve(Mt - IDENTITY, xi0.vector + np.asarray(m, dtype=float))
    x_plus = Mt @ x_minus - np.asarray(m, dtype=float)
    center = 0.5 * (x_plus + x_minus)
    action = center_action(cat_t, center, m) - wedge(xi0, center)
    return OrbitSegment(
        PhasePoint.from_vector(x_minus), PhasePoint.from_vector(x_plus), m, t, action
    )


def chord_action(cat: CatMap, xi0: PointLike, m: Winding = (0, 0), t: int = 1) -> float:
    """Chord generating function ``S(x0) - xi0 ^ x0``; its gradient is ``J x0``."""
    return orbit_with_chord(cat, xi0, m, t).action


def center_windings(cat: CatMap) -> list[Winding]:
    """One winding per class of ``Z^2 / (M + 1) Z^2``.

    Each class labels a distinct torus orbit sharing a given center; there
    are ``|det(M + 1)|`` of them.
    """
    (a, b), (c, d) = cat.entries
    # adj(M + 1) m mod D vanishes exactly on (M + 1) Z^2
    adj = np.array([[d + 1, -b], [-c, a + 1]], dtype=np.int64)
    size = abs(cat.det_plus)
    grid = np.indices((size, size)).reshape(2, -1).T
    keys = (grid @ adj.T) % size
    _, first = np.unique(keys, axis=0, return_index=True)
    windings = sorted((int(grid[i, 0]), int(grid[i, 1])) for i in first)
    logger.debug("Found %d center windings for det(M + 1) = %d", len(windings), size)
    return windings
