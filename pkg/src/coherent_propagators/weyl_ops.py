"""Translation and reflection operators on the torus and their algebra.

Translations are labelled by chords on the ``1/N`` lattice and reflections by
centers on the ``1/2N`` half-lattice, both for odd ``N``. Labels are kept as
integer numerators and never reduced mod 1: shifting a label by an integer
vector multiplies the operator by a sign.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .exceptions import OffLattice
from .phase_space import PhasePoint, PointLike, as_vector, wedge
from .torus_quantum import (
    OperatorMatrix,
    TorusHilbert,
    hannay_berry,
    periodic_gaussian,
    torus_weyl_symbol,
)

logger = logging.getLogger(__name__)

LATTICE_TOL = 1e-9
IDENTITY_TOL = 1e-10


def _numerators(point: PointLike, scale: int) -> tuple[int, int]:
    scaled = as_vector(point) * scale
    rounded = np.rint(scaled)
    if np.max(np.abs(scaled - rounded)) > LATTICE_TOL:
        raise OffLattice(f"{tuple(as_vector(point))} is not on the 1/{scale} lattice.")
    return int(rounded[0]), int(rounded[1])


@dataclass(frozen=True)
class LatticeChord:
    """Translation label ``xi = (n_p, n_q) / N``."""

    N: int
    n_p: int
    n_q: int

    @classmethod
    def from_point(cls, space: TorusHilbert, xi: PointLike) -> LatticeChord:
        return cls(space.N, *_numerators(xi, space.N))

    @property
    def xi(self) -> PhasePoint:
        return PhasePoint(self.n_p / self.N, self.n_q / self.N)

    def __neg__(self) -> LatticeChord:
        return LatticeChord(self.N, -self.n_p, -self.n_q)

    def __add__(self, other: LatticeChord) -> LatticeChord:
        return LatticeChord(self.N, self.n_p + other.n_p, self.n_q + other.n_q)


@dataclass(frozen=True)
class LatticeCenter:
    """Reflection center ``x = (a, b) / 2N``."""

    N: int
    a: int
    b: int

    @classmethod
    def from_point(cls, space: TorusHilbert, x: PointLike) -> LatticeCenter:
        return cls(space.N, *_numerators(x, 2 * space.N))

    @classmethod
    def grid(cls, space: TorusHilbert, a: int, b: int) -> LatticeCenter:
        """The integer-grid center ``(a/N, b/N)``."""
        return cls(space.N, 2 * a, 2 * b)

    @property
    def x(self) -> PhasePoint:
        return PhasePoint(self.a / (2 * self.N), self.b / (2 * self.N))

    def shifted(self, chord: LatticeChord, sign: int = 1) -> LatticeCenter:
        """``x + sign * xi / 2``."""
        return LatticeCenter(self.N, self.a + sign * chord.n_p, self.b + sign * chord.n_q)


def _chord(space: TorusHilbert, xi) -> LatticeChord:
    return xi if isinstance(xi, LatticeChord) else LatticeChord.from_point(space, xi)


def _center(space: TorusHilbert, x) -> LatticeCenter:
    return x if isinstance(x, LatticeCenter) else LatticeCenter.from_point(space, x)


def translation(space: TorusHilbert, xi: LatticeChord | PointLike) -> OperatorMatrix:
    """``T_xi |q_j> = exp[(i/hbar) p (q_j + q/2)] |q_j + q>``."""
    space.require_odd()
    chord = _chord(space, xi)
    N = space.N
    j = np.arange(N)
    T = np.zeros((N, N), dtype=complex)
    T[(j + chord.n_q) % N, j] = np.exp(1j * np.pi * chord.n_p * (2 * j + chord.n_q) / N)
    return T


def reflection(space: TorusHilbert, x: LatticeCenter | PointLike) -> OperatorMatrix:
    """``R_x |q_k> = exp[(2i/hbar) p (q - q_k)] |2q - q_k>`` for ``x = (p, q)``."""
    space.require_odd()
    center = _center(space, x)
    N = space.N
    k = np.arange(N)
    R = np.zeros((N, N), dtype=complex)
    R[(center.b - k) % N, k] = np.exp(1j * np.pi * center.a * (center.b - 2 * k) / N)
    return R


def weyl_symbol_via_reflection(
    space: TorusHilbert, A: OperatorMatrix, x: LatticeCenter | PointLike
) -> complex:
    """``A_W(x) = Tr[R_x A]``; the identity has symbol 1."""
    return complex(np.sum(reflection(space, x) * np.asarray(A).T))


def operator_from_symbol(space: TorusHilbert, symbol: NDArray) -> OperatorMatrix:
    """Rebuild ``A = (1/N) sum_x A_W(x) R_x`` from its symbol on the integer grid."""
    space.require_odd()
    N = space.N
    symbol = np.asarray(symbol)
    if symbol.shape != (N, N):
        raise ValueError(f"Expected an {N}x{N} symbol, got shape {symbol.shape}.")
    a = np.arange(N)[:, None]
    k = np.arange(N)[None, :]
    A = np.zeros((N, N), dtype=complex)
    for b in range(N):
        # R_(a, b)[2b - k, k] = exp(4 pi i a (b - k) / N)
        phases = np.exp(4j * np.pi * ((a * (b - k)) % N) / N)
        A[(2 * b - k[0]) % N, k[0]] += symbol[:, b] @ phases
    return A / N


def reflected_coherent_state(space: TorusHilbert, x: LatticeCenter | PointLike, X: PointLike):
    """Apply ``R_x`` to the periodic coherent state ``X``.

    Returns:
        The pair ``(R_x c(X), exp[(i/hbar) X ^ x] c(2x - X))``, which agree.
    """
    center = _center(space, x)
    direct, _ = periodic_gaussian(space, X)
    image, _ = periodic_gaussian(space, 2.0 * center.x.vector - as_vector(X))
    phase = np.exp(1j * wedge(X, center.x) / space.hbar)
    return reflection(space, center) @ direct, phase * image


@dataclass(frozen=True)
class IdentityReport:
    """Largest deviation found for each operator identity at one ``N``."""

    N: int
    deviations: dict[str, float] = field(default_factory=dict)
    tolerance: float = IDENTITY_TOL

    @property
    def passed(self) -> bool:
        return all(value < self.tolerance for value in self.deviations.values())

    def failures(self) -> list[str]:
        return [name for name, value in self.deviations.items() if value >= self.tolerance]

    def to_records(self) -> list[dict]:
        return [
            {"N": self.N, "identity": name, "max_deviation": value, "passed": value < self.tolerance}
            for name, value in self.deviations.items()
        ]


def _dev(a: NDArray, b: NDArray) -> float:
    return float(np.max(np.abs(a - b)))


def compose_identities_report(
    space: TorusHilbert, samples: int = 8, seed: int = 0
) -> IdentityReport:
    """Check the translation and reflection algebra on random lattice labels.

    Covers the group law, inverses, reflection-translation products in both
    orders, reflection pairs, involution, the three-reflection law, discrete
    completeness, orthogonality, symbol reconstruction, unitarity and the
    action of reflections on coherent states.
    """
    space.require_odd()
    N, hbar = space.N, space.hbar
    rng = np.random.default_rng(seed)
    eye = np.eye(N)
    deviations = dict.fromkeys(
        [
            "translation_group",
            "translation_inverse",
            "reflection_translation",
            "translation_reflection",
            "reflection_pair",
            "involution",
            "three_reflections",
            "completeness",
            "orthogonality",
            "reconstruction",
            "unitarity",
            "reflected_coherent_state",
        ],
        0.0,
    )

    def note(name: str, value: float) -> None:
        deviations[name] = max(deviations[name], value)

    def chord() -> LatticeChord:
        n_p, n_q = rng.integers(-N, 2 * N, size=2)
        return LatticeChord(N, int(n_p), int(n_q))

    def center() -> LatticeCenter:
        a, b = rng.integers(0, 2 * N, size=2)
        return LatticeCenter(N, int(a), int(b))

    for _ in range(samples):
        xi1, xi2 = chord(), chord()
        x, x1, x2 = center(), center(), center()
        T1, T2 = translation(space, xi1), translation(space, xi2)
        R, R1, R2 = reflection(space, x), reflection(space, x1), reflection(space, x2)

        phase = np.exp(-0.5j * wedge(xi1.xi, xi2.xi) / hbar)
        note("translation_group", _dev(T2 @ T1, translation(space, xi1 + xi2) * phase))
        note("translation_inverse", _dev(T1.conj().T, translation(space, -xi1)))

        phase = np.exp(-1j * wedge(x.x, xi1.xi) / hbar)
        note("reflection_translation", _dev(R @ T1, reflection(space, x.shifted(xi1, -1)) * phase))
        note("translation_reflection", _dev(T1 @ R, reflection(space, x.shifted(xi1)) * phase))

        twice = LatticeChord(N, x1.a - x2.a, x1.b - x2.b)
        phase = np.exp(-2j * wedge(x1.x, x2.x) / hbar)
        note("reflection_pair", _dev(R1 @ R2, translation(space, twice) * phase))
        note("involution", _dev(R @ R, eye))

        delta3 = 2.0 * wedge(x2.x - x.x, x1.x - x.x)
        combined = LatticeCenter(N, x2.a - x.a + x1.a, x2.b - x.b + x1.b)
        note(
            "three_reflections",
            _dev(R2 @ R @ R1, np.exp(1j * delta3 / hbar) * reflection(space, combined)),
        )

        for op in (T1, T2, R, R1, R2):
            note("unitarity", _dev(op.conj().T @ op, eye))

        label = rng.random(2)
        direct, expected = reflected_coherent_state(space, x, label)
        note("reflected_coherent_state", _dev(direct, expected) / np.max(np.abs(expected)))

    grid = [LatticeCenter.grid(space, a, b) for a in range(N) for b in range(N)]
    reflections = [reflection(space, c) for c in grid]
    note("completeness", _dev(sum(reflections) / N, eye))
    for _ in range(samples):
        i, j = rng.integers(0, len(grid), size=2)
        trace = np.trace(reflections[i] @ reflections[j])
        note("orthogonality", abs(trace - (N if i == j else 0.0)))
        note("orthogonality", abs(np.trace(reflections[i] @ reflections[i]) - N))

    U = hannay_berry(space)
    note("reconstruction", _dev(operator_from_symbol(space, torus_weyl_symbol(space, U)), U))

    report = IdentityReport(N, deviations)
    logger.debug("Operator identities at N = %d: %s", N, deviations)
    return report
