"""Semiclassical coherent-state propagators and their torus periodization.

The element functions work in the plane with normalized coherent states and
an explicit ``hbar``. ``torus_periodize`` turns any of them into an element
between the periodic coherent states of ``torus_quantum``, and
``error_sweep`` compares the semiclassical torus elements with the exact one.
"""

from __future__ import annotations

import cmath
import logging
import math
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np
import pandas as pd
from numpy.typing import NDArray

from .classical_catmap import CatMap, power
from .elements import CSElement, Method
from .exceptions import (
    AccidentalCausticError,
    CausticError,
    CoherentPropagatorsError,
    ShortTimeDivergence,
)
from .phase_space import (
    CAUSTIC_TOL,
    IDENTITY,
    J,
    FrameMatrixSet,
    PointLike,
    SymplecticMap2,
    as_vector,
    matrix_set_general,
    wedge,
)
from .quadratic_flows import QuadraticHamiltonian, morse_track
from .torus_quantum import TorusHilbert, exact_cs_element, lift_phase

logger = logging.getLogger(__name__)

System = CatMap | QuadraticHamiltonian | SymplecticMap2

SHORT_TIME_TOL = 1e-10
SHELL_FLOOR = 1e-16
MAX_SHELLS = 64
IMAGE_CUTOFF = math.log(1e18)

SC_METHODS = (Method.SC1, Method.SC2, Method.SC3, Method.SC3LIN)


@dataclass(frozen=True)
class SCContext:
    """Classical data shared by the semiclassical formulas at one time.

    Args:
        method: Formula the context is prepared for, if any.
        hbar: Planck constant of the plane.
        M: Monodromy matrix.
        matrix_set: Matrix family for isotropic coherent states, ``None`` at a
            caustic.
        phase_index: Integer ``mu`` of the phase ``pi mu / 2``; ``None`` at a
            caustic.
        theta: Continuous argument of ``det[V(M + 1)]``.
    """

    method: Method | None
    hbar: float
    M: NDArray
    matrix_set: FrameMatrixSet | None
    phase_index: int | None
    theta: float

    @property
    def at_caustic(self) -> bool:
        return self.matrix_set is None

    def require_regular(self) -> FrameMatrixSet:
        if self.matrix_set is None:
            raise CausticError("det(M + 1) vanishes at this time.")
        return self.matrix_set


def _hbar(system: System, hbar: float | None) -> float:
    if hbar is None:
        if isinstance(system, QuadraticHamiltonian):
            return system.hbar
        raise ValueError("hbar is required for maps in the plane.")
    if isinstance(system, QuadraticHamiltonian) and not math.isclose(hbar, system.hbar):
        raise ValueError(f"hbar {hbar} does not match the Hamiltonian's {system.hbar}.")
    if not hbar > 0:
        raise ValueError(f"hbar must be positive, got {hbar}.")
    return float(hbar)


def _map_power(system: CatMap | SymplecticMap2, t: float) -> NDArray:
    if t < 0 or int(t) != t:
        raise ValueError(f"Map times are non-negative integers, got {t}.")
    if t == 0:
        return IDENTITY
    if isinstance(system, CatMap):
        return power(system, int(t)).M.matrix
    return system.power(int(t)).matrix


def context(
    system: System,
    t: float,
    hbar: float | None = None,
    method: Method | None = None,
    metric: NDArray | None = None,
) -> SCContext:
    """Collect monodromy, matrix set and phase index of ``system`` at time ``t``.

    Maps have no time continuity, so their ``theta`` is the principal argument
    of ``det[V(M + 1)]``; for a hyperbolic map with positive trace the phase
    index is 0. Flows take both from ``morse_track``. A non-isotropic
    ``metric`` is only accepted for maps away from caustics.
    """
    hbar = _hbar(system, hbar)
    if isinstance(system, QuadraticHamiltonian):
        if metric is not None:
            raise ValueError("Flows are tracked with isotropic coherent states only.")
        state = morse_track(system, t)
        matrix_set = None if state.at_caustic else matrix_set_general(state.M)
        return SCContext(
            method, hbar, state.M.matrix, matrix_set, state.phase_index, state.theta
        )

    M = _map_power(system, t)
    det_plus = float(np.linalg.det(M + IDENTITY))
    if abs(det_plus) < CAUSTIC_TOL:
        if metric is not None:
            raise CausticError("det(M + 1) vanishes; only isotropic states are supported.")
        det_w = np.linalg.det((M + IDENTITY) + 1j * J @ (IDENTITY - M))
        return SCContext(method, hbar, M, None, None, float(np.angle(det_w)))
    matrix_set = matrix_set_general(M, metric)
    theta = math.remainder(matrix_set.epsilon + (0.0 if det_plus > 0 else math.pi), 2 * math.pi)
    phase_index = round((matrix_set.epsilon - theta) / math.pi)
    return SCContext(method, hbar, M, matrix_set, phase_index, theta)


def coherent_overlap(X1: PointLike, X2: PointLike, hbar: float) -> complex:
    """``<X1|X2> = exp[-(X1 - X2)^2 / 4 hbar - (i / 2 hbar) X1 ^ X2]``."""
    x1, x2 = as_vector(X1), as_vector(X2)
    diff = x1 - x2
    return cmath.exp(-(diff @ diff) / (4.0 * hbar) - 0.5j * wedge(x1, x2) / hbar)


def _prefactor(ctx: SCContext) -> float:
    ms = ctx.require_regular()
    det_w = ms.detV_mod * ms.detM1
    if det_w < CAUSTIC_TOL:
        raise AccidentalCausticError(f"|det[V(M + 1)]| = {det_w:.3e} vanishes.")
    return 2.0 / math.sqrt(det_w)


def _sc1(ctx: SCContext, X1: NDArray, X2: NDArray) -> CSElement:
    ms = ctx.require_regular()
    hbar, B = ctx.hbar, ms.B
    X, xi0 = 0.5 * (X1 + X2), X1 - X2
    mismatch = -2.0 * J @ B @ X - xi0
    phase = (X @ B @ X - 0.5 * wedge(X1, X2)) / hbar + 0.5 * math.pi * ctx.phase_index
    value = (2.0 / math.sqrt(ms.detM1)) * cmath.exp(
        1j * phase - (mismatch @ mismatch) / (4.0 * hbar)
    )
    return CSElement(value, Method.SC1, shift=float(np.linalg.norm(mismatch)))


def _det_minus(M: NDArray) -> float:
    det_minus = float(np.linalg.det(M - IDENTITY))
    if abs(det_minus) < SHORT_TIME_TOL:
        raise ShortTimeDivergence(f"|det(M - 1)| = {abs(det_minus):.3e}: SC2 diverges.")
    return det_minus


def _sc2(ctx: SCContext, X1: NDArray, X2: NDArray) -> CSElement:
    M, hbar = ctx.M, ctx.hbar
    det_minus = _det_minus(M)
    B = ctx.require_regular().B
    X, xi0 = 0.5 * (X1 + X2), X1 - X2
    x0 = 0.5 * (M + IDENTITY) @ np.linalg.solve(M - IDENTITY, xi0)
    chord_action = x0 @ B @ x0 - wedge(xi0, x0)
    phase = (chord_action + 0.5 * wedge(X1, X2)) / hbar + 0.5 * math.pi * ctx.phase_index
    offset = x0 - X
    value = (2.0 / math.sqrt(abs(det_minus))) * cmath.exp(1j * phase - (offset @ offset) / hbar)
    return CSElement(value, Method.SC2, shift=float(np.linalg.norm(offset)))


def _drift_width(M: NDArray) -> complex:
    (a, b), (c, d) = np.asarray(M, dtype=float)
    gamma = (a * 1j + b) / (c * 1j + d)
    return 0.5 * (1.0 - 1j * gamma)


def sc3_drift_form(
    M: NDArray, X1: PointLike, X2: PointLike, hbar: float, theta: float
) -> complex:
    """SC3 written through the drift ``X1 - M X2``; finite on caustics.

    For ``M = [[a, b], [c, d]]`` the propagated vacuum has the complex width
    ``Gamma = (ai + b) / (ci + d)`` and ``det[V(M + 1)] / 4 = ((a + d) + i(c - b)) / 2``
    whose continuous argument is ``theta``.
    """
    (a, b), (c, d) = np.asarray(M, dtype=float)
    x1, x2 = as_vector(X1), as_vector(X2)
    image = np.asarray(M, dtype=float) @ x2
    P, Q = x1 - image
    beta = Q - 1j * P
    alpha = _drift_width(M)
    z = 0.5 * complex(a + d, c - b)
    exponent = (beta**2 / (4.0 * alpha) - 0.5 * Q**2 + 0.5j * P * Q) / hbar
    return (
        cmath.exp(0.5j * wedge(image, x1) / hbar)
        * abs(z) ** -0.5
        * cmath.exp(-0.5j * theta)
        * cmath.exp(exponent)
    )


def _sc3(ctx: SCContext, X1: NDArray, X2: NDArray) -> CSElement:
    hbar = ctx.hbar
    if ctx.at_caustic:
        drift = X1 - ctx.M @ X2
        value = sc3_drift_form(ctx.M, X1, X2, hbar, ctx.theta)
        return CSElement(value, Method.SC3, shift=float(np.linalg.norm(drift)) / 2.0)
    ms = ctx.require_regular()
    prefactor = _prefactor(ctx)
    X, xi0 = 0.5 * (X1 + X2), X1 - X2
    delta = 0.5 * (-2.0 * J @ ms.B @ X - xi0)
    phase = (
        (-0.5 * wedge(X1, X2) + X @ ms.B @ X + delta @ ms.Bbar @ delta) / hbar
        + 0.5 * math.pi * ctx.phase_index
        - 0.5 * ms.epsilon
    )
    value = prefactor * cmath.exp(-(delta @ ms.Cbar @ delta) / hbar + 1j * phase)
    return CSElement(value, Method.SC3, shift=float(np.linalg.norm(delta)))


def _sc3_linearized(ctx: SCContext, X1: NDArray, X2: NDArray) -> CSElement:
    if ctx.at_caustic:
        element = _sc3(ctx, X1, X2)
        return CSElement(element.value, Method.SC3LIN, shift=2.0 * element.shift)
    ms = ctx.require_regular()
    hbar, M, B = ctx.hbar, ctx.M, ms.B
    prefactor = _prefactor(ctx)
    X, xi0 = 0.5 * (X1 + X2), X1 - X2
    # everything below follows the orbit launched at X2
    drift = M @ X2 - X1
    chord2 = (M - IDENTITY) @ X2
    center2 = 0.5 * (M + IDENTITY) @ X2
    action2 = center2 @ B @ center2
    phase = (
        (action2 + 0.5 * wedge(chord2 + X, xi0) + drift @ (0.25 * B + ms.D) @ drift) / hbar
        + 0.5 * math.pi * ctx.phase_index
        - 0.5 * ms.epsilon
    )
    value = prefactor * cmath.exp(-(drift @ ms.E @ drift) / hbar + 1j * phase)
    return CSElement(value, Method.SC3LIN, shift=float(np.linalg.norm(drift)))


_FORMULAS = {
    Method.SC1: _sc1,
    Method.SC2: _sc2,
    Method.SC3: _sc3,
    Method.SC3LIN: _sc3_linearized,
}


def plane_element(
    method: Method | str,
    system: System,
    X1: PointLike,
    X2: PointLike,
    t: float,
    hbar: float | None = None,
    metric: NDArray | None = None,
) -> CSElement:
    """Evaluate one semiclassical formula between normalized plane states.

    ``metric`` selects squeezed coherent states of that metric for SC3 and
    SC3LIN on maps; SC1 and SC2 are isotropic.
    """
    method = Method(method)
    if method not in _FORMULAS:
        raise ValueError(f"{method.value!r} is not a semiclassical method.")
    if metric is not None and method in (Method.SC1, Method.SC2):
        raise ValueError(f"{method.value} is defined for isotropic coherent states only.")
    ctx = context(system, t, hbar, method, metric)
    return _FORMULAS[method](ctx, as_vector(X1), as_vector(X2))


def sc1_element(system, X1, X2, t, hbar=None) -> CSElement:
    """Weyl-propagator element: the orbit centered at ``(X1 + X2) / 2``.

    Raises:
        CausticError: At caustics of the monodromy.
    """
    return plane_element(Method.SC1, system, X1, X2, t, hbar)


def sc2_element(system, X1, X2, t, hbar=None) -> CSElement:
    """Chord-representation element: the orbit whose chord is ``X1 - X2``.

    Raises:
        ShortTimeDivergence: When ``|det(M - 1)| < 1e-10``.
    """
    return plane_element(Method.SC2, system, X1, X2, t, hbar)


def sc3_element(system, X1, X2, t, hbar=None, metric=None) -> CSElement:
    """Exact-for-quadratic element built on the orbit centered at ``(X1 + X2) / 2``.

    Raises:
        AccidentalCausticError: When ``det[V(M + 1)]`` vanishes.
    """
    return plane_element(Method.SC3, system, X1, X2, t, hbar, metric)


def sc3_linearized(system, X1, X2, t, hbar=None, metric=None) -> CSElement:
    """SC3 rewritten from the orbit launched at ``X2`` and its drift."""
    return plane_element(Method.SC3LIN, system, X1, X2, t, hbar, metric)


def _shells(radius: int):
    if radius == 0:
        yield (0, 0)
        return
    for k0 in range(-radius, radius + 1):
        for k1 in range(-radius, radius + 1):
            if max(abs(k0), abs(k1)) == radius:
                yield (k0, k1)


@dataclass(frozen=True)
class ImageWindow:
    """Gaussian envelope ``exp[-(k - center).Q(k - center)]`` of the image terms.

    The semiclassical elements decay in the image shift ``k`` along the
    stable and unstable directions of the map at very different rates, so the
    images that matter fill a long tilted ellipse.
    """

    Q: NDArray
    center: NDArray

    @classmethod
    def from_envelope(
        cls, c: NDArray, A: NDArray, G: NDArray, hbar: float
    ) -> ImageWindow:
        """Window of ``exp[-(A k + c).G(A k + c) / hbar]``.

        Raises:
            ValueError: If the envelope does not decay in every direction.
        """
        A = np.asarray(A, dtype=float)
        Q = A.T @ np.asarray(G, dtype=float) @ A / hbar
        Q = 0.5 * (Q + Q.T)
        if np.linalg.eigvalsh(Q)[0] <= 0.0:
            raise ValueError("The image envelope does not decay in every direction.")
        return cls(Q, -np.linalg.solve(A, np.asarray(c, dtype=float)))

    def exponent(self, k: PointLike) -> float:
        d = np.asarray(k, dtype=float) - self.center
        return float(d @ self.Q @ d)

    def _inside(self, level: float) -> list[tuple[tuple[int, int], float]]:
        (q00, q01), (_, q11) = self.Q
        c0, c1 = self.center
        half_width = math.sqrt(level * q11 / (q00 * q11 - q01 * q01))
        found = []
        for k0 in range(math.ceil(c0 - half_width), math.floor(c0 + half_width) + 1):
            x = k0 - c0
            disc = q01 * q01 * x * x - q11 * (q00 * x * x - level)
            if disc < 0.0:
                continue
            root = math.sqrt(disc)
            low = (-q01 * x - root) / q11 + c1
            high = (-q01 * x + root) / q11 + c1
            for k1 in range(math.ceil(low), math.floor(high) + 1):
                found.append(((k0, k1), self.exponent((k0, k1))))
        return found

    def images(self, cutoff: float = IMAGE_CUTOFF) -> list[tuple[int, int]]:
        """Integer shifts within ``exp(-cutoff)`` of the largest lattice term."""
        level = cutoff
        while True:
            found = self._inside(level)
            if not found:
                level *= 2.0
                continue
            lowest = min(exponent for _, exponent in found)
            if level >= lowest + cutoff:
                return [k for k, exponent in found if exponent <= lowest + cutoff]
            level = lowest + cutoff


def _drift_form_metric(M: NDArray) -> NDArray:
    w = 1.0 / (4.0 * _drift_width(M))
    return np.array([[w.real, -w.imag], [-w.imag, 0.5 - w.real]])


def _image_envelope(
    ctx: SCContext, X1: NDArray, X2: NDArray
) -> tuple[NDArray, NDArray, NDArray]:
    """``(c, A, G)`` with ``|element(X1, X2 + k)|`` proportional to
    ``exp[-(A k + c).G(A k + c) / hbar]``."""
    M = ctx.M
    if ctx.at_caustic and ctx.method in (Method.SC3, Method.SC3LIN):
        return X1 - M @ X2, -M, _drift_form_metric(M)
    ms = ctx.require_regular()
    X, xi0 = 0.5 * (X1 + X2), X1 - X2
    mismatch = -2.0 * J @ ms.B @ X - xi0
    slope = IDENTITY - J @ ms.B
    if ctx.method == Method.SC1:
        return mismatch, slope, 0.25 * IDENTITY
    if ctx.method == Method.SC3:
        return 0.5 * mismatch, 0.5 * slope, ms.Cbar
    if ctx.method == Method.SC3LIN:
        return M @ X2 - X1, M, ms.E
    _det_minus(M)
    chord_map = np.linalg.inv(M - IDENTITY)
    x0 = 0.5 * (M + IDENTITY) @ chord_map @ xi0
    return x0 - X, -M @ chord_map, IDENTITY


def _image_term(
    element_fn: Callable[[NDArray, NDArray], CSElement | complex],
    N: int,
    hbar: float,
    x1: NDArray,
    x2: NDArray,
    k: tuple[int, int],
) -> tuple[complex, Method, float]:
    element = element_fn(x1, x2 + np.asarray(k, dtype=float))
    if isinstance(element, CSElement):
        value, method, shift = element.value, element.method, element.shift
    else:
        value, method, shift = complex(element), Method.EXACT, 0.0
    sign = -1.0 if (N * k[0] * k[1]) % 2 else 1.0
    return sign * cmath.exp(-0.5j * wedge(x2, k) / hbar) * value, method, shift


def torus_periodize(
    element_fn: Callable[[NDArray, NDArray], CSElement | complex],
    space: TorusHilbert,
    X1: PointLike,
    X2: PointLike,
    t: int,
    max_shells: int = MAX_SHELLS,
    window: ImageWindow | None = None,
) -> CSElement:
    """Sum phased images ``X2 + k`` of a plane element into a torus element.

    With a ``window`` the sum runs over the images its envelope keeps.
    Without one, images are added shell by shell in ``max(|k0|, |k1|)`` until
    a whole shell (from the second on) stays below ``1e-16`` of the largest
    term, which only suits nearly isotropic elements. The result carries
    ``sqrt(N / 2)`` and ``lift_phase(t)`` so it can be compared directly with
    ``exact_cs_element``.
    """
    x1, x2 = as_vector(X1), as_vector(X2)
    N, hbar = space.N, space.hbar
    terms = {}
    if window is not None:
        for k in window.images():
            terms[k] = _image_term(element_fn, N, hbar, x1, x2, k)
        logger.debug("Periodization summed %d images", len(terms))
    else:
        largest = 0.0
        for radius in range(max_shells + 1):
            shell_max = 0.0
            for k in _shells(radius):
                terms[k] = _image_term(element_fn, N, hbar, x1, x2, k)
                shell_max = max(shell_max, abs(terms[k][0]))
            largest = max(largest, shell_max)
            if radius >= 2 and shell_max < SHELL_FLOOR * largest:  # noqa: PLR2004
                logger.debug("Periodization converged after %d shells", radius)
                break
        else:
            logger.warning(
                "Periodization stopped at the %d-shell cap before converging", max_shells
            )
    dominant = max(terms, key=lambda k: abs(terms[k][0]))
    _, method, shift = terms[dominant]
    total = sum(term for term, _, _ in terms.values())
    value = lift_phase(t) * math.sqrt(N / 2.0) * total
    return CSElement(value, method, winding=dominant, shift=shift)


def torus_element(
    method: Method | str,
    space: TorusHilbert,
    X1: PointLike,
    X2: PointLike,
    t: int,
    cat: CatMap | None = None,
) -> CSElement:
    """Semiclassical element between periodic coherent states of the torus."""
    method = Method(method)
    if method == Method.EXACT:
        return exact_cs_element(space, X1, X2, t)
    for name, label in (("X1", X1), ("X2", X2)):
        p, q = as_vector(label)
        if not (0.0 <= p < 1.0 and 0.0 <= q < 1.0):
            raise ValueError(f"{name} must lie in [0, 1)^2, got ({p}, {q}).")
    if method not in _FORMULAS:
        raise ValueError(f"Unknown method {method.value!r}.")
    ctx = context(cat or CatMap(), t, space.hbar, method)
    x1, x2 = as_vector(X1), as_vector(X2)
    window = ImageWindow.from_envelope(*_image_envelope(ctx, x1, x2), space.hbar)
    return torus_periodize(partial(_FORMULAS[method], ctx), space, x1, x2, t, window=window)


def _sweep_rows(
    N: int, t: int, X1: NDArray, X2: NDArray, methods: Sequence[Method], cat: CatMap
) -> list[dict]:
    space = TorusHilbert(N)
    exact = exact_cs_element(space, X1, X2, t)
    rows = []
    for method in methods:
        row = {
            "N": N,
            "method": method.value,
            "amplitude_error": math.nan,
            "phase_error": math.nan,
            "error": "",
        }
        try:
            element = torus_element(method, space, X1, X2, t, cat)
        except CoherentPropagatorsError as exc:
            logger.debug("N = %d, %s failed: %s", N, method.value, exc)
            row["error"] = type(exc).__name__
        else:
            row["amplitude_error"] = element.relative_error(exact)
            row["phase_error"] = element.phase_error(exact)
        rows.append(row)
    return rows


def error_sweep(
    ns: Iterable[int],
    t: int,
    X1: PointLike,
    X2: PointLike,
    methods: Iterable[Method | str] = (Method.SC1, Method.SC2, Method.SC3),
    cat: CatMap | None = None,
    max_workers: int = 1,
) -> pd.DataFrame:
    """Relative amplitude and phase errors of semiclassical torus elements.

    Args:
        ns: Odd dimensions to sweep.
        t: Number of map iterations.
        X1: Bra label in the unit square.
        X2: Ket label in the unit square.
        methods: Semiclassical formulas to compare with the exact element.
        cat: Cat map, the default map when omitted.
        max_workers: Threads used to spread the dimensions.

    Returns:
        One row per ``(N, method)`` in input order with columns ``N``,
        ``method``, ``amplitude_error``, ``phase_error`` and ``error`` (the
        exception name for failed elements, empty otherwise).
    """
    ns = [int(n) for n in ns]
    invalid = [n for n in ns if n % 2 == 0 or n < 3]  # noqa: PLR2004
    if invalid:
        raise ValueError(f"Sweep dimensions must be odd and >= 3, got {invalid}.")
    methods = [Method(m) for m in methods]
    x1, x2 = as_vector(X1), as_vector(X2)
    worker = partial(_sweep_rows, t=t, X1=x1, X2=x2, methods=methods, cat=cat or CatMap())
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        chunks = list(pool.map(worker, ns))
    logger.info("Error sweep over %d dimensions and %d methods done", len(ns), len(methods))
    return pd.DataFrame(
        [row for chunk in chunks for row in chunk],
        columns=["N", "method", "amplitude_error", "phase_error", "error"],
    )


def tabulate_errors(sweep: pd.DataFrame) -> pd.DataFrame:
    """Pivot a sweep into one row per ``N`` with an ``E_<method>`` column each."""
    wide = sweep.pivot(index="N", columns="method", values="amplitude_error")
    wide.columns = [f"E_{method}" for method in wide.columns]
    return wide.reset_index()
