"""Exact coherent-state propagator of quadratic Hamiltonians in a number basis.

Only primitive arithmetic is shared with the semiclassical code: the
Hamiltonian is assembled from ladder operators in Weyl order and exponentiated
with ``scipy.sparse.linalg.expm_multiply``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from numpy.typing import NDArray
from scipy.sparse.linalg import expm_multiply

from .exceptions import TruncationError
from .phase_space import PointLike, as_vector
from .quadratic_flows import QuadraticHamiltonian

logger = logging.getLogger(__name__)

TAIL_TOL = 1e-12
STABILITY_TOL = 1e-9
STABILITY_STEP = 8
MAX_LEVELS = 4096


@dataclass(frozen=True)
class FockTruncation:
    """Number-basis cutoff ``n_max`` at a given ``hbar``."""

    n_max: int = 128
    hbar: float = 1.0

    def __post_init__(self):
        if self.n_max < 8:  # noqa: PLR2004
            raise ValueError(f"n_max must be at least 8, got {self.n_max}.")
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}.")

    def widened(self, n_max: int) -> FockTruncation:
        return FockTruncation(n_max, self.hbar)


def cs_fock_coefficients(X: PointLike, trunc: FockTruncation) -> NDArray:
    """Number-basis amplitudes of the coherent state centered at ``X = (P, Q)``.

    Uses ``alpha = (Q + iP) / sqrt(2 hbar)``; pairwise overlaps then carry the
    phase ``exp[-(i / 2 hbar) X1 ^ X2]``.

    Raises:
        TruncationError: If more than ``1e-12`` of the norm lies beyond ``n_max``.
    """
    P, Q = as_vector(X)
    alpha = complex(Q, P) / math.sqrt(2.0 * trunc.hbar)
    coeffs = np.empty(trunc.n_max, dtype=complex)
    coeffs[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, trunc.n_max):
        coeffs[n] = coeffs[n - 1] * alpha / math.sqrt(n)
    tail = 1.0 - float(np.vdot(coeffs, coeffs).real)
    if tail > TAIL_TOL:
        raise TruncationError(
            f"Coherent state at ({P}, {Q}) leaves {tail:.3e} of its norm "
            f"beyond n_max = {trunc.n_max}."
        )
    return coeffs


def weyl_hamiltonian(h: QuadraticHamiltonian, n_max: int) -> sp.csr_matrix:
    """``(H_pp p^2 + H_pq (pq + qp) + H_qq q^2) / 2`` on the first ``n_max`` levels.

    The operators are built two levels larger and cropped, so every kept
    matrix element is exact.
    """
    size = n_max + 2
    a = sp.diags(np.sqrt(np.arange(1, size)), offsets=1, format="csr", dtype=complex)
    ad = a.conj().T.tocsr()
    scale = math.sqrt(0.5 * h.hbar)
    q = scale * (a + ad)
    p = -1j * scale * (a - ad)
    (h_pp, h_pq), (_, h_qq) = h.hessian
    H = 0.5 * (h_pp * (p @ p) + h_pq * (p @ q + q @ p) + h_qq * (q @ q))
    return H.tocsr()[:n_max, :n_max]


def propagate_coherent_state(
    h: QuadraticHamiltonian, X: PointLike, t: float, trunc: FockTruncation
) -> NDArray:
    """``exp(-i t H / hbar) |X>`` in a fixed truncation."""
    if not math.isclose(trunc.hbar, h.hbar):
        raise ValueError(f"Truncation hbar {trunc.hbar} differs from {h.hbar}.")
    ket = cs_fock_coefficients(X, trunc)
    if t == 0:
        return ket
    generator = (-1j * t / h.hbar) * weyl_hamiltonian(h, trunc.n_max)
    return expm_multiply(generator.tocsc(), ket)


def _element(h, X1, X2, t, trunc: FockTruncation) -> complex:
    bra = cs_fock_coefficients(X1, trunc)
    return complex(np.vdot(bra, propagate_coherent_state(h, X2, t, trunc)))


def exact_cs_propagator(
    h: QuadraticHamiltonian,
    X1: PointLike,
    X2: PointLike,
    t: float,
    trunc: FockTruncation | None = None,
) -> complex:
    """``<X1|exp(-i t H / hbar)|X2>`` with an automatically widened cutoff.

    The cutoff doubles, up to 4096 levels, until results at ``n_max`` and
    ``n_max + 8`` agree to ``1e-9``.

    Raises:
        TruncationError: If no cutoff up to 4096 levels is stable.
    """
    trunc = trunc or FockTruncation(hbar=h.hbar)
    if not math.isclose(trunc.hbar, h.hbar):
        raise ValueError(f"Truncation hbar {trunc.hbar} differs from {h.hbar}.")
    n_max = trunc.n_max
    while n_max <= MAX_LEVELS:
        try:
            coarse = _element(h, X1, X2, t, trunc.widened(n_max))
            fine = _element(h, X1, X2, t, trunc.widened(n_max + STABILITY_STEP))
        except TruncationError as exc:
            logger.debug("Cutoff %d too small: %s", n_max, exc)
        else:
            if abs(fine - coarse) <= STABILITY_TOL:
                return fine
            logger.debug(
                "Cutoff %d unstable by %.3e, widening", n_max, abs(fine - coarse)
            )
        n_max *= 2
    raise TruncationError(
        f"Propagator not stable to {STABILITY_TOL} below {MAX_LEVELS} levels at t = {t}."
    )
