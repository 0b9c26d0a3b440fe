"""Matrix-element records shared by the exact and semiclassical layers."""

import cmath
from dataclasses import dataclass
from enum import Enum


class Method(str, Enum):
    EXACT = "exact"
    SC1 = "sc1"
    SC2 = "sc2"
    SC3 = "sc3"
    SC3LIN = "sc3lin"


@dataclass(frozen=True)
class CSElement:
    """One coherent-state matrix element <X1|U^t|X2>.

    Args:
        value: The complex matrix element.
        method: Which formula produced it.
        winding: Integer translation of the dominant contribution, ``(0, 0)``
            in the plane.
        shift: Norm of the mismatch driving the Gaussian factor (point shift,
            drift or center displacement, depending on the method).
    """

    value: complex
    method: Method
    winding: tuple[int, int] = (0, 0)
    shift: float = 0.0

    @property
    def amplitude(self) -> float:
        return abs(self.value)

    def relative_error(self, reference: "CSElement | complex") -> float:
        """Relative amplitude error ``||A| - |A_ref|| / |A_ref|``."""
        ref = reference.value if isinstance(reference, CSElement) else reference
        return abs(abs(self.value) - abs(ref)) / abs(ref)

    def phase_error(self, reference: "CSElement | complex") -> float:
        """Principal value of ``arg(A / A_ref)`` in (-pi, pi]."""
        ref = reference.value if isinstance(reference, CSElement) else reference
        return cmath.phase(self.value / ref)
