"""Errors raised by the coherent_propagators library."""


class CoherentPropagatorsError(Exception):
    """Base class of every error raised by this package."""


class NotSymplecticError(CoherentPropagatorsError, ValueError):
    pass


class CausticError(CoherentPropagatorsError):
    """det(M + 1) vanishes, so the center representation is singular."""


class SingularVError(CoherentPropagatorsError):
    pass


class AccidentalCausticError(CoherentPropagatorsError):
    """det[V(M + 1)] vanishes; impossible for a genuine 2x2 symplectic map."""


class ShortTimeDivergence(CoherentPropagatorsError):
    """det(M - 1) vanishes and the chord representation diverges."""


class PowerOverflowError(CoherentPropagatorsError):
    pass


class TruncationError(CoherentPropagatorsError):
    pass


class EvenNUnsupported(CoherentPropagatorsError, ValueError):
    pass


class OffLattice(CoherentPropagatorsError, ValueError):
    pass


class NotFound(CoherentPropagatorsError):
    pass
