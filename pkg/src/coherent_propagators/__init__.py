"""Coherent Propagators

Semiclassical and exact coherent-state propagators of cat maps on the torus
and of quadratic flows in the plane.
"""

__version__ = "0.1"
