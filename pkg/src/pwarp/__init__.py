"""Contravariant pseudo-Riemannian Poisson geometry and warped products."""

from . import connection, curvature, expr, manifold, warped
from .errors import *  # noqa: F401,F403
from .manifold import ManifoldSpec

__version__ = "0.1.0"
