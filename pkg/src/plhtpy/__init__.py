"""Exact rational piecewise-linear homotopy toolkit.

Finite complexes of disjoint open simplices with exact rational
coordinates, barycentric subdivision, simplicial homology over the
integers, simplicial approximation with homotopy certificates,
mapping-cylinder retractions, edge-path fundamental groups, and a CLI
over the SCX / SCX-M text formats.
"""

__version__ = "0.1.0"

from .errors import PlhtpyError  # noqa: F401
