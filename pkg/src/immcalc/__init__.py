"""Numerical immersion calculus in constant-curvature ambient spaces."""

__version__ = "0.1.0"

from .ambient import AmbientSpace, AmbientVector, Model, ambient_space
from .calculus import Immersion, ShapeData, shape_data

__all__ = [
    "AmbientSpace",
    "AmbientVector",
    "Model",
    "ambient_space",
    "Immersion",
    "ShapeData",
    "shape_data",
    "__version__",
]
