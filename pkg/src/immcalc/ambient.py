"""Constant-curvature ambient spaces realized in a flat coordinate space.

Three models: the round sphere of curvature c > 0 at radius 1/sqrt(c) in
Euclidean R^{dim+1}, the upper hyperboloid sheet of curvature c < 0 in
Minkowski R^{dim+1} (signature -,+,...,+), and flat R^dim for c = 0.  All
three give a single global formula for tangent projection and for the
ambient curvature operator, so no chart atlas is needed upstream.

Points are validated against the model quadric, never renormalized:
silent renormalization would corrupt derivative tests downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import FrameMismatchError, OffModelError

ON_MODEL_TOL = 1e-9
_BASE_MATCH_TOL = 1e-12


class Model(Enum):
    SPHERE_IN_FLAT = "SphereInFlat"
    HYPERBOLOID_IN_MINKOWSKI = "HyperboloidInMinkowski"
    EUCLIDEAN = "Euclidean"


@dataclass(frozen=True)
class AmbientSpace:
    """Space form of sectional curvature ``c`` and dimension ``dim``."""

    c: float
    dim: int
    model: Model

    def __post_init__(self):
        if self.dim < 3:
            raise ValueError("ambient dimension must be >= 3")
        if self.model is Model.SPHERE_IN_FLAT and not self.c > 0:
            raise ValueError("sphere model requires c > 0")
        if self.model is Model.HYPERBOLOID_IN_MINKOWSKI and not self.c < 0:
            raise ValueError("hyperboloid model requires c < 0")
        if self.model is Model.EUCLIDEAN and self.c != 0:
            raise ValueError("Euclidean model requires c = 0")

    @property
    def flat_dim(self) -> int:
        return self.dim if self.model is Model.EUCLIDEAN else self.dim + 1

    @property
    def signature(self) -> np.ndarray:
        sig = np.ones(self.flat_dim)
        if self.model is Model.HYPERBOLOID_IN_MINKOWSKI:
            sig[0] = -1.0
        return sig

    def product(self, u, v):
        """Flat-coordinate inner product (Lorentz for the hyperboloid).

        Broadcasts over leading axes; the last axis is the coordinate axis.
        """
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return np.einsum("...i,...i->...", u * self.signature, v)

    def on_model_defect(self, x):
        """|<x,x> - 1/c| (zero for Euclidean); broadcasts over leading axes."""
        x = np.asarray(x, dtype=float)
        if self.model is Model.EUCLIDEAN:
            return np.zeros(x.shape[:-1])
        return np.abs(self.product(x, x) - 1.0 / self.c)

    def validate_point(self, x, tol: float = ON_MODEL_TOL):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.flat_dim:
            raise OffModelError(
                f"point has {x.shape[-1]} coordinates, model needs {self.flat_dim}"
            )
        defect = self.on_model_defect(x)
        if np.any(defect > tol):
            raise OffModelError(
                f"point off model: max |<x,x> - 1/c| = {float(np.max(defect)):.3e} > {tol:.1e}"
            )
        if self.model is Model.HYPERBOLOID_IN_MINKOWSKI and np.any(x[..., 0] <= 0):
            raise OffModelError("hyperboloid point with x0 <= 0")
        return x

    def project_tangent_raw(self, point, v):
        """Remove the component along the model normal at ``point``.

        For the quadric models the position vector scaled by the product is
        the normal; the projection is v - c <v,x> x and is idempotent.
        Euclidean space returns v unchanged.  Batched over leading axes.
        """
        v = np.asarray(v, dtype=float)
        if self.model is Model.EUCLIDEAN:
            return v
        point = np.asarray(point, dtype=float)
        coef = self.c * self.product(v, point)
        return v - coef[..., None] * point


def ambient_space(c: float, dim: int) -> AmbientSpace:
    """Pick the model from the sign of the curvature."""
    if c > 0:
        return AmbientSpace(c, dim, Model.SPHERE_IN_FLAT)
    if c < 0:
        return AmbientSpace(c, dim, Model.HYPERBOLOID_IN_MINKOWSKI)
    return AmbientSpace(0.0, dim, Model.EUCLIDEAN)


@dataclass(frozen=True)
class AmbientVector:
    """A tangent vector of the model, anchored at a base point."""

    space: AmbientSpace
    base: np.ndarray
    components: np.ndarray

    def __post_init__(self):
        base = np.asarray(self.base, dtype=float)
        comp = np.asarray(self.components, dtype=float)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "components", comp)
        self.space.validate_point(base)
        if self.space.model is not Model.EUCLIDEAN:
            tang = abs(float(self.space.product(base, comp)))
            scale = max(1.0, float(np.linalg.norm(comp)))
            if tang > 1e-8 * scale:
                raise OffModelError(
                    f"vector not tangent to model: |<base, v>| = {tang:.3e}"
                )

    def same_base(self, other: "AmbientVector") -> bool:
        return bool(
            np.all(np.abs(self.base - other.base) <= _BASE_MATCH_TOL * (1.0 + np.abs(self.base)))
        )


def _require_common_base(*vectors: AmbientVector):
    first = vectors[0]
    for v in vectors[1:]:
        if v.space is not first.space and v.space != first.space:
            raise FrameMismatchError("frame mismatch: vectors from different ambient spaces")
        if not first.same_base(v):
            raise FrameMismatchError("frame mismatch: vectors anchored at different points")


def inner(space: AmbientSpace, u: AmbientVector, v: AmbientVector) -> float:
    """Model product restricted to a common tangent space.

    Positive definite on tangent vectors of all three models (the
    hyperboloid's tangent spaces are spacelike).
    """
    _require_common_base(u, v)
    return float(space.product(u.components, v.components))


def project_tangent(space: AmbientSpace, point, v) -> AmbientVector:
    """Project a flat-coordinate vector onto the model tangent space at ``point``."""
    point = space.validate_point(np.asarray(point, dtype=float))
    return AmbientVector(space, point, space.project_tangent_raw(point, v))


def curvature_operator(
    space: AmbientSpace, X: AmbientVector, Y: AmbientVector, Z: AmbientVector
) -> AmbientVector:
    """Curvature of the space form applied to tangent vectors.

    Returns c(<Y,Z> X - <X,Z> Y); antisymmetric in (X, Y) and skew as a
    bilinear form in its last two slots.
    """
    _require_common_base(X, Y, Z)
    cyz = space.product(Y.components, Z.components)
    cxz = space.product(X.components, Z.components)
    comp = space.c * (cyz * X.components - cxz * Y.components)
    return AmbientVector(space, X.base, comp)
