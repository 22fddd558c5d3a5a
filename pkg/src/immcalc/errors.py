"""Exception types shared across the toolkit.

Every numerical-contract violation raises one of these rather than
silently repairing the data; the CLI maps them to exit status 2.
"""


class ImmcalcError(Exception):
    """Base class for all toolkit errors."""


class FrameMismatchError(ImmcalcError):
    """Ambient vectors combined at different base points ("frame mismatch")."""


class OffModelError(ImmcalcError):
    """A point failed the on-model tolerance of its ambient space."""


class DegenerateMetricError(ImmcalcError):
    """Induced metric singular or too ill-conditioned to trust."""


class BoundaryStencilError(ImmcalcError):
    """A finite-difference stencil left a non-periodic chart ("boundary stencil")."""


class MeanCurvatureVanishesError(ImmcalcError):
    """An operation needing the mean-curvature direction hit ||H|| <= eps_H."""


class FrameDegenerationError(ImmcalcError):
    """Mean curvature changes sign across the grid; residual undefined."""


class DegenerateDeformationError(ImmcalcError):
    """A deformation broke the immersion condition ("degenerate deformation")."""


class ConvergenceError(ImmcalcError):
    """An iterative routine exhausted its budget without meeting tolerance."""


class ConfigError(ImmcalcError):
    """Invalid or inconsistent run configuration."""
