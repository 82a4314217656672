"""Exception hierarchy shared by every module of the toolkit."""


class InvalidInputError(ValueError):
    """Bad arguments: mismatched grids, out-of-range settings, wrong branch side."""


class NoBranchError(InvalidInputError):
    """No nontrivial pitchfork root exists for the requested (g, beta, k)."""


class WrongSideError(InvalidInputError):
    """Continuation target lies on the side of beta_k where the branch does not exist."""


class NumericalError(RuntimeError):
    """Base class for solver failures."""


class EigensolverError(NumericalError):
    pass


class MaxIterationsExceeded(NumericalError):
    pass


class SingularJacobianError(NumericalError):
    """Tiny pivot during elimination; usually means beta sits on a critical point."""


class StepUnderflowError(NumericalError):
    pass


class ContinuationStallError(NumericalError):
    pass


class ImplicitStepDivergence(NumericalError):
    """Fixed-point iteration of the implicit time step did not converge; try a smaller dt."""
