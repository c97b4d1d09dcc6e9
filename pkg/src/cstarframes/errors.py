"""Exception hierarchy shared across the package."""


class CStarFramesError(Exception):
    """Base class for every error raised by this package."""


class DescriptorMismatchError(CStarFramesError):
    """Operands belong to incompatible algebras or modules."""


class NotPositiveError(CStarFramesError):
    """A positive element or operator was required."""


class NotSelfAdjointError(CStarFramesError):
    """A self-adjoint operator was required."""


class SingularError(CStarFramesError):
    """Inversion of a (numerically) singular element was attempted."""


class NotInGlPlusError(CStarFramesError):
    """Operator is not positive-invertible, so no controller certificate."""


class NotAFrameError(CStarFramesError):
    """The vector family fails the frame diagnostics."""


class NotSurjectiveError(CStarFramesError):
    """A surjective operator was required."""


class NonCommutingError(CStarFramesError):
    """Two operators required to commute do not, beyond tolerance."""


class NotMultiplicationOperatorError(CStarFramesError):
    """Operator is not multiplication by a positive algebra element."""


class NotCommutativeError(CStarFramesError):
    """Operation needs the commutative (diagonal, rank-1) setting."""


class MaxIterExceededError(CStarFramesError):
    """Fixed-point iteration did not reach the residual target."""


class ScenarioError(CStarFramesError):
    """Base class for scenario input problems (CLI exit code 2)."""


class ScenarioParseError(ScenarioError):
    """Scenario file is not syntactically valid."""


class ScenarioValidationError(ScenarioError):
    """Scenario file parsed but a field is missing or invalid."""
