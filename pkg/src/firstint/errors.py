"""Exception types shared across the package."""


class FirstIntError(Exception):
    """Base class for all package errors."""


# --- polynomial / rational kernel ---

class DivisionByZeroPoly(FirstIntError, ZeroDivisionError):
    pass


class NotDivisible(FirstIntError):
    """Exact polynomial division requested but divisor does not divide."""


class BothZero(FirstIntError):
    """gcd(0, 0) requested."""


class ExponentOverflow(FirstIntError):
    """Per-variable exponent exceeded the hard guardrail (2**15)."""


class MixedExtensions(FirstIntError):
    """Arithmetic between elements of different algebraic extensions."""


class NotInvertible(FirstIntError):
    """Division by a non-invertible element of an extension."""


class Inconsistent(FirstIntError):
    """Linear system has no solution."""


class SingularImplicitDerivative(FirstIntError):
    """Implicit differentiation hit a zero of the minimal polynomial's s-derivative."""


# --- parser ---

class ExprSyntaxError(FirstIntError, ValueError):
    """Malformed input text; carries the 0-based position of the offender."""

    def __init__(self, message, position):
        super().__init__("%s (at position %d)" % (message, position))
        self.position = position


class NotRational(FirstIntError, ValueError):
    """The right-hand side does not simplify to a ratio of polynomials."""


class ZeroDenominator(FirstIntError, ZeroDivisionError):
    pass


# --- searches ---

class BudgetExceeded(FirstIntError):
    """Time budget ran out; partial results may be attached."""

    def __init__(self, message="time budget exceeded", partial=None):
        super().__init__(message)
        self.partial = partial


class BoundsTooLarge(FirstIntError):
    """Brute-force enumeration would be astronomically large."""


class DegSUnsupported(FirstIntError):
    """Defining polynomial has degree 0 or >= 3 in the auxiliary variable."""


class LeadingCoeffZero(FirstIntError):
    """Quadratic solve with an identically zero leading coefficient."""


class NoSolvableP(FirstIntError):
    """Eigenpolynomials were found but none has auxiliary degree 1 or 2."""


class NoExponentSolution(FirstIntError):
    """The exponent-matching linear system is inconsistent at these bounds."""


# --- quadrature / verification ---

class Unintegrable(FirstIntError):
    """Integrand falls outside the restricted rule table."""

    def __init__(self, message, offender=None):
        super().__init__(message)
        self.offender = offender


class IntegratorIncomplete(FirstIntError):
    """Some quadrature stage failed; verified (S, R) plus skeleton returned."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class UnsupportedNode(FirstIntError):
    pass


class ShortcutInapplicable(FirstIntError):
    """The symmetry shortcut's term table does not cover this input."""

    def __init__(self, message, offender=None):
        super().__init__(message)
        self.offender = offender


class VerificationFailed(FirstIntError):
    """A computed object failed its exact residual check."""


# --- numerics ---

class SingularityHit(FirstIntError):
    """Trajectory approached a zero of N or a radical branch point."""


class DomainError(FirstIntError, ValueError):
    """Initial condition leaves a radical or logarithm undefined."""
