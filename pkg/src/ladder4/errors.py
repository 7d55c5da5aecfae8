"""Exception hierarchy for ladder4."""


class LadderError(Exception):
    """Base class for all errors raised by ladder4."""


class InvalidParameter(LadderError, ValueError):
    """A parameter is non-finite or otherwise malformed."""


class InvalidRabi(InvalidParameter):
    """A Rabi frequency is negative."""


class InvalidDecay(InvalidParameter):
    """A decay constant is not strictly positive."""


class SingularSystem(LadderError, ArithmeticError):
    """The trace-constrained steady-state system has no unique solution."""


class StepTooLarge(LadderError, ArithmeticError):
    """Fixed-step integration diverged (trace drift or non-finite state)."""


class ResonantDenominator(LadderError, ArithmeticError):
    """A closed-form denominator vanishes relative to its numerator scale."""


class DivergentApproximation(LadderError, ArithmeticError):
    """An unregularised resonance approximation is evaluated on its pole."""


class DomainError(LadderError, ValueError):
    """A closed form is evaluated outside the parameter domain it holds on."""


class TooFewSamples(LadderError, ValueError):
    """A profile is too short for peak analysis."""
