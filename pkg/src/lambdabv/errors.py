"""Exception hierarchy.

Two families matter to callers (and to the CLI exit codes):

* ``UsageError`` -- the request itself is malformed or refused (bad arguments,
  invalid step function, exact mode refused).  CLI exit status 2.
* ``DomainError`` -- the request is well formed but the mathematics says no
  (degenerate modulus, criterion not violated, failed certification).
  CLI exit status 1.
"""


class LambdaBVError(Exception):
    """Base class of every error raised by this package."""


class UsageError(LambdaBVError, ValueError):
    pass


class ArgumentError(UsageError):
    """An argument lies outside the documented domain."""


class ConstructionError(UsageError):
    """A step function, sequence or modulus could not be built."""


class ExactModeRefused(UsageError):
    """The breakpoint grid is too large for exhaustive variation search."""


class GridTooLarge(UsageError):
    """The brute-force grid oracle refuses the requested dimension."""


class DomainError(LambdaBVError):
    pass


class DivergenceNotWitnessed(DomainError):
    pass


class DegenerateModulus(DomainError):
    """The modulus vanishes at a point where it is used as a divisor."""


class CorollaryInapplicable(DomainError):
    pass


class CriterionNotViolated(DomainError):
    pass


class CertificationFailure(DomainError):
    pass
