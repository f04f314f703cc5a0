"""Exception types shared by the numeration, ordering, codes and exchange layers."""


class NegBetaError(Exception):
    """Base class for all library errors."""


class BoundaryAmbiguous(NegBetaError):
    """A floor decision could not be resolved at the available precision.

    Raised by the approximate backend when the enclosure of ``beta*x - l``
    still straddles an integer after refinement up to the precision cap, and
    by comparisons that would need more digits than are known.
    """

    def __init__(self, message, digits_known=None):
        super().__init__(message)
        self.digits_known = digits_known


class IncomparablePrefix(NegBetaError):
    """Strict comparison of two finite words where one is a proper prefix of the other."""


class MalformedCharacteristic(NegBetaError):
    """The digit sequence violates self-admissibility and cannot be a characteristic sequence."""


class NotInImage(NegBetaError):
    """The word is not in the image of the substitution being inverted."""


class NoConvergence(NegBetaError):
    """A bisection ran out of iterations before reaching the requested tolerance."""


class TruncationInsufficient(NegBetaError):
    """A finite prefix or enumeration is too short for the requested quantity."""


class BudgetExceeded(NegBetaError):
    """An exhaustive enumeration would exceed its configured size cap."""


class NotEventuallyPeriodic(NegBetaError):
    """A finite-state construction was requested for a sequence with no known period."""


class InvalidBase(NegBetaError):
    """A base descriptor is malformed or does not isolate a single root below -1."""
