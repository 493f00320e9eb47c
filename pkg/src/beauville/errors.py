"""Exception types shared across the package."""


class BeauvilleError(Exception):
    """Base class for all errors raised by this package."""


class InvalidLambda(BeauvilleError):
    """The twist residue is not a unit, or its order does not divide p^n."""


class NotAGroup(BeauvilleError):
    """A Cayley table or matrix closure failed the group-axiom audit."""


class ClosureCapExceeded(BeauvilleError):
    """Matrix closure grew past the configured element cap."""


class NotAPGroup(BeauvilleError):
    """An operation requiring prime-power order was given another group."""


class MismatchedGroups(BeauvilleError):
    """Elements or structures do not belong to the group they were paired with."""


class BudgetExceeded(BeauvilleError):
    """A search ran out of candidate or time budget.

    ``search`` itself never raises this; it returns a result flagged
    non-exhaustive.  The class exists for callers that want to insist.
    """


class OrderPreservingLiftNotFound(BeauvilleError):
    """No fiber pair lifts the first triple with all three orders preserved."""


class VerificationFailed(BeauvilleError):
    """Bug sentinel: a construction the theory guarantees failed to verify."""


class UnsupportedFamily(BeauvilleError):
    """The group is outside the families the construction is proven for."""


class IncompatibleLambda(BeauvilleError):
    """A twist rule violates the congruences needed for a reduction map."""


class NotDivisible(BeauvilleError):
    """Bug sentinel: the power-map correction sum was not divisible by p."""


class PreconditionViolated(BeauvilleError):
    """Arguments outside the range where the operation makes a claim."""


class OddPrimeOnly(BeauvilleError):
    """The classification invariant is only defined for odd primes."""


class WitnessSearchFailed(BeauvilleError):
    """Bug sentinel: invariants agree but no intertwining unit was found."""


class InconsistentCover(BeauvilleError):
    """Branch data whose Riemann-Hurwitz count is not an even integer >= -2."""
