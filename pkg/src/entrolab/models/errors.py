"""Exception hierarchy shared by services and the CLI."""


class EntrolabError(Exception):
    """Base class for every error raised by entrolab.

    Each subclass carries a stable ``code`` used by JSON error output.
    """

    code = "ENTROLAB_ERROR"

    def __init__(self, message: str, details: str | None = None) -> None:
        self.message = message
        self.details = details
        super().__init__(message)


class FamilyMismatch(EntrolabError):
    """Raised when elements or endomorphisms from different families are combined."""

    code = "FAMILY_MISMATCH"


class InvalidElement(EntrolabError):
    """Raised when an element payload is not in canonical form for its family."""

    code = "INVALID_ELEMENT"


class InvalidTable(EntrolabError):
    """Raised when a Cayley table fails the group axioms."""

    code = "INVALID_TABLE"


class BudgetExceeded(EntrolabError):
    """Raised when a computation outgrows its configured budget."""

    code = "BUDGET_EXCEEDED"

    def __init__(self, budget: int, reached: int, what: str) -> None:
        self.budget = budget
        self.reached = reached
        super().__init__(f"{what} exceeded budget {budget} (reached {reached})")


class OrderBudgetExceeded(BudgetExceeded):
    code = "ORDER_BUDGET_EXCEEDED"

    def __init__(self, budget: int, reached: int) -> None:
        super().__init__(budget, reached, "element order")


class ClosureBudgetExceeded(BudgetExceeded):
    code = "CLOSURE_BUDGET_EXCEEDED"

    def __init__(self, budget: int, reached: int) -> None:
        super().__init__(budget, reached, "subgroup closure")


class ProductBudgetExceeded(BudgetExceeded):
    code = "PRODUCT_BUDGET_EXCEEDED"

    def __init__(self, budget: int, reached: int) -> None:
        super().__init__(budget, reached, "set product")


class NotContained(EntrolabError):
    code = "NOT_CONTAINED"


class NotNormal(EntrolabError):
    code = "NOT_NORMAL"


class NotHomomorphism(EntrolabError):
    """Raised when a declared endomorphism or projection fails the homomorphism check."""

    code = "NOT_HOMOMORPHISM"


class UnsupportedEndo(EntrolabError):
    """Raised when an endomorphism kind is not defined on a family."""

    code = "UNSUPPORTED_ENDO"


class NotInvariant(EntrolabError):
    code = "NOT_INVARIANT"


class NotCompatible(EntrolabError):
    """Raised when an induced map does not commute with the quotient projection."""

    code = "NOT_COMPATIBLE"


class UnsupportedQuotient(EntrolabError):
    """Raised when no quotient model is known for a family and subgroup."""

    code = "UNSUPPORTED_QUOTIENT"


class UnsupportedRestriction(EntrolabError):
    code = "UNSUPPORTED_RESTRICTION"


class NotCentral(EntrolabError):
    code = "NOT_CENTRAL"


class TableTooShort(EntrolabError):
    code = "TABLE_TOO_SHORT"


class NotStabilized(EntrolabError):
    code = "NOT_STABILIZED"


class ScenarioError(EntrolabError):
    """Raised when a scenario file fails validation."""

    code = "SCENARIO_ERROR"
