"""Error types shared across the package."""


class DomainError(ValueError):
    """A parameter is outside the domain an operation is defined on
    (field parameter not square-free, bound too small, ...)."""


class ContractError(ValueError):
    """A caller violated a documented precondition."""


class CapacityError(ArithmeticError):
    """A computation exceeded the range it can be carried out in exactly."""
