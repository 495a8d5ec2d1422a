"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class ResourceError(RuntimeError):
    """A configured ceiling or budget (size limit, rejection budget) was exceeded."""
