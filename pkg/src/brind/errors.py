"""Exception hierarchy shared by all brind modules."""


class BrindError(Exception):
    """Base class for all errors raised by brind."""


class InputError(BrindError):
    """Malformed or inconsistent user input (bad file, bad selector, ...)."""


class CapacityError(BrindError):
    """A configured size bound was exceeded."""

    def __init__(self, message, bound):
        super().__init__(f"{message} (bound {bound})")
        self.bound = bound


class ConsistencyError(BrindError):
    """Internal invariant violated; indicates a bug, not bad input."""
