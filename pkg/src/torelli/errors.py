"""Exception types shared by every module."""


class TorelliError(Exception):
    """Base class for library errors."""


class ValidationError(TorelliError, ValueError):
    """Input violates a structural invariant (unknown id, bad length, unstable graph...)."""


class ComputationalLimitError(TorelliError, RuntimeError):
    """A search or enumeration exceeded its configured cap."""

    def __init__(self, what, limit):
        super().__init__(f"{what} exceeded the limit of {limit}")
        self.what = what
        self.limit = limit
