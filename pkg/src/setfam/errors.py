"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the domain an operation is defined on."""


class FormatError(ValueError):
    """Malformed family text or label."""


class SearchLimitError(DomainError):
    """A search problem exceeds the sizes the engines are allowed to attempt."""


class SharpPairError(DomainError):
    """An (i, n-1)-sharp pair blocks the reduction to n-1; carries the pair."""

    def __init__(self, message, pair):
        super().__init__(message)
        self.pair = pair


class CounterexampleError(AssertionError):
    """A computation contradicted a proven statement. Carries the witness."""

    def __init__(self, message, witness):
        super().__init__(f"{message}: {witness!r}")
        self.witness = witness
