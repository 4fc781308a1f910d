"""Exception types shared across the library."""


class HashlabError(Exception):
    """Base class for all library-specific errors."""


class InvalidDescriptor(HashlabError):
    """A scheme descriptor has inconsistent or out-of-range fields."""


class UnsupportedConfig(HashlabError):
    """A descriptor is well-formed but the configuration cannot be built
    (e.g. double tabulation on 64-bit keys, whose tables do not fit in
    memory)."""


class Underfull(HashlabError):
    """A sketch has seen fewer distinct keys than its capacity k.

    Carries the exact number of stored keys so callers can fall back to it.
    """

    def __init__(self, count: int):
        super().__init__(f"sketch holds only {count} distinct keys")
        self.count = count


class SeedMismatch(HashlabError):
    """Two sketches were built with incompatible hash functions or shapes."""


class InvalidParams(HashlabError):
    """Workload or experiment parameters are out of range."""
