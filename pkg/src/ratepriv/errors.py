"""Exception types shared across the toolkit."""


class ValidationError(ValueError):
    """An input object (pmf, joint, kernel, file) violates its invariants."""


class AlphabetMismatchError(ValidationError):
    """Two objects that must share an alphabet do not."""


class InstanceTooLargeError(RuntimeError):
    """A guarded exhaustive computation refuses to run at this problem size."""
