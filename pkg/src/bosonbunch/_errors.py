class ValidationError(ValueError):
    """Input violates a documented precondition or type invariant."""


class InternalConsistencyError(RuntimeError):
    """Two routes that must agree did not; indicates a bug, not bad input."""
