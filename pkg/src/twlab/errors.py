class InputError(ValueError):
    """Malformed or out-of-contract input (bad vertex ids, broken invariants,
    unparseable files)."""


class GuardError(InputError):
    """Instance exceeds a size guard; lift with an explicit override."""
