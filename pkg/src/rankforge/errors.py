"""Exception hierarchy shared by all rankforge modules."""


class RankforgeError(Exception):
    """Base class for every error raised by this package."""


class InvariantError(RankforgeError):
    """An internal consistency check failed; this indicates a bug, not bad input."""
