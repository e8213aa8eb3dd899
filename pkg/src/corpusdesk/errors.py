"""Exception types shared across the engine."""


class ConfigurationError(Exception):
    """A component was wired with incompatible settings (e.g. dim mismatch)."""


class TransportError(Exception):
    """A remote call failed after exhausting retries."""


class NotFoundError(Exception):
    """A referenced entity (sentence, bookmark, token) does not exist."""
