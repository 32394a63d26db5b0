"""Exception types shared across the package.

Kept in one module so callers can catch either the narrow class or the
common :class:`ChainstampError` base without import cycles.
"""


class ChainstampError(Exception):
    """Base class for all errors raised by this package."""


# --- base58 / encoding ---

class InvalidPayloadLength(ChainstampError, ValueError):
    """Base58Check payload outside the accepted 1-64 byte range."""


class InvalidCharacter(ChainstampError, ValueError):
    """String contains a character outside the base58 alphabet."""


class ChecksumMismatch(ChainstampError, ValueError):
    """Base58Check checksum did not validate."""


# --- aggregation windows ---

class EmptyHashSet(ChainstampError, ValueError):
    """Aggregation requires at least one digest."""


class WindowStillOpen(ChainstampError):
    """Attempt to close a commitment window before its interval elapsed."""


class WindowAlreadyClosed(ChainstampError):
    """Attempt to close a commitment window a second time."""


# --- chain simulation ---

class InvalidAddress(ChainstampError, ValueError):
    """Transaction output address failed Base58Check decoding."""


class EmptyLeafList(ChainstampError, ValueError):
    """Merkle root of zero leaves is undefined."""


class ChainFileError(ChainstampError):
    """Chain persistence file is malformed (bad magic, version or truncation)."""


# --- ledger store ---

class InconsistentAddress(ChainstampError):
    """Recorded address does not match the batch's derived address."""


class RecordNotFound(ChainstampError, KeyError):
    """No stamp record exists for the requested document hash."""


class NotYetMined(ChainstampError):
    """Proof export requested before the commitment transaction was mined."""


# --- reference timestamp authority ---

class SigningFailure(ChainstampError):
    """The signing backend failed to produce a signature."""


# --- configuration ---

class ConfigError(ChainstampError):
    """Service configuration is invalid or unreadable."""
