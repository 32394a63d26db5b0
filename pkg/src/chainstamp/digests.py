"""Fixed-width digest value types.

``Digest32`` carries document, transaction and block identities; ``Digest20``
is the 20-byte intermediate of the address pipeline. Both are immutable,
ordered by raw byte value, and render as lowercase hex.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_HEX32 = re.compile(r"[0-9a-fA-F]{64}")
_HEX20 = re.compile(r"[0-9a-fA-F]{40}")


@dataclass(frozen=True, order=True)
class Digest32:
    """A 256-bit digest (32 raw bytes, 64 lowercase hex characters)."""

    raw: bytes

    def __post_init__(self) -> None:
        if not isinstance(self.raw, bytes):
            raise TypeError(f"Digest32 needs bytes, got {type(self.raw).__name__}")
        if len(self.raw) != 32:
            raise ValueError(f"Digest32 needs exactly 32 bytes, got {len(self.raw)}")

    @classmethod
    def from_hex(cls, s: str) -> "Digest32":
        """Parse 64 hex characters; mixed case accepted, whitespace rejected."""
        if not _HEX32.fullmatch(s):
            raise ValueError(f"not a 64-character hex digest: {s!r}")
        return cls(bytes.fromhex(s))

    @property
    def hex(self) -> str:
        return self.raw.hex()

    def __bytes__(self) -> bytes:
        return self.raw

    def __repr__(self) -> str:
        return f"Digest32({self.hex})"


@dataclass(frozen=True, order=True)
class Digest20:
    """A 160-bit digest (20 raw bytes), as produced by RIPEMD-160."""

    raw: bytes

    def __post_init__(self) -> None:
        if not isinstance(self.raw, bytes):
            raise TypeError(f"Digest20 needs bytes, got {type(self.raw).__name__}")
        if len(self.raw) != 20:
            raise ValueError(f"Digest20 needs exactly 20 bytes, got {len(self.raw)}")

    @classmethod
    def from_hex(cls, s: str) -> "Digest20":
        if not _HEX20.fullmatch(s):
            raise ValueError(f"not a 40-character hex digest: {s!r}")
        return cls(bytes.fromhex(s))

    @property
    def hex(self) -> str:
        return self.raw.hex()

    def __bytes__(self) -> bytes:
        return self.raw

    def __repr__(self) -> str:
        return f"Digest20({self.hex})"


ZERO32 = Digest32(b"\x00" * 32)
