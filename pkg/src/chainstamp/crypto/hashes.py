"""Hash primitives: SHA-256, double SHA-256, RIPEMD-160 and hash160.

SHA-256 comes from ``hashlib``; RIPEMD-160 from the local implementation.
All functions are pure and safe under unrestricted concurrency.
"""

from __future__ import annotations

import hashlib
from typing import BinaryIO

from ..digests import Digest20, Digest32
from .ripemd160 import ripemd160_digest

_CHUNK = 1 << 20


def sha256(data: bytes) -> Digest32:
    """FIPS 180-4 SHA-256. Empty input is allowed."""
    return Digest32(hashlib.sha256(data).digest())


def double_sha256(data: bytes) -> Digest32:
    """SHA-256 applied twice; used for txids, block hashes and checksums."""
    return Digest32(hashlib.sha256(hashlib.sha256(data).digest()).digest())


def ripemd160(data: bytes) -> Digest20:
    return Digest20(ripemd160_digest(data))


def hash160(data: bytes) -> Digest20:
    """RIPEMD-160 of SHA-256; the 20-byte payload of a p2pkh-style address."""
    return Digest20(ripemd160_digest(hashlib.sha256(data).digest()))


def sha256_of_stream(fp: BinaryIO) -> Digest32:
    """Incremental SHA-256 over a binary stream, read in 1 MiB chunks."""
    h = hashlib.sha256()
    while True:
        chunk = fp.read(_CHUNK)
        if not chunk:
            break
        h.update(chunk)
    return Digest32(h.digest())
