"""Base58 and Base58Check, bitcoin alphabet.

Base58Check wraps ``version || payload`` with the first four bytes of its
double SHA-256 as a checksum; a single-character substitution therefore
survives decoding with probability about 2**-32.
"""

from __future__ import annotations

import hashlib

from ..errors import ChecksumMismatch, InvalidCharacter, InvalidPayloadLength

ALPHABET = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz"
_INDEX = {c: i for i, c in enumerate(ALPHABET)}

MIN_PAYLOAD = 1
MAX_PAYLOAD = 64


def b58encode(raw: bytes) -> str:
    """Plain base58; leading zero bytes become leading '1' characters."""
    stripped = len(raw) - len(raw.lstrip(b"\x00"))
    acc = int.from_bytes(raw, "big")
    out = []
    while acc > 0:
        acc, rem = divmod(acc, 58)
        out.append(ALPHABET[rem])
    return "1" * stripped + "".join(reversed(out))


def b58decode(s: str) -> bytes:
    """Inverse of :func:`b58encode`; rejects characters outside the alphabet."""
    acc = 0
    for c in s:
        try:
            acc = acc * 58 + _INDEX[c]
        except KeyError:
            raise InvalidCharacter(f"character {c!r} is not in the base58 alphabet") from None
    stripped = len(s) - len(s.lstrip("1"))
    body = acc.to_bytes((acc.bit_length() + 7) // 8, "big") if acc else b""
    return b"\x00" * stripped + body


def _checksum(raw: bytes) -> bytes:
    return hashlib.sha256(hashlib.sha256(raw).digest()).digest()[:4]


def base58check_encode(version: int, payload: bytes) -> str:
    """Base58Check of one version byte plus a 1-64 byte payload."""
    if not 0 <= version <= 0xFF:
        raise ValueError(f"version byte out of range: {version}")
    if not MIN_PAYLOAD <= len(payload) <= MAX_PAYLOAD:
        raise InvalidPayloadLength(
            f"payload must be {MIN_PAYLOAD}-{MAX_PAYLOAD} bytes, got {len(payload)}"
        )
    body = bytes([version]) + payload
    return b58encode(body + _checksum(body))


def base58check_decode(s: str) -> tuple[int, bytes]:
    """Recover (version, payload); raises unless the 4-byte checksum validates."""
    raw = b58decode(s)
    if len(raw) < 5:
        raise ChecksumMismatch(f"decoded value too short to carry a checksum: {len(raw)} bytes")
    body, check = raw[:-4], raw[-4:]
    if _checksum(body) != check:
        raise ChecksumMismatch(f"checksum mismatch for {s!r}")
    return body[0], body[1:]
