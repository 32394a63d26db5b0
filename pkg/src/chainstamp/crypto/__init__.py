"""Cryptographic primitives: hashes, hash160 and Base58Check."""

from .base58 import (
    ALPHABET,
    b58decode,
    b58encode,
    base58check_decode,
    base58check_encode,
)
from .hashes import double_sha256, hash160, ripemd160, sha256, sha256_of_stream

__all__ = [
    "ALPHABET",
    "b58decode",
    "b58encode",
    "base58check_decode",
    "base58check_encode",
    "double_sha256",
    "hash160",
    "ripemd160",
    "sha256",
    "sha256_of_stream",
]
