"""Turning an aggregated hash into a pay-to-public-key-hash style address.

The aggregated hash enters the pipeline at the public-key position:
``payload = RIPEMD-160(SHA-256(aggregated))``. No private key for the result
is known to anyone, so the dust sent there is deliberately unspendable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .crypto import base58check_encode, hash160
from .digests import Digest20, Digest32

MAINNET_VERSION = 0x00
TESTNET_VERSION = 0x6F


@dataclass(frozen=True)
class BitcoinAddress:
    version: int
    payload: Digest20
    encoded: str


def derive_address(aggregated: Digest32, version: int = MAINNET_VERSION) -> BitcoinAddress:
    """Deterministically derive the commitment address for an aggregated hash."""
    payload = hash160(aggregated.raw)
    encoded = base58check_encode(version, payload.raw)
    return BitcoinAddress(version=version, payload=payload, encoded=encoded)
