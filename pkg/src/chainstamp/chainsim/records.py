"""Canonical wire records for the simulated chain.

Transaction serialization is bit-exact and length-prefixed:
``varint(field count)`` then per field ``varint(length) || bytes``, fields in
order [output_address_utf8, output_amount_be8, fee_be8]. The txid is the
double SHA-256 of those bytes. Varints use the bitcoin compact-size layout.

Block headers are fixed-width field concatenation:
``height_be8 || prev_hash || merkle_root || timestamp_be8 || bits_be4 ||
nonce_be8`` (92 bytes); the block hash is the double SHA-256 of the header.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

from ..crypto import double_sha256
from ..digests import Digest32

HEADER_SIZE = 92

# Merkle root recorded for a block with no transactions.
EMPTY_TX_ROOT = Digest32(b"\x00" * 32)


def write_varint(n: int) -> bytes:
    if n < 0:
        raise ValueError("varint cannot encode negative values")
    if n < 0xFD:
        return bytes([n])
    if n <= 0xFFFF:
        return b"\xfd" + struct.pack("<H", n)
    if n <= 0xFFFFFFFF:
        return b"\xfe" + struct.pack("<I", n)
    return b"\xff" + struct.pack("<Q", n)


def read_varint(raw: bytes, offset: int) -> tuple[int, int]:
    """Decode a varint at ``offset``; returns (value, next offset)."""
    if offset >= len(raw):
        raise ValueError("truncated varint")
    first = raw[offset]
    if first < 0xFD:
        return first, offset + 1
    width = {0xFD: 2, 0xFE: 4, 0xFF: 8}[first]
    end = offset + 1 + width
    if end > len(raw):
        raise ValueError("truncated varint")
    return int.from_bytes(raw[offset + 1 : end], "little"), end


@dataclass(frozen=True)
class Transaction:
    """One commitment transaction: a single dust output plus a declared fee.

    ``memo_inputs`` notes the simulated funding source; it is not part of the
    canonical serialization and does not influence the txid.
    """

    outputs: tuple[tuple[str, int], ...]
    fee: int
    memo_inputs: str = "coinbase"

    def __post_init__(self) -> None:
        if len(self.outputs) != 1:
            raise ValueError("simulated transactions carry exactly one output")
        address, amount = self.outputs[0]
        if amount < 1:
            raise ValueError("output amount must be at least 1 satoshi")
        if self.fee < 0:
            raise ValueError("fee cannot be negative")
        if not address:
            raise ValueError("output address cannot be empty")

    def serialize(self) -> bytes:
        address, amount = self.outputs[0]
        fields = [
            address.encode("utf-8"),
            struct.pack(">Q", amount),
            struct.pack(">Q", self.fee),
        ]
        out = [write_varint(len(fields))]
        for f in fields:
            out.append(write_varint(len(f)))
            out.append(f)
        return b"".join(out)

    @property
    def txid(self) -> Digest32:
        return double_sha256(self.serialize())

    @classmethod
    def parse(cls, raw: bytes) -> "Transaction":
        count, off = read_varint(raw, 0)
        if count != 3:
            raise ValueError(f"expected 3 transaction fields, got {count}")
        fields = []
        for _ in range(count):
            length, off = read_varint(raw, off)
            end = off + length
            if end > len(raw):
                raise ValueError("truncated transaction field")
            fields.append(raw[off:end])
            off = end
        if off != len(raw):
            raise ValueError("trailing bytes after transaction fields")
        address = fields[0].decode("utf-8")
        if len(fields[1]) != 8 or len(fields[2]) != 8:
            raise ValueError("amount and fee must be 8-byte big-endian")
        amount = struct.unpack(">Q", fields[1])[0]
        fee = struct.unpack(">Q", fields[2])[0]
        return cls(outputs=((address, amount),), fee=fee)


@dataclass(frozen=True)
class Block:
    height: int
    prev_hash: Digest32
    merkle_root: Digest32
    timestamp: int
    difficulty_bits: int
    nonce: int
    tx_list: tuple[Transaction, ...] = field(default_factory=tuple)

    def header_bytes(self) -> bytes:
        return (
            struct.pack(">Q", self.height)
            + self.prev_hash.raw
            + self.merkle_root.raw
            + struct.pack(">Q", self.timestamp)
            + struct.pack(">I", self.difficulty_bits)
            + struct.pack(">Q", self.nonce)
        )

    @property
    def block_hash(self) -> Digest32:
        return double_sha256(self.header_bytes())

    def serialize(self) -> bytes:
        out = [self.header_bytes(), write_varint(len(self.tx_list))]
        for tx in self.tx_list:
            raw = tx.serialize()
            out.append(write_varint(len(raw)))
            out.append(raw)
        return b"".join(out)

    @classmethod
    def parse(cls, raw: bytes) -> "Block":
        if len(raw) < HEADER_SIZE:
            raise ValueError("block record shorter than its header")
        height = struct.unpack(">Q", raw[0:8])[0]
        prev_hash = Digest32(raw[8:40])
        merkle_root = Digest32(raw[40:72])
        timestamp = struct.unpack(">Q", raw[72:80])[0]
        bits = struct.unpack(">I", raw[80:84])[0]
        nonce = struct.unpack(">Q", raw[84:92])[0]
        count, off = read_varint(raw, HEADER_SIZE)
        txs = []
        for _ in range(count):
            length, off = read_varint(raw, off)
            end = off + length
            if end > len(raw):
                raise ValueError("truncated transaction record")
            txs.append(Transaction.parse(raw[off:end]))
            off = end
        if off != len(raw):
            raise ValueError("trailing bytes after block transactions")
        return cls(
            height=height,
            prev_hash=prev_hash,
            merkle_root=merkle_root,
            timestamp=timestamp,
            difficulty_bits=bits,
            nonce=nonce,
            tx_list=tuple(txs),
        )


def leading_zero_bits(digest: Digest32) -> int:
    """Number of leading zero bits in a 256-bit digest."""
    value = int.from_bytes(digest.raw, "big")
    if value == 0:
        return 256
    return 256 - value.bit_length()
