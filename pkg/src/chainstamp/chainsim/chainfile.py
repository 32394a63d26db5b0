"""Append-only chain persistence.

One record per block: 4-byte magic 0x54535348 ("TSSH"), a version byte
0x01, a varint payload length, then the block's canonical serialization.
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import Sequence

from ..errors import ChainFileError
from .records import Block, read_varint, write_varint

RECORD_MAGIC = 0x54535348
RECORD_VERSION = 0x01

_MAGIC_BYTES = struct.pack(">I", RECORD_MAGIC)


def _record(block: Block) -> bytes:
    payload = block.serialize()
    return _MAGIC_BYTES + bytes([RECORD_VERSION]) + write_varint(len(payload)) + payload


def append_block(path: Path, block: Block) -> None:
    with open(path, "ab") as fp:
        fp.write(_record(block))
        fp.flush()


def write_chain(path: Path, blocks: Sequence[Block]) -> None:
    with open(path, "wb") as fp:
        for block in blocks:
            fp.write(_record(block))
        fp.flush()


def read_chain(path: Path) -> list[Block]:
    """Parse every record; raises :class:`ChainFileError` on structural damage."""
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise ChainFileError(f"cannot read chain file: {exc}") from exc

    blocks: list[Block] = []
    off = 0
    while off < len(raw):
        if raw[off : off + 4] != _MAGIC_BYTES:
            raise ChainFileError(f"bad record magic at offset {off}")
        off += 4
        if off >= len(raw) or raw[off] != RECORD_VERSION:
            raise ChainFileError(f"unsupported record version at offset {off}")
        off += 1
        try:
            length, off = read_varint(raw, off)
        except ValueError as exc:
            raise ChainFileError(str(exc)) from exc
        end = off + length
        if end > len(raw):
            raise ChainFileError(f"truncated block record at offset {off}")
        try:
            blocks.append(Block.parse(raw[off:end]))
        except ValueError as exc:
            raise ChainFileError(f"malformed block at offset {off}: {exc}") from exc
        off = end
    return blocks
