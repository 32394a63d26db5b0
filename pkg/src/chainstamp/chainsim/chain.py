"""The simulated chain: mining, validation and confirmation counting.

Difficulty is a leading-zero-bit count on the block hash (simpler and
monotone compared to compact target encoding; sufficient at desk scale).
The nonce search is deterministic, starting at 0, so identical inputs mine
identical blocks and known-answer tests stay pinned.

Real-network reference figures, documented but not simulated: a public
proof-of-work network on this design runs on the order of thousands of
nodes (~6,500 at the scale this models) and reaches five-confirmation
finality in about an hour.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Optional, Sequence

from ..crypto import base58check_decode
from ..digests import Digest32, ZERO32
from ..errors import InvalidAddress
from .merkle import merkle_root
from .records import EMPTY_TX_ROOT, Block, Transaction, leading_zero_bits

MAX_DIFFICULTY_BITS = 28
DEFAULT_DIFFICULTY_BITS = 16
DEFAULT_GENESIS_TIME = 0

TYPICAL_NETWORK_NODES = 6_500
TYPICAL_FINALITY_SECONDS = 3_600


@dataclass(frozen=True)
class ValidationIssue:
    height: int
    kind: str  # pow | prev_hash | merkle_root | timestamp | height
    detail: str


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    issue: Optional[ValidationIssue] = None


@dataclass(frozen=True)
class BlockHeader:
    height: int
    block_hash: Digest32
    prev_hash: Digest32
    merkle_root: Digest32
    timestamp: int
    difficulty_bits: int
    nonce: int
    tx_count: int


def _expected_root(txs: Sequence[Transaction]) -> Digest32:
    if not txs:
        return EMPTY_TX_ROOT
    return merkle_root([tx.txid for tx in txs])


def validate_chain(blocks: Sequence[Block]) -> ValidationResult:
    """Check PoW, linkage, merkle consistency, timestamps and heights.

    Returns the first violation (lowest height, fixed check order) so
    failure reports are deterministic.
    """
    prev: Optional[Block] = None
    for index, block in enumerate(blocks):
        if block.height != index:
            return ValidationResult(
                False,
                ValidationIssue(block.height, "height", f"expected height {index}"),
            )
        if prev is None:
            if block.prev_hash != ZERO32:
                return ValidationResult(
                    False,
                    ValidationIssue(0, "prev_hash", "genesis prev_hash must be zero"),
                )
        elif block.prev_hash != prev.block_hash:
            return ValidationResult(
                False,
                ValidationIssue(
                    block.height, "prev_hash", "prev_hash does not match parent block hash"
                ),
            )
        if block.merkle_root != _expected_root(block.tx_list):
            return ValidationResult(
                False,
                ValidationIssue(
                    block.height, "merkle_root", "merkle root does not match transactions"
                ),
            )
        if prev is not None and block.timestamp < prev.timestamp:
            return ValidationResult(
                False,
                ValidationIssue(block.height, "timestamp", "timestamp earlier than parent"),
            )
        if leading_zero_bits(block.block_hash) < block.difficulty_bits:
            return ValidationResult(
                False,
                ValidationIssue(
                    block.height,
                    "pow",
                    f"hash has fewer than {block.difficulty_bits} leading zero bits",
                ),
            )
        prev = block
    return ValidationResult(True)


def _mine(
    height: int,
    prev_hash: Digest32,
    txs: tuple[Transaction, ...],
    timestamp: int,
    difficulty_bits: int,
) -> Block:
    root = _expected_root(txs)
    nonce = 0
    while True:
        candidate = Block(
            height=height,
            prev_hash=prev_hash,
            merkle_root=root,
            timestamp=timestamp,
            difficulty_bits=difficulty_bits,
            nonce=nonce,
            tx_list=txs,
        )
        if leading_zero_bits(candidate.block_hash) >= difficulty_bits:
            return candidate
        nonce += 1


class Chain:
    """Block list plus mempool; single-writer mutation, snapshot reads.

    Also implements the chain-client surface (submit_transaction,
    get_transaction, get_confirmations, get_block_header) that a real-node
    backend would offer.
    """

    def __init__(
        self,
        difficulty_bits: int = DEFAULT_DIFFICULTY_BITS,
        genesis_time: int = DEFAULT_GENESIS_TIME,
    ):
        if not 0 <= difficulty_bits <= MAX_DIFFICULTY_BITS:
            raise ValueError(
                f"difficulty_bits must be 0-{MAX_DIFFICULTY_BITS}, got {difficulty_bits}"
            )
        self.difficulty_bits = difficulty_bits
        self._lock = threading.RLock()
        self.mempool: list[Transaction] = []
        self.blocks: list[Block] = [
            _mine(0, ZERO32, (), genesis_time, difficulty_bits)
        ]

    @classmethod
    def from_blocks(cls, blocks: Sequence[Block], difficulty_bits: int) -> "Chain":
        """Adopt a persisted block list (restart path); it must validate."""
        if not blocks:
            raise ValueError("cannot adopt an empty block list")
        result = validate_chain(blocks)
        if not result.ok:
            issue = result.issue
            raise ValueError(
                f"persisted chain invalid at height {issue.height}: {issue.detail}"
            )
        chain = cls.__new__(cls)
        chain.difficulty_bits = difficulty_bits
        chain._lock = threading.RLock()
        chain.mempool = []
        chain.blocks = list(blocks)
        return chain

    # --- mutation (single writer) ---

    def build_transaction(self, address: str, dust: int = 1, fee: int = 10_000) -> Transaction:
        """Create the commitment transaction paying ``dust`` to ``address``.

        The address must round-trip Base58Check; simulated funding is
        coinbase-style, so no input selection happens.
        """
        try:
            base58check_decode(address)
        except ValueError as exc:
            raise InvalidAddress(f"cannot pay to undecodable address: {exc}") from exc
        tx = Transaction(outputs=((address, dust),), fee=fee)
        with self._lock:
            self.mempool.append(tx)
        return tx

    def mine_block(self, now: int) -> Block:
        """Append one block containing the whole mempool; may be empty.

        The timestamp is clamped up to the parent's so chains stay monotone
        even when test clocks jump backwards.
        """
        with self._lock:
            tip = self.blocks[-1]
            txs = tuple(self.mempool)
            block = _mine(
                height=tip.height + 1,
                prev_hash=tip.block_hash,
                txs=txs,
                timestamp=max(int(now), tip.timestamp),
                difficulty_bits=self.difficulty_bits,
            )
            self.blocks.append(block)
            self.mempool.clear()
            return block

    # --- reads ---

    @property
    def tip(self) -> Block:
        with self._lock:
            return self.blocks[-1]

    def snapshot(self) -> list[Block]:
        with self._lock:
            return list(self.blocks)

    def validate(self) -> ValidationResult:
        return validate_chain(self.snapshot())

    def find_transaction(self, txid: Digest32) -> Optional[tuple[Transaction, Block]]:
        """Locate a mined transaction and its containing block."""
        with self._lock:
            for block in self.blocks:
                for tx in block.tx_list:
                    if tx.txid == txid:
                        return tx, block
        return None

    def in_mempool(self, txid: Digest32) -> bool:
        with self._lock:
            return any(tx.txid == txid for tx in self.mempool)

    def confirmations(self, txid: Digest32) -> int:
        """1 for the tip block, +1 per block on top; 0 if pending or absent."""
        with self._lock:
            found = self.find_transaction(txid)
            if found is None:
                return 0
            _, block = found
            return self.blocks[-1].height - block.height + 1

    def get_block(self, block_hash: Digest32) -> Optional[Block]:
        with self._lock:
            for block in self.blocks:
                if block.block_hash == block_hash:
                    return block
        return None

    # --- chain-client surface ---

    def submit_transaction(self, tx: Transaction) -> Digest32:
        with self._lock:
            if not self.in_mempool(tx.txid) and self.find_transaction(tx.txid) is None:
                self.mempool.append(tx)
            return tx.txid

    def get_transaction(self, txid: Digest32) -> Optional[Transaction]:
        found = self.find_transaction(txid)
        if found is not None:
            return found[0]
        with self._lock:
            for tx in self.mempool:
                if tx.txid == txid:
                    return tx
        return None

    def get_confirmations(self, txid: Digest32) -> int:
        return self.confirmations(txid)

    def get_block_header(self, block_hash: Digest32) -> Optional[BlockHeader]:
        block = self.get_block(block_hash)
        if block is None:
            return None
        return BlockHeader(
            height=block.height,
            block_hash=block.block_hash,
            prev_hash=block.prev_hash,
            merkle_root=block.merkle_root,
            timestamp=block.timestamp,
            difficulty_bits=block.difficulty_bits,
            nonce=block.nonce,
            tx_count=len(block.tx_list),
        )
