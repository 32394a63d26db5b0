"""Durable record of which hashes went into which transaction.

Storage is a single append-only JSON-lines log with an in-memory index
rebuilt on startup; the chain, not this store, is the trust anchor, so
recovery stays trivial. Proof bundles exported from here are self-contained:
they verify with no access to the service at all.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional

from .address import derive_address
from .aggregator import CommitmentBatch, aggregate
from .chainsim.chain import Chain
from .digests import Digest32
from .errors import InconsistentAddress, NotYetMined, RecordNotFound
from .timefmt import format_utc

DEFAULT_FINALITY_DEPTH = 5

PROOF_FORMAT_VERSION = 1


class StampStatus(str, Enum):
    PENDING = "pending"
    COMMITTED = "committed"
    FINAL = "final"


@dataclass(frozen=True)
class StampRecord:
    document_hash: Digest32
    window_id: int
    batch_hashes: tuple[Digest32, ...]
    aggregated_hash: Digest32
    address: str
    txid: Digest32
    status: StampStatus


@dataclass(frozen=True)
class ProofBundle:
    """Everything needed to verify one document's timestamp independently."""

    format_version: int
    document_hash: Digest32
    batch_hashes: tuple[Digest32, ...]
    aggregated_hash: Digest32
    address: str
    txid: Digest32
    block_hash: Digest32
    block_height: int
    block_time: str
    confirmations_at_export: int

    def to_dict(self) -> dict:
        return {
            "format_version": self.format_version,
            "document_hash": self.document_hash.hex,
            "batch_hashes": [h.hex for h in self.batch_hashes],
            "aggregated_hash": self.aggregated_hash.hex,
            "address": self.address,
            "txid": self.txid.hex,
            "block_hash": self.block_hash.hex,
            "block_height": self.block_height,
            "block_time": self.block_time,
            "confirmations_at_export": self.confirmations_at_export,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "ProofBundle":
        return cls(
            format_version=int(data["format_version"]),
            document_hash=Digest32.from_hex(data["document_hash"]),
            batch_hashes=tuple(Digest32.from_hex(h) for h in data["batch_hashes"]),
            aggregated_hash=Digest32.from_hex(data["aggregated_hash"]),
            address=str(data["address"]),
            txid=Digest32.from_hex(data["txid"]),
            block_hash=Digest32.from_hex(data["block_hash"]),
            block_height=int(data["block_height"]),
            block_time=str(data["block_time"]),
            confirmations_at_export=int(data["confirmations_at_export"]),
        )

    @classmethod
    def from_json(cls, text: str) -> "ProofBundle":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class _StoredRecord:
    document_hash: Digest32
    window_id: int
    batch_hashes: tuple[Digest32, ...]
    aggregated_hash: Digest32
    address: str
    txid: Digest32
    seq: int  # insertion order, for "most recent" tie-breaking


class LedgerStore:
    """Append-only stamp ledger keyed by document hash.

    ``path=None`` keeps everything in memory (tests); otherwise each batch
    commit is flushed and fsynced before the call returns.
    """

    def __init__(self, path: Optional[Path] = None, finality_depth: int = DEFAULT_FINALITY_DEPTH):
        if finality_depth < 1:
            raise ValueError("finality_depth must be at least 1")
        self.path = Path(path) if path is not None else None
        self.finality_depth = finality_depth
        self._lock = threading.Lock()
        self._by_hash: dict[Digest32, list[_StoredRecord]] = {}
        self._seen_batches: set[tuple[str, str]] = set()
        self._seq = 0
        if self.path is not None and self.path.exists():
            self._replay_log()

    def _replay_log(self) -> None:
        for line in self.path.read_text().splitlines():
            if not line.strip():
                continue
            entry = json.loads(line)
            self._index(
                document_hash=Digest32.from_hex(entry["document_hash"]),
                window_id=int(entry["window_id"]),
                batch_hashes=tuple(Digest32.from_hex(h) for h in entry["batch_hashes"]),
                aggregated_hash=Digest32.from_hex(entry["aggregated_hash"]),
                address=str(entry["address"]),
                txid=Digest32.from_hex(entry["txid"]),
            )

    def _index(self, **fields) -> None:
        record = _StoredRecord(seq=self._seq, **fields)
        self._seq += 1
        self._by_hash.setdefault(record.document_hash, []).append(record)
        self._seen_batches.add((record.aggregated_hash.hex, record.txid.hex))

    def record_batch(self, batch: CommitmentBatch, txid: Digest32, address: str) -> int:
        """Write one record per batch hash; replaying a (batch, txid) is a no-op.

        The caller must have placed ``txid`` in the mempool or on chain; the
        address is re-derived here and an inconsistency is refused outright.
        """
        expected = derive_address(batch.aggregated_hash).encoded
        if address != expected:
            raise InconsistentAddress(
                f"address {address} does not match derived {expected}"
            )
        with self._lock:
            if (batch.aggregated_hash.hex, txid.hex) in self._seen_batches:
                return 0
            lines = []
            for h in batch.hashes:
                entry = {
                    "document_hash": h.hex,
                    "window_id": batch.window_id,
                    "batch_hashes": [b.hex for b in batch.hashes],
                    "aggregated_hash": batch.aggregated_hash.hex,
                    "address": address,
                    "txid": txid.hex,
                }
                lines.append(json.dumps(entry))
                self._index(
                    document_hash=h,
                    window_id=batch.window_id,
                    batch_hashes=batch.hashes,
                    aggregated_hash=batch.aggregated_hash,
                    address=address,
                    txid=txid,
                )
            if self.path is not None:
                with open(self.path, "a") as fp:
                    fp.write("\n".join(lines) + "\n")
                    fp.flush()
                    os.fsync(fp.fileno())
            return len(batch.hashes)

    def _records(self, document_hash: Digest32) -> list[_StoredRecord]:
        with self._lock:
            return list(self._by_hash.get(document_hash, ()))

    def _status(self, record: _StoredRecord, chain: Optional[Chain]) -> StampStatus:
        if chain is None:
            return StampStatus.COMMITTED
        if chain.confirmations(record.txid) >= self.finality_depth:
            return StampStatus.FINAL
        return StampStatus.COMMITTED

    def _select(
        self, records: list[_StoredRecord], chain: Optional[Chain]
    ) -> _StoredRecord:
        """Earliest final record if any (earliest existence is what a
        timestamp proves); otherwise the most recent record."""
        if chain is not None:
            finals = [
                r for r in records
                if chain.confirmations(r.txid) >= self.finality_depth
            ]
            if finals:
                return min(finals, key=lambda r: r.seq)
        return max(records, key=lambda r: r.seq)

    def lookup(self, document_hash: Digest32, chain: Optional[Chain] = None) -> StampRecord:
        """Fetch the governing record for a hash with its live status."""
        records = self._records(document_hash)
        if not records:
            raise RecordNotFound(f"no stamp record for {document_hash.hex}")
        chosen = self._select(records, chain)
        return StampRecord(
            document_hash=chosen.document_hash,
            window_id=chosen.window_id,
            batch_hashes=chosen.batch_hashes,
            aggregated_hash=chosen.aggregated_hash,
            address=chosen.address,
            txid=chosen.txid,
            status=self._status(chosen, chain),
        )

    def export_proof(self, document_hash: Digest32, chain: Chain) -> ProofBundle:
        """Build the self-contained bundle for a mined commitment."""
        records = self._records(document_hash)
        if not records:
            raise RecordNotFound(f"no stamp record for {document_hash.hex}")
        mined = [(r, chain.find_transaction(r.txid)) for r in records]
        mined = [(r, found) for r, found in mined if found is not None]
        if not mined:
            raise NotYetMined(
                f"commitment for {document_hash.hex} has not been mined yet"
            )
        chosen, found = min(
            mined,
            key=lambda pair: (
                chain.confirmations(pair[0].txid) < self.finality_depth,
                pair[0].seq,
            ),
        )
        _, block = found
        return ProofBundle(
            format_version=PROOF_FORMAT_VERSION,
            document_hash=chosen.document_hash,
            batch_hashes=chosen.batch_hashes,
            aggregated_hash=chosen.aggregated_hash,
            address=chosen.address,
            txid=chosen.txid,
            block_hash=block.block_hash,
            block_height=block.height,
            block_time=format_utc(block.timestamp),
            confirmations_at_export=chain.confirmations(chosen.txid),
        )

    def known_txids(self) -> set[Digest32]:
        """Every txid referenced by some record (scheduler finality tracking)."""
        with self._lock:
            return {r.txid for records in self._by_hash.values() for r in records}

    def has_batch(self, aggregated_hash: Digest32) -> bool:
        """True if some commitment for this aggregate was recorded (any txid)."""
        with self._lock:
            return any(agg == aggregated_hash.hex for agg, _ in self._seen_batches)


def recompute_batch(batch_hashes: tuple[Digest32, ...]) -> tuple[Digest32, str]:
    """Re-derive (aggregated_hash, address) from a bundle's hash list."""
    agg = aggregate(batch_hashes)
    return agg, derive_address(agg).encoded
