"""The commitment pipeline: everything between an accepted digest and finality.

One instance owns the aggregator, the simulated chain, the ledger store and
the announcement log, and linearizes every commitment cycle: close window ->
aggregate -> derive address -> build dust transaction -> mine -> record.
HTTP handlers and the scheduler both drive it; an internal lock keeps exactly
one cycle in flight.

Durability: mined blocks append to the chain file, recorded batches to the
ledger log, and closed-but-unrecorded batches to a journal that is replayed
on startup, so a crash between window close and record never drops hashes.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
from dataclasses import dataclass
from typing import Callable, Optional

from ..address import derive_address
from ..aggregator import CommitmentBatch, HashAggregator, SubmissionReceipt, aggregate
from ..chainsim import Block, Chain, Transaction, append_block, read_chain, write_chain
from ..config import ServiceConfig
from ..digests import Digest32
from ..errors import RecordNotFound
from ..ledger import LedgerStore, ProofBundle, StampStatus
from ..timefmt import format_utc
from .announce import AnnouncementLog

log = logging.getLogger("chainstamp.service")


@dataclass(frozen=True)
class CommitmentResult:
    batch: CommitmentBatch
    address: str
    txid: Digest32
    records_written: int


@dataclass(frozen=True)
class TickSummary:
    committed_batches: int
    mined_block: Optional[Block]
    tip_height: int


@dataclass(frozen=True)
class StatusView:
    """Flattened answer for the status endpoint; None fields are omitted."""

    hash: str
    status: str
    finality_depth: int
    window_id: Optional[int] = None
    txid: Optional[str] = None
    address: Optional[str] = None
    aggregated_hash: Optional[str] = None
    block_hash: Optional[str] = None
    block_height: Optional[int] = None
    block_time: Optional[str] = None
    confirmations: Optional[int] = None


class CommitmentPipeline:
    def __init__(
        self,
        config: ServiceConfig,
        *,
        clock: Callable[[], float] = time.time,
        persist: bool = True,
    ):
        self.config = config
        self.clock = clock
        self.persist = persist
        self._lock = threading.RLock()
        if persist:
            config.data_dir.mkdir(parents=True, exist_ok=True)
        self.aggregator = HashAggregator(window_seconds=config.window_seconds)
        self.store = LedgerStore(
            path=config.ledger_path if persist else None,
            finality_depth=config.finality_depth,
        )
        self.announcements = AnnouncementLog(
            path=config.announce_path if persist else None,
            webhook_url=config.webhook_url,
        )
        self.chain = self._open_chain()
        if persist:
            self._recover_journal()

    # --- startup ---

    def _open_chain(self) -> Chain:
        if self.persist and self.config.chain_path.exists():
            blocks = read_chain(self.config.chain_path)
            return Chain.from_blocks(blocks, self.config.difficulty_bits)
        chain = Chain(difficulty_bits=self.config.difficulty_bits)
        if self.persist:
            write_chain(self.config.chain_path, chain.snapshot())
        return chain

    @property
    def _journal_path(self):
        return self.config.data_dir / "batches.jsonl"

    def _journal(self, batch: CommitmentBatch) -> None:
        if not self.persist:
            return
        entry = {
            "window_id": batch.window_id,
            "hashes": [h.hex for h in batch.hashes],
            "created_at": batch.created_at,
        }
        with open(self._journal_path, "a") as fp:
            fp.write(json.dumps(entry) + "\n")
            fp.flush()
            os.fsync(fp.fileno())

    def _recover_journal(self) -> None:
        """Recommit journaled batches the ledger never saw (crash replay).

        The dust transaction serializes deterministically, so rebuilding it
        yields the original txid and the chain-side submit deduplicates.
        """
        if not self._journal_path.exists():
            return
        for line in self._journal_path.read_text().splitlines():
            if not line.strip():
                continue
            entry = json.loads(line)
            hashes = tuple(Digest32.from_hex(h) for h in entry["hashes"])
            batch = CommitmentBatch(
                window_id=int(entry["window_id"]),
                hashes=hashes,
                aggregated_hash=aggregate(hashes),
                created_at=int(entry["created_at"]),
            )
            if self.store.has_batch(batch.aggregated_hash):
                continue
            log.warning(
                "recommitting journaled batch for window %d (%d hashes)",
                batch.window_id,
                len(batch.hashes),
            )
            self._commit(batch)

    # --- submission ---

    def _now(self, now: Optional[int]) -> int:
        return int(self.clock()) if now is None else int(now)

    def submit(
        self, h: Digest32, priority: bool = False, *, now: Optional[int] = None
    ) -> SubmissionReceipt:
        """Accept one digest; announce it; commit immediately when priority.

        Resubmitting a digest the service already tracks returns the original
        receipt without queueing or announcing again, unless the repeat asks
        for priority and the original is still waiting in an open window.
        """
        now = self._now(now)
        with self._lock:
            existing = self.aggregator.receipt_for(h)
            if existing is not None and not priority:
                return existing
            if existing is not None and priority:
                if self.store.has_batch(aggregate((h,))):
                    return existing  # already committed alone; nothing to expedite
                pulled = self.aggregator.expedite(h, now=now)
                if pulled is not None:
                    self._journal(pulled)
                    self._commit_or_roll(pulled, now)
                    return existing
            receipt = self.aggregator.submit_hash(h, priority=priority, now=now)
            if receipt is not existing:
                self.announcements.publish(h, announced_at=now)
            for batch in self.aggregator.drain_priority_batches():
                self._journal(batch)
                self._commit_or_roll(batch, now)
            return receipt

    def submit_bulk(
        self, hashes: list[Digest32], *, now: Optional[int] = None
    ) -> tuple[int, list[SubmissionReceipt]]:
        """Queue every digest in the same window; returns (window_id, receipts)."""
        now = self._now(now)
        with self._lock:
            window_id = self.aggregator.open_window_for(now)
            receipts = [self.submit(h, now=now) for h in hashes]
            return window_id, receipts

    # --- commitment cycle ---

    def _commit(self, batch: CommitmentBatch) -> CommitmentResult:
        address = derive_address(
            batch.aggregated_hash, version=self.config.address_version
        ).encoded
        tx = Transaction(
            outputs=((address, self.config.dust_satoshi),),
            fee=self.config.fee_satoshi,
        )
        self.chain.submit_transaction(tx)
        written = self.store.record_batch(batch, tx.txid, address)
        return CommitmentResult(batch, address, tx.txid, written)

    def _commit_or_roll(self, batch: CommitmentBatch, now: int) -> Optional[CommitmentResult]:
        """Commit; on failure, re-queue the hashes so the next window carries them."""
        try:
            return self._commit(batch)
        except Exception:
            log.exception(
                "commitment failed for window %d; rolling %d hashes forward",
                batch.window_id,
                len(batch.hashes),
            )
            for h in batch.hashes:
                self.aggregator.requeue(h, now=now)
            return None

    def process_due_windows(self, now: Optional[int] = None) -> int:
        """Close every fully elapsed window holding hashes and commit each batch."""
        now = self._now(now)
        committed = 0
        with self._lock:
            for window_id in self.aggregator.due_windows(now):
                batch = self.aggregator.close_window(window_id, now=now)
                if batch is None:
                    continue
                self._journal(batch)
                if self._commit_or_roll(batch, now) is not None:
                    committed += 1
        return committed

    def needs_mining(self) -> bool:
        """True while any commitment is still short of the finality depth."""
        if self.chain.mempool:
            return True
        depth = self.config.finality_depth
        return any(
            self.chain.confirmations(txid) < depth for txid in self.store.known_txids()
        )

    def mine(self, blocks: int, *, now: Optional[int] = None) -> list[Block]:
        now = self._now(now)
        mined = []
        with self._lock:
            for _ in range(blocks):
                block = self.chain.mine_block(now)
                if self.persist:
                    append_block(self.config.chain_path, block)
                mined.append(block)
        return mined

    def tick(self, now: Optional[int] = None) -> TickSummary:
        """One scheduler step: flush priority work, close due windows, mine."""
        now = self._now(now)
        with self._lock:
            committed = 0
            for batch in self.aggregator.drain_priority_batches():
                self._journal(batch)
                if self._commit_or_roll(batch, now) is not None:
                    committed += 1
            committed += self.process_due_windows(now)
            mined = None
            if self.config.auto_mine and self.needs_mining():
                mined = self.mine(1, now=now)[0]
            return TickSummary(committed, mined, self.chain.tip.height)

    # --- queries ---

    def status_view(self, h: Digest32) -> Optional[StatusView]:
        depth = self.config.finality_depth
        try:
            record = self.store.lookup(h, self.chain)
        except RecordNotFound:
            record = None
        if record is not None and record.status is not StampStatus.PENDING:
            found = self.chain.find_transaction(record.txid)
            block = found[1] if found is not None else None
            return StatusView(
                hash=h.hex,
                status=record.status.value,
                finality_depth=depth,
                window_id=record.window_id,
                txid=record.txid.hex,
                address=record.address,
                aggregated_hash=record.aggregated_hash.hex,
                block_hash=block.block_hash.hex if block is not None else None,
                block_height=block.height if block is not None else None,
                block_time=format_utc(block.timestamp) if block is not None else None,
                confirmations=self.chain.confirmations(record.txid),
            )
        receipt = self.aggregator.receipt_for(h)
        if receipt is None:
            return None
        return StatusView(
            hash=h.hex,
            status=StampStatus.PENDING.value,
            finality_depth=depth,
            window_id=receipt.window_id,
        )

    def export_proof(self, h: Digest32) -> ProofBundle:
        return self.store.export_proof(h, self.chain)

    def window_closes_at(self, window_id: int) -> int:
        return self.aggregator.window_interval(window_id)[1]
