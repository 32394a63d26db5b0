"""Commitment windows: collect submitted digests, aggregate, account costs.

Windows are half-open UTC intervals ``[k*w, (k+1)*w)`` aligned to the epoch,
``w`` being the configured window length (24 h in production, seconds in
tests). One aggregated hash per window keeps the yearly transaction bill to
a handful of USD; the cost model makes that arithmetic exact.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .crypto import sha256
from .digests import Digest32
from .errors import EmptyHashSet, WindowAlreadyClosed, WindowStillOpen

SATOSHI_PER_BTC = 10**8


@dataclass(frozen=True)
class SubmissionReceipt:
    document_hash: Digest32
    received_at: int
    window_id: int
    priority: bool


@dataclass(frozen=True)
class CommitmentBatch:
    window_id: int
    hashes: tuple[Digest32, ...]
    aggregated_hash: Digest32
    created_at: int

    def __post_init__(self) -> None:
        if not self.hashes:
            raise EmptyHashSet("a commitment batch needs at least one hash")
        if list(self.hashes) != sorted(set(self.hashes)):
            raise ValueError("batch hashes must be sorted and unique")
        if aggregate(self.hashes) != self.aggregated_hash:
            raise ValueError("aggregated_hash does not match the hash list")


@dataclass(frozen=True)
class CostModel:
    """Per-transaction satoshi amounts and the configured BTC price."""

    dust_amount: int = 1
    fee: int = 10_000
    btc_price: Fraction = Fraction(250)

    def __post_init__(self) -> None:
        if self.dust_amount < 1:
            raise ValueError("dust_amount must be at least 1 satoshi")
        if self.fee < 0:
            raise ValueError("fee cannot be negative")


def aggregate(hashes: Iterable[Digest32]) -> Digest32:
    """SHA-256 of the sorted, deduplicated digests' concatenated raw bytes.

    Applied uniformly, so a singleton input yields ``sha256(h.raw)``. Sorting
    makes the result reproducible by any verifier holding the hash list,
    independent of submission order.
    """
    unique = sorted(set(hashes))
    if not unique:
        raise EmptyHashSet("cannot aggregate an empty hash set")
    return sha256(b"".join(h.raw for h in unique))


def annual_cost(model: CostModel, windows_per_year: int) -> Fraction:
    """USD cost of one commitment transaction per window, exact arithmetic."""
    if windows_per_year < 0:
        raise ValueError("windows_per_year cannot be negative")
    satoshi = windows_per_year * (model.dust_amount + model.fee)
    return Fraction(satoshi, SATOSHI_PER_BTC) * model.btc_price


@dataclass
class _Window:
    queued: dict[Digest32, SubmissionReceipt] = field(default_factory=dict)
    receipts: dict[Digest32, SubmissionReceipt] = field(default_factory=dict)


class HashAggregator:
    """Collects digests into commitment windows.

    Concurrent ``submit_hash`` calls are linearized by an internal lock;
    ``close_window`` marks a window immutable, and any later submission whose
    timestamp would fall into a closed window rolls to the next open one.
    """

    def __init__(self, window_seconds: int = 86_400):
        if window_seconds < 1:
            raise ValueError("window_seconds must be at least 1")
        self.window_seconds = window_seconds
        self._lock = threading.Lock()
        self._windows: dict[int, _Window] = {}
        self._closed: set[int] = set()
        self._priority_batches: list[CommitmentBatch] = []

    def window_of(self, now: int) -> int:
        return int(now) // self.window_seconds

    def window_interval(self, window_id: int) -> tuple[int, int]:
        start = window_id * self.window_seconds
        return start, start + self.window_seconds

    def _open_window(self, now: int) -> int:
        # Skip past closed windows so late submissions roll forward.
        window_id = self.window_of(now)
        while window_id in self._closed:
            window_id += 1
        return window_id

    def open_window_for(self, now: int) -> int:
        """Window a submission arriving at ``now`` would currently land in."""
        with self._lock:
            return self._open_window(now)

    def submit_hash(self, h: Digest32, priority: bool = False, *, now: int) -> SubmissionReceipt:
        """Queue ``h`` in the window containing ``now``; idempotent per window.

        Priority submissions skip the window queue entirely: they form a
        singleton batch available via :meth:`drain_priority_batches` for
        immediate commitment.
        """
        with self._lock:
            window_id = self._open_window(now)
            window = self._windows.setdefault(window_id, _Window())

            existing = window.receipts.get(h)
            if existing is not None:
                return existing

            receipt = SubmissionReceipt(
                document_hash=h, received_at=int(now), window_id=window_id, priority=priority
            )
            window.receipts[h] = receipt
            if priority:
                self._priority_batches.append(
                    CommitmentBatch(
                        window_id=window_id,
                        hashes=(h,),
                        aggregated_hash=aggregate((h,)),
                        created_at=int(now),
                    )
                )
            else:
                window.queued[h] = receipt
            return receipt

    def close_window(self, window_id: int, *, now: int) -> Optional[CommitmentBatch]:
        """Close an elapsed window; returns its batch, or None if it was empty."""
        with self._lock:
            if window_id in self._closed:
                raise WindowAlreadyClosed(f"window {window_id} is already closed")
            _, end = self.window_interval(window_id)
            if now < end:
                raise WindowStillOpen(
                    f"window {window_id} runs until {end}, cannot close at {now}"
                )
            self._closed.add(window_id)
            window = self._windows.get(window_id)
            if window is None or not window.queued:
                return None
            hashes = tuple(sorted(window.queued))
            return CommitmentBatch(
                window_id=window_id,
                hashes=hashes,
                aggregated_hash=aggregate(hashes),
                created_at=int(now),
            )

    def drain_priority_batches(self) -> list[CommitmentBatch]:
        """Take all pending priority singleton batches."""
        with self._lock:
            batches, self._priority_batches = self._priority_batches, []
            return batches

    def requeue(self, h: Digest32, *, now: int) -> SubmissionReceipt:
        """Force ``h`` back into the open window's queue.

        Failed-commitment path: bypasses receipt idempotence so a hash whose
        batch did not make it onto the chain is guaranteed to ride the next
        window, receipt or no receipt.
        """
        with self._lock:
            window_id = self._open_window(now)
            window = self._windows.setdefault(window_id, _Window())
            receipt = window.receipts.get(h)
            if receipt is None:
                receipt = SubmissionReceipt(
                    document_hash=h, received_at=int(now), window_id=window_id, priority=False
                )
                window.receipts[h] = receipt
            window.queued[h] = receipt
            return receipt

    def expedite(self, h: Digest32, *, now: int) -> Optional[CommitmentBatch]:
        """Pull a queued hash out of its open window as a singleton batch.

        Lets a priority resubmission overtake the window it is waiting in.
        Returns None when ``h`` is not queued anywhere.
        """
        with self._lock:
            for window_id, window in self._windows.items():
                if window_id in self._closed or h not in window.queued:
                    continue
                del window.queued[h]
                return CommitmentBatch(
                    window_id=window_id,
                    hashes=(h,),
                    aggregated_hash=aggregate((h,)),
                    created_at=int(now),
                )
        return None

    def due_windows(self, now: int) -> list[int]:
        """Open windows holding queued hashes whose interval has fully elapsed."""
        with self._lock:
            return sorted(
                wid
                for wid, window in self._windows.items()
                if wid not in self._closed
                and window.queued
                and self.window_interval(wid)[1] <= now
            )

    def receipt_for(self, h: Digest32) -> Optional[SubmissionReceipt]:
        """Most recent receipt for ``h`` across all windows, if any."""
        with self._lock:
            best: Optional[SubmissionReceipt] = None
            for window in self._windows.values():
                receipt = window.receipts.get(h)
                if receipt is not None and (best is None or receipt.window_id > best.window_id):
                    best = receipt
            return best

    def is_queued(self, h: Digest32) -> bool:
        """True while ``h`` sits in some window that has not been closed yet."""
        with self._lock:
            return any(
                h in window.queued
                for wid, window in self._windows.items()
                if wid not in self._closed
            )
