"""Proof verification, independent of the stamping service.

``verify_with_bundle`` takes only a bundle and a chain view; it has no store
parameter on purpose, so independence from the service is structural. Checks
run in a fixed, reported order and the first failing link names the verdict
detail. The attested time is always the containing block's timestamp: the
chain, not the service, is the time authority.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .address import derive_address
from .aggregator import aggregate
from .chainsim.chain import Chain
from .crypto import sha256
from .digests import Digest32
from .errors import NotYetMined, RecordNotFound
from .ledger import DEFAULT_FINALITY_DEPTH, LedgerStore, ProofBundle
from .timefmt import format_utc


class Verdict(str, Enum):
    VERIFIED = "verified"
    PENDING = "pending"
    MISMATCH = "mismatch"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class VerificationReport:
    verdict: Verdict
    attested_time: Optional[int]
    confirmations: int
    failure_detail: Optional[str]


def _mismatch(detail: str, confirmations: int = 0) -> VerificationReport:
    return VerificationReport(
        verdict=Verdict.MISMATCH,
        attested_time=None,
        confirmations=confirmations,
        failure_detail=detail,
    )


def verify_with_bundle(
    content_digest: Digest32,
    bundle: ProofBundle,
    chain: Chain,
    finality_depth: int = DEFAULT_FINALITY_DEPTH,
) -> VerificationReport:
    """Re-derive the whole commitment chain and check it against the chain view.

    Order: (1) digest in batch list, (2) aggregated hash recomputes,
    (3) address recomputes, (4) transaction on chain pays the address,
    (5) block data matches, (6) confirmation depth decides verified/pending.
    """
    if content_digest not in bundle.batch_hashes:
        return _mismatch("document hash is not in the bundle's batch hash list")

    if aggregate(bundle.batch_hashes) != bundle.aggregated_hash:
        return _mismatch("aggregated hash does not recompute from the batch hashes")

    if derive_address(bundle.aggregated_hash).encoded != bundle.address:
        return _mismatch("address does not derive from the aggregated hash")

    found = chain.find_transaction(bundle.txid)
    if found is None:
        return _mismatch("transaction is not on the chain")
    tx, block = found
    if not any(addr == bundle.address and amount >= 1 for addr, amount in tx.outputs):
        return _mismatch("transaction does not pay the commitment address")

    if block.block_hash != bundle.block_hash:
        return _mismatch("containing block hash does not match the bundle")
    if block.height != bundle.block_height:
        return _mismatch("containing block height does not match the bundle")
    if format_utc(block.timestamp) != bundle.block_time:
        return _mismatch("containing block time does not match the bundle")

    confirmations = chain.confirmations(bundle.txid)
    if confirmations < finality_depth:
        return VerificationReport(
            verdict=Verdict.PENDING,
            attested_time=None,
            confirmations=confirmations,
            failure_detail=None,
        )
    return VerificationReport(
        verdict=Verdict.VERIFIED,
        attested_time=block.timestamp,
        confirmations=confirmations,
        failure_detail=None,
    )


def verify_document_bytes(
    content: bytes,
    bundle: ProofBundle,
    chain: Chain,
    finality_depth: int = DEFAULT_FINALITY_DEPTH,
) -> VerificationReport:
    """Hash the raw document and verify its digest against the bundle."""
    return verify_with_bundle(sha256(content), bundle, chain, finality_depth)


def verify_via_service(
    content_digest: Digest32,
    store: LedgerStore,
    chain: Chain,
    finality_depth: int = DEFAULT_FINALITY_DEPTH,
) -> VerificationReport:
    """Look the digest up in the service's ledger, then verify its bundle."""
    try:
        bundle = store.export_proof(content_digest, chain)
    except RecordNotFound:
        return VerificationReport(
            verdict=Verdict.UNKNOWN,
            attested_time=None,
            confirmations=0,
            failure_detail=None,
        )
    except NotYetMined:
        return VerificationReport(
            verdict=Verdict.PENDING,
            attested_time=None,
            confirmations=0,
            failure_detail=None,
        )
    return verify_with_bundle(content_digest, bundle, chain, finality_depth)


def format_report(report: VerificationReport) -> str:
    """Human-readable report, ending in the machine-readable verdict line."""
    lines = []
    if report.verdict is Verdict.VERIFIED:
        lines.append(f"attested time: {format_utc(report.attested_time)}")
    if report.failure_detail:
        lines.append(f"failure: {report.failure_detail}")
    lines.append(f"confirmations: {report.confirmations}")
    lines.append(f"VERDICT={report.verdict.value}")
    return "\n".join(lines)
