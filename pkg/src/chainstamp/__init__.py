"""Desk-scale trusted timestamping on a simulated proof-of-work chain.

Submitted document hashes are aggregated per commitment window into a single
digest, converted to a Bitcoin-style address, and anchored by paying one
satoshi of dust to that address in a mined transaction. Exported proof
bundles verify against the chain alone, with no trust in this service.
"""

from .address import BitcoinAddress, derive_address
from .aggregator import (
    CommitmentBatch,
    CostModel,
    HashAggregator,
    SubmissionReceipt,
    aggregate,
    annual_cost,
)
from .config import ServiceConfig, load_config
from .digests import Digest20, Digest32
from .ledger import (
    DEFAULT_FINALITY_DEPTH,
    LedgerStore,
    ProofBundle,
    StampRecord,
    StampStatus,
)
from .verifier import (
    Verdict,
    VerificationReport,
    verify_document_bytes,
    verify_with_bundle,
)

__version__ = "1.0.0"

__all__ = [
    "BitcoinAddress",
    "CommitmentBatch",
    "CostModel",
    "DEFAULT_FINALITY_DEPTH",
    "Digest20",
    "Digest32",
    "HashAggregator",
    "LedgerStore",
    "ProofBundle",
    "ServiceConfig",
    "StampRecord",
    "StampStatus",
    "SubmissionReceipt",
    "Verdict",
    "VerificationReport",
    "aggregate",
    "annual_cost",
    "derive_address",
    "load_config",
    "verify_document_bytes",
    "verify_with_bundle",
    "__version__",
]
