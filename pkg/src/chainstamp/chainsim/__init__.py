"""Simulated proof-of-work chain: records, merkle trees, mining, attacks."""

from .attack import AttackOutcome, attack_success_rate, simulate_rewrite_attack
from .chain import (
    BlockHeader,
    Chain,
    ValidationIssue,
    ValidationResult,
    validate_chain,
)
from .chainfile import append_block, read_chain, write_chain
from .client import ChainClient
from .merkle import merkle_root
from .records import (
    EMPTY_TX_ROOT,
    Block,
    Transaction,
    leading_zero_bits,
    read_varint,
    write_varint,
)

__all__ = [
    "AttackOutcome",
    "Block",
    "BlockHeader",
    "Chain",
    "ChainClient",
    "EMPTY_TX_ROOT",
    "Transaction",
    "ValidationIssue",
    "ValidationResult",
    "append_block",
    "attack_success_rate",
    "leading_zero_bits",
    "merkle_root",
    "read_chain",
    "read_varint",
    "simulate_rewrite_attack",
    "validate_chain",
    "write_chain",
    "write_varint",
]
