"""Chain-client interface that a real-node backend could implement.

The simulator's :class:`~chainstamp.chainsim.chain.Chain` satisfies this
protocol; nothing else in the package depends on simulator internals beyond
it, so a live-network client can slot in behind the same calls.
"""

from __future__ import annotations

from typing import Optional, Protocol, runtime_checkable

from ..digests import Digest32
from .chain import BlockHeader
from .records import Transaction


@runtime_checkable
class ChainClient(Protocol):
    def submit_transaction(self, tx: Transaction) -> Digest32:
        """Queue a transaction for inclusion; returns its txid."""
        ...

    def get_transaction(self, txid: Digest32) -> Optional[Transaction]:
        """Fetch a known transaction, mined or pending."""
        ...

    def get_confirmations(self, txid: Digest32) -> int:
        """0 while pending or unknown; 1 at the tip, +1 per later block."""
        ...

    def get_block_header(self, block_hash: Digest32) -> Optional[BlockHeader]:
        """Header data for a mined block."""
        ...
