"""Request and response bodies for the HTTP API.

Hash fields are plain strings here, validated by the handlers: a wrong
status code (422 for malformed vs wrong-length) would leak from letting
the model layer reject them.
"""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel


class StampRequest(BaseModel):
    hash: str
    priority: bool = False


class BulkStampRequest(BaseModel):
    hashes: list[str]


class StampReceiptResponse(BaseModel):
    hash: str
    status: str
    window_id: int
    received_at: str
    window_closes_at: str
    priority: bool


class BulkStampResponse(BaseModel):
    window_id: int
    receipts: list[StampReceiptResponse]


class StampStatusResponse(BaseModel):
    hash: str
    status: str
    window_id: Optional[int] = None
    txid: Optional[str] = None
    address: Optional[str] = None
    aggregated_hash: Optional[str] = None
    block_hash: Optional[str] = None
    block_height: Optional[int] = None
    block_time: Optional[str] = None
    confirmations: Optional[int] = None
    finality_depth: int


class TransactionResponse(BaseModel):
    txid: str
    address: str
    amount_satoshi: int
    fee_satoshi: int
    confirmations: int
    block_hash: Optional[str] = None
    block_height: Optional[int] = None


class BlockHeaderResponse(BaseModel):
    height: int
    block_hash: str
    prev_hash: str
    merkle_root: str
    timestamp: int
    time: str
    difficulty_bits: int
    nonce: int
    tx_count: int


class MineRequest(BaseModel):
    blocks: int = 1


class MineResponse(BaseModel):
    mined: int
    tip_height: int
    tip_hash: str


class TickResponse(BaseModel):
    committed_batches: int
    mined_block: Optional[str] = None
    tip_height: int


class ErrorBody(BaseModel):
    error: str
    detail: str
