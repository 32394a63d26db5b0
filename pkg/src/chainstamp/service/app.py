"""HTTP front door.

Handlers validate digest strings themselves: the length error (422) and the
character error (400) are distinct parts of the contract, so the hash fields
reach the handlers as plain strings. Every error body is
``{"error": "<code>", "detail": "<text>"}``.
"""

from __future__ import annotations

import logging
import threading
from contextlib import asynccontextmanager
from dataclasses import asdict
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse, Response

from ..config import ServiceConfig
from ..digests import Digest32
from ..errors import NotYetMined, RecordNotFound
from ..timefmt import format_utc
from .pipeline import CommitmentPipeline
from .schemas import (
    BlockHeaderResponse,
    BulkStampRequest,
    BulkStampResponse,
    MineRequest,
    MineResponse,
    StampReceiptResponse,
    StampRequest,
    StampStatusResponse,
    TickResponse,
    TransactionResponse,
)

log = logging.getLogger("chainstamp.service")

BULK_LIMIT = 10_000
MINE_LIMIT = 10_000


class ApiError(Exception):
    def __init__(self, status_code: int, code: str, detail: str):
        super().__init__(detail)
        self.status_code = status_code
        self.code = code
        self.detail = detail


def parse_hash(text: str) -> Digest32:
    if len(text) != 64:
        raise ApiError(
            422, "wrong-length", f"expected 64 hex characters, got {len(text)}"
        )
    try:
        return Digest32.from_hex(text)
    except ValueError:
        raise ApiError(
            400, "malformed-hash", "hash must contain hex characters only"
        ) from None


def create_app(
    config: Optional[ServiceConfig] = None,
    *,
    pipeline: Optional[CommitmentPipeline] = None,
) -> FastAPI:
    """Build the application; pass a prepared pipeline to share state in tests."""
    if pipeline is None:
        pipeline = CommitmentPipeline(config if config is not None else ServiceConfig())
    config = pipeline.config

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        stop = threading.Event()
        worker = None
        if config.scheduler_interval > 0:
            def run() -> None:
                while not stop.wait(config.scheduler_interval):
                    try:
                        pipeline.tick()
                    except Exception:
                        log.exception("scheduler tick failed")

            worker = threading.Thread(
                target=run, name="chainstamp-scheduler", daemon=True
            )
            worker.start()
        yield
        stop.set()
        if worker is not None:
            worker.join(timeout=5)

    app = FastAPI(title="chainstamp", lifespan=lifespan)
    app.state.pipeline = pipeline

    # The browser client is served from its own origin; every endpoint is
    # public and read-mostly, so cross-origin access is unrestricted.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status_code,
            content={"error": exc.code, "detail": exc.detail},
        )

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        where = ".".join(str(part) for part in first.get("loc", ()))
        message = first.get("msg", "invalid request body")
        return JSONResponse(
            status_code=422,
            content={"error": "invalid-request", "detail": f"{where}: {message}"},
        )

    def receipt_response(receipt) -> StampReceiptResponse:
        view = pipeline.status_view(receipt.document_hash)
        return StampReceiptResponse(
            hash=receipt.document_hash.hex,
            status=view.status if view is not None else "pending",
            window_id=receipt.window_id,
            received_at=format_utc(receipt.received_at),
            window_closes_at=format_utc(pipeline.window_closes_at(receipt.window_id)),
            priority=receipt.priority,
        )

    @app.post("/v1/stamps", response_model=StampReceiptResponse)
    def submit_stamp(body: StampRequest):
        digest = parse_hash(body.hash)
        receipt = pipeline.submit(digest, priority=body.priority)
        return receipt_response(receipt)

    @app.post("/v1/stamps/bulk", response_model=BulkStampResponse)
    def submit_bulk(body: BulkStampRequest):
        if len(body.hashes) > BULK_LIMIT:
            raise ApiError(
                413,
                "list-too-large",
                f"at most {BULK_LIMIT} hashes per request, got {len(body.hashes)}",
            )
        if not body.hashes:
            raise ApiError(400, "empty-list", "hashes must contain at least one digest")
        digests = []
        for index, text in enumerate(body.hashes):
            try:
                digests.append(parse_hash(text))
            except ApiError as exc:
                raise ApiError(
                    400, "invalid-entry", f"hashes[{index}]: {exc.detail}"
                ) from None
        window_id, receipts = pipeline.submit_bulk(digests)
        return BulkStampResponse(
            window_id=window_id,
            receipts=[receipt_response(r) for r in receipts],
        )

    @app.get(
        "/v1/stamps/{hash_hex}",
        response_model=StampStatusResponse,
        response_model_exclude_none=True,
    )
    def stamp_status(hash_hex: str):
        digest = parse_hash(hash_hex)
        view = pipeline.status_view(digest)
        if view is None:
            raise ApiError(404, "not-found", f"no stamp for {digest.hex}")
        return StampStatusResponse(**asdict(view))

    @app.get("/v1/stamps/{hash_hex}/proof")
    def stamp_proof(hash_hex: str):
        digest = parse_hash(hash_hex)
        try:
            bundle = pipeline.export_proof(digest)
        except RecordNotFound:
            if pipeline.status_view(digest) is not None:
                # known but still waiting in an open window
                raise ApiError(
                    409,
                    "not-yet-mined",
                    "stamp is still pending; no commitment on the chain yet",
                ) from None
            raise ApiError(404, "not-found", f"no stamp for {digest.hex}") from None
        except NotYetMined:
            raise ApiError(
                409,
                "not-yet-mined",
                "commitment transaction is not on the chain yet; try again later",
            ) from None
        return Response(content=bundle.to_json(), media_type="application/json")

    @app.get("/v1/announcements")
    def announcements():
        return PlainTextResponse(pipeline.announcements.raw_text())

    def header_response(header) -> BlockHeaderResponse:
        return BlockHeaderResponse(
            height=header.height,
            block_hash=header.block_hash.hex,
            prev_hash=header.prev_hash.hex,
            merkle_root=header.merkle_root.hex,
            timestamp=header.timestamp,
            time=format_utc(header.timestamp),
            difficulty_bits=header.difficulty_bits,
            nonce=header.nonce,
            tx_count=header.tx_count,
        )

    @app.get("/v1/chain/tip", response_model=BlockHeaderResponse)
    def chain_tip():
        tip = pipeline.chain.tip
        return header_response(pipeline.chain.get_block_header(tip.block_hash))

    @app.get("/v1/chain/blocks/{hash_hex}", response_model=BlockHeaderResponse)
    def chain_block(hash_hex: str):
        block_hash = parse_hash(hash_hex)
        header = pipeline.chain.get_block_header(block_hash)
        if header is None:
            raise ApiError(404, "unknown-block", f"no block {block_hash.hex}")
        return header_response(header)

    @app.get(
        "/v1/chain/txs/{hash_hex}",
        response_model=TransactionResponse,
        response_model_exclude_none=True,
    )
    def chain_transaction(hash_hex: str):
        txid = parse_hash(hash_hex)
        tx = pipeline.chain.get_transaction(txid)
        if tx is None:
            raise ApiError(404, "unknown-transaction", f"no transaction {txid.hex}")
        address, amount = tx.outputs[0]
        found = pipeline.chain.find_transaction(txid)
        block = found[1] if found is not None else None
        return TransactionResponse(
            txid=txid.hex,
            address=address,
            amount_satoshi=amount,
            fee_satoshi=tx.fee,
            confirmations=pipeline.chain.get_confirmations(txid),
            block_hash=block.block_hash.hex if block is not None else None,
            block_height=block.height if block is not None else None,
        )

    @app.post("/v1/admin/mine", response_model=MineResponse)
    def admin_mine(body: MineRequest):
        if body.blocks < 0:
            raise ApiError(400, "invalid-request", "blocks cannot be negative")
        if body.blocks > MINE_LIMIT:
            raise ApiError(
                400, "invalid-request", f"at most {MINE_LIMIT} blocks per request"
            )
        pipeline.mine(body.blocks)
        tip = pipeline.chain.tip
        return MineResponse(
            mined=body.blocks, tip_height=tip.height, tip_hash=tip.block_hash.hex
        )

    @app.post("/v1/admin/tick", response_model=TickResponse, response_model_exclude_none=True)
    def admin_tick():
        summary = pipeline.tick()
        return TickResponse(
            committed_batches=summary.committed_batches,
            mined_block=(
                summary.mined_block.block_hash.hex
                if summary.mined_block is not None
                else None
            ),
            tip_height=summary.tip_height,
        )

    return app
