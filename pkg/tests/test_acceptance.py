"""Acceptance suite: one test per product-level requirement.

Each test is self-contained, prints a single PASS line with its measured
runtime (visible with ``pytest -s``; ``pytest -v`` shows one line per test
either way), and asserts the requirement at its stated tolerance. Stated
time budgets are asserted too: known-answer crypto < 1 s, the end-to-end
pipeline < 60 s, the attack study < 30 s.
"""

from __future__ import annotations

import dataclasses
import random
import time
from contextlib import contextmanager
from fractions import Fraction

from chainstamp.address import derive_address
from chainstamp.aggregator import CommitmentBatch, CostModel, aggregate, annual_cost
from chainstamp.chainsim import Chain, Transaction
from chainstamp.chainsim.attack import attack_success_rate, simulate_rewrite_attack
from chainstamp.chainsim.chain import validate_chain
from chainstamp.config import ServiceConfig
from chainstamp.crypto import base58check_encode, hash160, ripemd160, sha256
from chainstamp.digests import Digest32
from chainstamp.ledger import LedgerStore, StampStatus
from chainstamp.service.pipeline import CommitmentPipeline
from chainstamp.tsa import Ed25519Signer, issue_timestamp, verify_tsa_token
from chainstamp.verifier import Verdict, verify_document_bytes
from conftest import FakeClock, random_digest
from oracles import oracle_address, oracle_base58check, oracle_ripemd160, oracle_sha256


@contextmanager
def budget(name: str, limit_seconds: float | None = None):
    started = time.monotonic()
    yield
    elapsed = time.monotonic() - started
    if limit_seconds is not None:
        assert elapsed < limit_seconds, (
            f"{name} took {elapsed:.2f}s, budget {limit_seconds:.0f}s"
        )
    print(f"PASS {name} ({elapsed:.2f}s)")


def test_known_answer_crypto_suite():
    """SHA-256, RIPEMD-160 and Base58Check agree with an independently
    implemented oracle on 12 vectors each; zero tolerance."""
    with budget("known-answer crypto suite", limit_seconds=1.0):
        rng = random.Random(11)
        messages = [b"", b"abc"] + [
            rng.randbytes(n) for n in (1, 31, 55, 56, 63, 64, 65, 127, 500, 1000)
        ]
        assert len(messages) == 12
        for m in messages:
            assert sha256(m).raw == oracle_sha256(m), f"sha256 vector {m[:8]!r}"
        for m in messages:
            assert ripemd160(m).raw == oracle_ripemd160(m), f"ripemd160 {m[:8]!r}"

        payload_cases = [
            (0x00, b"\x00" * 20),           # all-zero payload, leading-1 run
            (0x00, b"\x00\x01" + b"\xff" * 18),
            (0x6F, b"\x7f" * 20),
            (0xFF, b"\x00"),
        ] + [
            (rng.randrange(256), rng.randbytes(rng.randrange(1, 33)))
            for _ in range(8)
        ]
        assert len(payload_cases) == 12
        for version, payload in payload_cases:
            assert base58check_encode(version, payload) == oracle_base58check(
                version, payload
            ), f"base58check vector {(version, payload.hex())}"

        # the composed derivation agrees too: hash160 then Base58Check
        for _ in range(3):
            agg = rng.randbytes(32)
            assert derive_address(Digest32(agg)).encoded == oracle_address(agg)
            assert hash160(agg).raw == bytes.fromhex(
                oracle_ripemd160(oracle_sha256(agg)).hex()
            )


def test_end_to_end_stamp_and_verify_pipeline():
    """100 random documents across 3 two-second windows, mined to >= 6
    confirmations: all 100 verify with the containing block's timestamp as
    the attested time, and a one-bit flip in each document is a mismatch."""
    with budget("end-to-end pipeline, 100 documents", limit_seconds=60.0):
        clock = FakeClock()
        config = ServiceConfig(
            window_seconds=2, difficulty_bits=12, scheduler_interval=0
        )
        pipeline = CommitmentPipeline(config, clock=clock, persist=False)
        rng = random.Random(2024)
        docs = [rng.randbytes(rng.randrange(1, 4096)) for _ in range(100)]

        for group in (docs[:34], docs[34:67], docs[67:]):
            for doc in group:
                pipeline.submit(sha256(doc))
            clock.advance(2)
            pipeline.tick()
        pipeline.mine(6)

        txids = pipeline.store.known_txids()
        assert len(txids) == 3  # one commitment per window
        for txid in txids:
            assert pipeline.chain.confirmations(txid) >= 6

        verified = mismatched = 0
        for doc in docs:
            bundle = pipeline.export_proof(sha256(doc))
            report = verify_document_bytes(doc, bundle, pipeline.chain)
            _, block = pipeline.chain.find_transaction(bundle.txid)
            if (
                report.verdict is Verdict.VERIFIED
                and report.attested_time == block.timestamp
            ):
                verified += 1

            flip_at = rng.randrange(len(doc) * 8)
            flipped = bytearray(doc)
            flipped[flip_at // 8] ^= 1 << (flip_at % 8)
            bad = verify_document_bytes(bytes(flipped), bundle, pipeline.chain)
            if bad.verdict is Verdict.MISMATCH:
                mismatched += 1

        assert verified == 100, f"only {verified}/100 verified"
        assert mismatched == 100, f"only {mismatched}/100 flipped copies mismatch"


def test_one_transaction_per_window_paying_one_satoshi():
    """25 hashes in one window produce exactly one chain transaction whose
    single output pays exactly 1 satoshi to the address derived from the
    aggregated hash."""
    with budget("one transaction per window"):
        clock = FakeClock()
        config = ServiceConfig(
            window_seconds=2, difficulty_bits=8, scheduler_interval=0
        )
        pipeline = CommitmentPipeline(config, clock=clock, persist=False)
        rng = random.Random(31)
        hashes = [random_digest(rng) for _ in range(25)]
        for h in hashes:
            pipeline.submit(h)
        clock.advance(2)
        pipeline.tick()

        mined = [tx for block in pipeline.chain.snapshot() for tx in block.tx_list]
        assert len(mined) == 1
        assert not pipeline.chain.mempool
        expected_address = derive_address(aggregate(hashes)).encoded
        assert mined[0].outputs == ((expected_address, 1),)


def test_cost_model_exact_rational_arithmetic():
    """Dust of 1 satoshi plus a 10,000 satoshi fee across 365 windows is
    exactly 0.03650365 BTC; at 250 USD/BTC that is about 9.13 USD, under
    10 USD, with no floating-point drift beyond 1e-9 USD."""
    with budget("cost model"):
        model = CostModel(dust_amount=1, fee=10_000, btc_price=Fraction(250))
        annual_btc = Fraction(365 * (1 + 10_000), 10**8)
        assert annual_btc == Fraction("0.03650365")

        usd = annual_cost(model, windows_per_year=365)
        assert usd == annual_btc * 250  # exact, no rounding anywhere
        assert usd == Fraction(730073, 80000)
        assert abs(usd - Fraction("9.1259125")) == 0
        assert abs(float(usd) - 9.1259125) < 1e-9
        assert usd < 10


def test_finality_rule_boundary_at_five_confirmations():
    """Lookup reports final exactly when confirmations reach 5: committed
    at 4, final at 5, still final at 6."""
    with budget("finality boundary 4/5/6"):
        rng = random.Random(41)
        chain = Chain(difficulty_bits=0)
        store = LedgerStore(finality_depth=5)
        h = random_digest(rng)
        batch = CommitmentBatch(
            window_id=1, hashes=(h,), aggregated_hash=aggregate((h,)), created_at=1
        )
        address = derive_address(batch.aggregated_hash).encoded
        tx = chain.build_transaction(address)
        store.record_batch(batch, tx.txid, address)

        chain.mine_block(now=10)  # included: 1 confirmation
        for i in range(3):
            chain.mine_block(now=11 + i)
        assert chain.confirmations(tx.txid) == 4
        assert store.lookup(h, chain).status is StampStatus.COMMITTED

        chain.mine_block(now=20)
        assert chain.confirmations(tx.txid) == 5
        assert store.lookup(h, chain).status is StampStatus.FINAL

        chain.mine_block(now=21)
        assert chain.confirmations(tx.txid) == 6
        assert store.lookup(h, chain).status is StampStatus.FINAL


def test_tamper_detection_exhaustive_mutation_suite():
    """On a deterministic 10-block chain, every single-field mutation of
    every block (each transaction byte, merkle root and prev-hash bytes,
    every nonce and timestamp bit) makes validation fail; zero escapes.

    Mining is deterministic (nonce search from zero), so this chain and
    the suite's outcome are fixed across runs."""
    with budget("exhaustive tamper detection"):
        chain = Chain(difficulty_bits=12, genesis_time=1000)
        for i in range(9):
            agg = aggregate((sha256(f"doc-{i}".encode()),))
            chain.build_transaction(derive_address(agg).encoded)
            chain.mine_block(now=1000 + (i + 1) * 600)
        blocks = chain.snapshot()
        assert len(blocks) == 10
        assert validate_chain(blocks).ok

        def rejected(mutated_blocks) -> bool:
            return not validate_chain(mutated_blocks).ok

        def with_block(index, replacement):
            return blocks[:index] + [replacement] + blocks[index + 1 :]

        mutations = 0
        escapes = []
        for bi, block in enumerate(blocks):
            for ti, tx in enumerate(block.tx_list):
                raw = tx.serialize()
                for k in range(len(raw)):
                    for mask in (0x01, 0xFF):
                        mutations += 1
                        doctored = raw[:k] + bytes([raw[k] ^ mask]) + raw[k + 1 :]
                        try:
                            new_tx = Transaction.parse(doctored)
                        except ValueError:
                            continue  # not even decodable: rejected outright
                        txs = block.tx_list[:ti] + (new_tx,) + block.tx_list[ti + 1 :]
                        if not rejected(
                            with_block(bi, dataclasses.replace(block, tx_list=txs))
                        ):
                            escapes.append(("tx-byte", bi, ti, k, mask))

            for field in ("merkle_root", "prev_hash"):
                raw = getattr(block, field).raw
                for k in range(32):
                    for mask in (0x01, 0xFF):
                        mutations += 1
                        doctored = Digest32(
                            raw[:k] + bytes([raw[k] ^ mask]) + raw[k + 1 :]
                        )
                        if not rejected(
                            with_block(
                                bi, dataclasses.replace(block, **{field: doctored})
                            )
                        ):
                            escapes.append((field, bi, k, mask))

            for field in ("nonce", "timestamp"):
                value = getattr(block, field)
                for bit in range(64):
                    mutations += 1
                    if not rejected(
                        with_block(
                            bi,
                            dataclasses.replace(block, **{field: value ^ (1 << bit)}),
                        )
                    ):
                        escapes.append((field, bi, bit))

        assert mutations == 3528
        assert escapes == [], f"{len(escapes)} undetected mutations: {escapes[:10]}"


def test_attack_success_rate_is_monotone_in_attacker_fraction():
    """Rewriting a 5-deep commitment over 10,000 seeded trials per attacker
    fraction: the success rate is monotone nondecreasing across
    {0.1, 0.3, 0.5, 0.7}, negligible at 0.1 and dominant at 0.7.

    All fractions reuse the same seeds, so a stronger attacker replays the
    same luck with more hash power and monotonicity holds trial by trial."""
    with budget("rewrite attack monotonicity, 40,000 trials", limit_seconds=30.0):
        chain = Chain(difficulty_bits=0)
        for i in range(6):
            chain.mine_block(now=i + 1)

        fractions = (0.1, 0.3, 0.5, 0.7)
        rates = [
            attack_success_rate(
                chain, target_depth=5, attacker_fraction=f, trials=10_000
            )
            for f in fractions
        ]
        for weaker, stronger in zip(rates, rates[1:]):
            assert weaker <= stronger, f"rates not monotone: {rates}"
        assert rates[0] < 0.01, f"rate at 0.1 attacker fraction: {rates[0]}"
        assert rates[-1] > 0.9, f"rate at 0.7 attacker fraction: {rates[-1]}"


def test_tsa_trust_contrast():
    """A signing authority's tokens verify and any altered field fails, but
    one leaked key forges arbitrary backdated tokens. Forging the chain
    commitment instead (depth 5, 30% attacker) fails in over 99% of
    1,000 trials."""
    with budget("timestamp authority contrast"):
        rng = random.Random(61)
        signer = Ed25519Signer(key_id="authority-1")
        token = issue_timestamp(random_digest(rng), now=1_700_000_000, signer=signer)
        assert verify_tsa_token(token, signer.public_key)

        altered = [
            dataclasses.replace(token, document_hash=random_digest(rng)),
            dataclasses.replace(token, plaintext_time="1999-01-01T00:00:00Z"),
            dataclasses.replace(
                token,
                signature=bytes([token.signature[0] ^ 1]) + token.signature[1:],
            ),
            dataclasses.replace(token, key_id="authority-2"),
        ]
        assert all(not verify_tsa_token(t, signer.public_key) for t in altered)

        # key exposure: the holder mints a token for any hash at any time
        leaked = signer
        forged = issue_timestamp(random_digest(rng), now=0, signer=leaked)
        assert forged.plaintext_time == "1970-01-01T00:00:00Z"
        assert verify_tsa_token(forged, signer.public_key)

        # the chain path has no key to leak; rewriting is a losing race
        chain = Chain(difficulty_bits=0)
        for i in range(6):
            chain.mine_block(now=i + 1)
        forgeries = sum(
            simulate_rewrite_attack(
                chain, target_depth=5, attacker_fraction=0.3, seed=i
            ).success
            for i in range(1_000)
        )
        assert forgeries < 10, f"{forgeries}/1000 rewrites succeeded"


def test_aggregation_is_order_independent_and_substitution_sensitive():
    """1,000 random hash multisets, each permuted 10 ways, aggregate to one
    value per multiset; replacing any single element changes it."""
    with budget("aggregation determinism, 1,000 multisets"):
        rng = random.Random(71)
        for _ in range(1_000):
            hashes = [random_digest(rng) for _ in range(rng.randrange(1, 9))]
            reference = aggregate(hashes)
            for _ in range(10):
                rng.shuffle(hashes)
                assert aggregate(hashes) == reference

            victim = rng.randrange(len(hashes))
            replacement = random_digest(rng)
            while replacement in hashes:
                replacement = random_digest(rng)
            substituted = list(hashes)
            substituted[victim] = replacement
            assert aggregate(substituted) != reference
