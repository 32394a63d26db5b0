from __future__ import annotations

import hashlib
import random

import pytest

from chainstamp.config import ServiceConfig
from chainstamp.digests import Digest32
from chainstamp.service.pipeline import CommitmentPipeline

EPOCH_START = 1_700_000_000  # fixed synthetic start so window ids are stable


class FakeClock:
    """Deterministic clock the pipeline and tests share."""

    def __init__(self, start: int = EPOCH_START):
        self.now = start

    def __call__(self) -> float:
        return self.now

    def advance(self, seconds: int) -> int:
        self.now += seconds
        return self.now


def random_digest(rng: random.Random) -> Digest32:
    return Digest32(hashlib.sha256(rng.randbytes(32)).digest())


@pytest.fixture
def clock() -> FakeClock:
    return FakeClock()


@pytest.fixture
def pipeline(clock: FakeClock) -> CommitmentPipeline:
    """In-memory pipeline: 2 s windows, easy mining, no scheduler thread."""
    config = ServiceConfig(
        window_seconds=2,
        difficulty_bits=8,
        scheduler_interval=0,
    )
    return CommitmentPipeline(config, clock=clock, persist=False)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
