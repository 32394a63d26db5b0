"""Adversarial rewrite race: can a minority fork overtake the honest chain?

Each step one chain grows by a block: the attacker's fork with probability
``attacker_fraction``, otherwise the honest chain. The attacker starts
``target_depth`` behind (re-mining from under a confirmed block) and wins
by strictly exceeding the honest length. Deterministic given the seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .chain import Chain


@dataclass(frozen=True)
class AttackOutcome:
    success: bool
    steps: int


def simulate_rewrite_attack(
    chain: Chain,
    target_depth: int,
    attacker_fraction: float,
    max_steps: int = 200,
    seed: int = 0,
) -> AttackOutcome:
    """Run one seeded rewrite race against a block ``target_depth`` deep.

    The race abandons early once the deficit exceeds the remaining steps,
    which cannot change the outcome but keeps hopeless runs cheap.
    """
    if target_depth < 1:
        raise ValueError("target_depth must be at least 1")
    if not 0.0 <= attacker_fraction <= 1.0:
        raise ValueError("attacker_fraction must lie in [0, 1]")
    if chain.tip.height < target_depth:
        raise ValueError(
            f"chain height {chain.tip.height} is shorter than target depth {target_depth}"
        )

    rng = random.Random(seed)
    honest = target_depth
    attacker = 0
    steps = 0
    while steps < max_steps:
        if honest - attacker + 1 > max_steps - steps:
            break
        steps += 1
        if rng.random() < attacker_fraction:
            attacker += 1
            if attacker > honest:
                return AttackOutcome(success=True, steps=steps)
        else:
            honest += 1
    return AttackOutcome(success=False, steps=steps)


def attack_success_rate(
    chain: Chain,
    target_depth: int,
    attacker_fraction: float,
    trials: int,
    max_steps: int = 200,
    seed_base: int = 0,
) -> float:
    """Fraction of seeded trials in which the rewrite succeeds."""
    wins = sum(
        simulate_rewrite_attack(
            chain, target_depth, attacker_fraction, max_steps, seed_base + i
        ).success
        for i in range(trials)
    )
    return wins / trials
