"""Merkle root over transaction ids, bitcoin convention.

Adjacent nodes pair up, parent = double SHA-256(left || right); an odd node
at any level is paired with itself. A single leaf is its own root.
"""

from __future__ import annotations

from typing import Sequence

from ..crypto import double_sha256
from ..digests import Digest32
from ..errors import EmptyLeafList


def merkle_root(txids: Sequence[Digest32]) -> Digest32:
    if not txids:
        raise EmptyLeafList("merkle root of an empty leaf list is undefined")
    level = list(txids)
    while len(level) > 1:
        if len(level) % 2:
            level.append(level[-1])
        level = [
            double_sha256(level[i].raw + level[i + 1].raw)
            for i in range(0, len(level), 2)
        ]
    return level[0]
