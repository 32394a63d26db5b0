#!/usr/bin/env python3
"""Generate webclient test fixtures from a live timestamping service.

Starts ``chainstamp serve`` as a subprocess, drives it purely over its public
HTTP interface, and records three scenarios the browser verifier must agree
with the command-line verifier on:

* ``verified.json``  — a stamped document with 6 confirmations
* ``pending.json``   — a stamped document with only 2 confirmations
* ``mismatch.json``  — a tampered document checked against the first proof

Each fixture stores the document text, its digest, the proof bundle exactly
as served, the chain endpoint responses the browser verifier would fetch
(tip, containing block, transaction), and the command-line verifier's JSON
report for the same inputs.  Run from anywhere; writes into
``frontend/tests/fixtures/``.
"""

from __future__ import annotations

import hashlib
import json
import os
import shutil
import signal
import socket
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import httpx

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

DOC_VERIFIED = "webclient fixture: the original, committed document\n"
DOC_PENDING = "webclient fixture: a document still short of finality\n"
DOC_TAMPERED = "webclient fixture: the original, committed docum3nt\n"


def sha256_hex(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


def wait_for_server(client: httpx.Client, timeout: float = 30.0) -> None:
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        try:
            if client.get("/v1/chain/tip").status_code == 200:
                return
        except httpx.TransportError:
            pass
        time.sleep(0.2)
    raise RuntimeError("service did not come up in time")


def capture_chain_view(client: httpx.Client, bundle: dict) -> dict:
    """Record the chain responses the browser verifier fetches for a bundle."""
    tip = client.get("/v1/chain/tip").json()
    block = client.get(f"/v1/chain/blocks/{bundle['block_hash']}").json()
    tx = client.get(f"/v1/chain/txs/{bundle['txid']}").json()
    return {
        "tip": tip,
        "blocks": {bundle["block_hash"]: block},
        "txs": {bundle["txid"]: tx},
    }


def cli_verify(bundle_path: Path, chain_path: Path, digest: str) -> dict:
    result = subprocess.run(
        [
            sys.executable,
            "-m",
            "chainstamp.cli",
            "verify",
            "--bundle",
            str(bundle_path),
            "--chain",
            str(chain_path),
            "--digest",
            digest,
            "--json",
        ],
        capture_output=True,
        text=True,
    )
    if result.returncode not in (0, 1):
        raise RuntimeError(
            f"verify exited {result.returncode}: {result.stderr.strip()}"
        )
    return json.loads(result.stdout)


def write_fixture(name: str, payload: dict) -> None:
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    path = FIXTURE_DIR / f"{name}.json"
    path.write_text(json.dumps(payload, indent=2) + "\n")
    print(f"wrote {path}")


def main() -> int:
    port = free_port()
    workdir = Path(tempfile.mkdtemp(prefix="chainstamp-fixtures-"))
    data_dir = workdir / "data"
    env = dict(
        os.environ,
        CHAINSTAMP_WINDOW_SECONDS="1",
        CHAINSTAMP_DIFFICULTY_BITS="8",
        CHAINSTAMP_SCHEDULER_INTERVAL="0",
    )
    server = subprocess.Popen(
        [
            sys.executable,
            "-m",
            "chainstamp.cli",
            "serve",
            "--port",
            str(port),
            "--data-dir",
            str(data_dir),
        ],
        env=env,
        stdout=subprocess.DEVNULL,
        stderr=subprocess.DEVNULL,
    )
    try:
        with httpx.Client(base_url=f"http://127.0.0.1:{port}") as client:
            wait_for_server(client)

            # --- verified: priority commit, then mine past the finality depth
            digest_a = sha256_hex(DOC_VERIFIED)
            client.post(
                "/v1/stamps", json={"hash": digest_a, "priority": True}
            ).raise_for_status()
            client.post("/v1/admin/mine", json={"blocks": 6}).raise_for_status()
            bundle_a_text = client.get(f"/v1/stamps/{digest_a}/proof").text
            bundle_a = json.loads(bundle_a_text)
            chain_view_a = capture_chain_view(client, bundle_a)
            chain_a = workdir / "chain-verified.dat"
            shutil.copy(data_dir / "chain.dat", chain_a)
            bundle_a_path = workdir / "bundle-verified.json"
            bundle_a_path.write_text(bundle_a_text)

            write_fixture(
                "verified",
                {
                    "document": DOC_VERIFIED,
                    "digest": digest_a,
                    "bundle_text": bundle_a_text,
                    "chain": chain_view_a,
                    "cli": cli_verify(bundle_a_path, chain_a, digest_a),
                },
            )

            # --- mismatch: a tampered document against the same proof
            digest_c = sha256_hex(DOC_TAMPERED)
            write_fixture(
                "mismatch",
                {
                    "document": DOC_TAMPERED,
                    "digest": digest_c,
                    "bundle_text": bundle_a_text,
                    "chain": chain_view_a,
                    "cli": cli_verify(bundle_a_path, chain_a, digest_c),
                },
            )

            # --- pending: committed and mined, but short of the finality depth
            digest_b = sha256_hex(DOC_PENDING)
            client.post(
                "/v1/stamps", json={"hash": digest_b, "priority": True}
            ).raise_for_status()
            client.post("/v1/admin/mine", json={"blocks": 2}).raise_for_status()
            bundle_b_text = client.get(f"/v1/stamps/{digest_b}/proof").text
            bundle_b = json.loads(bundle_b_text)
            chain_view_b = capture_chain_view(client, bundle_b)
            chain_b = workdir / "chain-pending.dat"
            shutil.copy(data_dir / "chain.dat", chain_b)
            bundle_b_path = workdir / "bundle-pending.json"
            bundle_b_path.write_text(bundle_b_text)

            write_fixture(
                "pending",
                {
                    "document": DOC_PENDING,
                    "digest": digest_b,
                    "bundle_text": bundle_b_text,
                    "chain": chain_view_b,
                    "cli": cli_verify(bundle_b_path, chain_b, digest_b),
                },
            )
    finally:
        server.send_signal(signal.SIGINT)
        try:
            server.wait(timeout=10)
        except subprocess.TimeoutExpired:
            server.kill()
        shutil.rmtree(workdir, ignore_errors=True)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
