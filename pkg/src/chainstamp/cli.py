"""Command-line client and operator tool.

Exit codes are part of the contract:
  0  success / VERDICT=verified
  1  verification completed with a verdict other than verified
  2  unreadable input (file, stdin, or an unusable digest for verify)
  3  network error talking to the service
  4  request rejected by the service, or a malformed digest caught before
     any network traffic
  5  proof bundle unreadable or unparseable
  6  chain file unreadable or invalid
  7  configuration error
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Optional

import httpx

from .chainsim import Chain, read_chain
from .config import DEFAULT_PORT, load_config
from .crypto import sha256_of_stream
from .digests import Digest32
from .errors import ChainFileError, ConfigError
from .ledger import ProofBundle
from .verifier import Verdict, format_report, verify_with_bundle

DEFAULT_SERVER = f"http://127.0.0.1:{DEFAULT_PORT}"

EXIT_OK = 0
EXIT_NOT_VERIFIED = 1
EXIT_UNREADABLE = 2
EXIT_NETWORK = 3
EXIT_REJECTED = 4
EXIT_BAD_BUNDLE = 5
EXIT_BAD_CHAIN = 6
EXIT_BAD_CONFIG = 7


class CommandFailure(Exception):
    def __init__(self, exit_code: int, message: str):
        super().__init__(message)
        self.exit_code = exit_code
        self.message = message


def _hash_file(path: str) -> Digest32:
    try:
        if path == "-":
            return sha256_of_stream(sys.stdin.buffer)
        with open(path, "rb") as fp:
            return sha256_of_stream(fp)
    except OSError as exc:
        raise CommandFailure(EXIT_UNREADABLE, f"cannot read {path}: {exc}") from exc


def _resolve_digest(args: argparse.Namespace, *, malformed_exit: int) -> Digest32:
    """Digest from --file (hashed locally) or the digest argument.

    With --file, only the resulting digest ever reaches the network.
    """
    if getattr(args, "file", None):
        return _hash_file(args.file)
    try:
        return Digest32.from_hex(args.digest)
    except ValueError as exc:
        raise CommandFailure(malformed_exit, f"malformed digest: {exc}") from exc


def _request(
    method: str, server: str, path: str, json_body: Optional[dict] = None
) -> httpx.Response:
    try:
        response = httpx.request(
            method, server.rstrip("/") + path, json=json_body, timeout=30.0
        )
    except httpx.HTTPError as exc:
        raise CommandFailure(EXIT_NETWORK, f"network error: {exc}") from exc
    if response.status_code >= 400:
        try:
            body = response.json()
            detail = f"{body['error']}: {body['detail']}"
        except (ValueError, KeyError):
            detail = response.text.strip() or f"HTTP {response.status_code}"
        raise CommandFailure(
            EXIT_REJECTED, f"server rejected request ({response.status_code}): {detail}"
        )
    return response


def _print_fields(data: dict, keys: list[str]) -> None:
    for key in keys:
        if key in data and data[key] is not None:
            print(f"{key}={data[key]}")


def cmd_hash(args: argparse.Namespace) -> int:
    digest = _hash_file(args.path)
    print(digest.hex)
    return EXIT_OK


def cmd_stamp(args: argparse.Namespace) -> int:
    digest = _resolve_digest(args, malformed_exit=EXIT_REJECTED)
    response = _request(
        "POST",
        args.server,
        "/v1/stamps",
        {"hash": digest.hex, "priority": args.priority},
    )
    data = response.json()
    if args.json:
        print(json.dumps(data))
    else:
        _print_fields(
            data, ["hash", "status", "window_id", "received_at", "window_closes_at"]
        )
    return EXIT_OK


def cmd_status(args: argparse.Namespace) -> int:
    digest = _resolve_digest(args, malformed_exit=EXIT_REJECTED)
    response = _request("GET", args.server, f"/v1/stamps/{digest.hex}")
    data = response.json()
    if args.json:
        print(json.dumps(data))
    else:
        _print_fields(
            data,
            [
                "hash",
                "status",
                "window_id",
                "txid",
                "address",
                "block_height",
                "block_time",
                "confirmations",
            ],
        )
    return EXIT_OK


def cmd_proof(args: argparse.Namespace) -> int:
    digest = _resolve_digest(args, malformed_exit=EXIT_REJECTED)
    response = _request("GET", args.server, f"/v1/stamps/{digest.hex}/proof")
    text = response.text
    if args.out:
        try:
            Path(args.out).write_text(text + ("" if text.endswith("\n") else "\n"))
        except OSError as exc:
            raise CommandFailure(EXIT_UNREADABLE, f"cannot write {args.out}: {exc}")
        print(f"proof written to {args.out}", file=sys.stderr)
    else:
        print(text)
    return EXIT_OK


def _load_bundle(path: str) -> ProofBundle:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CommandFailure(EXIT_BAD_BUNDLE, f"cannot read bundle {path}: {exc}")
    try:
        return ProofBundle.from_json(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise CommandFailure(EXIT_BAD_BUNDLE, f"unparseable bundle {path}: {exc}")


def _load_chain(path: str) -> Chain:
    try:
        blocks = read_chain(Path(path))
    except OSError as exc:
        raise CommandFailure(EXIT_BAD_CHAIN, f"cannot read chain file {path}: {exc}")
    except ChainFileError as exc:
        raise CommandFailure(EXIT_BAD_CHAIN, f"invalid chain file {path}: {exc}")
    try:
        return Chain.from_blocks(blocks, blocks[-1].difficulty_bits if blocks else 0)
    except ValueError as exc:
        raise CommandFailure(EXIT_BAD_CHAIN, f"invalid chain in {path}: {exc}")


def cmd_verify(args: argparse.Namespace) -> int:
    bundle = _load_bundle(args.bundle)
    chain = _load_chain(args.chain)
    digest = _resolve_digest(args, malformed_exit=EXIT_UNREADABLE)
    report = verify_with_bundle(
        digest, bundle, chain, finality_depth=args.finality_depth
    )
    if args.json:
        payload = asdict(report)
        payload["verdict"] = report.verdict.value
        print(json.dumps(payload))
    else:
        print(format_report(report))
    return EXIT_OK if report.verdict is Verdict.VERIFIED else EXIT_NOT_VERIFIED


def cmd_serve(args: argparse.Namespace) -> int:
    overrides = {}
    if args.host:
        overrides["bind_host"] = args.host
    if args.port is not None:
        overrides["bind_port"] = args.port
    if args.data_dir:
        overrides["data_dir"] = Path(args.data_dir)
    try:
        config = load_config(Path(args.config) if args.config else None, env=os.environ)
        if overrides:
            config = dataclasses.replace(config, **overrides)
    except ConfigError as exc:
        raise CommandFailure(EXIT_BAD_CONFIG, f"configuration error: {exc}")

    import uvicorn

    from .service import create_app

    app = create_app(config)
    uvicorn.run(app, host=config.bind_host, port=config.bind_port, log_level="info")
    return EXIT_OK


def cmd_mine(args: argparse.Namespace) -> int:
    if args.blocks < 0:
        raise CommandFailure(EXIT_REJECTED, "blocks cannot be negative")
    response = _request(
        "POST", args.server, "/v1/admin/mine", {"blocks": args.blocks}
    )
    data = response.json()
    if args.json:
        print(json.dumps(data))
    else:
        print(f"mined {data['mined']} block(s); tip height {data['tip_height']}")
    return EXIT_OK


def _add_server_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--server", default=DEFAULT_SERVER, help=f"service URL (default {DEFAULT_SERVER})"
    )


def _add_json_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--json", action="store_true", help="print the raw JSON response"
    )


def _add_digest_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("digest", nargs="?", help="64-hex sha256 digest")
    group.add_argument("--file", help="hash this file locally instead")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chainstamp",
        description="Timestamp document hashes on a simulated proof-of-work chain.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hash", help="print the sha256 digest of a file or stdin")
    p.add_argument("path", nargs="?", default="-", help="file path, or - for stdin")
    p.set_defaults(func=cmd_hash)

    p = sub.add_parser("stamp", help="submit a digest for timestamping")
    _add_digest_args(p)
    p.add_argument(
        "--priority", action="store_true", help="commit immediately, skipping the window"
    )
    _add_server_arg(p)
    _add_json_arg(p)
    p.set_defaults(func=cmd_stamp)

    p = sub.add_parser("status", help="query the status of a stamped digest")
    _add_digest_args(p)
    _add_server_arg(p)
    _add_json_arg(p)
    p.set_defaults(func=cmd_status)

    p = sub.add_parser("proof", help="download the proof bundle for a digest")
    _add_digest_args(p)
    p.add_argument("--out", help="write the bundle here instead of stdout")
    _add_server_arg(p)
    p.set_defaults(func=cmd_proof)

    p = sub.add_parser(
        "verify", help="verify a proof bundle against a chain file, fully offline"
    )
    p.add_argument("--bundle", required=True, help="proof bundle JSON file")
    p.add_argument("--chain", required=True, help="chain file to verify against")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--file", help="document to verify (hashed locally)")
    group.add_argument("--digest", help="precomputed 64-hex digest")
    p.add_argument(
        "--finality-depth",
        type=int,
        default=5,
        help="confirmations required for a verified verdict (default 5)",
    )
    _add_json_arg(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("serve", help="run the timestamping service")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--host", help="bind address override")
    p.add_argument("--port", type=int, help="bind port override")
    p.add_argument("--data-dir", help="data directory override")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("mine", help="mine blocks on the service's simulated chain")
    p.add_argument("--blocks", type=int, default=1, help="number of blocks to mine")
    _add_server_arg(p)
    _add_json_arg(p)
    p.set_defaults(func=cmd_mine)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CommandFailure as failure:
        print(failure.message, file=sys.stderr)
        return failure.exit_code


if __name__ == "__main__":
    sys.exit(main())
