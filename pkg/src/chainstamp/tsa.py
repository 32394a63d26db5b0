"""Reference centralized timestamp authority, for contrast with the chain path.

A token binds a document hash to a plain-text time by signing the SHA-256 of
the canonical string ``lowercase-hex(hash) + "|" + RFC3339-UTC``. The signing
scheme sits behind a small capability interface (anything with ``sign`` and a
``key_id``); the default backend is Ed25519. Whoever holds the private key can
forge tokens for arbitrary hash/time pairs, which is exactly the single point
of failure the chain commitment removes.
"""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass
from typing import Protocol, runtime_checkable

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.asymmetric.ed25519 import (
    Ed25519PrivateKey,
    Ed25519PublicKey,
)

from .crypto import sha256
from .digests import Digest32
from .errors import SigningFailure
from .timefmt import format_utc


@runtime_checkable
class SigningCapability(Protocol):
    key_id: str

    def sign(self, data: bytes) -> bytes: ...


@runtime_checkable
class VerificationCapability(Protocol):
    key_id: str

    def verify(self, signature: bytes, data: bytes) -> bool: ...


@dataclass(frozen=True)
class TsaToken:
    document_hash: Digest32
    plaintext_time: str
    signature: bytes
    key_id: str

    def to_json(self) -> str:
        return json.dumps(
            {
                "document_hash": self.document_hash.hex,
                "plaintext_time": self.plaintext_time,
                "signature_b64": base64.b64encode(self.signature).decode("ascii"),
                "key_id": self.key_id,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "TsaToken":
        data = json.loads(text)
        return cls(
            document_hash=Digest32.from_hex(data["document_hash"]),
            plaintext_time=data["plaintext_time"],
            signature=base64.b64decode(data["signature_b64"]),
            key_id=data["key_id"],
        )


class Ed25519Verifier:
    def __init__(self, public_key: Ed25519PublicKey, key_id: str):
        self._public = public_key
        self.key_id = key_id

    def verify(self, signature: bytes, data: bytes) -> bool:
        try:
            self._public.verify(signature, data)
            return True
        except InvalidSignature:
            return False


class Ed25519Signer:
    def __init__(self, key_id: str = "tsa-default"):
        self._private = Ed25519PrivateKey.generate()
        self.key_id = key_id

    def sign(self, data: bytes) -> bytes:
        return self._private.sign(data)

    @property
    def public_key(self) -> Ed25519Verifier:
        return Ed25519Verifier(self._private.public_key(), self.key_id)


def canonical_string(document_hash: Digest32, plaintext_time: str) -> str:
    return f"{document_hash.hex}|{plaintext_time}"


def issue_timestamp(
    document_hash: Digest32, now: int, signer: SigningCapability
) -> TsaToken:
    """Join hash and time, hash the pair once more, and sign it."""
    plaintext_time = format_utc(now)
    message = sha256(canonical_string(document_hash, plaintext_time).encode("utf-8"))
    try:
        signature = signer.sign(message.raw)
    except Exception as exc:
        raise SigningFailure(f"signing backend failed: {exc}") from exc
    return TsaToken(
        document_hash=document_hash,
        plaintext_time=plaintext_time,
        signature=signature,
        key_id=signer.key_id,
    )


def verify_tsa_token(token: TsaToken, public_key: VerificationCapability) -> bool:
    """True iff the token names this key and the signature validates.

    The signature covers the recomputed canonical hash, so changing any
    field of the token (including the key id) invalidates it.
    """
    if token.key_id != public_key.key_id:
        return False
    message = sha256(
        canonical_string(token.document_hash, token.plaintext_time).encode("utf-8")
    )
    return public_key.verify(token.signature, message.raw)
