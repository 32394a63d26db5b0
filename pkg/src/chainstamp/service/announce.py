"""Public announcement sink: immediate, pre-confirmation evidence.

Every accepted submission is appended to a public log file, one line per
hash: ``<RFC3339 UTC> <64hex>``. An optional webhook receives the same
entry as JSON, best effort. Announcements are evidence of submission order,
never proof; the verifier ignores them entirely.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional

import httpx

from ..digests import Digest32
from ..timefmt import format_utc


class AnnouncementSink(str, Enum):
    PUBLIC_LOG = "public_log"
    WEBHOOK = "webhook"


@dataclass(frozen=True)
class AnnouncementEntry:
    document_hash: Digest32
    announced_at: int
    sink: AnnouncementSink


class AnnouncementLog:
    def __init__(self, path: Optional[Path] = None, webhook_url: Optional[str] = None):
        self.path = Path(path) if path is not None else None
        self.webhook_url = webhook_url
        self._lock = threading.Lock()
        self._entries: list[AnnouncementEntry] = []
        self._lines: list[str] = []
        if self.path is not None and self.path.exists():
            self._lines = self.path.read_text().splitlines()

    def publish(self, document_hash: Digest32, announced_at: int) -> AnnouncementEntry:
        """Append to the log (and webhook, if configured) in submission order."""
        line = f"{format_utc(announced_at)} {document_hash.hex}"
        with self._lock:
            self._lines.append(line)
            entry = AnnouncementEntry(
                document_hash=document_hash,
                announced_at=announced_at,
                sink=AnnouncementSink.PUBLIC_LOG,
            )
            self._entries.append(entry)
            if self.path is not None:
                with open(self.path, "a") as fp:
                    fp.write(line + "\n")
                    fp.flush()
        if self.webhook_url:
            self._post_webhook(document_hash, announced_at)
        return entry

    def _post_webhook(self, document_hash: Digest32, announced_at: int) -> None:
        try:
            httpx.post(
                self.webhook_url,
                json={
                    "document_hash": document_hash.hex,
                    "announced_at": format_utc(announced_at),
                },
                timeout=2.0,
            )
            with self._lock:
                self._entries.append(
                    AnnouncementEntry(
                        document_hash=document_hash,
                        announced_at=announced_at,
                        sink=AnnouncementSink.WEBHOOK,
                    )
                )
        except httpx.HTTPError:
            pass  # webhook delivery is best effort; the log line already exists

    def raw_text(self) -> str:
        with self._lock:
            return "".join(line + "\n" for line in self._lines)

    def entries(self) -> list[AnnouncementEntry]:
        with self._lock:
            return list(self._entries)
