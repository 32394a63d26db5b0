"""UTC second timestamps and their RFC 3339 text form (YYYY-MM-DDTHH:MM:SSZ)."""

from datetime import datetime, timezone


def format_utc(seconds: int) -> str:
    """Render whole UTC seconds as e.g. ``2015-03-24T00:00:00Z``."""
    return datetime.fromtimestamp(int(seconds), tz=timezone.utc).strftime(
        "%Y-%m-%dT%H:%M:%SZ"
    )


def parse_utc(text: str) -> int:
    """Inverse of :func:`format_utc`; raises ValueError on other layouts."""
    dt = datetime.strptime(text, "%Y-%m-%dT%H:%M:%SZ").replace(tzinfo=timezone.utc)
    return int(dt.timestamp())
