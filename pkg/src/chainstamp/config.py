"""Service configuration: JSON file plus CHAINSTAMP_* environment overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Optional

from .address import MAINNET_VERSION
from .aggregator import CostModel
from .chainsim.chain import MAX_DIFFICULTY_BITS
from .errors import ConfigError

ENV_PREFIX = "CHAINSTAMP_"

DEFAULT_PORT = 8841


@dataclass
class ServiceConfig:
    bind_host: str = "127.0.0.1"
    bind_port: int = DEFAULT_PORT
    window_seconds: int = 86_400
    difficulty_bits: int = 16
    finality_depth: int = 5
    fee_satoshi: int = 10_000
    dust_satoshi: int = 1
    btc_price_usd: str = "250"
    address_version: int = MAINNET_VERSION
    webhook_url: Optional[str] = None
    data_dir: Path = field(default_factory=lambda: Path("./chainstamp-data"))
    scheduler_interval: float = 1.0
    auto_mine: bool = True

    def __post_init__(self) -> None:
        self.data_dir = Path(self.data_dir)
        if self.window_seconds < 1:
            raise ConfigError("window_seconds must be at least 1")
        if not 0 <= self.difficulty_bits <= MAX_DIFFICULTY_BITS:
            raise ConfigError(f"difficulty_bits must be 0-{MAX_DIFFICULTY_BITS}")
        if self.finality_depth < 1:
            raise ConfigError("finality_depth must be at least 1")
        if self.dust_satoshi < 1:
            raise ConfigError("dust_satoshi must be at least 1")
        if self.fee_satoshi < 0:
            raise ConfigError("fee_satoshi cannot be negative")
        if not 0 <= self.address_version <= 0xFF:
            raise ConfigError("address_version must be a single byte")
        try:
            price = Fraction(self.btc_price_usd)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"btc_price_usd is not a rational number: {exc}") from exc
        if price <= 0:
            raise ConfigError("btc_price_usd must be positive")

    @property
    def btc_price(self) -> Fraction:
        return Fraction(self.btc_price_usd)

    @property
    def chain_path(self) -> Path:
        return self.data_dir / "chain.dat"

    @property
    def ledger_path(self) -> Path:
        return self.data_dir / "ledger.jsonl"

    @property
    def announce_path(self) -> Path:
        return self.data_dir / "announcements.log"

    def cost_model(self) -> CostModel:
        return CostModel(
            dust_amount=self.dust_satoshi,
            fee=self.fee_satoshi,
            btc_price=self.btc_price,
        )


_INT_KEYS = {
    "bind_port",
    "window_seconds",
    "difficulty_bits",
    "finality_depth",
    "fee_satoshi",
    "dust_satoshi",
    "address_version",
}
_FLOAT_KEYS = {"scheduler_interval"}
_BOOL_KEYS = {"auto_mine"}


def _coerce(key: str, value: str):
    if key in _INT_KEYS:
        return int(value)
    if key in _FLOAT_KEYS:
        return float(value)
    if key in _BOOL_KEYS:
        return value.strip().lower() in ("1", "true", "yes", "on")
    if key == "data_dir":
        return Path(value)
    return value


def load_config(
    path: Optional[Path] = None, env: Optional[Mapping[str, str]] = None
) -> ServiceConfig:
    """Read the JSON config file (if given), then apply environment overrides."""
    values: dict = {}
    if path is not None:
        try:
            loaded = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError(f"config file {path} must hold a JSON object")
        values.update(loaded)

    known = {f.name for f in fields(ServiceConfig)}
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")

    env = os.environ if env is None else env
    for key in known:
        env_key = ENV_PREFIX + key.upper()
        if env_key in env:
            values[key] = env[env_key]

    try:
        coerced = {k: _coerce(k, v) if isinstance(v, str) else v for k, v in values.items()}
        return ServiceConfig(**coerced)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid configuration: {exc}") from exc
