"""Service configuration: one JSON file plus environment overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

DATA_ROOT_ENV = "SCRIBBLESEG_DATA_ROOT"
PORT_ENV = "SCRIBBLESEG_PORT"
RNG_SEED_ENV = "SCRIBBLESEG_RNG_SEED"


@dataclass
class ServiceConfig:
    data_root: Path
    host: str = "127.0.0.1"
    port: int = 8077
    rng_seed: int = 0
    static_dir: Path | None = None

    @property
    def resolved_static_dir(self) -> Path | None:
        if self.static_dir and self.static_dir.is_dir():
            return self.static_dir
        return None


def load_config(path: str | Path | None = None) -> ServiceConfig:
    """Read the config file (if any), then apply environment overrides."""
    raw: dict = {}
    if path is not None:
        raw = json.loads(Path(path).read_text())
    data_root = os.environ.get(DATA_ROOT_ENV) or raw.get("data_root")
    if not data_root:
        raise ValueError(
            f"no data root configured (set 'data_root' or ${DATA_ROOT_ENV})"
        )
    port = int(os.environ.get(PORT_ENV) or raw.get("port", 8077))
    rng_seed = int(os.environ.get(RNG_SEED_ENV) or raw.get("rng_seed", 0))
    static_dir = raw.get("static_dir")
    return ServiceConfig(
        data_root=Path(data_root),
        host=raw.get("host", "127.0.0.1"),
        port=port,
        rng_seed=rng_seed,
        static_dir=Path(static_dir) if static_dir else None,
    )
