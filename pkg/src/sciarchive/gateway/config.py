"""Key=value configuration file."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass
class Config:
    store_path: Optional[str] = None
    listen_addr: str = "127.0.0.1:8080"
    moving_wall_default: int = 3
    fuzzy_threshold: float = 0.75
    ui_dir: Optional[str] = None

    @property
    def host(self) -> str:
        return self.listen_addr.rsplit(":", 1)[0] or "127.0.0.1"

    @property
    def port(self) -> int:
        parts = self.listen_addr.rsplit(":", 1)
        return int(parts[1]) if len(parts) == 2 else 8080


def load_config(path: str) -> Config:
    """Parse ``key = value`` lines; quotes are optional, '#' starts a comment."""
    config = Config()
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line or "=" not in line:
                continue
            key, value = (part.strip() for part in line.split("=", 1))
            value = value.strip("\"'")
            if key == "store_path":
                config.store_path = value
            elif key == "listen_addr":
                config.listen_addr = value
            elif key == "moving_wall_default":
                config.moving_wall_default = int(value)
            elif key == "fuzzy_threshold":
                config.fuzzy_threshold = float(value)
            elif key == "ui_dir":
                config.ui_dir = value
    return config
