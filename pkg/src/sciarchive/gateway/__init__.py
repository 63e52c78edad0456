"""HTTP/JSON API and admin CLI: the process boundary of the system."""

from .config import Config, load_config
from .app import create_app

__all__ = ["Config", "create_app", "load_config"]
