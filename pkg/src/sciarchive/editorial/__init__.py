"""Manuscript submission and tracking workflow."""

from .workflow import (
    Editorial,
    NOTIFICATION_TABLE,
    RECOMMENDATIONS,
    ROLES,
    STAGES,
    TERMINAL_STAGES,
    TRANSITIONS,
    allowed_roles,
)

__all__ = [
    "Editorial",
    "NOTIFICATION_TABLE",
    "RECOMMENDATIONS",
    "ROLES",
    "STAGES",
    "TERMINAL_STAGES",
    "TRANSITIONS",
    "allowed_roles",
]
