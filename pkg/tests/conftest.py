from __future__ import annotations

from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"


def load_corpus() -> list[str]:
    """Reference corpus: blank-line separated AMSBIB blocks."""
    text = (DATA_DIR / "references.amsbib").read_text(encoding="utf-8")
    blocks = [b.strip() for b in text.split("\n\n")]
    return [b for b in blocks if b]


@pytest.fixture(scope="session")
def corpus() -> list[str]:
    return load_corpus()
