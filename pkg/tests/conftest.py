from pathlib import Path

import pytest

from qmiter.cli import corpus_path
from qmiter.netlist import Netlist, parse_netlist


@pytest.fixture(scope="session")
def corpus():
    """Loader for bundled corpus netlists by stem name."""
    root = corpus_path()
    cache: dict[str, Netlist] = {}

    def load(stem: str) -> Netlist:
        if stem not in cache:
            cache[stem] = parse_netlist((root / f"{stem}.nl").read_text())
        return cache[stem]

    return load
