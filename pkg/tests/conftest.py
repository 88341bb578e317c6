"""Shared fixtures.

The critical-value table on the full default grid is expensive (a couple
of minutes at R=10^4), so it is built once and cached on disk under
tests/_table_cache/. The cache file name encodes every input that
determines the table, and builds are resumable, so a stale or truncated
cache cannot poison a run; delete the directory to force a rebuild.
"""

from __future__ import annotations

from pathlib import Path

import pytest

from longcycle.tables import (
    build_table_resumable,
    cache_file_name,
    default_c_grid,
    default_d_grid,
    load_table,
)

TABLE_SEED = 777
TABLE_R = 10_000
TABLE_DT = 0.01
TABLE_ALPHA = 0.05

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def default_table_path() -> Path:
    cache = Path(__file__).parent / "_table_cache"
    cache.mkdir(exist_ok=True)
    cg, dg = default_c_grid(), default_d_grid()
    path = cache / cache_file_name("constant", TABLE_ALPHA, TABLE_R, TABLE_DT, TABLE_SEED, cg, dg)
    if not path.exists():
        build_table_resumable(
            "constant", TABLE_ALPHA, cg, dg, TABLE_R, TABLE_DT, TABLE_SEED, path
        )
    return path


@pytest.fixture(scope="session")
def default_table(default_table_path):
    return load_table(default_table_path)
