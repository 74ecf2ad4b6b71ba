from __future__ import annotations

import time
from dataclasses import dataclass

import pytest

from genstats.complex import minimal_sphere_triangulation
from genstats.extractor import StatisticsGroup, compute_statistics
from genstats.group import parse_group
from genstats.identities import IdentityRows, generate_identities
from genstats.model import ExcitationModel, build_model


@dataclass
class Computed:
    m: ExcitationModel
    rows: IdentityRows
    st: StatisticsGroup
    seconds: float


_CACHE: dict[tuple, Computed] = {}
ACCEPTANCE_LINES: list[str] = []


def computed(d: int, p: int, group: str, depth: int | None = None) -> Computed:
    key = (d, p, group, depth)
    if key not in _CACHE:
        t0 = time.perf_counter()
        m = build_model(minimal_sphere_triangulation(d), parse_group(group), p)
        rows = generate_identities(m, depth)
        st = compute_statistics(m, rows)
        _CACHE[key] = Computed(m, rows, st, time.perf_counter() - t0)
    return _CACHE[key]


@pytest.fixture(scope="session")
def models():
    return computed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
