import functools
import sys
from pathlib import Path

import pytest

from coxminimal import coxring
from coxminimal.groupfile import build_group, parse_invariants, read_group_file, read_invariants_file
from coxminimal.invariants import accept_user_generators
from coxminimal.polyalg import Ring

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "coxminimal" / "fixtures"


def ring_for(G):
    names = ["x", "y"] if G.dim == 2 else ["x", "y", "z", "w"]
    return Ring(names, G.field.conductor)


@functools.lru_cache(maxsize=None)
def group(name):
    return build_group(read_group_file(FIXTURES / f"{name}.grp"))


@functools.lru_cache(maxsize=None)
def seeds(name):
    """(G, ring, names, polys) from the bundled invariants file."""
    G = group(name)
    R = ring_for(G)
    parsed = parse_invariants(read_invariants_file(FIXTURES / f"{name}.inv"), R)
    names = [n for n, _ in parsed]
    return G, R, names, accept_user_generators(G, [f for _, f in parsed], names)


@functools.lru_cache(maxsize=None)
def presentation(name):
    """The finished algorithm on a fixture, computed once per session."""
    G, R, names, polys = seeds(name)
    return coxring.run(G, R, polys, names)


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.summary_lines():
            terminalreporter.write_line(line)
