import os
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from pwarp import ManifoldSpec
from pwarp.cli import load, load_manifold, load_warped

SPECS = Path(__file__).resolve().parent.parent / "specs"

settings.register_profile(
    "repo", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))


def spec_path(name: str) -> str:
    return str(SPECS / name)


@pytest.fixture(scope="session")
def shipped():
    """Every shipped file, loaded once."""
    return {p.name: load(p) for p in sorted(SPECS.iterdir()) if p.suffix in (".spec", ".warp")}


@pytest.fixture(scope="session")
def h2():
    return load_manifold(SPECS / "H2_1.spec")


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20261014)


def planar(name, coords, index, g, P, params=None, box=None) -> ManifoldSpec:
    return ManifoldSpec.build(name, coords, index, {(0, 0): g[0], (1, 1): g[1]}, {(0, 1): P}, params, box)


def cubic(rng, a: str, b: str) -> str:
    """Random cubic polynomial in two coordinate names."""
    terms = []
    for i in range(4):
        for j in range(4 - i):
            terms.append(f"({rng.uniform(-1, 1):.6f})*{a}^{i}*{b}^{j}")
    return " + ".join(terms)


__all__ = ["SPECS", "spec_path", "planar", "cubic", "load", "load_manifold", "load_warped"]


def pytest_terminal_summary(terminalreporter):
    import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.LINES:
            terminalreporter.write_line(line)
