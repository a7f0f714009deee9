import json
from pathlib import Path

import pytest

from ladderlab.functionals import Functionals, default_config
from ladderlab.ladder import LadderConfig, get_ladder
from ladderlab.phase import build_phase_track

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def oracles():
    return json.loads((DATA / "oracles.json").read_text())


@pytest.fixture(scope="session")
def track():
    # covers the T = 1e4, k = 3 chain and its doubling
    return build_phase_track(10.0, 2.05e4)


@pytest.fixture(scope="session")
def ladder():
    return get_ladder(LadderConfig())


@pytest.fixture(scope="session")
def chain_1e4(ladder):
    return ladder.build_chain(1.0e4, 3)


@pytest.fixture(scope="session")
def functionals():
    return Functionals(get_ladder(default_config()))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
