import math

import pytest

from pitchopt import config


@pytest.fixture(scope="session")
def cfg():
    return config.load_config()


@pytest.fixture(scope="session")
def model(cfg):
    return config.build_model(cfg)


@pytest.fixture(scope="session")
def motor(cfg):
    return config.build_motor(cfg)


@pytest.fixture
def plant(cfg):
    return config.build_plant(cfg)


def deg(x):
    return math.radians(x)


# One line per acceptance criterion, echoed in the terminal summary.
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
