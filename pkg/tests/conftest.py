import os

import numpy as np
import pytest

from marvin.cipher import default_params

_acceptance = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n, title): acceptance criterion test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or rep.when != "call":
        return
    n, title = mark.args
    prev = _acceptance.get(n, (title, True))
    _acceptance[n] = (title, prev[1] and rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_acceptance):
        title, ok = _acceptance[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}")


@pytest.fixture(scope="session")
def params():
    return default_params()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_block(rng):
    return rng.integers(0, 256, 32, dtype=np.uint8).tobytes()


@pytest.fixture
def rand_block(rng):
    return lambda: random_block(rng)
