from pathlib import Path
import sys

import pytest

from surfdyn.io import Catalog

DATA = Path(__file__).with_name("data")


@pytest.fixture(scope="session")
def catalog():
    return Catalog()


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
