import re

import numpy as np
import pytest

_ACCEPTANCE = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def verdict():
    """Record one acceptance line: verdict(label, passed, detail)."""

    def record(label, passed, detail):
        label = str(label)
        _ACCEPTANCE[label] = f"criterion {label:>3}: {'PASS' if passed else 'FAIL'}  {detail}"
        print(_ACCEPTANCE[label])
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    def natural(label):
        num, rest = re.match(r"(\d+)(.*)", label).groups()
        return int(num), rest

    for k in sorted(_ACCEPTANCE, key=natural):
        terminalreporter.write_line(_ACCEPTANCE[k])
