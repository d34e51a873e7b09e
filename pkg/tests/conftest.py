import re
from collections import defaultdict
from fractions import Fraction

import pytest

from hilbert_subshift import BlockHierarchy, EtaSchedule

F = Fraction

TOY_ETA2 = {(0, 1): F(1, 3), (0, 2): F(1, 4), (1, 2): F(1, 2)}
TOY_ETA1 = {0: F(1, 5), 1: F(2, 5)}

# level 3 appended to the toy table; b_3 is about 2**2317
TOY3_ETA2 = {**TOY_ETA2, (0, 3): F(2, 9), (1, 3): F(9, 20), (2, 3): F(3, 5)}
TOY3_ETA1 = {**TOY_ETA1, 2: F(1, 2)}

# b_1 = 4, b_2 = 2048
HALF_ETA2 = {(0, 1): F(1, 2), (0, 2): F(1, 4), (1, 2): F(1, 2)}
HALF_ETA1 = {0: F(1, 5), 1: F(2, 5)}

# b_1 = 20
FAST_ETA2 = {(0, 1): F(9, 10)}
FAST_ETA1 = {0: F(1, 2)}


def toy_schedule():
    return EtaSchedule.toy(TOY_ETA2, TOY_ETA1)


def toy3_schedule():
    return EtaSchedule.toy(TOY3_ETA2, TOY3_ETA1)


def half_schedule():
    return EtaSchedule.toy(HALF_ETA2, HALF_ETA1)


def fast_schedule():
    return EtaSchedule.toy(FAST_ETA2, FAST_ETA1)


@pytest.fixture(scope="session")
def toy():
    return BlockHierarchy.build(toy_schedule(), 2)


@pytest.fixture(scope="session")
def toy3():
    return BlockHierarchy.build(toy3_schedule(), 3)


@pytest.fixture(scope="session")
def real6():
    return BlockHierarchy.build(EtaSchedule.real(), 6)


# -- acceptance summary ---------------------------------------------------------

_criteria: dict[int, list[bool]] = defaultdict(list)
_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_")


def pytest_runtest_logreport(report):
    match = _CRITERION.search(report.nodeid)
    if not match:
        return
    if report.when == "call" or report.failed:
        _criteria[int(match.group(1))].append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        status = "PASS" if all(_criteria[n]) else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}")
