import math
import sys

import pytest
from hypothesis import settings

from swanson_csm import ModelParams, derive_quantities

settings.register_profile("default", max_examples=30, deadline=None)
settings.load_profile("default")

THETA = math.pi / 4


@pytest.fixture(scope="session")
def params():
    return ModelParams(omega=1.0, alpha=-1.0, beta=-0.5)


@pytest.fixture(scope="session")
def d(params):
    return derive_quantities(params)


@pytest.fixture(scope="session")
def d_ep():
    return derive_quantities(ModelParams(omega=1.0, alpha=-0.5, beta=-0.5))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
