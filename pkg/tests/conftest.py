import os
import sys

import pytest
from hypothesis import settings

settings.register_profile("thorough", max_examples=1000, deadline=None)
settings.load_profile("thorough")

from coxfold.golden import GoldenRat  # noqa: E402


@pytest.fixture
def g():
    """Shorthand constructor: g(a, b=0, den=1) -> a + b tau over den."""
    return lambda a, b=0, den=1: GoldenRat(a, b, den)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not getattr(mod, "VERDICTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.VERDICTS):
        terminalreporter.write_line(mod.VERDICTS[n])
