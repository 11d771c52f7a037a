import contextlib
import time

import pytest
from hypothesis import HealthCheck, settings

# fixed, reproducible randomized testing
settings.register_profile(
    "repro",
    max_examples=100,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repro")

_LINES = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_LINES] = {}


@pytest.fixture
def criterion(request):
    """``with criterion(3, "title") as note:`` records one PASS/FAIL line.

    ``note(text)`` appends detail shown after the verdict.
    """
    lines = request.config.stash[_LINES]

    @contextlib.contextmanager
    def run(number: int, title: str):
        details: list[str] = []
        start = time.perf_counter()
        verdict = "FAIL"
        try:
            yield details.append
            verdict = "PASS"
        finally:
            took = time.perf_counter() - start
            extra = f" [{'; '.join(details)}]" if details else ""
            lines[(number, title)] = f"criterion {number} {verdict}: {title} ({took:.1f}s){extra}"

    return run


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for key in sorted(lines):
            terminalreporter.write_line(lines[key])
