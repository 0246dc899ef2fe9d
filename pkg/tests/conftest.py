import numpy as np
import pytest

from hipm_lab import _backend


BACKENDS = ["python"] + (["compiled"] if _backend.compiled is not None else [])


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run a test once per kernel implementation."""
    module = _backend.fallback if request.param == "python" else _backend.compiled
    monkeypatch.setattr(_backend, "kernels", module)
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240521)


class FixedUniforms:
    """Stand-in generator whose ``random`` always returns the same value."""

    def __init__(self, value):
        self.value = value

    def random(self, size=None):
        return np.full(size, self.value, dtype=float)


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line for an acceptance criterion."""
    lines = request.config.__dict__.setdefault("_acceptance_lines", [])

    def record(label, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] {label}: {detail}"
        lines.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.__dict__.get("_acceptance_lines")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
