import pytest

from holefree import kernels

KERNEL_NAMES = ("box_violation", "hull2d", "holefree_scan_2d", "empty_polygon_dp",
                "brute_max_hole_2d", "count_holes_2d")


@pytest.fixture(params=sorted(kernels.backends()))
def backend(request, monkeypatch):
    """Run the test once per available kernel backend."""
    mod = kernels.backends()[request.param]
    for name in KERNEL_NAMES:
        monkeypatch.setattr(kernels, name, getattr(mod, name))
    return request.param


# ---------------------------------------------------------------- acceptance lines

_CRITERIA = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_CRITERIA] = {}


@pytest.fixture
def criterion(request):
    """Context manager that records one PASS/FAIL line for an acceptance criterion."""
    results = request.config.stash[_CRITERIA]

    class _Record:
        def __init__(self, number, title):
            self.number, self.title, self.notes = number, title, []

        def note(self, text):
            self.notes.append(text)

        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            status = "PASS" if exc_type is None else "FAIL"
            detail = "; ".join(self.notes) if exc_type is None else f"{exc_type.__name__}: {exc}"
            line = f"criterion {self.number}: {status}  {self.title}" + (f" ({detail})" if detail else "")
            results[self.number] = line
            print(line)
            return False

    return _Record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash[_CRITERIA]
    if results:
        terminalreporter.section("acceptance criteria")
        for k in sorted(results):
            terminalreporter.write_line(results[k])
