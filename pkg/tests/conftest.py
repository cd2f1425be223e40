import numpy as np
import pytest
from hypothesis import settings

from fuzzyccl.completion import complete_panel
from fuzzyccl.fpr import ExpertPanel, WeightConfig, validate_complete
from fuzzyccl.io import bundled, read_panel

import golden

settings.register_profile("ci", max_examples=200, deadline=None)
settings.register_profile("dev", max_examples=50, deadline=None)
settings.load_profile("dev")


@pytest.fixture
def example_doc():
    return read_panel(bundled("paper_sec4.json"))


@pytest.fixture
def example_incomplete(example_doc):
    return example_doc.to_panel()


@pytest.fixture
def example_completed(example_incomplete):
    return complete_panel(example_incomplete)


@pytest.fixture
def printed_cp_panel():
    return ExpertPanel(tuple(validate_complete(golden.as_array(m)) for m in golden.CP))


@pytest.fixture
def spv_panel():
    return ExpertPanel(tuple(validate_complete(golden.as_array(m)) for m in golden.SPV))


@pytest.fixture
def example_weights():
    return WeightConfig(delta=golden.DELTA, gamma=golden.GAMMA)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE = pytest.StashKey[list]()


class Verdicts:
    def __init__(self, sink):
        self.sink = sink

    def check(self, criterion: str, label: str, ok: bool, detail: str = "") -> None:
        self.sink.append((criterion, label, bool(ok), detail))
        assert ok, f"criterion {criterion} ({label}) failed: {detail}"


@pytest.fixture
def verdict(request):
    sink = request.config.stash.setdefault(_ACCEPTANCE, [])
    return Verdicts(sink).check


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = config.stash.get(_ACCEPTANCE, [])
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for crit, label, ok, detail in sorted(rows, key=lambda r: (int(r[0].rstrip("abcdefgh")), r[0])):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {crit:<3} {label}: {detail}")
