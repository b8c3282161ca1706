import json
from pathlib import Path

import pytest
from hypothesis import settings

from benfordkit import _pykernels

try:
    from benfordkit import _ckernels
except ImportError:  # pragma: no cover - depends on build
    _ckernels = None

# numeric property tests vary widely in run time; wall-clock deadlines only add flakes
settings.register_profile("benfordkit", deadline=None)
settings.load_profile("benfordkit")

ORACLES = json.loads((Path(__file__).parent / "oracles" / "frozen.json").read_text())

BACKENDS = [pytest.param(_pykernels, id="python")]
if _ckernels is not None:
    BACKENDS.append(pytest.param(_ckernels, id="cython"))


@pytest.fixture(scope="session")
def oracles():
    return ORACLES


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


#: one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
