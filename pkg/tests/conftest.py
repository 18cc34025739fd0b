import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / 'fixtures'


@pytest.fixture
def fixtures_dir():
    return FIXTURES


CRITERIA = pytest.StashKey()


@pytest.fixture
def record_criterion(request):
    """Returns ``record(number, ok, detail)`` for the acceptance summary."""
    log = request.config.stash.setdefault(CRITERIA, {})

    def record(number, ok, detail):
        log[number] = (bool(ok), detail)
        print('criterion {0}: {1} {2}'.format(number, 'PASS' if ok else 'FAIL', detail))
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(CRITERIA, {})
    if not log:
        return
    terminalreporter.section('acceptance criteria')
    for number in sorted(log):
        ok, detail = log[number]
        terminalreporter.write_line('criterion {0}: {1}  {2}'.format(
            number, 'PASS' if ok else 'FAIL', detail))
