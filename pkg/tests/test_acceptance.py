"""The nine acceptance criteria, each at its stated tolerance.

Every test prints one line of the form ``[PASS] criterion N: ...``; the lines
are repeated in an "acceptance criteria" section at the end of the pytest
report.  ``heightlab selftest`` prints the same lines.
"""

import pytest

from heightlab import acceptance

from .conftest import ACCEPTANCE_LINES

CASES = [pytest.param(fn, id=f"criterion_{i}") for i, fn in enumerate(acceptance.CRITERIA, start=1)]


@pytest.mark.parametrize("criterion", CASES)
def test_criterion(criterion):
    result = criterion()
    print(result.line())
    ACCEPTANCE_LINES.append(result.line())
    for failure in result.failures[:10]:
        print(f"    {failure}")
    assert result.passed, result.line()
