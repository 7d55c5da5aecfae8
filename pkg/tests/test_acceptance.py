"""One test per acceptance criterion, each printing a PASS/FAIL line.

Criteria listed in ``KNOWN_UNATTAINABLE`` are strict xfails: they are run in
full and must keep failing; an unexpected pass fails the suite.
"""

from functools import lru_cache

import pytest

from ladder4.acceptance import KNOWN_UNATTAINABLE, run_criterion, weak_probe_width_check

from conftest import ACCEPTANCE_LINES

SUB_CRITERIA = {
    "1": "1", "2": "2", "3": "3", "4": "4",
    "5a": "5", "5b": "5", "6": "6",
    "7a": "7", "7b": "7", "7c": "7",
    "8": "8", "9a": "9", "9b": "9", "10": "10",
}


@lru_cache(maxsize=None)
def _results(parent: str):
    return {r.key: r for r in run_criterion(parent)}


def _marks(key):
    if key in KNOWN_UNATTAINABLE:
        return [pytest.mark.xfail(strict=True, reason=KNOWN_UNATTAINABLE[key])]
    return []


@pytest.mark.parametrize("key", [pytest.param(k, marks=_marks(k), id=f"criterion-{k}") for k in SUB_CRITERIA])
def test_criterion(key):
    result = _results(SUB_CRITERIA[key])[key]
    line = result.line()
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert result.passed, line


def test_closed_form_width_in_weak_probe_limit():
    result = weak_probe_width_check()
    ACCEPTANCE_LINES.append(result.line())
    print(result.line())
    assert result.passed
