"""Shared test configuration and gates for the long-running suites."""

import os

import pytest

long_gate = pytest.mark.skipif(
    os.environ.get("STSCOUNT_LONG") != "1",
    reason="set STSCOUNT_LONG=1 to run the long acceptance checks",
)

xlong_gate = pytest.mark.skipif(
    os.environ.get("STSCOUNT_XLONG") != "1",
    reason="set STSCOUNT_XLONG=1 to run the multi-hour checks",
)


@pytest.fixture(scope="session")
def catalogue15():
    """Order-15 classification, shared so the long suite runs it once."""
    from stscount import classify

    return classify.classify_all(15)
