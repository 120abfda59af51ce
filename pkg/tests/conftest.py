"""Shared fixtures.

The oracle instances are process-wide singletons, so session scope here is
bookkeeping rather than a cost boundary: weight tables build lazily on first
use and every later test shares them.  Keeping one process for the whole run
is what makes the heavier sweeps affordable.
"""

import pytest

from pieri_forge.oracle import oracle


@pytest.fixture(scope="session")
def qt():
    return oracle("qt")


@pytest.fixture(scope="session")
def al():
    return oracle("alpha")
