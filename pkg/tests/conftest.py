from __future__ import annotations

import pytest

from graphhac.instances import random_connected_graph


@pytest.fixture(scope="session")
def small_graphs():
    """Forty connected random graphs with distinct weights for module tests.

    The acceptance suite runs its own full-size batch of 100.
    """
    return [random_connected_graph(1000 + t) for t in range(40)]
