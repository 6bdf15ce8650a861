import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import catalog  # noqa: E402
from multigraph import MultiGraph  # noqa: E402
from torus_lab import bumped_square_torus  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line(
        'markers', 'slow: exhaustive sweeps and fine-grid numeric runs')


@pytest.fixture
def petersen():
    return catalog.petersen()


@pytest.fixture
def theta():
    return catalog.theta()


@pytest.fixture
def rose2():
    return catalog.rose(2)


@pytest.fixture
def metric_tadpole():
    """Unit triangle with one unit pendant edge at vertex a."""
    return MultiGraph.from_edges(
        ['a', 'b', 'c', 'd'],
        [('e0', 'a', 'b', 1.0), ('e1', 'b', 'c', 1.0), ('e2', 'c', 'a', 1.0),
         ('e3', 'a', 'd', 1.0)])


@pytest.fixture(scope='module')
def bump_torus():
    return bumped_square_torus()
