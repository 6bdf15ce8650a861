import numpy as np
import pytest

from numba_tools import sweep


def single_source(size=41, slowness=1.0):
    c = size // 2
    values = np.full((size, size), np.inf)
    labels = np.full((size, size), -1)
    frozen = np.zeros((size, size), dtype=bool)
    values[c, c] = 0.0
    labels[c, c] = 0
    frozen[c, c] = True
    return values, labels, np.full((size, size), slowness), frozen


def test_axes_are_exact():
    values, labels, slowness, frozen = single_source()
    result = sweep(values, labels, slowness, frozen, 1.0, 1e-12, 50)
    assert result.converged
    c = values.shape[0] // 2
    k = np.arange(values.shape[0])
    assert result.values[c] == pytest.approx(np.abs(k - c))
    assert result.values[:, c] == pytest.approx(np.abs(k - c))
    assert np.all(result.labels == 0)


def test_off_axis_values_are_upper_bounds():
    values, labels, slowness, frozen = single_source()
    result = sweep(values, labels, slowness, frozen, 1.0, 1e-12, 50)
    c = values.shape[0] // 2
    i, j = np.indices(values.shape)
    exact = np.hypot(i - c, j - c)
    assert np.all(result.values >= exact - 1e-9)
    assert result.values[c + 1, c + 1] == pytest.approx(1 + 1 / np.sqrt(2))


def test_slowness_scales_times():
    values, labels, slowness, frozen = single_source(slowness=2.0)
    result = sweep(values, labels, slowness, frozen, 0.5, 1e-12, 50)
    c = values.shape[0] // 2
    assert result.values[c, c + 10] == pytest.approx(10.0)


def test_inputs_are_copied_and_frozen_nodes_kept():
    values, labels, slowness, frozen = single_source()
    values[0, 0] = 100.0
    frozen[0, 0] = True
    labels[0, 0] = 1
    before = values.copy()
    result = sweep(values, labels, slowness, frozen, 1.0, 1e-12, 50)
    assert np.array_equal(values, before, equal_nan=True)
    assert result.values[0, 0] == 100.0
    assert result.labels[0, 0] == 1


def test_two_sources_split_the_grid():
    size = 31
    values = np.full((size, size), np.inf)
    labels = np.full((size, size), -1)
    frozen = np.zeros((size, size), dtype=bool)
    for label, j in enumerate((5, 25)):
        values[15, j] = 0.0
        labels[15, j] = label
        frozen[15, j] = True
    result = sweep(values, labels, np.ones((size, size)), frozen, 1.0,
                   1e-12, 50)
    assert np.all(result.labels[:, :14] == 0)
    assert np.all(result.labels[:, 17:] == 1)
    assert result.values[15, 15] == pytest.approx(10.0)


def test_iteration_cap():
    values, labels, slowness, frozen = single_source()
    result = sweep(values, labels, slowness, frozen, 1.0, 0.0, 1)
    assert not result.converged
    assert result.iterations == 1
    assert result.residual > 0
