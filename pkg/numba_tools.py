from typing import NamedTuple

import numpy as np
from numba import jit


### Labelled fast sweeping ###

@jit(nopython=True)
def _sweep(values: np.ndarray, labels: np.ndarray, slowness: np.ndarray,
           frozen: np.ndarray, h: float, tolerance: float,
           max_sweeps: int):
    """Numba optimized Gauss-Seidel sweeps of the first order upwind
    eikonal scheme |grad T| = slowness on a square grid.  Should not be
    used directly, but via sweep function.

    Args:
    -----

    values: first arrival times, np.inf where unknown, updated in place

    labels: source index of every node, updated in place; a node takes
    the label of the neighbour its value was computed from

    slowness: local slowness (inverse speed) at every node

    frozen: nodes with exact initial values, never updated

    h: grid spacing, equal along both axes

    Returns:
    --------

    Number of full iterations (four sweeps each) and the largest update of
    the last iteration.

    """
    ny, nx = values.shape
    residual = np.inf
    for iteration in range(max_sweeps):
        change = 0.0
        for direction in range(4):
            if direction < 2:
                i0, i1, di = 0, ny, 1
            else:
                i0, i1, di = ny - 1, -1, -1
            if direction % 2 == 0:
                j0, j1, dj = 0, nx, 1
            else:
                j0, j1, dj = nx - 1, -1, -1
            for i in range(i0, i1, di):
                for j in range(j0, j1, dj):
                    if frozen[i, j]:
                        continue
                    a = np.inf
                    la = -1
                    if j > 0 and values[i, j - 1] < a:
                        a = values[i, j - 1]
                        la = labels[i, j - 1]
                    if j < nx - 1 and values[i, j + 1] < a:
                        a = values[i, j + 1]
                        la = labels[i, j + 1]
                    b = np.inf
                    lb = -1
                    if i > 0 and values[i - 1, j] < b:
                        b = values[i - 1, j]
                        lb = labels[i - 1, j]
                    if i < ny - 1 and values[i + 1, j] < b:
                        b = values[i + 1, j]
                        lb = labels[i + 1, j]
                    if a == np.inf and b == np.inf:
                        continue
                    if b < a:
                        a, b = b, a
                        la, lb = lb, la
                    f = slowness[i, j] * h
                    candidate = a + f
                    if candidate > b:
                        disc = 2.0 * f * f - (a - b) * (a - b)
                        if disc >= 0.0:
                            candidate = 0.5 * (a + b + np.sqrt(disc))
                    old = values[i, j]
                    if candidate < old:
                        if old == np.inf:
                            delta = candidate
                        else:
                            delta = old - candidate
                        if delta > change:
                            change = delta
                        values[i, j] = candidate
                        labels[i, j] = la
        residual = change
        if change <= tolerance:
            return iteration + 1, residual
    return max_sweeps, residual


class SweepResult(NamedTuple):
    values: np.ndarray
    labels: np.ndarray
    iterations: int
    residual: float
    converged: bool


def sweep(values: np.ndarray, labels: np.ndarray, slowness: np.ndarray,
          frozen: np.ndarray, h: float, tolerance: float,
          max_sweeps: int) -> SweepResult:
    """
    Solve the eikonal equation from the frozen nodes outwards, carrying
    the label of the source each node's value comes from.  Inputs are
    copied.

    Args:
    -----

    values: initial values, np.inf away from the sources

    labels: int array, source index at frozen nodes, -1 elsewhere

    slowness: positive array of the same shape

    frozen: bool array of nodes with exact values

    h: grid spacing

    tolerance: stop when an iteration changes no value by more

    max_sweeps: iteration cap

    Returns:
    --------

    SweepResult, converged False when the cap was reached.
    """
    values = np.array(values, dtype=np.float64)
    labels = np.array(labels, dtype=np.int64)
    iterations, residual = _sweep(values, labels,
                                  np.asarray(slowness, dtype=np.float64),
                                  np.asarray(frozen, dtype=np.bool_),
                                  float(h), float(tolerance), int(max_sweeps))
    converged = residual <= tolerance
    return SweepResult(values, labels, int(iterations), float(residual),
                       bool(converged))
