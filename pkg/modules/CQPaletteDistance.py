"""
Optimal-transport distance between two palettes.

The ground distance is Euclidean distance in the cylindrical HSV embedding.
Palettes have at most a handful of entries, so the transportation problem is
solved exactly as a linear programme.
"""
import logging

# Numpy
import numpy as np
# Scipy
from scipy.optimize import linprog
from scipy.spatial.distance import cdist

from .CQErrors import InvariantError

__all__ = ['paletteDistance', 'transportCost']

logger = logging.getLogger(__name__)


def _paletteKey(palette):
    return tuple((e.centroid.asTuple(), e.weight) for e in palette.entries)


def transportCost(wa, wb, cost):
    """Minimum cost of moving mass wa onto mass wb under the given cost matrix.

    Parameters:
    -----------
    wa   ... [m] source weights (normalised here)
    wb   ... [n] target weights (normalised here)
    cost ... [m, n] ground cost

    Returns:
    --------
    total transport cost (float)
    """

    wa = np.asarray(wa, dtype=np.float64)
    wb = np.asarray(wb, dtype=np.float64)
    wa = wa / wa.sum()
    wb = wb / wb.sum()
    cost = np.asarray(cost, dtype=np.float64)
    m, n = cost.shape

    # a single source or sink leaves no freedom in the flow
    if m == 1:
        return float(np.dot(wb, cost[0]))
    if n == 1:
        return float(np.dot(wa, cost[:, 0]))

    rows = np.zeros((m, m * n))
    for i in range(m):
        rows[i, i * n:(i + 1) * n] = 1.0
    # the last column constraint is implied by the others
    cols = np.zeros((n - 1, m * n))
    for j in range(n - 1):
        cols[j, j::n] = 1.0

    res = linprog(cost.ravel(), A_eq=np.vstack([rows, cols]), b_eq=np.concatenate([wa, wb[:-1]]),
                  bounds=(0, None), method='highs')
    if not res.success:
        raise InvariantError('transport problem failed: %s' % res.message)

    return max(0.0, float(res.fun))


def paletteDistance(a, b):
    """Transport distance between Palettes a and b.

    Symmetric, and exactly zero for palettes that are identical as weighted sets.
    """

    if _paletteKey(a) == _paletteKey(b):
        return 0.0

    # solve in a canonical orientation so that d(a, b) and d(b, a) agree bit for bit
    if _paletteKey(a) > _paletteKey(b):
        a, b = b, a

    cost = cdist(a.cyl, b.cyl)
    return transportCost(a.weights, b.weights, cost)
