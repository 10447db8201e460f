"""
Group corpus images by palette similarity with k-medoids (PAM).

Palette transport distance has no meaningful mean, so groups are represented
by medoids: real images a coder can open as the exemplar of their group.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

# Numpy
import numpy as np

from .CQErrors import InvariantError, UsageError
from .CQPaletteDistance import paletteDistance

__all__ = ['ClusterAssignment', 'TooFewImages', 'computeDistanceMatrix', 'pamMedoids',
           'clusterCorpus']

logger = logging.getLogger(__name__)


############################################
# MODULE SPECIFIC EXCEPTION
###########################################
class TooFewImages(UsageError):
    """Fewer analysable images than requested groups."""

    pass


@dataclass(frozen=True)
class ClusterAssignment:
    """groups maps image path -> group id; medoids[gid] is the medoid path of group gid."""
    groups: dict
    medoids: tuple
    g: int
    total_cost: float

    def members(self, gid):
        return sorted(p for p, grp in self.groups.items() if grp == gid)

    def toDict(self):
        return {'g': self.g, 'total_cost': self.total_cost, 'medoids': list(self.medoids),
                'groups': self.groups}

    @classmethod
    def fromDict(cls, data):
        return cls({p: int(gid) for p, gid in data['groups'].items()}, tuple(data['medoids']),
                   int(data['g']), float(data['total_cost']))


#-----------------------------------------------------------------------------------------------
def _distanceRow(i, palettes):
    return [paletteDistance(palettes[i], palettes[j]) for j in range(i + 1, len(palettes))]


def computeDistanceMatrix(palettes, workers=1):
    """Symmetric [n, n] matrix of palette transport distances."""

    n = len(palettes)
    D = np.zeros((n, n))
    task = partial(_distanceRow, palettes=list(palettes))

    if workers > 1 and n > 2:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(task, range(n)))
    else:
        rows = [task(i) for i in range(n)]

    for i, row in enumerate(rows):
        D[i, i + 1:] = row
        D[i + 1:, i] = row
    return D


def _cost(D, medoids):
    return float(D[:, medoids].min(axis=1).sum())


def pamMedoids(D, g, seed=2021, check=False):
    """Partitioning around medoids on a precomputed distance matrix.

    Parameters:
    -----------
    D     ... [n, n] symmetric distance matrix
    g     ... number of medoids
    seed  ... seeds the candidate order used to break ties in BUILD
    check ... raise InvariantError if a SWAP ever raises the total cost

    Returns:
    --------
    medoids ... int array [g] of point indices
    labels  ... int array [n]; labels[medoids[j]] == j
    cost    ... total distance of points to their medoids
    """

    n = len(D)
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)

    # BUILD: start from the most central point, then add the point that
    # lowers the total cost the most
    medoids = [int(order[np.argmin(D.sum(axis=1)[order])])]
    nearest = D[medoids[0]].copy()
    for _ in range(1, g):
        gains = np.maximum(nearest[None, :] - D, 0.0).sum(axis=1)
        gains[medoids] = -np.inf
        pick = int(order[np.argmax(gains[order])])
        medoids.append(pick)
        nearest = np.minimum(nearest, D[pick])

    medoids = np.array(medoids)
    cost = _cost(D, medoids)

    # SWAP until no exchange of a medoid for a non-medoid lowers the cost
    while True:
        best_cost, best_swap = cost, None
        for i in range(g):
            others = np.delete(medoids, i)
            base = D[:, others].min(axis=1) if len(others) else np.full(n, np.inf)
            candidate = np.minimum(D, base[None, :]).sum(axis=1)
            candidate[medoids] = np.inf
            h = int(np.argmin(candidate))
            if candidate[h] < best_cost - 1e-12:
                best_cost, best_swap = float(candidate[h]), (i, h)

        if best_swap is None:
            break

        medoids[best_swap[0]] = best_swap[1]
        new_cost = _cost(D, medoids)
        if check and new_cost > cost + 1e-12:
            raise InvariantError('k-medoids cost increased from %r to %r' % (cost, new_cost))
        cost = new_cost

    labels = np.argmin(D[:, medoids], axis=1)
    labels[medoids] = np.arange(g)

    return medoids, labels, cost


def clusterCorpus(records, g, seed=2021, workers=1):
    """Cluster the ok records into g groups by palette distance.

    Group ids are numbered in order of their medoid paths.
    """

    ok = sorted((r for r in records if r.ok), key=lambda r: r.path)
    if g < 1 or len(ok) < g:
        logger.error('ERROR: cannot form %d groups from %d analysable images.', g, len(ok))
        raise TooFewImages('cannot form %d groups from %d analysable images' % (g, len(ok)))

    D = computeDistanceMatrix([r.palette for r in ok], workers)
    medoids, labels, cost = pamMedoids(D, g, seed, check=logger.isEnabledFor(logging.DEBUG))

    # renumber groups by medoid path
    ranking = sorted(range(g), key=lambda j: ok[medoids[j]].path)
    renumber = {old: new for new, old in enumerate(ranking)}

    groups = {r.path: renumber[int(lab)] for r, lab in zip(ok, labels)}
    medoid_paths = tuple(ok[medoids[old]].path for old in ranking)

    logger.info('Clustered %d images into %d groups, total cost %.6f', len(ok), g, cost)
    return ClusterAssignment(groups, medoid_paths, g, cost)
