"""
K-means colour quantisation of a pixel cloud into a weighted summative palette.

Clustering runs in the cylindrical HSV embedding. Pixels are first collapsed
to their distinct colours with population counts, so the weighted problem
solved here is the same as clustering every pixel. Clouds with many distinct
colours run their restarts on grid cell means and are finished with a few
Lloyd steps on the distinct colours themselves.
"""
import logging
from dataclasses import dataclass

# Numpy
import numpy as np

from .CQColourSpace import Hsv, Rgb8, hsvToCylArray, cylToHsvArray, hsvToRgbArray, rgbToHex
from .CQErrors import UsageError, InvariantError

__all__ = ['QuantizeConfig', 'PaletteEntry', 'Palette', 'REDUCE_ABOVE', 'GRID_BINS', 'kmeansPalette',
           'withinClusterSS', 'paletteToDict', 'paletteFromDict']

logger = logging.getLogger(__name__)

# distinct-colour count above which restarts run on grid cell means
REDUCE_ABOVE = 2048
# grid divisions per axis of the bounding box of the distinct colours
GRID_BINS = 12
# Lloyd steps on the distinct colours after a grid run
POLISH_ITER = 3


@dataclass(frozen=True)
class QuantizeConfig:
    k: int = 5
    seed: int = 2021
    max_iter: int = 100
    tol: float = 1e-4
    n_init: int = 5
    max_pixels: int = 100_000

    def __post_init__(self):
        if self.k < 1:
            raise UsageError('k must be at least 1, got %r' % self.k)
        if self.max_iter < 1:
            raise UsageError('max_iter must be at least 1, got %r' % self.max_iter)
        if not self.tol > 0:
            raise UsageError('tol must be positive, got %r' % self.tol)
        if self.n_init < 1:
            raise UsageError('n_init must be at least 1, got %r' % self.n_init)
        if self.seed < 0:
            raise UsageError('seed must be non-negative, got %r' % self.seed)
        if self.max_pixels is not None and self.max_pixels < 1:
            raise UsageError('max_pixels must be positive, got %r' % self.max_pixels)


@dataclass(frozen=True)
class PaletteEntry:
    centroid: Hsv
    weight: float


@dataclass(frozen=True)
class Palette:
    """Weighted centroids, sorted by weight descending then (h, s, v) ascending."""
    entries: tuple
    effective_k: int
    k: int

    def __len__(self):
        return len(self.entries)

    @property
    def hsv(self):
        return np.array([e.centroid.asTuple() for e in self.entries], dtype=np.float64).reshape(-1, 3)

    @property
    def weights(self):
        return np.array([e.weight for e in self.entries], dtype=np.float64)

    @property
    def cyl(self):
        return hsvToCylArray(self.hsv)


#-----------------------------------------------------------------------------------------------
def _makePalette(hsv, weights, k):
    weights = np.asarray(weights, dtype=np.float64)
    weights = weights / weights.sum()

    entries = [PaletteEntry(Hsv(float(c[0]), float(c[1]), float(c[2])), float(wt))
               for c, wt in zip(hsv, weights)]
    entries.sort(key=lambda e: (-e.weight, e.centroid.h, e.centroid.s, e.centroid.v))

    return Palette(tuple(entries), len(entries), k)


def _distinctColours(cloud):
    """Distinct colours of a cloud with their pixel counts, in a pixel-order independent order."""

    if cloud.rgb is not None:
        rgb = cloud.rgb.astype(np.int64)
        packed = (rgb[:, 0] << 16) | (rgb[:, 1] << 8) | rgb[:, 2]
        _, first, counts = np.unique(packed, return_index=True, return_counts=True)
        return cloud.hsv[first], counts.astype(np.float64)

    hsv, counts = np.unique(cloud.hsv, axis=0, return_counts=True)
    return hsv, counts.astype(np.float64)


def _squaredDistances(X, centres):
    d2 = (X * X).sum(axis=1)[:, None] - 2.0 * (X @ centres.T) + (centres * centres).sum(axis=1)[None, :]
    return np.maximum(d2, 0.0)


def _nearest(X, centres):
    """Labels and exact squared distances to the nearest centre."""

    labels = np.argmin(_squaredDistances(X, centres), axis=1)
    return labels, ((X - centres[labels]) ** 2).sum(axis=1)


def _gridReduce(X, w, bins):
    """Collapse weighted points onto their weighted means within a bins^3 grid over their bounding box."""

    lo = X.min(axis=0)
    span = np.maximum(X.max(axis=0) - lo, 1e-12)
    idx = np.minimum(np.floor((X - lo) / span * bins), bins - 1).astype(np.int64)

    _, cells = np.unique((idx[:, 0] * bins + idx[:, 1]) * bins + idx[:, 2], return_inverse=True)
    cells = cells.ravel()
    mass = np.bincount(cells, weights=w)

    reduced = np.empty((len(mass), 3))
    for c in range(3):
        reduced[:, c] = np.bincount(cells, weights=w * X[:, c]) / mass

    return reduced, mass


def _seedPlusPlus(X, w, k, rng):
    """k-means++ seeding on weighted points."""

    m = len(X)
    centres = np.empty((k, 3))

    first = rng.choice(m, p=w / w.sum())
    centres[0] = X[first]
    d2 = ((X - X[first]) ** 2).sum(axis=1)

    for j in range(1, k):
        p = w * d2
        total = p.sum()
        if total > 0:
            idx = rng.choice(m, p=p / total)
        else:
            idx = int(np.argmax(d2))
        centres[j] = X[idx]
        d2 = np.minimum(d2, ((X - X[idx]) ** 2).sum(axis=1))

    return centres


def _lloyd(X, w, centres, max_iter, tol, check):
    """Weighted Lloyd iterations. Returns (centres, labels, objective)."""

    k = len(centres)
    previous = np.inf

    for iteration in range(max_iter):
        labels, nearest = _nearest(X, centres)
        objective = float(np.dot(w, nearest))

        if check and objective > previous + 1e-12 * max(1.0, abs(previous)):
            raise InvariantError('k-means objective increased from %r to %r at iteration %d'
                                 % (previous, objective, iteration))
        previous = objective

        mass = np.bincount(labels, weights=w, minlength=k)
        moved = centres.copy()
        filled = mass > 0
        for c in range(3):
            sums = np.bincount(labels, weights=w * X[:, c], minlength=k)
            moved[filled, c] = sums[filled] / mass[filled]

        # re-seed empty clusters on the points farthest from their centroids
        far = nearest.copy()
        for j in np.where(~filled)[0]:
            idx = int(np.argmax(far))
            moved[j] = X[idx]
            far[idx] = -1.0

        shift = float(np.sqrt(((moved - centres) ** 2).sum(axis=1)).max())
        centres = moved
        if shift < tol:
            break

    labels, nearest = _nearest(X, centres)
    objective = float(np.dot(w, nearest))

    if check and objective > previous + 1e-12 * max(1.0, abs(previous)):
        raise InvariantError('k-means objective increased on the final assignment')

    return centres, labels, objective


def kmeansPalette(cloud, config):
    """Quantise a PixelCloud into a Palette of at most config.k colours.

    Parameters:
    -----------
    cloud  ... PixelCloud
    config ... QuantizeConfig

    Returns:
    --------
    palette ... Palette; if the cloud has at most k distinct colours these are
                returned exactly with their pixel proportions.

    Comments:
    ---------
    Each restart r seeds k-means++ from a PRNG seeded with config.seed + r.
    The restart with the lowest within-cluster sum of squares wins, ties going
    to the lowest restart index. Above REDUCE_ABOVE distinct colours the
    restarts run on the weighted means of a GRID_BINS grid and the winner gets
    POLISH_ITER Lloyd steps against the full set of distinct colours.
    """

    hsv, counts = _distinctColours(cloud)

    if len(hsv) <= config.k:
        return _makePalette(hsv, counts, config.k)

    X = hsvToCylArray(hsv)
    check = logger.isEnabledFor(logging.DEBUG)

    Y, mass = X, counts
    if len(X) > REDUCE_ABOVE:
        Y, mass = _gridReduce(X, counts, GRID_BINS)
        if len(Y) <= config.k:
            Y, mass = X, counts
        else:
            logger.debug('%d distinct colours reduced to %d grid cells', len(X), len(Y))

    best = None
    for restart in range(config.n_init):
        rng = np.random.default_rng(config.seed + restart)
        centres = _seedPlusPlus(Y, mass, config.k, rng)
        centres, labels, objective = _lloyd(Y, mass, centres, config.max_iter, config.tol, check)
        logger.debug('restart %d: objective %.9g', restart, objective)
        if best is None or objective < best[2]:
            best = (centres, labels, objective)

    centres, labels, _ = best
    if Y is not X:
        centres, labels, _ = _lloyd(X, counts, centres, POLISH_ITER, config.tol, check)

    mass = np.bincount(labels, weights=counts, minlength=config.k)
    used = mass > 0

    return _makePalette(cylToHsvArray(centres[used]), mass[used], config.k)


def withinClusterSS(cloud, palette):
    """Sum over pixels of the squared cylindrical distance to the nearest palette centroid."""

    _, nearest = _nearest(hsvToCylArray(cloud.hsv), palette.cyl)
    return float(nearest.sum())


def paletteToDict(palette):
    rgb = hsvToRgbArray(palette.hsv)
    return {
        'k': palette.k,
        'effective_k': palette.effective_k,
        'entries': [{'h': e.centroid.h, 's': e.centroid.s, 'v': e.centroid.v,
                     'weight': e.weight, 'hex': rgbToHex(Rgb8(*(int(c) for c in px)))}
                    for e, px in zip(palette.entries, rgb)],
    }


def paletteFromDict(data):
    entries = tuple(PaletteEntry(Hsv(e['h'], e['s'], e['v']), e['weight']) for e in data['entries'])
    return Palette(entries, int(data['effective_k']), int(data['k']))
