"""
Colour-ratio matching of symbols of interest.

A symbol is summarised by the palette of its reference image. Its required
colours (palette weight >= w_min) are searched for tile by tile in a target
image: each tile pixel is assigned to the nearest required colour if it lies
within per_color_tolerance of it, and the resulting fraction vector is
compared to the signature weights by cosine similarity. The image-level
flag also pools square windows of adjacent tiles, so a symbol cut by tile
borders is still seen whole.
"""
import logging
from dataclasses import dataclass, replace

# Numpy
import numpy as np
# Scipy
from scipy.spatial.distance import cdist

from .CQColourSpace import hsvToCylArray
from .CQErrors import UsageError
from .CQQuantize import QuantizeConfig, kmeansPalette, paletteToDict
from .CQReadImage import cloudFromArray, readImage

__all__ = ['SymbolSignature', 'TileGrid', 'SymbolMatch', 'SymbolReport', 'SignatureError',
           'DEFAULT_W_MIN', 'DEFAULT_TOLERANCE', 'DEFAULT_THETA', 'PRESENCE_FRACTION', 'WINDOW_SPANS',
           'signatureFromImage', 'matchTile', 'matchSymbols', 'matchSymbolsInCloud']

logger = logging.getLogger(__name__)


############################################
# MODULE SPECIFIC EXCEPTION
###########################################
class SignatureError(UsageError):
    """A signature has no usable required colour."""

    pass


DEFAULT_W_MIN = 0.10
DEFAULT_TOLERANCE = 0.12
DEFAULT_THETA = 0.90
# a required colour counts as present above this tile fraction
PRESENCE_FRACTION = 0.01
# edge lengths, in tiles, of the square tile windows behind the image-level flag
WINDOW_SPANS = (1, 2, 3)


@dataclass(frozen=True)
class SymbolSignature:
    name: str
    palette: object
    w_min: float = DEFAULT_W_MIN
    per_color_tolerance: float = DEFAULT_TOLERANCE
    theta: float = DEFAULT_THETA

    def __post_init__(self):
        if not self.per_color_tolerance > 0:
            raise SignatureError('%s: per_color_tolerance must be positive' % self.name)
        if not (self.palette.weights >= self.w_min).any():
            raise SignatureError('%s: no palette colour reaches w_min=%g' % (self.name, self.w_min))

    @property
    def required(self):
        return self.palette.weights >= self.w_min

    @property
    def requiredCyl(self):
        return self.palette.cyl[self.required]

    @property
    def requiredWeights(self):
        return self.palette.weights[self.required]

    def toDict(self):
        return {'name': self.name, 'w_min': self.w_min,
                'per_color_tolerance': self.per_color_tolerance, 'theta': self.theta,
                'palette': paletteToDict(self.palette)}


@dataclass(frozen=True)
class TileGrid:
    """Row-major partition of a width x height raster into tile_size squares.

    Edge tiles are clipped to the raster.
    """
    width: int
    height: int
    tile_size: int

    @classmethod
    def forImage(cls, width, height, tile_size=None):
        if tile_size is None or tile_size <= 0:
            tile_size = max(32, min(width, height) // 8)
        return cls(width, height, int(tile_size))

    @property
    def columns(self):
        return -(-self.width // self.tile_size)

    @property
    def rows(self):
        return -(-self.height // self.tile_size)

    @property
    def tiles(self):
        """(x, y, w, h) of every tile, row-major."""
        t = self.tile_size
        return [(x, y, min(t, self.width - x), min(t, self.height - y))
                for y in range(0, self.height, t) for x in range(0, self.width, t)]

    def tileOf(self, cloud):
        """Tile number of every pixel of a cloud cut from this raster."""
        return (cloud.rows // self.tile_size) * self.columns + cloud.cols // self.tile_size


@dataclass(frozen=True)
class SymbolMatch:
    symbol_name: str
    tile_origin: tuple
    ratio_similarity: float
    matched: bool

    def toDict(self):
        return {'symbol': self.symbol_name, 'x': self.tile_origin[0], 'y': self.tile_origin[1],
                'ratio_similarity': self.ratio_similarity, 'matched': self.matched}


@dataclass(frozen=True)
class SymbolReport:
    """Every (signature, tile) match plus a per-symbol image-level flag."""
    matches: tuple
    flags: dict

    def toDict(self, matched_only=False):
        matches = [m for m in self.matches if m.matched or not matched_only]
        return {'flags': self.flags, 'matches': [m.toDict() for m in matches]}


#-----------------------------------------------------------------------------------------------
def signatureFromImage(symbol_image, k, config, name='', w_min=DEFAULT_W_MIN,
                       per_color_tolerance=DEFAULT_TOLERANCE, theta=DEFAULT_THETA):
    """Quantise a symbol's reference image into a SymbolSignature.

    Transparent background pixels are excluded by the pixel loader.
    """

    cfg = replace(config or QuantizeConfig(), k=k)
    cloud = cloudFromArray(readImage(symbol_image), cfg.max_pixels)
    palette = kmeansPalette(cloud, cfg)

    if palette.effective_k == 1:
        logger.warning('symbol %r has a single colour; its signature will be weak', name)

    return SymbolSignature(name, palette, w_min, per_color_tolerance, theta)


def _requiredLabels(cyl, sig):
    """Index of the nearest required colour for each pixel, or -1 when none is within tolerance."""

    d2 = cdist(cyl, sig.requiredCyl, 'sqeuclidean')
    nearest = np.argmin(d2, axis=1)
    within = d2[np.arange(len(cyl)), nearest] <= sig.per_color_tolerance ** 2
    return np.where(within, nearest, -1)


def _similarities(fractions, weights, theta):
    """Cosine similarity and match decision for each row of a [n, m] fraction array."""

    norms = np.linalg.norm(fractions, axis=1) * np.linalg.norm(weights)
    safe = np.where(norms > 0, norms, 1.0)
    similarity = np.where(norms > 0, np.clip((fractions @ weights) / safe, -1.0, 1.0), 0.0)
    present = (fractions > PRESENCE_FRACTION).all(axis=1)
    return similarity, present & (similarity >= theta)


def _decide(fractions, weights, theta):
    similarity, matched = _similarities(np.asarray(fractions, dtype=np.float64)[None, :], weights, theta)
    return float(similarity[0]), bool(matched[0])


def _windowSums(grid_values, span):
    """Sums over every span x span block of adjacent tiles of a [rows, cols, ...] array."""

    rows, cols = grid_values.shape[:2]
    table = np.zeros((rows + 1, cols + 1) + grid_values.shape[2:])
    table[1:, 1:] = grid_values.cumsum(axis=0).cumsum(axis=1)
    return table[span:, span:] - table[:-span, span:] - table[span:, :-span] + table[:-span, :-span]


def _bestWindow(grid, counts, tile_counts, weights, theta):
    """Best similarity over tile windows and the (x, y, w, h) of the best matching one.

    Windows of WINDOW_SPANS adjacent tiles are scanned in span order then row-major;
    the first window reaching the highest matched similarity wins.
    """

    rows, cols = grid.rows, grid.columns
    per_tile = counts.reshape(rows, cols, -1).astype(np.float64)
    pixels = tile_counts.reshape(rows, cols)
    t = grid.tile_size

    best = 0.0
    window = None
    top = -np.inf
    for span in WINDOW_SPANS:
        if span > rows or span > cols:
            continue
        sums = _windowSums(per_tile, span)
        area = _windowSums(pixels, span)
        fractions = (sums / np.maximum(area, 1.0)[..., None]).reshape(-1, per_tile.shape[2])
        similarity, matched = _similarities(fractions, weights, theta)
        best = max(best, float(similarity.max()))
        if matched.any():
            idx = int(np.argmax(np.where(matched, similarity, -np.inf)))
            if similarity[idx] > top:
                top = float(similarity[idx])
                r, c = divmod(idx, cols - span + 1)
                x, y = c * t, r * t
                window = [x, y, min(span * t, grid.width - x), min(span * t, grid.height - y)]

    return best, window


def matchTile(tile_pixels, sig, theta=None, origin=(0, 0)):
    """Compare the required-colour fractions of one tile with a signature."""

    if theta is None:
        theta = sig.theta
    m = int(sig.required.sum())

    labels = _requiredLabels(hsvToCylArray(tile_pixels.hsv), sig)
    fractions = np.bincount(labels[labels >= 0], minlength=m) / max(len(labels), 1)

    similarity, matched = _decide(fractions, sig.requiredWeights, theta)
    return SymbolMatch(sig.name, tuple(origin), similarity, matched)


def matchSymbolsInCloud(cloud, signatures, tile_size=None, theta=None):
    """Match every signature against every tile of a full-resolution cloud.

    Parameters:
    -----------
    cloud      ... PixelCloud of the whole image (not subsampled)
    signatures ... list of SymbolSignature
    tile_size  ... tile edge in pixels; None for max(32, min(width, height) // 8)
    theta      ... similarity threshold overriding each signature's own

    Returns:
    --------
    SymbolReport with matches sorted by (symbol name, tile row-major order)
    """

    if len(signatures) == 0:
        raise UsageError('at least one symbol signature is required')

    grid = TileGrid.forImage(cloud.width, cloud.height, tile_size)
    tiles = grid.tiles
    ntiles = len(tiles)

    tile_ids = grid.tileOf(cloud)
    tile_counts = np.bincount(tile_ids, minlength=ntiles).astype(np.float64)
    cyl = hsvToCylArray(cloud.hsv)

    matches = []
    flags = {}
    for sig in sorted(signatures, key=lambda s: s.name):
        m = int(sig.required.sum())
        limit = sig.theta if theta is None else theta

        labels = _requiredLabels(cyl, sig)
        hit = labels >= 0
        counts = np.bincount(tile_ids[hit] * m + labels[hit], minlength=ntiles * m).reshape(ntiles, m)
        fractions = counts / np.maximum(tile_counts, 1.0)[:, None]

        similarity, matched = _similarities(fractions, sig.requiredWeights, limit)
        matches.extend(SymbolMatch(sig.name, (x, y), float(s), bool(ok))
                       for (x, y, _, _), s, ok in zip(tiles, similarity, matched))

        best, window = _bestWindow(grid, counts, tile_counts, sig.requiredWeights, limit)
        flagged = window is not None

        flags[sig.name] = {'flagged': flagged, 'best_similarity': best, 'window': window}
        logger.debug('symbol %s: flagged=%s best similarity %.4f', sig.name, flagged, best)

    return SymbolReport(tuple(matches), flags)


def matchSymbols(image, signatures, tile_size=None, theta=None):
    """Decode an encoded image and match the signatures against its tiles."""

    return matchSymbolsInCloud(cloudFromArray(readImage(image), None), signatures, tile_size, theta)
