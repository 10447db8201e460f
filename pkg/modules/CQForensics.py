"""
Colour-distribution comparison of two image regions.

Each region is quantised with the same k and seed and the two palettes are
compared by transport distance. The verdict only says whether the two regions
are consistent with one colour distribution; it is evidence for a human
coder, not an accusation.
"""
import logging
import re
from dataclasses import dataclass, field

# Numpy
import numpy as np

from .CQErrors import InputError, UsageError
from .CQPaletteDistance import paletteDistance
from .CQQuantize import QuantizeConfig, kmeansPalette, paletteToDict
from .CQReadImage import EmptyImage, cloudFromArray, readImage, subsampleCloud

__all__ = ['RegionSpec', 'ForensicsReport', 'OutOfBounds', 'RegionTooSmall', 'RegionParseError',
           'DEFAULT_K', 'DEFAULT_DELTA', 'MIN_REGION_AREA',
           'parseRegion', 'regionCloud', 'channelHistograms', 'compareRegions']

logger = logging.getLogger(__name__)


############################################
# MODULE SPECIFIC EXCEPTION
###########################################
class OutOfBounds(InputError):
    """The region is not fully inside the image."""

    pass


class RegionTooSmall(InputError):
    """The region covers fewer than MIN_REGION_AREA pixels."""

    pass


class RegionParseError(UsageError):
    """A region string is not of the form x,y,w,h."""

    pass


DEFAULT_K = 4
DEFAULT_DELTA = 0.25
MIN_REGION_AREA = 16

_REGION_RE = re.compile(r'^\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*$')


@dataclass(frozen=True)
class RegionSpec:
    x: int
    y: int
    width: int
    height: int

    @property
    def area(self):
        return self.width * self.height

    def toDict(self):
        return {'x': self.x, 'y': self.y, 'width': self.width, 'height': self.height}


@dataclass(frozen=True)
class ForensicsReport:
    region_a: RegionSpec
    region_b: RegionSpec
    distance: float
    delta_used: float
    verdict: str
    palette_a: object
    palette_b: object
    histograms_a: dict
    histograms_b: dict
    # quantised pixels of each region, kept for plotting
    cloud_a: object = field(default=None, compare=False, repr=False)
    cloud_b: object = field(default=None, compare=False, repr=False)

    def toDict(self):
        return {'region_a': self.region_a.toDict(), 'region_b': self.region_b.toDict(),
                'distance': self.distance, 'delta': self.delta_used, 'verdict': self.verdict,
                'palette_a': paletteToDict(self.palette_a), 'palette_b': paletteToDict(self.palette_b),
                'channel_histograms': {'region_a': self.histograms_a, 'region_b': self.histograms_b}}


#-----------------------------------------------------------------------------------------------
def parseRegion(text):
    """Parse 'x,y,w,h' into a RegionSpec."""

    match = _REGION_RE.match(text)
    if match is None:
        raise RegionParseError('region must be x,y,w,h with non-negative integers, got %r' % (text,))
    return RegionSpec(*(int(g) for g in match.groups()))


def regionCloud(cloud, r):
    """Row-major sub-cloud of the pixels inside region r.

    r is checked against the cloud's original raster dimensions.
    """

    if r.area < MIN_REGION_AREA:
        raise RegionTooSmall('region %s covers %d pixels, need at least %d' % (r, r.area, MIN_REGION_AREA))
    if r.x < 0 or r.y < 0 or r.x + r.width > cloud.width or r.y + r.height > cloud.height:
        raise OutOfBounds('region %s is outside the %dx%d image' % (r, cloud.width, cloud.height))

    rows, cols = cloud.rows, cloud.cols
    inside = (cols >= r.x) & (cols < r.x + r.width) & (rows >= r.y) & (rows < r.y + r.height)
    if not inside.any():
        raise EmptyImage('region %s has no opaque pixels' % (r,))
    return cloud.take(inside)


def channelHistograms(cloud, bins=16):
    """Normalised per-channel histograms of a cloud.

    R, G, B use [0, 256); H uses [0, 360); S and V use [0, 1].
    """

    hist = {}
    if cloud.rgb is not None:
        for i, name in enumerate('rgb'):
            counts, _ = np.histogram(cloud.rgb[:, i], bins=bins, range=(0, 256))
            hist[name] = (counts / max(len(cloud), 1)).tolist()
    for i, (name, span) in enumerate((('h', (0.0, 360.0)), ('s', (0.0, 1.0)), ('v', (0.0, 1.0)))):
        counts, _ = np.histogram(cloud.hsv[:, i], bins=bins, range=span)
        hist[name] = (counts / max(len(cloud), 1)).tolist()
    return hist


def compareRegions(image, a, b, k=DEFAULT_K, delta=DEFAULT_DELTA, seed=2021, config=None, bins=16):
    """Quantise two regions of an image and compare their palettes.

    Parameters:
    -----------
    image  ... encoded image bytes
    a, b   ... RegionSpec
    k      ... palette size for both regions
    delta  ... distance above which the regions are reported inconsistent
    seed   ... k-means seed shared by both regions
    config ... QuantizeConfig supplying the remaining k-means settings
    bins   ... bins of the auxiliary channel histograms

    Returns:
    --------
    ForensicsReport
    """

    if delta < 0:
        raise UsageError('delta must be non-negative, got %r' % delta)

    base = config or QuantizeConfig()
    cfg = QuantizeConfig(k=k, seed=seed, max_iter=base.max_iter, tol=base.tol,
                         n_init=base.n_init, max_pixels=base.max_pixels)

    # regions are cut from the full raster before any subsampling
    cloud = cloudFromArray(readImage(image), None)
    cloud_a = subsampleCloud(regionCloud(cloud, a), cfg.max_pixels)
    cloud_b = subsampleCloud(regionCloud(cloud, b), cfg.max_pixels)

    palette_a = kmeansPalette(cloud_a, cfg)
    palette_b = kmeansPalette(cloud_b, cfg)
    distance = paletteDistance(palette_a, palette_b)
    verdict = 'inconsistent' if distance > delta else 'consistent'

    logger.info('regions %s and %s: distance %.4f, verdict %s', a, b, distance, verdict)

    return ForensicsReport(a, b, distance, delta, verdict, palette_a, palette_b,
                           channelHistograms(cloud_a, bins), channelHistograms(cloud_b, bins), cloud_a, cloud_b)
