"""
Flag images that probably contain people, using tolerance bands around the
ten Monk Skin Tone reference colours.

A band is an axis-aligned box in HSV around its reference colour: hue within
h_halfwidth degrees on the circle, saturation and value within their
halfwidths. The bands are tonalities for triage, not a measure of anyone's
skin tone.
"""
import logging
from dataclasses import dataclass

# Numpy
import numpy as np

from .CQColourSpace import ParseError, hexToRgb, rgbToHsv
from .CQErrors import UsageError

__all__ = ['MonkBand', 'MonkScaleConfig', 'SkinFlagReport', 'ParseError',
           'DEFAULT_H_HALFWIDTH', 'DEFAULT_S_HALFWIDTH', 'DEFAULT_V_HALFWIDTH', 'DEFAULT_TAU',
           'bandFromHex', 'pixelInBand', 'bandMask', 'flagSkin', 'paletteInBands']

logger = logging.getLogger(__name__)

# 15% of each axis' full range
DEFAULT_H_HALFWIDTH = 54.0
DEFAULT_S_HALFWIDTH = 0.15
DEFAULT_V_HALFWIDTH = 0.15
DEFAULT_TAU = 0.05

# slack on band edges for floating point
_EDGE = 1e-9


@dataclass(frozen=True)
class MonkBand:
    tone_id: int
    reference: object
    h_halfwidth: float = DEFAULT_H_HALFWIDTH
    s_halfwidth: float = DEFAULT_S_HALFWIDTH
    v_halfwidth: float = DEFAULT_V_HALFWIDTH

    def __post_init__(self):
        if not (self.h_halfwidth > 0 and self.s_halfwidth > 0 and self.v_halfwidth > 0):
            raise UsageError('band %r: halfwidths must be positive' % self.tone_id)

    @property
    def hueWindow(self):
        """(start, end) in degrees; start > end when the window wraps through 0."""
        h = self.reference.h
        return ((h - self.h_halfwidth) % 360.0, (h + self.h_halfwidth) % 360.0)

    @property
    def saturationWindow(self):
        s = self.reference.s
        return (max(0.0, s - self.s_halfwidth), min(1.0, s + self.s_halfwidth))

    @property
    def valueWindow(self):
        v = self.reference.v
        return (max(0.0, v - self.v_halfwidth), min(1.0, v + self.v_halfwidth))


@dataclass(frozen=True)
class MonkScaleConfig:
    bands: tuple
    tau: float = DEFAULT_TAU

    def __post_init__(self):
        if not 0 < self.tau <= 1:
            raise UsageError('tau must lie in (0, 1], got %r' % self.tau)
        if len(self.bands) == 0:
            raise UsageError('a Monk scale needs at least one band')
        if len(self.bands) != 10:
            logger.warning('Monk scale has %d bands instead of 10', len(self.bands))


@dataclass(frozen=True)
class SkinFlagReport:
    tone_ids: tuple
    per_tone_fraction: tuple
    total_matched_fraction: float
    flagged: bool
    tau_used: float

    def toDict(self):
        return {'per_tone_fraction': {str(t): f for t, f in zip(self.tone_ids, self.per_tone_fraction)},
                'total_matched_fraction': self.total_matched_fraction,
                'flagged': self.flagged,
                'tau_used': self.tau_used}

    @classmethod
    def fromDict(cls, data):
        tones = tuple(int(t) for t in data['per_tone_fraction'])
        fractions = tuple(float(f) for f in data['per_tone_fraction'].values())
        return cls(tones, fractions, float(data['total_matched_fraction']),
                   bool(data['flagged']), float(data['tau_used']))


#-----------------------------------------------------------------------------------------------
def bandFromHex(hex_colour, tone_id=0, h_halfwidth=DEFAULT_H_HALFWIDTH,
                s_halfwidth=DEFAULT_S_HALFWIDTH, v_halfwidth=DEFAULT_V_HALFWIDTH):
    """Build a MonkBand around a 'RRGGBB' reference colour (case-insensitive)."""

    reference = rgbToHsv(hexToRgb(hex_colour))
    return MonkBand(tone_id, reference, h_halfwidth, s_halfwidth, v_halfwidth)


def _hueGap(h, ref):
    d = np.abs(np.asarray(h, dtype=np.float64) - ref) % 360.0
    return np.minimum(d, 360.0 - d)


def bandMask(hsv, band):
    """Boolean mask [N] of the rows of an [N, 3] HSV array inside the band."""

    ref = band.reference
    return ((_hueGap(hsv[:, 0], ref.h) <= band.h_halfwidth + _EDGE)
            & (np.abs(hsv[:, 1] - ref.s) <= band.s_halfwidth + _EDGE)
            & (np.abs(hsv[:, 2] - ref.v) <= band.v_halfwidth + _EDGE))


def pixelInBand(p, band):
    return bool(bandMask(np.array([p.asTuple()]), band)[0])


def flagSkin(cloud, scale):
    """Fraction of cloud pixels inside each band and inside their union.

    A pixel may fall in several bands and counts towards each of them, but
    only once towards total_matched_fraction. The image is flagged when the
    total reaches scale.tau.
    """

    masks = np.stack([bandMask(cloud.hsv, b) for b in scale.bands], axis=1)
    per_tone = masks.mean(axis=0)
    total = float(masks.any(axis=1).mean())

    return SkinFlagReport(tuple(b.tone_id for b in scale.bands),
                          tuple(float(f) for f in per_tone),
                          total, total >= scale.tau, scale.tau)


def paletteInBands(palette, scale):
    """Palette centroids lying in at least one band.

    Returns a list of (entry index, [tone ids]) pairs in palette order.
    """

    hsv = palette.hsv
    hits = []
    masks = np.stack([bandMask(hsv, b) for b in scale.bands], axis=1)
    for i, row in enumerate(masks):
        if row.any():
            hits.append((i, [b.tone_id for b, m in zip(scale.bands, row) if m]))
    return hits
