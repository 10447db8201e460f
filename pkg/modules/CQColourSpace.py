# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

"""
Conversions between 8-bit RGB, HSV and the cylindrical embedding of HSV.

Hue is kept in degrees on [0, 360). All distances in this package are taken
in the cylindrical embedding

    x = s*cos(h), y = s*sin(h), z = v

so that hues either side of the 0/360 seam are close to each other.

The array forms are the working implementations; the scalar forms wrap them
so the two always agree.
"""
import re
from dataclasses import dataclass

# Numpy
import numpy as np

from .CQErrors import InputError, UsageError

__all__ = ['Rgb8', 'Hsv', 'CylPoint', 'ParseError',
           'rgbToHsv', 'hsvToRgb', 'hsvToCyl', 'cylToHsv', 'cylDistance',
           'rgbToHsvArray', 'hsvToRgbArray', 'hsvToCylArray', 'cylToHsvArray',
           'hexToRgb', 'rgbToHex']


############################################
# MODULE SPECIFIC EXCEPTION
###########################################
class ParseError(InputError):
    """A colour string could not be parsed."""

    pass


# saturation below this is treated as achromatic when leaving the cylinder
_ACHROMATIC = 1e-12

# channel order of (c, x, 0) for each 60 degree hue sector
_SECTOR_TABLE = np.array([[0, 1, 2],
                          [1, 0, 2],
                          [2, 0, 1],
                          [2, 1, 0],
                          [1, 2, 0],
                          [0, 2, 1]])

_HEX_RE = re.compile(r'^#?([0-9a-fA-F]{6})$')


@dataclass(frozen=True)
class Rgb8:
    r: int
    g: int
    b: int

    def __post_init__(self):
        for c in (self.r, self.g, self.b):
            if not 0 <= c <= 255:
                raise UsageError('RGB channel out of range [0, 255]: %r' % (c,))

    def asTuple(self):
        return (self.r, self.g, self.b)


@dataclass(frozen=True)
class Hsv:
    """Hue in degrees [0, 360), saturation and value on [0, 1]."""
    h: float
    s: float
    v: float

    def __post_init__(self):
        if not (0.0 <= self.h < 360.0 and 0.0 <= self.s <= 1.0 and 0.0 <= self.v <= 1.0):
            raise UsageError('HSV value out of range: (%r, %r, %r)' % (self.h, self.s, self.v))

    def asTuple(self):
        return (self.h, self.s, self.v)


@dataclass(frozen=True)
class CylPoint:
    x: float
    y: float
    z: float

    def asTuple(self):
        return (self.x, self.y, self.z)


#-----------------------------------------------------------------------------------------------
def rgbToHsvArray(rgb):
    """Hexcone conversion of an [..., 3] array of 8-bit channels to HSV.

    Parameters:
    -----------
    rgb ... array-like [..., 3] of integers on [0, 255]

    Returns:
    --------
    hsv ... float64 array [..., 3]; hue in degrees, s and v on [0, 1]
    """

    rgb = np.asarray(rgb, dtype=np.float64)
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]

    cmax = rgb.max(axis=-1)
    cmin = rgb.min(axis=-1)
    delta = cmax - cmin

    chromatic = delta > 0
    safe = np.where(chromatic, delta, 1.0)

    hr = np.mod((g - b) / safe, 6.0)
    hg = (b - r) / safe + 2.0
    hb = (r - g) / safe + 4.0

    h = 60.0 * np.where(cmax == r, hr, np.where(cmax == g, hg, hb))
    h = np.where(chromatic, h, 0.0)
    h = np.where(h >= 360.0, h - 360.0, h)

    s = np.where(cmax > 0, delta / np.where(cmax > 0, cmax, 1.0), 0.0)
    v = cmax / 255.0

    return np.stack([h, s, v], axis=-1)


def hsvToRgbArray(hsv):
    """Inverse hexcone conversion; channels rounded half away from zero.

    Parameters:
    -----------
    hsv ... array-like [..., 3]

    Returns:
    --------
    rgb ... uint8 array [..., 3]
    """

    hsv = np.asarray(hsv, dtype=np.float64)
    h, s, v = hsv[..., 0], hsv[..., 1], hsv[..., 2]

    c = v * s
    hp = np.mod(h, 360.0) / 60.0
    x = c * (1.0 - np.abs(np.mod(hp, 2.0) - 1.0))
    m = v - c

    sector = np.clip(np.floor(hp).astype(np.int64), 0, 5)
    comps = np.stack([c, x, np.zeros_like(c)], axis=-1)
    rgb1 = np.take_along_axis(comps, _SECTOR_TABLE[sector], axis=-1)

    out = (rgb1 + m[..., None]) * 255.0
    # all channels are non-negative, so floor(x + 0.5) rounds half away from zero
    out = np.floor(out + 0.5)

    return np.clip(out, 0, 255).astype(np.uint8)


def hsvToCylArray(hsv):
    """Embed HSV triples in the unit cylinder, [..., 3] -> [..., 3]."""

    hsv = np.asarray(hsv, dtype=np.float64)
    rad = np.deg2rad(hsv[..., 0])
    s = hsv[..., 1]

    return np.stack([s * np.cos(rad), s * np.sin(rad), hsv[..., 2]], axis=-1)


def cylToHsvArray(cyl):
    """Map cylindrical points back to canonical HSV, [..., 3] -> [..., 3].

    Points on the axis (x = y = 0) get hue 0, as do points with v = 0.
    """

    cyl = np.asarray(cyl, dtype=np.float64)
    x, y = cyl[..., 0], cyl[..., 1]

    s = np.hypot(x, y)
    h = np.mod(np.rad2deg(np.arctan2(y, x)), 360.0)
    h = np.where(h >= 360.0, 0.0, h)

    v = np.clip(cyl[..., 2], 0.0, 1.0)
    achromatic = (s < _ACHROMATIC) | (v <= 0.0)
    h = np.where(achromatic, 0.0, h)
    s = np.where(s < _ACHROMATIC, 0.0, np.minimum(s, 1.0))

    return np.stack([h, s, v], axis=-1)


#-----------------------------------------------------------------------------------------------
def rgbToHsv(c):
    h, s, v = rgbToHsvArray(c.asTuple())
    return Hsv(float(h), float(s), float(v))


def hsvToRgb(c):
    r, g, b = hsvToRgbArray(c.asTuple())
    return Rgb8(int(r), int(g), int(b))


def hsvToCyl(c):
    x, y, z = hsvToCylArray(c.asTuple())
    return CylPoint(float(x), float(y), float(z))


def cylToHsv(p):
    h, s, v = cylToHsvArray(p.asTuple())
    return Hsv(float(h), float(s), float(v))


def cylDistance(a, b):
    """Euclidean distance between two Hsv colours in the cylindrical embedding."""

    pa = hsvToCylArray(a.asTuple())
    pb = hsvToCylArray(b.asTuple())
    return float(np.linalg.norm(pa - pb))


def hexToRgb(text):
    """Parse 'RRGGBB' or '#RRGGBB' (any case) into an Rgb8."""

    match = _HEX_RE.match(str(text).strip())
    if match is None:
        raise ParseError('malformed hex colour: %r' % (text,))
    digits = match.group(1)
    return Rgb8(int(digits[0:2], 16), int(digits[2:4], 16), int(digits[4:6], 16))


def rgbToHex(c):
    return '#%02x%02x%02x' % c.asTuple()
