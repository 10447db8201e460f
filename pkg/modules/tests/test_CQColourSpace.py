#!/bin/python

import pytest
import numpy as np

from ..CQColourSpace import Rgb8, Hsv, CylPoint, ParseError
from ..CQColourSpace import rgbToHsv, hsvToRgb, hsvToCyl, cylToHsv, cylDistance
from ..CQColourSpace import rgbToHsvArray, hsvToRgbArray, hsvToCylArray, cylToHsvArray
from ..CQColourSpace import hexToRgb, rgbToHex
from ..CQErrors import UsageError


def test_rgbToHsv():

    assert rgbToHsv(Rgb8(255, 0, 0)) == Hsv(0.0, 1.0, 1.0)
    assert rgbToHsv(Rgb8(0, 255, 255)) == Hsv(180.0, 1.0, 1.0)

    grey = rgbToHsv(Rgb8(128, 128, 128))
    assert grey.h == 0.0
    assert grey.s == 0.0
    assert grey.v == pytest.approx(128 / 255)

    # magenta sits just below the seam
    assert rgbToHsv(Rgb8(255, 0, 255)).h == pytest.approx(300.0)
    assert rgbToHsv(Rgb8(255, 0, 1)).h < 360.0

    return


def test_hsvToRgb():

    assert hsvToRgb(Hsv(0.0, 1.0, 1.0)) == Rgb8(255, 0, 0)
    assert hsvToRgb(Hsv(0.0, 0.0, 0.50196)) == Rgb8(128, 128, 128)
    assert hsvToRgb(Hsv(240.0, 1.0, 1.0)) == Rgb8(0, 0, 255)

    return


def test_roundTripFullCube():
    # every 8-bit colour survives RGB -> HSV -> RGB to within one level

    levels = np.arange(256)
    g, b = np.meshgrid(levels, levels, indexing='ij')
    gb = np.stack([g.ravel(), b.ravel()], axis=1)

    worst = 0
    for r in range(256):
        rgb = np.column_stack([np.full(len(gb), r), gb])
        back = hsvToRgbArray(rgbToHsvArray(rgb)).astype(np.int64)
        worst = max(worst, int(np.abs(back - rgb).max()))

    assert worst <= 1

    return


def test_hsvToCyl():

    p = hsvToCyl(Hsv(0.0, 1.0, 1.0))
    assert p.asTuple() == pytest.approx((1.0, 0.0, 1.0))

    p = hsvToCyl(Hsv(240.0, 1.0, 1.0))
    assert p.asTuple() == pytest.approx((-0.5, -0.8660254, 1.0))

    return


def test_cylToHsv():

    assert cylToHsv(CylPoint(1.0, 0.0, 1.0)).asTuple() == pytest.approx((0.0, 1.0, 1.0))
    assert cylToHsv(CylPoint(0.0, 1.0, 0.5)).asTuple() == pytest.approx((90.0, 1.0, 0.5))

    # on the axis and at v = 0 the hue is canonically 0
    assert cylToHsv(CylPoint(0.0, 0.0, 0.7)).h == 0.0
    assert cylToHsv(CylPoint(0.3, 0.3, 0.0)).h == 0.0

    # points just outside the cylinder are pulled back onto it
    c = cylToHsv(CylPoint(0.0, -1.0000001, 1.2))
    assert c.s == 1.0
    assert c.v == 1.0
    assert c.h == pytest.approx(270.0)

    return


def test_cylRoundTrip():

    rng = np.random.default_rng(2021)
    hsv = np.column_stack([rng.uniform(0, 360, 500), rng.uniform(0.01, 1, 500), rng.uniform(0.01, 1, 500)])

    back = cylToHsvArray(hsvToCylArray(hsv))
    assert np.allclose(back, hsv, atol=1e-9)

    return


def test_cylDistanceAcrossSeam():

    d = cylDistance(Hsv(10.0, 1.0, 1.0), Hsv(350.0, 1.0, 1.0))
    assert d == pytest.approx(2 * np.sin(np.deg2rad(10.0)))
    assert d == pytest.approx(0.3473, abs=1e-4)

    assert cylDistance(Hsv(0.0, 1.0, 1.0), Hsv(240.0, 1.0, 1.0)) == pytest.approx(np.sqrt(3))

    return


def test_scalarMatchesArray():

    rng = np.random.default_rng(7)
    rgb = rng.integers(0, 256, size=(50, 3))
    hsv = rgbToHsvArray(rgb)

    for c, h in zip(rgb, hsv):
        assert rgbToHsv(Rgb8(*(int(x) for x in c))).asTuple() == tuple(h)

    return


def test_invalidColours():

    with pytest.raises(UsageError):
        Rgb8(256, 0, 0)
    with pytest.raises(UsageError):
        Hsv(360.0, 0.5, 0.5)
    with pytest.raises(UsageError):
        Hsv(10.0, 1.5, 0.5)

    return


def test_hexToRgb():

    assert hexToRgb('FF0000') == Rgb8(255, 0, 0)
    assert hexToRgb('#ff0000') == Rgb8(255, 0, 0)
    assert rgbToHex(Rgb8(246, 237, 228)) == '#f6ede4'

    with pytest.raises(ParseError):
        hexToRgb('GG0000')
    with pytest.raises(ParseError):
        hexToRgb('FF00')

    return
