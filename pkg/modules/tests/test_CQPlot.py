#!/bin/python

import pytest
import numpy as np
from PIL import Image

from ..CQColourSpace import Hsv
from ..CQErrors import UsageError
from ..CQQuantize import Palette, PaletteEntry
from ..CQReadImage import cloudFromArray
from ..CQPlotSwatch import CELL, HIGHLIGHT, drawSwatch, CQPlotSwatch
from ..CQPlotScatter import projectPoints, plotPixelCloud


def palette():
    entries = (PaletteEntry(Hsv(0.0, 1.0, 1.0), 0.5), PaletteEntry(Hsv(240.0, 1.0, 1.0), 0.3),
               PaletteEntry(Hsv(120.0, 1.0, 1.0), 0.2))
    return Palette(entries, 3, 3)


def test_drawSwatch():

    img = drawSwatch(palette(), highlight=[1])

    assert img.size == (3 * CELL, CELL)
    assert img.getpixel((CELL // 2, CELL // 2)) == (255, 0, 0)
    assert img.getpixel((CELL + CELL // 2, CELL // 2)) == (0, 0, 255)
    assert img.getpixel((2 * CELL + CELL // 2, CELL // 2)) == (0, 255, 0)

    # outline only on the highlighted cell
    assert img.getpixel((CELL + 1, 1)) == HIGHLIGHT
    assert img.getpixel((1, 1)) == (255, 0, 0)

    return


def test_CQPlotSwatch(tmp_path):

    out = tmp_path / 'swatch.png'
    CQPlotSwatch(palette(), str(out))

    with Image.open(str(out)) as img:
        assert img.format == 'PNG'
        assert img.size == (3 * CELL, CELL)

    return


def test_projectPoints():

    points = np.array([[1.0, 0.0, 0.5], [0.0, 0.0, 0.0]])
    assert projectPoints(points) == pytest.approx(np.array([[1.0, 0.5], [0.0, 0.0]]))

    # depth moves points up and to the right
    shifted = projectPoints(np.array([[0.0, 1.0, 0.0]]))
    assert shifted[0, 0] > 0.0
    assert shifted[0, 1] > 0.0

    return


def test_plotPixelCloud(tmp_path):

    rgb = np.zeros((20, 30, 3), dtype=np.uint8)
    rgb[:, :10, 0] = 255
    rgb[:, 10:20, 2] = 255
    rgb[:, 20:, 1] = 255
    cloud = cloudFromArray(rgb)

    for space in ('hsv', 'rgb'):
        out = tmp_path / ('scatter_%s.svg' % space)
        plotPixelCloud(cloud, palette(), space, str(out), max_points=100)
        assert '<svg' in out.read_text()

    assert (tmp_path / 'scatter_hsv.svg').read_bytes() != (tmp_path / 'scatter_rgb.svg').read_bytes()

    # repeatable output
    again = tmp_path / 'again.svg'
    plotPixelCloud(cloud, palette(), 'hsv', str(again), max_points=100)
    assert again.read_bytes() == (tmp_path / 'scatter_hsv.svg').read_bytes()

    with pytest.raises(UsageError):
        plotPixelCloud(cloud, palette(), 'lab', str(tmp_path / 'bad.svg'))

    return
