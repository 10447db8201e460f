#!/usr/bin/python

import logging

# Pillow
from PIL import Image, ImageDraw

from .CQColourSpace import hsvToRgbArray

__all__ = ['CELL', 'HIGHLIGHT', 'drawSwatch', 'CQPlotSwatch']

logger = logging.getLogger(__name__)

CELL = 64
HIGHLIGHT = (0, 200, 0)


def drawSwatch(palette, highlight=()):
    """
    Palette swatch strip: one CELL x CELL square per centroid, left to right
    in palette order (heaviest first). Cells whose index is in highlight get a
    green outline, e.g. centroids falling in a Monk band.
    """

    rgb = hsvToRgbArray(palette.hsv)
    img = Image.new('RGB', (CELL * max(len(rgb), 1), CELL), (255, 255, 255))
    draw = ImageDraw.Draw(img)

    for i, colour in enumerate(rgb):
        box = (i * CELL, 0, (i + 1) * CELL - 1, CELL - 1)
        draw.rectangle(box, fill=tuple(int(c) for c in colour))
        if i in highlight:
            draw.rectangle(box, outline=HIGHLIGHT, width=4)

    return img


def CQPlotSwatch(palette, outf, highlight=()):
    """Write the swatch strip as PNG."""

    drawSwatch(palette, highlight).save(outf, format='PNG')
    logger.info('Wrote %d-cell swatch to %s', len(palette), outf)
    return
