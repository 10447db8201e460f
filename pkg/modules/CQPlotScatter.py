"""
SVG scatter of a pixel cloud with its palette centroids.

The 3D colour points are drawn with a fixed cabinet-style oblique projection:
the depth axis is drawn at OBLIQUE_ANGLE degrees and scaled by DEPTH_SCALE,

    u = a + DEPTH_SCALE * b * cos(OBLIQUE_ANGLE)
    w = c + DEPTH_SCALE * b * sin(OBLIQUE_ANGLE)

with (a, b, c) = (x, y, v) of the HSV cylinder or (r, g, b) / 255 of the RGB
cube. Fixed angles keep the SVG output stable between runs.
"""
import logging

# Numpy
import numpy as np
# matplotlib
import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt

from .CQColourSpace import hsvToCylArray, hsvToRgbArray
from .CQErrors import UsageError

__all__ = ['SPACES', 'OBLIQUE_ANGLE', 'DEPTH_SCALE', 'projectPoints', 'plotPixelCloud']

logger = logging.getLogger(__name__)

SPACES = ('hsv', 'rgb')
OBLIQUE_ANGLE = 30.0
DEPTH_SCALE = 0.5

# fixed ids in the SVG
matplotlib.rcParams['svg.hashsalt'] = 'colour-quantisation'


def _coordinates(hsv, space):
    if space == 'hsv':
        return hsvToCylArray(hsv)
    return hsvToRgbArray(hsv).astype(np.float64) / 255.0


def projectPoints(points):
    """Oblique projection of [N, 3] points onto the drawing plane, -> [N, 2]."""

    angle = np.deg2rad(OBLIQUE_ANGLE)
    u = points[:, 0] + DEPTH_SCALE * points[:, 1] * np.cos(angle)
    w = points[:, 2] + DEPTH_SCALE * points[:, 1] * np.sin(angle)
    return np.stack([u, w], axis=1)


def plotPixelCloud(cloud, palette, space, outf, max_points=5000):
    """Write an SVG scatter of (a stride subsample of) the cloud with enlarged centroid markers."""

    if space not in SPACES:
        raise UsageError('plot space must be one of %s, got %r' % (', '.join(SPACES), space))

    stride = max(1, -(-len(cloud) // max_points))
    hsv = cloud.hsv[::stride]
    colours = (cloud.rgb[::stride] if cloud.rgb is not None else hsvToRgbArray(hsv)) / 255.0

    points = projectPoints(_coordinates(hsv, space))
    centres = projectPoints(_coordinates(palette.hsv, space))
    centre_colours = hsvToRgbArray(palette.hsv) / 255.0

    fig, ax = plt.subplots(figsize=(6, 6))
    ax.scatter(points[:, 0], points[:, 1], c=colours, s=4, marker='o', linewidths=0)
    ax.scatter(centres[:, 0], centres[:, 1], c=centre_colours, s=220, marker='o',
               edgecolors='black', linewidths=1.5)

    if space == 'hsv':
        ax.set_xlabel('s cos(h)  (depth: s sin(h))')
        ax.set_ylabel('value')
    else:
        ax.set_xlabel('red  (depth: green)')
        ax.set_ylabel('blue')
    ax.set_aspect('equal')
    ax.set_title('pixel distribution (%s)' % space.upper())

    fig.savefig(outf, format='svg', metadata={'Date': None})
    plt.close(fig)

    logger.info('Wrote %s scatter of %d points to %s', space, len(points), outf)
