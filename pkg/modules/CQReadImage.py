"""
Decode raster images into pixel clouds.

A PixelCloud is the ordered, row-major list of opaque pixels of an image in
HSV, together with each pixel's flat position in the original raster so
regions and tiles can be cut out of it later.
"""
import io
import logging
from dataclasses import dataclass

# Numpy
import numpy as np
# Pillow
from PIL import Image, UnidentifiedImageError

from .CQColourSpace import rgbToHsvArray
from .CQErrors import InputError

__all__ = ['PixelCloud', 'DecodeError', 'EmptyImage', 'SUPPORTED_FORMATS',
           'readImage', 'readImageFile', 'loadPixels', 'cloudFromArray',
           'cloudFromHsv', 'subsampleCloud']

logger = logging.getLogger(__name__)


############################################
# MODULE SPECIFIC EXCEPTION
###########################################
class DecodeError(InputError):
    """Unsupported or corrupt image data."""

    pass


class EmptyImage(InputError):
    """The image has no opaque pixels."""

    pass


SUPPORTED_FORMATS = ('PNG', 'JPEG', 'GIF', 'BMP', 'WEBP')

# pixels with alpha below this are treated as background
ALPHA_CUTOFF = 128


@dataclass
class PixelCloud:
    """Opaque pixels of an image.

    width, height      ... dimensions of the source raster
    hsv                ... float64 [N, 3] pixel colours
    index              ... int64 [N] flat row-major position in the source raster
    rgb                ... uint8 [N, 3] source channels, or None for synthetic clouds
    source_pixel_count ... width*height before subsampling and alpha removal
    """
    width: int
    height: int
    hsv: np.ndarray
    index: np.ndarray
    rgb: np.ndarray = None
    source_pixel_count: int = 0

    def __len__(self):
        return len(self.hsv)

    def take(self, selection):
        """Sub-cloud of the pixels picked by a boolean mask or index array."""
        return PixelCloud(self.width, self.height, self.hsv[selection], self.index[selection],
                          None if self.rgb is None else self.rgb[selection],
                          self.source_pixel_count)

    @property
    def rows(self):
        return self.index // self.width

    @property
    def cols(self):
        return self.index % self.width


#-----------------------------------------------------------------------------------------------
def readImage(image_bytes):
    """Decode encoded image bytes into an RGBA array [height, width, 4].

    Only the first frame of animated images is used.
    """

    try:
        img = Image.open(io.BytesIO(image_bytes))
        fmt = img.format
        img.seek(0)
        img.load()
        rgba = np.asarray(img.convert('RGBA'), dtype=np.uint8)
    except UnidentifiedImageError as err:
        # Pillow's message embeds the stream's address; keep reports reproducible
        raise DecodeError('could not decode image: unrecognised image data') from err
    except (Image.DecompressionBombError, OSError, SyntaxError, ValueError, EOFError) as err:
        raise DecodeError('could not decode image: %s' % err) from err

    if fmt not in SUPPORTED_FORMATS:
        raise DecodeError('unsupported image format: %s' % fmt)

    return rgba


def readImageFile(path):
    """Read and decode an image file; a missing file is reported as a DecodeError."""

    try:
        with open(path, 'rb') as fh:
            data = fh.read()
    except OSError as err:
        raise DecodeError('could not read %s: %s' % (path, err)) from err
    return readImage(data)


def cloudFromArray(rgba, max_pixels=None):
    """Build a PixelCloud from an RGBA raster.

    When width*height exceeds max_pixels, every ceil(N/max_pixels)-th pixel in
    row-major order is kept. Pixels with alpha < 128 are then dropped.
    """

    height, width = rgba.shape[:2]
    n = width * height
    flat = rgba.reshape(-1, rgba.shape[2])

    if max_pixels is not None and n > max_pixels:
        stride = -(-n // max_pixels)
        index = np.arange(0, n, stride, dtype=np.int64)
    else:
        index = np.arange(n, dtype=np.int64)

    picked = flat[index]
    if picked.shape[1] == 4:
        opaque = picked[:, 3] >= ALPHA_CUTOFF
        index = index[opaque]
        picked = picked[opaque]

    if len(index) == 0:
        raise EmptyImage('image has no opaque pixels')

    rgb = np.ascontiguousarray(picked[:, :3])
    return PixelCloud(width, height, rgbToHsvArray(rgb), index, rgb, n)


def loadPixels(image_bytes, config):
    """Decode image bytes into a (possibly subsampled) PixelCloud."""

    cloud = cloudFromArray(readImage(image_bytes), config.max_pixels)
    logger.debug('loaded %dx%d image, %d pixels kept', cloud.width, cloud.height, len(cloud))
    return cloud


def cloudFromHsv(hsv, width=None, height=1):
    """Wrap an [N, 3] HSV array as a cloud; default geometry is a single row."""

    hsv = np.asarray(hsv, dtype=np.float64).reshape(-1, 3)
    if len(hsv) == 0:
        raise EmptyImage('empty pixel cloud')
    if width is None:
        width = len(hsv)
    return PixelCloud(width, height, hsv, np.arange(len(hsv), dtype=np.int64), None, width * height)


def subsampleCloud(cloud, max_pixels):
    """Stride-subsample the pixels of an existing cloud down to at most max_pixels."""

    n = len(cloud)
    if max_pixels is None or n <= max_pixels:
        return cloud
    stride = -(-n // max_pixels)
    return cloud.take(np.arange(0, n, stride))
