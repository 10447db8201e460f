"""
Batch analysis of an image directory.

Every supported image under the directory is quantised, checked against the
Monk bands and matched against the symbol signatures. A file that cannot be
decoded gets a failed record instead of stopping the batch. Records come
back sorted by path whatever the worker count.
"""
import hashlib
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from pathlib import Path

from .CQErrors import InputError
from .CQMonkScale import SkinFlagReport, flagSkin
from .CQOutWriteJSON import CQOutWriteJSON
from .CQQuantize import kmeansPalette, paletteFromDict, paletteToDict
from .CQReadImage import DecodeError, EmptyImage, cloudFromArray, readImage
from .CQSymbolMatch import matchSymbolsInCloud

__all__ = ['ImageRecord', 'ScanSettings', 'DirectoryUnreadable', 'SUPPORTED_EXTENSIONS',
           'REPORT_SCHEMA_VERSION', 'STATUS_OK', 'STATUS_DECODE_FAILED', 'STATUS_EMPTY',
           'listImages', 'analyseImage', 'scanCorpus', 'writeReport', 'readReport']

logger = logging.getLogger(__name__)


############################################
# MODULE SPECIFIC EXCEPTION
###########################################
class DirectoryUnreadable(InputError):
    """The corpus directory does not exist or cannot be listed."""

    pass


SUPPORTED_EXTENSIONS = ('.png', '.jpg', '.jpeg', '.gif', '.bmp', '.webp')
REPORT_SCHEMA_VERSION = 1

STATUS_OK = 'ok'
STATUS_DECODE_FAILED = 'decode_failed'
STATUS_EMPTY = 'empty'


@dataclass(frozen=True)
class ScanSettings:
    """Everything a worker needs to analyse one image."""
    config: object
    monk_scale: object
    signatures: tuple = ()
    tile_size: int = None
    theta: float = None


@dataclass
class ImageRecord:
    """Per-image result. palette, skin and symbol_flags are set iff status is ok."""
    path: str
    content_digest: str
    status: str
    width: int = None
    height: int = None
    palette: object = None
    skin: object = None
    symbol_flags: dict = None
    message: str = None

    @property
    def ok(self):
        return self.status == STATUS_OK

    @property
    def symbolFlagged(self):
        return bool(self.symbol_flags) and any(f['flagged'] for f in self.symbol_flags.values())

    def toDict(self):
        return {'path': self.path,
                'content_digest': self.content_digest,
                'status': self.status,
                'width': self.width,
                'height': self.height,
                'palette': None if self.palette is None else paletteToDict(self.palette),
                'skin': None if self.skin is None else self.skin.toDict(),
                'symbol_flags': self.symbol_flags,
                'message': self.message}

    @classmethod
    def fromDict(cls, data):
        return cls(data['path'], data['content_digest'], data['status'],
                   data.get('width'), data.get('height'),
                   None if data.get('palette') is None else paletteFromDict(data['palette']),
                   None if data.get('skin') is None else SkinFlagReport.fromDict(data['skin']),
                   data.get('symbol_flags'), data.get('message'))


#-----------------------------------------------------------------------------------------------
def listImages(directory):
    """Supported image files below directory, as (relative posix path, absolute path), sorted."""

    root = Path(directory)
    if not root.is_dir() or not os.access(root, os.R_OK | os.X_OK):
        logger.error('ERROR: corpus directory %s is not readable.', directory)
        raise DirectoryUnreadable('corpus directory %s is not readable' % directory)

    found = [(p.relative_to(root).as_posix(), p) for p in root.rglob('*')
             if p.is_file() and p.suffix.lower() in SUPPORTED_EXTENSIONS]
    return sorted(found, key=lambda item: item[0])


def analyseImage(item, settings):
    """Run the full per-image analysis; failures become records, not exceptions."""

    rel, path = item
    try:
        with open(path, 'rb') as fh:
            data = fh.read()
    except OSError as err:
        return ImageRecord(rel, '', STATUS_DECODE_FAILED, message=str(err))

    digest = hashlib.sha256(data).hexdigest()

    try:
        rgba = readImage(data)
    except DecodeError as err:
        return ImageRecord(rel, digest, STATUS_DECODE_FAILED, message=str(err))
    except Exception as err:
        logger.warning('%s: decoder failed: %s', rel, err)
        return ImageRecord(rel, digest, STATUS_DECODE_FAILED, message='could not decode image: %s' % err)

    height, width = rgba.shape[:2]
    max_pixels = settings.config.max_pixels
    try:
        cloud = cloudFromArray(rgba, max_pixels)
    except EmptyImage as err:
        return ImageRecord(rel, digest, STATUS_EMPTY, width, height, message=str(err))

    palette = kmeansPalette(cloud, settings.config)
    skin = flagSkin(cloud, settings.monk_scale)

    flags = {}
    if settings.signatures:
        full = cloud if max_pixels is None or width * height <= max_pixels else cloudFromArray(rgba, None)
        flags = matchSymbolsInCloud(full, list(settings.signatures), settings.tile_size, settings.theta).flags

    return ImageRecord(rel, digest, STATUS_OK, width, height, palette, skin, flags)


def scanCorpus(directory, config, monk_scale, signatures=(), workers=1, tile_size=None, theta=None):
    """Analyse every supported image under directory.

    Parameters:
    -----------
    directory  ... corpus root, scanned recursively
    config     ... QuantizeConfig
    monk_scale ... MonkScaleConfig
    signatures ... SymbolSignatures to match (may be empty)
    workers    ... worker processes; 1 runs in this process

    Returns:
    --------
    list of ImageRecord sorted by relative path
    """

    items = listImages(directory)
    settings = ScanSettings(config, monk_scale, tuple(signatures), tile_size, theta)
    task = partial(analyseImage, settings=settings)

    logger.info('Scanning %d images in %s with %d worker(s)', len(items), directory, workers)

    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, len(items) // (4 * workers))
            records = list(pool.map(task, items, chunksize=chunk))
    else:
        records = [task(item) for item in items]

    for rec in records:
        if not rec.ok:
            logger.warning('%s: %s (%s)', rec.path, rec.status, rec.message)

    logger.info('Scan finished: %d ok, %d failed', sum(r.ok for r in records),
                sum(not r.ok for r in records))
    return records


def writeReport(records, outf):
    """Write records as the versioned JSON report; outf None or '-' means stdout."""

    CQOutWriteJSON({'schema_version': REPORT_SCHEMA_VERSION,
                    'records': [r.toDict() for r in records]}, outf)


def readReport(inf):
    """Read a JSON report written by writeReport."""

    try:
        with open(inf) as fh:
            data = json.load(fh)
    except (OSError, ValueError) as err:
        logger.error('ERROR: could not read report %s: %s', inf, err)
        raise InputError('could not read report %s: %s' % (inf, err)) from err

    if not isinstance(data, dict) or data.get('schema_version') != REPORT_SCHEMA_VERSION:
        logger.error('ERROR: report %s is not a version %d report.', inf, REPORT_SCHEMA_VERSION)
        raise InputError('report %s is not a version %d report' % (inf, REPORT_SCHEMA_VERSION))

    return [ImageRecord.fromDict(r) for r in data['records']]
