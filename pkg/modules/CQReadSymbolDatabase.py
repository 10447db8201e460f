#!/usr/bin/python

import configparser
import logging
import os

from .CQErrors import InputError
from .CQSymbolMatch import signatureFromImage, DEFAULT_W_MIN, DEFAULT_TOLERANCE, DEFAULT_THETA

__all__ = ['ManifestError', 'MANIFEST_VERSION', 'readSymbolDatabase']

logger = logging.getLogger(__name__)


############################################
# MODULE SPECIFIC EXCEPTION
###########################################
class ManifestError(InputError):
    """The symbol manifest is missing, malformed or of an unknown version."""

    pass


MANIFEST_VERSION = '1'


def readSymbolDatabase(manifest, config, w_min=DEFAULT_W_MIN, tolerance=DEFAULT_TOLERANCE,
                       theta=DEFAULT_THETA):
    """
    readSymbolDatabase


    Description: Reads a symbol database manifest and builds one signature per
    symbol. The manifest is an INI file next to the reference images:

        [MANIFEST]
        version = 1

        [symbol name]
        image = reference.png     ; relative to the manifest
        k = 3                     ; optional overrides
        w_min = 0.10
        tolerance = 0.12
        theta = 0.90

    Alternate colour variants of a symbol are separate sections.


    Mandatory input:      string, manifest, path of the manifest file
                          QuantizeConfig, config, quantisation settings (k is the default)

    Output:               list of SymbolSignature, sorted by name


    usage: signatures=readSymbolDatabase('symbols/manifest.ini', QuantizeConfig())
    """

    parser = configparser.ConfigParser()
    try:
        with open(manifest) as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as err:
        logger.error('ERROR: could not read symbol manifest %s: %s', manifest, err)
        raise ManifestError('could not read symbol manifest %s: %s' % (manifest, err)) from err

    version = parser.get('MANIFEST', 'version', fallback=None)
    if version != MANIFEST_VERSION:
        logger.error('ERROR: symbol manifest %s has version %r, expected %s.', manifest, version, MANIFEST_VERSION)
        raise ManifestError('symbol manifest %s has version %r, expected %s' % (manifest, version, MANIFEST_VERSION))

    root = os.path.dirname(os.path.abspath(manifest))

    signatures = []
    for name in sorted(parser.sections()):
        if name == 'MANIFEST':
            continue
        section = parser[name]
        if 'image' not in section:
            logger.error('ERROR: symbol %s has no image entry.', name)
            raise ManifestError('symbol %s has no image entry' % name)
        try:
            k = section.getint('k', fallback=config.k)
            sym_w_min = section.getfloat('w_min', fallback=w_min)
            sym_tolerance = section.getfloat('tolerance', fallback=tolerance)
            sym_theta = section.getfloat('theta', fallback=theta)
        except ValueError as err:
            logger.error('ERROR: symbol %s has a non-numeric override: %s', name, err)
            raise ManifestError('symbol %s has a non-numeric override: %s' % (name, err)) from err

        path = os.path.join(root, section['image'])
        try:
            with open(path, 'rb') as fh:
                data = fh.read()
        except OSError as err:
            logger.error('ERROR: could not read image of symbol %s: %s', name, err)
            raise ManifestError('could not read image of symbol %s: %s' % (name, err)) from err

        signatures.append(signatureFromImage(data, k, config, name, sym_w_min, sym_tolerance, sym_theta))
        logger.info('Loaded symbol %s from %s', name, path)

    return signatures
