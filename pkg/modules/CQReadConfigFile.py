#!/usr/bin/python

import configparser
import logging
import os
from dataclasses import dataclass

from .CQErrors import UsageError

__all__ = ['ConfigError', 'CQSettings', 'CONFIG_ENV', 'DEFAULT_CONFIG_FILE', 'DEFAULTS',
           'resolveConfigPath', 'readConfigFile', 'validateSettings']

logger = logging.getLogger(__name__)


############################################
# MODULE SPECIFIC EXCEPTION
###########################################
class ConfigError(UsageError):
    """A configuration value is missing, malformed or out of range."""

    pass


CONFIG_ENV = 'CQ_CONFIG'
DEFAULT_CONFIG_FILE = './CQConfig.ini'

DEFAULTS = {
    'QUANTIZE': {'k': '5', 'seed': '2021', 'max_iter': '100', 'tol': '1e-4',
                 'n_init': '5', 'max_pixels': '100000'},
    'MONK': {'scalefile': '', 'tau': '0.05', 'h_halfwidth': '54',
             's_halfwidth': '0.15', 'v_halfwidth': '0.15'},
    'SYMBOL': {'manifest': '', 'theta': '0.90', 'w_min': '0.10', 'tolerance': '0.12',
               'tile_size': '0'},
    'FORENSICS': {'k': '4', 'delta': '0.25', 'bins': '16'},
    'CORPUS': {'workers': '1', 'groups': '5'},
    'PLOT': {'space': 'hsv', 'max_points': '5000'},
}


@dataclass(frozen=True)
class CQSettings:
    k: int
    seed: int
    max_iter: int
    tol: float
    n_init: int
    max_pixels: int
    monk_scalefile: str
    tau: float
    h_halfwidth: float
    s_halfwidth: float
    v_halfwidth: float
    symbol_manifest: str
    theta: float
    w_min: float
    tolerance: float
    tile_size: int
    forensics_k: int
    delta: float
    bins: int
    workers: int
    groups: int
    plot_space: str
    max_points: int


def resolveConfigPath(configfile=None):
    """The -c flag, else $CQ_CONFIG, else ./CQConfig.ini if it exists, else None."""

    if configfile:
        return configfile
    if os.environ.get(CONFIG_ENV):
        return os.environ[CONFIG_ENV]
    if os.path.isfile(DEFAULT_CONFIG_FILE):
        return DEFAULT_CONFIG_FILE
    return None


def _fail(message):
    logger.error('ERROR: %s', message)
    raise ConfigError(message)


def _get(config, section, key, kind):
    try:
        return kind(config[section][key])
    except KeyError:
        _fail('no %s value in section [%s].' % (key, section))
    except ValueError:
        _fail('[%s] %s is not a valid %s: %r' % (section, key, kind.__name__, config[section][key]))


def readConfigFile(configfile=None):
    """
    readConfigFile


    Description: Read the config file on top of the built-in defaults and
    stop if there are inconsistencies.


    Mandatory input:      None; configfile is resolved by resolveConfigPath


    Output:               CQSettings


    usage: settings=readConfigFile('CQConfig.ini')
    """

    config = configparser.ConfigParser()
    config.read_dict(DEFAULTS)

    path = resolveConfigPath(configfile)
    if path is not None:
        if not os.path.isfile(path):
            _fail('config file %s not found.' % path)
        try:
            config.read(path)
        except configparser.Error as err:
            _fail('could not parse config file %s: %s' % (path, err))
        logger.info('Read configuration from %s', path)

    settings = CQSettings(
        k=_get(config, 'QUANTIZE', 'k', int),
        seed=_get(config, 'QUANTIZE', 'seed', int),
        max_iter=_get(config, 'QUANTIZE', 'max_iter', int),
        tol=_get(config, 'QUANTIZE', 'tol', float),
        n_init=_get(config, 'QUANTIZE', 'n_init', int),
        max_pixels=_get(config, 'QUANTIZE', 'max_pixels', int),
        monk_scalefile=config['MONK']['scalefile'].strip(),
        tau=_get(config, 'MONK', 'tau', float),
        h_halfwidth=_get(config, 'MONK', 'h_halfwidth', float),
        s_halfwidth=_get(config, 'MONK', 's_halfwidth', float),
        v_halfwidth=_get(config, 'MONK', 'v_halfwidth', float),
        symbol_manifest=config['SYMBOL']['manifest'].strip(),
        theta=_get(config, 'SYMBOL', 'theta', float),
        w_min=_get(config, 'SYMBOL', 'w_min', float),
        tolerance=_get(config, 'SYMBOL', 'tolerance', float),
        tile_size=_get(config, 'SYMBOL', 'tile_size', int),
        forensics_k=_get(config, 'FORENSICS', 'k', int),
        delta=_get(config, 'FORENSICS', 'delta', float),
        bins=_get(config, 'FORENSICS', 'bins', int),
        workers=_get(config, 'CORPUS', 'workers', int),
        groups=_get(config, 'CORPUS', 'groups', int),
        plot_space=config['PLOT']['space'].strip().lower(),
        max_points=_get(config, 'PLOT', 'max_points', int),
    )

    validateSettings(settings)
    return settings


def validateSettings(settings):
    """Range checks shared by the config file and command-line overrides."""

    if settings.k < 1 or settings.forensics_k < 1:
        _fail('k is zero or negative.')
    if settings.seed < 0:
        _fail('seed is negative.')
    if settings.max_iter < 1:
        _fail('max_iter is zero or negative.')
    if settings.tol <= 0.0:
        _fail('tol must be positive.')
    if settings.n_init < 1:
        _fail('n_init is zero or negative.')
    if settings.max_pixels < 1:
        _fail('max_pixels is zero or negative.')
    if not 0.0 < settings.tau <= 1.0:
        _fail('tau out of bounds (should be in (0, 1]).')
    if min(settings.h_halfwidth, settings.s_halfwidth, settings.v_halfwidth) <= 0.0:
        _fail('Monk band halfwidths must be positive.')
    if not -1.0 <= settings.theta <= 1.0:
        _fail('theta out of bounds (should be in [-1, 1]).')
    if not 0.0 <= settings.w_min <= 1.0:
        _fail('w_min out of bounds (should be in [0, 1]).')
    if settings.tolerance <= 0.0:
        _fail('symbol tolerance must be positive.')
    if settings.tile_size < 0:
        _fail('tile_size is negative.')
    if settings.delta < 0.0:
        _fail('delta is negative.')
    if settings.bins < 1:
        _fail('bins is zero or negative.')
    if settings.workers < 1:
        _fail('workers is zero or negative.')
    if settings.groups < 1:
        _fail('groups is zero or negative.')
    if settings.plot_space not in ('hsv', 'rgb'):
        _fail('plot space should be either hsv or rgb.')
    if settings.max_points < 1:
        _fail('max_points is zero or negative.')
