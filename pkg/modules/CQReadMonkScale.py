#!/usr/bin/python

import logging
import os

import pandas as pd

from .CQMonkScale import (MonkScaleConfig, ParseError, bandFromHex, DEFAULT_TAU,
                          DEFAULT_H_HALFWIDTH, DEFAULT_S_HALFWIDTH, DEFAULT_V_HALFWIDTH)

__all__ = ['DEFAULT_MONK_SCALE_FILE', 'readMonkScale']

logger = logging.getLogger(__name__)

DEFAULT_MONK_SCALE_FILE = os.path.join(os.path.dirname(__file__), 'data', 'monk_scale.txt')

_OVERRIDES = ('h_halfwidth', 's_halfwidth', 'v_halfwidth')


def readMonkScale(scale_file=None, tau=DEFAULT_TAU, h_halfwidth=DEFAULT_H_HALFWIDTH,
                  s_halfwidth=DEFAULT_S_HALFWIDTH, v_halfwidth=DEFAULT_V_HALFWIDTH):
    """
    readMonkScale


    Description: Reads the Monk scale table and builds one tolerance band per
    tone. The table is whitespace separated with a header line:

    tone_id  hex  [h_halfwidth  s_halfwidth  v_halfwidth]

    Lines starting with '#' are comments. Missing or '-' halfwidths take the
    defaults passed in here.


    Mandatory input:      none; scale_file defaults to the packaged table

    Output:               MonkScaleConfig


    usage: scale=readMonkScale('monk_scale.txt', tau=0.05)
    """

    if scale_file is None or scale_file == '':
        scale_file = DEFAULT_MONK_SCALE_FILE

    try:
        padafr = pd.read_csv(scale_file, sep=r'\s+', comment='#', dtype={'hex': str}, na_values=['-'])
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as err:
        logger.error('ERROR: could not read Monk scale file %s: %s', scale_file, err)
        raise ParseError('could not read Monk scale file %s: %s' % (scale_file, err)) from err

    padafr = padafr.rename(columns=lambda x: x.strip())

    for column in ('tone_id', 'hex'):
        if column not in padafr.columns:
            logger.error('ERROR: Monk scale file %s has no %s column.', scale_file, column)
            raise ParseError('Monk scale file %s has no %s column' % (scale_file, column))

    if padafr[['tone_id', 'hex']].isnull().values.any():
        logger.error('ERROR: uninitialised tone_id or hex values in Monk scale file %s.', scale_file)
        raise ParseError('uninitialised tone_id or hex values in %s' % scale_file)

    defaults = {'h_halfwidth': h_halfwidth, 's_halfwidth': s_halfwidth, 'v_halfwidth': v_halfwidth}

    bands = []
    for _, row in padafr.iterrows():
        widths = {}
        for name in _OVERRIDES:
            value = row.get(name)
            widths[name] = defaults[name] if value is None or pd.isnull(value) else float(value)
        bands.append(bandFromHex(row['hex'], int(row['tone_id']), **widths))

    logger.info('Read %d Monk bands from %s', len(bands), scale_file)

    return MonkScaleConfig(tuple(bands), tau)
