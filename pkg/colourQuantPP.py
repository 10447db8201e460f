#!/usr/bin/python
# Colour quantisation post processing driver: palettes, skin-tone and symbol
# flags, splice forensics and corpus batch work for human coders.
#
import os, sys, re
import json
import logging
import argparse
import time
from dataclasses import replace
from pathlib import Path

from modules.CQErrors import Error, InputError, UsageError, InvariantError
from modules.CQReadConfigFile import readConfigFile, validateSettings
from modules.CQReadImage import DecodeError, cloudFromArray, readImageFile, subsampleCloud
from modules.CQQuantize import QuantizeConfig, kmeansPalette, paletteToDict
from modules.CQReadMonkScale import readMonkScale
from modules.CQMonkScale import flagSkin, paletteInBands
from modules.CQSymbolMatch import signatureFromImage, matchSymbolsInCloud
from modules.CQReadSymbolDatabase import readSymbolDatabase
from modules.CQForensics import parseRegion, compareRegions
from modules.CQCorpusScan import scanCorpus, writeReport, readReport
from modules.CQCorpusCluster import ClusterAssignment, clusterCorpus
from modules.CQCorpusSample import STRATEGIES, sampleCorpus
from modules.CQCorpusSummary import summarizeCorpus
from modules.CQCorpusEvaluate import evaluateFlags
from modules.CQOutWriteJSON import CQOutWriteJSON
from modules.CQOutWriteCSV import CQOutWriteCSV
from modules.CQPlotSwatch import CQPlotSwatch
from modules.CQPlotScatter import SPACES, plotPixelCloud

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_INVARIANT = 3

FORMATS = ('json', 'png', 'svg')

# handlers installed by get_logger, removed again on the next call
_handlers = []


def get_logger(
        LOG_FORMAT     = '%(asctime)s %(name)-12s %(levelname)-8s %(message)s ',
        LOG_NAME       = '',
        LOG_FILE_INFO  = None,
        LOG_FILE_ERROR = None,
        LOG_LEVEL      = logging.INFO):

    log           = logging.getLogger(LOG_NAME)
    log_formatter = logging.Formatter(LOG_FORMAT)

    while _handlers:
        handler = _handlers.pop()
        log.removeHandler(handler)
        handler.close()

    # console output goes to stderr; stdout is reserved for results
    stream_handler = logging.StreamHandler(sys.stderr)
    stream_handler.setFormatter(log_formatter)
    _handlers.append(stream_handler)

    if LOG_FILE_INFO:
        file_handler_info = logging.FileHandler(LOG_FILE_INFO, mode='w')
        file_handler_info.setFormatter(log_formatter)
        file_handler_info.setLevel(logging.INFO)
        _handlers.append(file_handler_info)

    if LOG_FILE_ERROR:
        file_handler_error = logging.FileHandler(LOG_FILE_ERROR, mode='w')
        file_handler_error.setFormatter(log_formatter)
        file_handler_error.setLevel(logging.ERROR)
        _handlers.append(file_handler_error)

    for handler in _handlers:
        log.addHandler(handler)
    log.setLevel(LOG_LEVEL)

    return log


class _DefaultsFormatter(argparse.ArgumentDefaultsHelpFormatter):
    """Show argparse defaults except the unset ones, whose defaults are named in the help text."""

    def _get_help_string(self, action):
        if action.default is None or action.default is False:
            return action.help
        return super()._get_help_string(action)


class CQArgumentParser(argparse.ArgumentParser):
    """Bad flags exit with the usage code instead of argparse's 2, which is taken by input errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, '%s: error: %s\n' % (self.prog, message))


#-----------------------------------------------------------------------------------------------
# settings

# command-line flag -> settings field
_OVERRIDES = {
    'seed': 'seed', 'workers': 'workers', 'k': 'k', 'max_pixels': 'max_pixels',
    'n_init': 'n_init', 'tau': 'tau', 'scale': 'monk_scalefile', 'theta': 'theta',
    'tile_size': 'tile_size', 'w_min': 'w_min', 'tolerance': 'tolerance', 'symbols': 'symbol_manifest',
    'forensics_k': 'forensics_k', 'delta': 'delta', 'bins': 'bins', 'groups': 'groups',
    'space': 'plot_space', 'max_points': 'max_points',
}


def loadSettings(args):
    """Built-in defaults, then the config file, then any flag given on the command line."""

    settings = readConfigFile(args.config)
    overrides = {field: getattr(args, flag) for flag, field in _OVERRIDES.items()
                 if getattr(args, flag, None) is not None}
    if overrides:
        settings = replace(settings, **overrides)
        validateSettings(settings)
    return settings


def quantizeConfig(settings):
    return QuantizeConfig(k=settings.k, seed=settings.seed, max_iter=settings.max_iter, tol=settings.tol,
                          n_init=settings.n_init, max_pixels=settings.max_pixels)


def monkScale(settings):
    return readMonkScale(settings.monk_scalefile, settings.tau, settings.h_halfwidth,
                         settings.s_halfwidth, settings.v_halfwidth)


def loadSignatures(args, settings, required=False):
    """Signatures from --symbol-image, else from the manifest (flag or config)."""

    config = quantizeConfig(settings)
    symbol_image = getattr(args, 'symbol_image', None)

    if symbol_image:
        name = args.name or Path(symbol_image).stem
        k = args.symbol_k if args.symbol_k is not None else settings.k
        with open(symbol_image, 'rb') as fh:
            data = fh.read()
        return [signatureFromImage(data, k, config, name, settings.w_min, settings.tolerance, settings.theta)]

    if settings.symbol_manifest:
        return readSymbolDatabase(settings.symbol_manifest, config, settings.w_min,
                                  settings.tolerance, settings.theta)

    if required:
        raise UsageError('match-symbol needs --symbols MANIFEST or --symbol-image PATH')
    return []


def _tileSize(settings):
    return settings.tile_size or None


def _readBytes(path):
    try:
        with open(path, 'rb') as fh:
            return fh.read()
    except OSError as err:
        raise DecodeError('could not read %s: %s' % (path, err)) from err


def _plotPalette(palette, cloud, settings, directory, stem, highlight=(), formats=('png', 'svg')):
    """Swatch PNG and pixel scatter SVG of one palette under directory."""

    os.makedirs(directory, exist_ok=True)
    if 'png' in formats:
        CQPlotSwatch(palette, os.path.join(directory, stem + '_swatch.png'), highlight)
    if 'svg' in formats:
        plotPixelCloud(cloud, palette, settings.plot_space,
                       os.path.join(directory, '%s_scatter_%s.svg' % (stem, settings.plot_space)),
                       settings.max_points)


def _safeName(name):
    return re.sub(r'[^A-Za-z0-9_.-]+', '_', name) or 'symbol'


#-----------------------------------------------------------------------------------------------
# subcommands

def cmd_quantize(args, settings):
    log = logging.getLogger(__name__)

    formats = ('json', 'png', 'svg') if args.out else ('json',)
    if args.formats:
        formats = tuple(f.strip().lower() for f in args.formats.split(',') if f.strip())
        unknown = sorted(set(formats) - set(FORMATS))
        if unknown:
            raise UsageError('unknown output formats: %s' % ', '.join(unknown))
        if not args.out and set(formats) - {'json'}:
            raise UsageError('png and svg output need --out DIR')

    config = quantizeConfig(settings)
    cloud = cloudFromArray(readImageFile(args.image), config.max_pixels)
    palette = kmeansPalette(cloud, config)
    in_bands = paletteInBands(palette, monkScale(settings))

    result = {'image': os.path.basename(args.image),
              'palette': paletteToDict(palette),
              'monk_matches': [{'index': i, 'tone_ids': tones} for i, tones in in_bands]}

    if not args.out:
        CQOutWriteJSON(result, None)
        return EXIT_OK

    os.makedirs(args.out, exist_ok=True)
    stem = Path(args.image).stem
    if 'json' in formats:
        CQOutWriteJSON(result, os.path.join(args.out, stem + '_palette.json'))
    _plotPalette(palette, cloud, settings, args.out, stem, [i for i, _ in in_bands], formats)

    log.info('Quantised %s into %d colours', args.image, palette.effective_k)
    return EXIT_OK


def cmd_flag_skin(args, settings):
    config = quantizeConfig(settings)
    cloud = cloudFromArray(readImageFile(args.image), config.max_pixels)
    report = flagSkin(cloud, monkScale(settings))

    CQOutWriteJSON(dict({'image': os.path.basename(args.image)}, **report.toDict()), args.out)
    return EXIT_OK


def cmd_match_symbol(args, settings):
    signatures = loadSignatures(args, settings, required=True)
    cloud = cloudFromArray(readImageFile(args.image), None)
    report = matchSymbolsInCloud(cloud, signatures, _tileSize(settings), args.theta)

    CQOutWriteJSON(dict({'image': os.path.basename(args.image)}, **report.toDict(args.matched_only)), args.out)

    if args.plots:
        stem = Path(args.image).stem
        shown = subsampleCloud(cloud, settings.max_pixels)
        for sig in signatures:
            required = [i for i, r in enumerate(sig.required) if r]
            _plotPalette(sig.palette, shown, settings, args.plots, '%s_%s' % (stem, _safeName(sig.name)), required)
    return EXIT_OK


def cmd_forensics(args, settings):
    region_a = parseRegion(args.region_a)
    region_b = parseRegion(args.region_b)

    report = compareRegions(_readBytes(args.image), region_a, region_b, k=settings.forensics_k,
                            delta=settings.delta, seed=settings.seed, config=quantizeConfig(settings),
                            bins=settings.bins)

    CQOutWriteJSON(dict({'image': os.path.basename(args.image)}, **report.toDict()), args.out)

    if args.plots:
        stem = Path(args.image).stem
        _plotPalette(report.palette_a, report.cloud_a, settings, args.plots, stem + '_region_a')
        _plotPalette(report.palette_b, report.cloud_b, settings, args.plots, stem + '_region_b')
    return EXIT_OK


def cmd_corpus_scan(args, settings):
    records = scanCorpus(args.directory, quantizeConfig(settings), monkScale(settings),
                         loadSignatures(args, settings), settings.workers, _tileSize(settings), args.theta)
    writeReport(records, args.out)
    return EXIT_OK


def cmd_corpus_cluster(args, settings):
    records = readReport(args.report)
    assignment = clusterCorpus(records, settings.groups, settings.seed, settings.workers)
    CQOutWriteJSON(assignment.toDict(), args.out)
    return EXIT_OK


def _readAssignment(path):
    try:
        with open(path) as fh:
            return ClusterAssignment.fromDict(json.load(fh))
    except (OSError, ValueError, KeyError, TypeError) as err:
        raise InputError('could not read cluster assignment %s: %s' % (path, err)) from err


def cmd_corpus_sample(args, settings):
    records = readReport(args.report)

    assignment = None
    if args.strategy == 'stratified-cluster':
        if args.clusters:
            assignment = _readAssignment(args.clusters)
        else:
            assignment = clusterCorpus(records, settings.groups, settings.seed, settings.workers)

    paths = sampleCorpus(records, assignment, args.n, args.strategy, settings.seed)
    CQOutWriteJSON({'strategy': args.strategy, 'seed': settings.seed, 'n': len(paths), 'paths': paths},
                   args.out)
    return EXIT_OK


def cmd_corpus_summarize(args, settings):
    summary = summarizeCorpus(readReport(args.report))
    if args.format == 'csv':
        CQOutWriteCSV(summary.toFrame(), args.out)
    else:
        CQOutWriteJSON(summary.toDict(), args.out)
    return EXIT_OK


def cmd_corpus_evaluate(args, settings):
    results = evaluateFlags(readReport(args.report), args.labels)
    CQOutWriteJSON({task: result.toDict() for task, result in results.items()}, args.out)
    return EXIT_OK


#-----------------------------------------------------------------------------------------------
# command line

def buildParser():
    fmt = _DefaultsFormatter

    parser = CQArgumentParser(prog='colourQuantPP.py', formatter_class=fmt,
                              description='Colour quantisation of images for human-in-the-loop coding. '
                                          'Flags left unset fall back to the config file, then to the '
                                          'built-in defaults shown in CQConfig.ini.')
    parser.add_argument('-c', '--config', help='Input configuration filename (else $CQ_CONFIG, '
                        'else ./CQConfig.ini if present)', type=str, default=None)
    parser.add_argument('--log', help='Also log to STEM.log (INFO) and STEM.err (ERROR)', metavar='STEM',
                        type=str, default=None)
    parser.add_argument('--debug', help='Debug logging; enables internal invariant checks', action='store_true')
    parser.add_argument('--seed', help='Random seed [QUANTIZE] seed, 2021', type=int, default=None)
    parser.add_argument('--workers', help='Worker processes [CORPUS] workers, 1', type=int, default=None)

    sub = parser.add_subparsers(dest='command', metavar='COMMAND', required=True)

    def quantArgs(p):
        p.add_argument('-k', dest='k', help='Palette size [QUANTIZE] k, 5', type=int, default=None)
        p.add_argument('--max-pixels', dest='max_pixels', help='Pixel subsampling cap [QUANTIZE] max_pixels, 100000',
                       type=int, default=None)
        p.add_argument('--n-init', dest='n_init', help='k-means restarts [QUANTIZE] n_init, 5', type=int, default=None)

    def monkArgs(p):
        p.add_argument('--tau', help='Skin flag threshold [MONK] tau, 0.05', type=float, default=None)
        p.add_argument('--scale', help='Monk scale table [MONK] scalefile, packaged table', type=str, default=None)

    def plotArgs(p):
        p.add_argument('--space', choices=SPACES, help='Scatter plot space [PLOT] space, hsv', default=None)
        p.add_argument('--max-points', dest='max_points', help='Scatter point cap [PLOT] max_points, 5000',
                       type=int, default=None)

    def symbolArgs(p):
        p.add_argument('--symbols', help='Symbol manifest [SYMBOL] manifest, none', type=str, default=None)
        p.add_argument('--theta', help='Similarity threshold overriding each signature, [SYMBOL] theta 0.90',
                       type=float, default=None)
        p.add_argument('--tile-size', dest='tile_size', help='Tile edge in pixels, 0 for automatic '
                       '[SYMBOL] tile_size, 0', type=int, default=None)
        p.add_argument('--w-min', dest='w_min', help='Required-colour weight [SYMBOL] w_min, 0.10',
                       type=float, default=None)
        p.add_argument('--tolerance', help='Per-colour tolerance [SYMBOL] tolerance, 0.12', type=float, default=None)

    p = sub.add_parser('quantize', help='Palette JSON, swatch PNG and pixel scatter SVG of one image',
                       formatter_class=fmt)
    p.add_argument('image', help='Image file (PNG, JPEG, GIF, BMP, WebP)')
    quantArgs(p)
    plotArgs(p)
    p.add_argument('--formats', help='Comma separated subset of json,png,svg; all three with --out, '
                   'else json', type=str, default=None)
    p.add_argument('--out', help='Output directory; without it the palette JSON goes to stdout',
                   type=str, default=None)
    p.set_defaults(func=cmd_quantize)

    p = sub.add_parser('flag-skin', help='Fraction of pixels inside the Monk skin tone bands',
                       formatter_class=fmt)
    p.add_argument('image', help='Image file')
    quantArgs(p)
    monkArgs(p)
    p.add_argument('--out', help='Output JSON file, - for stdout', type=str, default='-')
    p.set_defaults(func=cmd_flag_skin)

    p = sub.add_parser('match-symbol', help='Tile-wise colour-ratio matching of symbols', formatter_class=fmt)
    p.add_argument('image', help='Image file')
    quantArgs(p)
    symbolArgs(p)
    p.add_argument('--symbol-image', dest='symbol_image', help='Single symbol reference image instead of '
                   'a manifest', type=str, default=None)
    p.add_argument('--name', help='Name of the --symbol-image symbol, its file stem if unset',
                   type=str, default=None)
    p.add_argument('--symbol-k', dest='symbol_k', help='Palette size of the --symbol-image signature, '
                   'k if unset', type=int, default=None)
    p.add_argument('--matched-only', dest='matched_only', help='Report matching tiles only',
                   action='store_true')
    p.add_argument('--out', help='Output JSON file, - for stdout', type=str, default='-')
    plotArgs(p)
    p.add_argument('--plots', help='Directory for a swatch PNG and scatter SVG per signature',
                   type=str, default=None)
    p.set_defaults(func=cmd_match_symbol)

    p = sub.add_parser('forensics', help='Compare the colour distributions of two regions', formatter_class=fmt)
    p.add_argument('image', help='Image file')
    p.add_argument('--region-a', dest='region_a', help='First region as x,y,w,h', required=True)
    p.add_argument('--region-b', dest='region_b', help='Second region as x,y,w,h', required=True)
    p.add_argument('-k', dest='forensics_k', help='Palette size per region [FORENSICS] k, 4', type=int,
                   default=None)
    p.add_argument('--delta', help='Inconsistency threshold [FORENSICS] delta, 0.25', type=float, default=None)
    p.add_argument('--bins', help='Channel histogram bins [FORENSICS] bins, 16', type=int, default=None)
    p.add_argument('--out', help='Output JSON file, - for stdout', type=str, default='-')
    plotArgs(p)
    p.add_argument('--plots', help='Directory for a swatch PNG and scatter SVG per region',
                   type=str, default=None)
    p.set_defaults(func=cmd_forensics)

    corpus = sub.add_parser('corpus', help='Batch work on an image directory', formatter_class=fmt)
    csub = corpus.add_subparsers(dest='corpus_command', metavar='ACTION', required=True)

    p = csub.add_parser('scan', help='Analyse every image under a directory into a JSON report',
                        formatter_class=fmt)
    p.add_argument('directory', help='Corpus root, scanned recursively')
    quantArgs(p)
    monkArgs(p)
    symbolArgs(p)
    p.add_argument('--out', help='Report JSON file, - for stdout', type=str, default='-')
    p.set_defaults(func=cmd_corpus_scan)

    p = csub.add_parser('cluster', help='Group scanned images by palette distance (k-medoids)',
                        formatter_class=fmt)
    p.add_argument('report', help='Report JSON from corpus scan')
    p.add_argument('-g', '--groups', dest='groups', help='Number of groups [CORPUS] groups, 5', type=int,
                   default=None)
    p.add_argument('--out', help='Assignment JSON file, - for stdout', type=str, default='-')
    p.set_defaults(func=cmd_corpus_cluster)

    p = csub.add_parser('sample', help='Draw images for human coding', formatter_class=fmt)
    p.add_argument('report', help='Report JSON from corpus scan')
    p.add_argument('-n', dest='n', help='Sample size', type=int, required=True)
    p.add_argument('--strategy', choices=STRATEGIES, help='Sampling strategy', default='uniform')
    p.add_argument('--clusters', help='Assignment JSON from corpus cluster; computed with -g if unset',
                   type=str, default=None)
    p.add_argument('-g', '--groups', dest='groups', help='Number of groups [CORPUS] groups, 5', type=int,
                   default=None)
    p.add_argument('--out', help='Sample JSON file, - for stdout', type=str, default='-')
    p.set_defaults(func=cmd_corpus_sample)

    p = csub.add_parser('summarize', help='Descriptive statistics of a report', formatter_class=fmt)
    p.add_argument('report', help='Report JSON from corpus scan')
    p.add_argument('--format', choices=('json', 'csv'), help='Output format', default='json')
    p.add_argument('--out', help='Output file, - for stdout', type=str, default='-')
    p.set_defaults(func=cmd_corpus_summarize)

    p = csub.add_parser('evaluate', help='Flag error rates against a labels manifest', formatter_class=fmt)
    p.add_argument('report', help='Report JSON from corpus scan')
    p.add_argument('--labels', help='CSV manifest with columns path,task,label', required=True)
    p.add_argument('--out', help='Output JSON file, - for stdout', type=str, default='-')
    p.set_defaults(func=cmd_corpus_evaluate)

    return parser


def main(argv=None):

    t0 = time.time()

    parser = buildParser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return err.code if isinstance(err.code, int) else EXIT_USAGE

    cqlogger = get_logger(LOG_FILE_INFO=args.log + '.log' if args.log else None,
                          LOG_FILE_ERROR=args.log + '.err' if args.log else None,
                          LOG_LEVEL=logging.DEBUG if args.debug else logging.INFO)

    try:
        settings = loadSettings(args)
        code = args.func(args, settings)
    except InvariantError as err:
        cqlogger.error('ERROR: internal invariant failed: %s', err)
        return EXIT_INVARIANT
    except InputError as err:
        cqlogger.error('ERROR: %s', err)
        return EXIT_INPUT
    except UsageError as err:
        cqlogger.error('ERROR: %s', err)
        return EXIT_USAGE
    except OSError as err:
        cqlogger.error('ERROR: %s', err)
        return EXIT_INPUT
    except Error as err:
        cqlogger.error('ERROR: %s', err)
        return EXIT_USAGE

    cqlogger.info('runtime: %.3f s', time.time() - t0)
    return code


if __name__ == '__main__':
    sys.exit(main())
