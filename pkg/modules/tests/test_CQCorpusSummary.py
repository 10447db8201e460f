#!/bin/python

import pytest

from ..CQColourSpace import Hsv
from ..CQMonkScale import SkinFlagReport
from ..CQQuantize import Palette, PaletteEntry
from ..CQCorpusScan import ImageRecord, STATUS_OK, STATUS_DECODE_FAILED, STATUS_EMPTY
from ..CQCorpusSummary import HUE_BINS, summarizeCorpus
from ..CQOutWriteCSV import CQOutWriteCSV


def record(path, entries, skin=False, flags=None):
    palette = Palette(tuple(PaletteEntry(Hsv(*c), w) for c, w in entries), len(entries), 5)
    report = SkinFlagReport((1,), (0.0,), 0.0, skin, 0.05)
    return ImageRecord(path, path, STATUS_OK, 8, 8, palette, report, flags or {})


def corpus():
    return [
        record('a.png', [((10.0, 0.4, 0.6), 0.5), ((200.0, 0.8, 0.2), 0.5)], skin=True,
               flags={'logo': {'flagged': True, 'best_similarity': 0.97}}),
        record('b.png', [((15.0, 1.0, 1.0), 1.0)],
               flags={'logo': {'flagged': False, 'best_similarity': 0.2}}),
        ImageRecord('c.png', 'x', STATUS_DECODE_FAILED, message='broken'),
        ImageRecord('d.png', 'y', STATUS_EMPTY, 4, 4, message='no opaque pixels'),
    ]


def test_summarizeCorpus():

    summary = summarizeCorpus(corpus())

    assert summary.n_images == 4
    assert summary.n_ok == 2
    assert summary.n_failed == 2
    assert summary.status_counts == {'decode_failed': 1, 'empty': 1, 'ok': 2}
    assert summary.n_skin_flagged == 1
    assert summary.symbol_match_counts == {'logo': 1}
    assert summary.mean_effective_k == 1.5

    return


def test_hueHistogram():

    summary = summarizeCorpus(corpus())

    assert len(HUE_BINS) == 13
    assert len(summary.hue_histogram) == 12
    assert sum(summary.hue_histogram) == pytest.approx(2.0)
    assert summary.hue_histogram[0] == pytest.approx(1.5)
    assert summary.hue_histogram[6] == pytest.approx(0.5)

    # per-image weighted means, then averaged over images
    assert summary.mean_saturation == pytest.approx((0.6 + 1.0) / 2)
    assert summary.mean_value == pytest.approx((0.4 + 1.0) / 2)

    return


def test_summarizeEmpty():

    summary = summarizeCorpus([])

    assert summary.n_images == 0
    assert sum(summary.hue_histogram) == 0.0
    assert summary.mean_effective_k == 0.0

    return


def test_summaryOutput(tmp_path):

    summary = summarizeCorpus(corpus())

    data = summary.toDict()
    assert data['n_ok'] == 2
    assert len(data['hue_histogram']) == 12

    frame = summary.toFrame()
    assert list(frame.columns) == ['metric', 'value']
    assert 'hue_000_030' in set(frame['metric'])

    out = tmp_path / 'summary.csv'
    CQOutWriteCSV(frame, str(out))
    lines = out.read_text().splitlines()
    assert lines[0] == 'metric,value'
    assert len(lines) == len(frame) + 1

    return
