#!/bin/python

import pytest
import numpy as np

from ..CQColourSpace import Hsv, ParseError, hexToRgb, hsvToRgbArray
from ..CQErrors import UsageError
from ..CQMonkScale import MonkBand, MonkScaleConfig, SkinFlagReport
from ..CQMonkScale import bandFromHex, pixelInBand, bandMask, flagSkin, paletteInBands
from ..CQQuantize import QuantizeConfig, kmeansPalette
from ..CQReadImage import cloudFromArray
from ..CQReadMonkScale import readMonkScale


def image(rgb, shape=(100, 100)):
    rgba = np.zeros(shape + (4,), dtype=np.uint8)
    rgba[..., :3] = rgb
    rgba[..., 3] = 255
    return rgba


def test_bandFromHex():

    band = bandFromHex('FF0000')
    assert band.reference == Hsv(0.0, 1.0, 1.0)
    assert band.hueWindow == (306.0, 54.0)
    assert band.saturationWindow == pytest.approx((0.85, 1.0))

    assert bandFromHex('ff0000') == band

    with pytest.raises(ParseError):
        bandFromHex('GG0000')
    with pytest.raises(UsageError):
        bandFromHex('FF0000', h_halfwidth=0.0)

    return


def test_pixelInBand():

    band = bandFromHex('d7bd96', tone_id=5)
    ref = band.reference

    assert pixelInBand(ref, band)
    assert not pixelInBand(Hsv(ref.h, ref.s, min(1.0, ref.v + 0.2)), band)
    assert not pixelInBand(Hsv(ref.h, ref.s, ref.v - 0.2), band)

    # hue distance is taken on the circle
    seam = MonkBand(1, Hsv(10.0, 0.5, 0.5))
    assert pixelInBand(Hsv(350.0, 0.5, 0.5), seam)
    assert not pixelInBand(Hsv(190.0, 0.5, 0.5), seam)

    # band edges are inclusive
    assert pixelInBand(Hsv(64.0, 0.65, 0.35), seam)

    return


def test_readMonkScale():

    scale = readMonkScale()
    assert len(scale.bands) == 10
    assert [b.tone_id for b in scale.bands] == list(range(1, 11))
    assert scale.tau == 0.05
    assert scale.bands[0].reference == bandFromHex('f6ede4').reference
    assert all(b.h_halfwidth == 54.0 for b in scale.bands)

    assert readMonkScale(tau=0.2).tau == 0.2
    assert readMonkScale(s_halfwidth=0.3).bands[4].s_halfwidth == 0.3

    return


def test_readMonkScaleOverrides(tmp_path):

    table = tmp_path / 'scale.txt'
    table.write_text('# two tones\n'
                     'tone_id hex h_halfwidth s_halfwidth v_halfwidth\n'
                     '1 f6ede4 - - -\n'
                     '2 292420 20 0.05 -\n')

    scale = readMonkScale(str(table))
    assert len(scale.bands) == 2
    assert scale.bands[0].h_halfwidth == 54.0
    assert scale.bands[1].h_halfwidth == 20.0
    assert scale.bands[1].s_halfwidth == 0.05
    assert scale.bands[1].v_halfwidth == 0.15

    return


def test_readMonkScaleErrors(tmp_path):

    with pytest.raises(ParseError):
        readMonkScale(str(tmp_path / 'nothere.txt'))

    bad = tmp_path / 'bad.txt'
    bad.write_text('tone_id colour\n1 f6ede4\n')
    with pytest.raises(ParseError):
        readMonkScale(str(bad))

    ugly = tmp_path / 'ugly.txt'
    ugly.write_text('tone_id hex\n1 zzzzzz\n')
    with pytest.raises(ParseError):
        readMonkScale(str(ugly))

    return


def test_flagSkinReferenceFill():

    scale = readMonkScale()
    tone = scale.bands[5]
    rgb = hexToRgb('a07e56').asTuple()

    report = flagSkin(cloudFromArray(image(rgb)), scale)

    assert report.flagged
    assert report.per_tone_fraction[5] == 1.0
    assert report.total_matched_fraction == 1.0
    assert report.tone_ids[5] == tone.tone_id
    assert report.tau_used == 0.05

    return


def test_flagSkinSaturatedBlue():

    scale = readMonkScale()
    report = flagSkin(cloudFromArray(image((0, 0, 255))), scale)

    assert not report.flagged
    assert report.total_matched_fraction == 0.0
    assert all(f == 0.0 for f in report.per_tone_fraction)

    return


def test_flagSkinBelowThreshold():

    rgba = image((0, 0, 255))
    rgba.reshape(-1, 4)[:300, :3] = hexToRgb('d7bd96').asTuple()

    report = flagSkin(cloudFromArray(rgba), readMonkScale(tau=0.05))

    assert not report.flagged
    assert report.total_matched_fraction == pytest.approx(0.03, abs=0.005)

    # the same image is flagged once tau drops below the planted fraction
    assert flagSkin(cloudFromArray(rgba), readMonkScale(tau=0.02)).flagged

    return


def test_flagSkinUnionCountsOnce():

    # two overlapping bands around one colour
    band = bandFromHex('a07e56', tone_id=1)
    scale = MonkScaleConfig((band, bandFromHex('a07e56', tone_id=2)), tau=0.5)

    report = flagSkin(cloudFromArray(image(hexToRgb('a07e56').asTuple(), (10, 10))), scale)
    assert report.per_tone_fraction == (1.0, 1.0)
    assert report.total_matched_fraction == 1.0

    return


def test_halfwidthMonotone():

    rng = np.random.default_rng(2021)
    rgba = image((0, 0, 0), (60, 60))
    rgba[..., :3] = rng.integers(0, 256, size=(60, 60, 3))
    cloud = cloudFromArray(rgba)

    previous = None
    for width in (0.05, 0.1, 0.15, 0.25, 0.4):
        fractions = np.array(flagSkin(cloud, readMonkScale(s_halfwidth=width, v_halfwidth=width)).per_tone_fraction)
        if previous is not None:
            assert (fractions >= previous).all()
        previous = fractions

    return


def test_skinReportDict():

    report = flagSkin(cloudFromArray(image((0, 0, 255), (8, 8))), readMonkScale())
    data = report.toDict()

    assert list(data['per_tone_fraction']) == [str(t) for t in range(1, 11)]
    assert SkinFlagReport.fromDict(data) == report

    return


def test_paletteInBands():

    rgba = image((0, 0, 255), (10, 10))
    rgba[:3] = hexToRgb('825c43').asTuple() + (255,)

    palette = kmeansPalette(cloudFromArray(rgba), QuantizeConfig(k=2))
    hits = paletteInBands(palette, readMonkScale())

    # blue carries 0.7 and comes first; the skin tone is entry 1
    assert [i for i, _ in hits] == [1]
    assert 7 in hits[0][1]

    return


def test_monkScaleConfig():

    with pytest.raises(UsageError):
        MonkScaleConfig((bandFromHex('f6ede4'),), tau=0.0)
    with pytest.raises(UsageError):
        MonkScaleConfig((), tau=0.05)

    scale = readMonkScale()
    assert readMonkScale(tau=0.3).tau == 0.3
    assert readMonkScale(tau=0.3).bands == scale.bands

    mask = bandMask(np.array([[0.0, 0.0, 0.0], [240.0, 1.0, 1.0]]), scale.bands[0])
    assert not mask.any()

    return


def test_skinHarness():

    rng = np.random.default_rng(2021)
    scale = readMonkScale(tau=0.05)
    tones = hsvToRgbArray([band.reference.asTuple() for band in scale.bands])

    for trial in range(100):
        p = rng.uniform(0.0, 0.15)

        # saturated blues and purples, well clear of every band
        hsv = np.column_stack([rng.uniform(120, 300, 10000), rng.uniform(0.8, 1.0, 10000),
                               rng.uniform(0.7, 1.0, 10000)])
        rgb = hsvToRgbArray(hsv)
        planted = rng.choice(10000, size=int(round(p * 10000)), replace=False)
        rgb[planted] = tones[rng.integers(0, len(tones), size=len(planted))]

        report = flagSkin(cloudFromArray(image(rgb.reshape(100, 100, 3))), scale)

        assert abs(report.total_matched_fraction - p) <= 0.01
        assert report.flagged == (report.total_matched_fraction >= 0.05)
        if abs(p - 0.05) > 0.01:
            assert report.flagged == (p >= 0.05)

    return
