#!/bin/python

import io

import pytest
import numpy as np
from PIL import Image

from ..CQColourSpace import hsvToRgbArray
from ..CQErrors import UsageError
from ..CQReadImage import cloudFromArray
from ..CQForensics import RegionSpec, OutOfBounds, RegionTooSmall, RegionParseError
from ..CQForensics import parseRegion, regionCloud, channelHistograms, compareRegions


def encode(rgb):
    buf = io.BytesIO()
    Image.fromarray(np.asarray(rgb, dtype=np.uint8)).save(buf, format='PNG')
    return buf.getvalue()


def panels():
    # red on the left half, blue on the right
    rgb = np.zeros((64, 128, 3), dtype=np.uint8)
    rgb[:, :64, 0] = 255
    rgb[:, 64:, 2] = 255
    return rgb


def sign(seed=2021):
    # noisy base colour with a band of the same texture shifted 60 degrees in hue
    rng = np.random.default_rng(seed)
    hsv = np.empty((128, 128, 3))
    hsv[..., 0] = 30.0 + rng.normal(0, 0.02 * 360, (128, 128))
    hsv[..., 1] = 0.6 + rng.normal(0, 0.02, (128, 128))
    hsv[..., 2] = 0.7 + rng.normal(0, 0.02, (128, 128))
    hsv[96:, :, 0] += 60.0
    hsv[..., 0] %= 360.0
    hsv[..., 1:] = np.clip(hsv[..., 1:], 0.0, 1.0)
    return hsvToRgbArray(hsv)


def test_parseRegion():

    assert parseRegion('0,0,64,64') == RegionSpec(0, 0, 64, 64)
    assert parseRegion(' 10, 20 ,30,40 ') == RegionSpec(10, 20, 30, 40)

    for text in ('0,0,64', 'a,b,c,d', '-1,0,10,10', ''):
        with pytest.raises(RegionParseError):
            parseRegion(text)

    return


def test_regionCloud():

    rgba = np.zeros((20, 30, 4), dtype=np.uint8)
    rgba[..., 1] = 77
    rgba[..., 3] = 255
    cloud = cloudFromArray(rgba)

    full = regionCloud(cloud, RegionSpec(0, 0, 30, 20))
    assert len(full) == len(cloud)
    assert (full.hsv == cloud.hsv).all()

    square = regionCloud(cloud, RegionSpec(5, 5, 4, 4))
    assert len(square) == 16
    assert (square.hsv == square.hsv[0]).all()
    assert set(square.cols) == {5, 6, 7, 8}

    with pytest.raises(OutOfBounds):
        regionCloud(cloud, RegionSpec(20, 0, 11, 10))
    with pytest.raises(RegionTooSmall):
        regionCloud(cloud, RegionSpec(0, 0, 3, 3))

    return


def test_compareRegionsUniform():

    rgb = np.full((64, 128, 3), (40, 160, 90), dtype=np.uint8)
    report = compareRegions(encode(rgb), RegionSpec(0, 0, 64, 64), RegionSpec(64, 0, 64, 64))

    assert report.distance == 0.0
    assert report.verdict == 'consistent'
    assert report.delta_used == 0.25

    return


def test_compareRegionsPanels():

    report = compareRegions(encode(panels()), parseRegion('0,0,64,64'), parseRegion('64,0,64,64'))

    assert report.distance == pytest.approx(np.sqrt(3))
    assert report.verdict == 'inconsistent'
    assert report.palette_a.effective_k == 1

    return


def test_compareRegionsSymmetric():

    image = encode(sign())
    a, b = RegionSpec(0, 0, 64, 64), RegionSpec(32, 90, 64, 38)

    assert compareRegions(image, a, b).distance == compareRegions(image, b, a).distance

    return


def test_spliceHarness():

    image = encode(sign())
    base_a = RegionSpec(0, 0, 64, 64)
    base_b = RegionSpec(64, 0, 64, 64)
    splice = RegionSpec(32, 96, 64, 32)

    spliced = compareRegions(image, base_a, splice)
    clean = compareRegions(image, base_a, base_b)

    assert spliced.distance > 0.25
    assert spliced.verdict == 'inconsistent'
    assert clean.distance < 0.25 / 5
    assert clean.verdict == 'consistent'

    return


def test_spliceHarnessSeeds():

    base_a = RegionSpec(0, 0, 64, 64)
    base_b = RegionSpec(64, 0, 64, 64)
    splice = RegionSpec(32, 96, 64, 32)

    clean = 0
    caught = 0
    for seed in range(100):
        image = encode(sign(seed))
        clean += compareRegions(image, base_a, base_b).distance < 0.25 / 5
        caught += compareRegions(image, base_a, splice).verdict == 'inconsistent'

    assert clean >= 95
    assert caught >= 95

    return


def test_compareRegionsErrors():

    image = encode(panels())

    with pytest.raises(OutOfBounds):
        compareRegions(image, RegionSpec(100, 0, 64, 64), RegionSpec(0, 0, 64, 64))
    with pytest.raises(RegionTooSmall):
        compareRegions(image, RegionSpec(0, 0, 2, 2), RegionSpec(0, 0, 64, 64))
    with pytest.raises(UsageError):
        compareRegions(image, RegionSpec(0, 0, 64, 64), RegionSpec(64, 0, 64, 64), delta=-1.0)

    return


def test_channelHistograms():

    cloud = cloudFromArray(np.concatenate([panels(), np.full((64, 128, 1), 255, dtype=np.uint8)], axis=2))
    hist = channelHistograms(cloud, bins=8)

    assert set(hist) == {'r', 'g', 'b', 'h', 's', 'v'}
    for values in hist.values():
        assert len(values) == 8
        assert sum(values) == pytest.approx(1.0)
    assert hist['r'][0] == pytest.approx(0.5)
    assert hist['r'][7] == pytest.approx(0.5)
    assert hist['g'][0] == pytest.approx(1.0)

    return


def test_reportDict():

    report = compareRegions(encode(panels()), RegionSpec(0, 0, 64, 64), RegionSpec(64, 0, 64, 64), k=2, delta=0.5)
    data = report.toDict()

    assert data['verdict'] == 'inconsistent'
    assert data['delta'] == 0.5
    assert data['region_b'] == {'x': 64, 'y': 0, 'width': 64, 'height': 64}
    assert data['palette_a']['k'] == 2
    assert set(data['channel_histograms']) == {'region_a', 'region_b'}

    return
