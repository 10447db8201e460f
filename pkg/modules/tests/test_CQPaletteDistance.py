#!/bin/python

import pytest
import numpy as np

from ..CQColourSpace import Hsv, hsvToCylArray
from ..CQQuantize import Palette, PaletteEntry
from ..CQPaletteDistance import paletteDistance, transportCost


def makePalette(*entries):
    return Palette(tuple(PaletteEntry(Hsv(h, s, v), w) for h, s, v, w in entries), len(entries), len(entries))


RED = (0.0, 1.0, 1.0)
BLUE = (240.0, 1.0, 1.0)


def test_identity():

    p = makePalette(RED + (0.6,), BLUE + (0.4,))
    assert paletteDistance(p, p) == 0.0

    return


def test_singleEntries():

    d = paletteDistance(makePalette(RED + (1.0,)), makePalette(BLUE + (1.0,)))
    assert d == pytest.approx(np.sqrt(3))
    assert d == pytest.approx(1.7321, abs=1e-4)

    return


def test_splitAgainstSingle():

    a = makePalette(RED + (0.5,), BLUE + (0.5,))
    b = makePalette(RED + (1.0,))

    # with a single sink the only plan moves each source straight to it
    ground = np.linalg.norm(hsvToCylArray([RED, BLUE]) - hsvToCylArray([RED]), axis=1)
    expected = 0.5 * ground[0] + 0.5 * ground[1]

    assert paletteDistance(a, b) == pytest.approx(expected)
    assert paletteDistance(a, b) == pytest.approx(0.5 * np.sqrt(3))

    return


def bestTwoByTwo(wa, wb, cost):
    # flow t on (0, 0) fixes the other three cells; the optimum is at an end of its range
    lo = max(0.0, wa[0] - wb[1])
    hi = min(wa[0], wb[0])

    def total(t):
        flow = np.array([[t, wa[0] - t], [wb[0] - t, wa[1] - wb[0] + t]])
        return float((flow * cost).sum())

    return min(total(lo), total(hi))


def test_transportAgainstEnumeration():

    rng = np.random.default_rng(2021)
    for _ in range(50):
        wa = rng.dirichlet([1.0, 1.0])
        wb = rng.dirichlet([1.0, 1.0])
        cost = rng.uniform(0, 2, size=(2, 2))

        assert transportCost(wa, wb, cost) == pytest.approx(bestTwoByTwo(wa, wb, cost), abs=1e-7)

    return


def test_symmetry():

    rng = np.random.default_rng(17)
    for _ in range(20):
        a = makePalette(*[(rng.uniform(0, 360), rng.uniform(0, 1), rng.uniform(0, 1), w)
                          for w in rng.dirichlet(np.ones(3))])
        b = makePalette(*[(rng.uniform(0, 360), rng.uniform(0, 1), rng.uniform(0, 1), w)
                          for w in rng.dirichlet(np.ones(4))])

        assert paletteDistance(a, b) == paletteDistance(b, a)
        assert paletteDistance(a, b) >= 0.0

    return


def test_triangleInequality():

    rng = np.random.default_rng(23)
    palettes = [makePalette(*[(rng.uniform(0, 360), rng.uniform(0, 1), rng.uniform(0, 1), w)
                              for w in rng.dirichlet(np.ones(3))]) for _ in range(6)]

    for a in palettes:
        for b in palettes:
            for c in palettes:
                assert paletteDistance(a, c) <= paletteDistance(a, b) + paletteDistance(b, c) + 1e-7

    return
