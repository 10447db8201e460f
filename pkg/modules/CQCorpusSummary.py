"""
Descriptive statistics of a scanned corpus.
"""
import logging
from dataclasses import dataclass

# Numpy
import numpy as np
# Pandas
import pandas as pd

__all__ = ['CorpusSummary', 'HUE_BINS', 'summarizeCorpus']

logger = logging.getLogger(__name__)

# 12 bins of 30 degrees
HUE_BINS = np.linspace(0.0, 360.0, 13)


@dataclass(frozen=True)
class CorpusSummary:
    n_images: int
    n_ok: int
    n_failed: int
    status_counts: dict
    n_skin_flagged: int
    symbol_match_counts: dict
    hue_histogram: tuple
    mean_saturation: float
    mean_value: float
    mean_effective_k: float

    def toDict(self):
        return {'n_images': self.n_images,
                'n_ok': self.n_ok,
                'n_failed': self.n_failed,
                'status_counts': self.status_counts,
                'n_skin_flagged': self.n_skin_flagged,
                'symbol_match_counts': self.symbol_match_counts,
                'hue_histogram': list(self.hue_histogram),
                'mean_saturation': self.mean_saturation,
                'mean_value': self.mean_value,
                'mean_effective_k': self.mean_effective_k}

    def toFrame(self):
        """Two-column (metric, value) table for CSV output."""
        rows = [('n_images', self.n_images), ('n_ok', self.n_ok), ('n_failed', self.n_failed)]
        rows += [('status_%s' % s, c) for s, c in self.status_counts.items()]
        rows += [('n_skin_flagged', self.n_skin_flagged)]
        rows += [('symbol_%s' % s, c) for s, c in self.symbol_match_counts.items()]
        rows += [('hue_%03d_%03d' % (HUE_BINS[i], HUE_BINS[i + 1]), w) for i, w in enumerate(self.hue_histogram)]
        rows += [('mean_saturation', self.mean_saturation), ('mean_value', self.mean_value),
                 ('mean_effective_k', self.mean_effective_k)]
        return pd.DataFrame(rows, columns=['metric', 'value'])


def summarizeCorpus(records):
    """
    Aggregate a record list.

    The hue histogram sums the palette weights of all ok images, so its bins
    add up to n_ok. Mean saturation and value are weight-averaged over each
    palette, then averaged over images.
    """

    status = pd.Series([r.status for r in records], dtype=object)
    ok = [r for r in records if r.ok]

    # one row per palette entry
    entries = pd.DataFrame([(r.path, e.centroid.h, e.centroid.s, e.centroid.v, e.weight)
                            for r in ok for e in r.palette.entries],
                           columns=['path', 'h', 's', 'v', 'weight'])

    if len(entries):
        hist, _ = np.histogram(entries['h'], bins=HUE_BINS, weights=entries['weight'])
        per_image = (entries.assign(ws=entries['s'] * entries['weight'], wv=entries['v'] * entries['weight'])
                     .groupby('path')[['ws', 'wv']].sum())
        mean_s = float(per_image['ws'].mean())
        mean_v = float(per_image['wv'].mean())
        mean_k = float(np.mean([r.palette.effective_k for r in ok]))
    else:
        hist = np.zeros(len(HUE_BINS) - 1)
        mean_s = mean_v = mean_k = 0.0

    symbols = sorted({name for r in ok for name in (r.symbol_flags or {})})
    symbol_counts = {name: int(sum(bool((r.symbol_flags or {}).get(name, {}).get('flagged')) for r in ok))
                     for name in symbols}

    status_counts = {s: int(c) for s, c in sorted(status.value_counts().items())}

    summary = CorpusSummary(n_images=len(records),
                            n_ok=len(ok),
                            n_failed=len(records) - len(ok),
                            status_counts=status_counts,
                            n_skin_flagged=int(sum(r.skin.flagged for r in ok)),
                            symbol_match_counts=symbol_counts,
                            hue_histogram=tuple(float(w) for w in hist),
                            mean_saturation=mean_s,
                            mean_value=mean_v,
                            mean_effective_k=mean_k)

    logger.info('Summarised %d images (%d ok)', summary.n_images, summary.n_ok)
    return summary
