"""
Measure flagging error against a labelled manifest.

The manifest is a CSV file with header path,task,label where task is 'skin'
or 'symbol' and label a boolean (true/false, yes/no, 1/0). For 'symbol' the
prediction is "any symbol flagged".
"""
import logging
from dataclasses import dataclass
from pathlib import PurePosixPath

import pandas as pd

from .CQErrors import InputError

__all__ = ['EvalResult', 'ManifestParseError', 'TASKS', 'readLabels', 'evaluateFlags']

logger = logging.getLogger(__name__)


############################################
# MODULE SPECIFIC EXCEPTION
###########################################
class ManifestParseError(InputError):
    """The labels manifest is malformed."""

    pass


TASKS = ('skin', 'symbol')

_TRUE = {'true', 't', 'yes', 'y', '1'}
_FALSE = {'false', 'f', 'no', 'n', '0'}


@dataclass(frozen=True)
class EvalResult:
    task: str
    true_positives: int
    false_positives: int
    true_negatives: int
    false_negatives: int
    unmatched: int
    unlabeled: int

    @property
    def n(self):
        return self.true_positives + self.false_positives + self.true_negatives + self.false_negatives

    @property
    def error_rate(self):
        return (self.false_positives + self.false_negatives) / self.n if self.n else 0.0

    def toDict(self):
        return {'task': self.task, 'n': self.n,
                'true_positives': self.true_positives, 'false_positives': self.false_positives,
                'true_negatives': self.true_negatives, 'false_negatives': self.false_negatives,
                'error_rate': self.error_rate, 'unmatched': self.unmatched, 'unlabeled': self.unlabeled}


def _normalisePath(path):
    return PurePosixPath(str(path).strip().replace('\\', '/')).as_posix()


def _parseLabel(value):
    text = str(value).strip().lower()
    if text in _TRUE:
        return True
    if text in _FALSE:
        return False
    raise ManifestParseError('not a boolean label: %r' % (value,))


def readLabels(labels_file):
    """
    Read the labels manifest into a DataFrame with columns path, task, label (bool).
    """

    try:
        padafr = pd.read_csv(labels_file, dtype=str, keep_default_na=False)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as err:
        logger.error('ERROR: could not read labels manifest %s: %s', labels_file, err)
        raise ManifestParseError('could not read labels manifest %s: %s' % (labels_file, err)) from err

    padafr = padafr.rename(columns=lambda x: x.strip())
    missing = [c for c in ('path', 'task', 'label') if c not in padafr.columns]
    if missing:
        logger.error('ERROR: labels manifest %s lacks columns: %s', labels_file, ', '.join(missing))
        raise ManifestParseError('labels manifest %s lacks columns: %s' % (labels_file, ', '.join(missing)))

    padafr = padafr[['path', 'task', 'label']].copy()
    padafr['task'] = padafr['task'].str.strip().str.lower()
    bad = sorted(set(padafr['task']) - set(TASKS))
    if bad:
        logger.error('ERROR: labels manifest %s has unknown tasks: %s', labels_file, ', '.join(bad))
        raise ManifestParseError('unknown tasks in %s: %s' % (labels_file, ', '.join(bad)))

    padafr['path'] = padafr['path'].map(_normalisePath)
    padafr['label'] = padafr['label'].map(_parseLabel)
    return padafr


def evaluateFlags(records, labels):
    """Confusion counts of the record flags against the labels, per task.

    Parameters:
    -----------
    records ... list of ImageRecord
    labels  ... DataFrame from readLabels, or the path of a labels manifest

    Returns:
    --------
    dict task -> EvalResult for each task present in the labels. Rows that do
    not name an ok record are counted as unmatched; ok records without a
    label for the task are counted as unlabeled.
    """

    if not isinstance(labels, pd.DataFrame):
        labels = readLabels(labels)

    by_path = {r.path: r for r in records if r.ok}
    results = {}

    for task in TASKS:
        rows = labels[labels['task'] == task]
        if rows.empty:
            continue
        if rows['path'].duplicated().any():
            logger.warning('%d duplicate %s labels; keeping the last of each', int(rows['path'].duplicated().sum()), task)
            rows = rows.drop_duplicates('path', keep='last')

        tp = fp = tn = fn = unmatched = 0
        for path, label in zip(rows['path'], rows['label']):
            rec = by_path.get(path)
            if rec is None:
                unmatched += 1
                continue
            predicted = rec.skin.flagged if task == 'skin' else rec.symbolFlagged
            if predicted and label:
                tp += 1
            elif predicted:
                fp += 1
            elif label:
                fn += 1
            else:
                tn += 1

        unlabeled = len(set(by_path) - set(rows['path']))
        results[task] = EvalResult(task, tp, fp, tn, fn, unmatched, unlabeled)
        logger.info('%s: error rate %.4f over %d labelled images (%d unmatched, %d unlabeled)',
                    task, results[task].error_rate, results[task].n, unmatched, unlabeled)

    return results
