"""
Draw samples of corpus images for human coders.

Strategies:

    uniform            ... seeded draw without replacement from all ok images
    stratified-cluster ... per-group quotas proportional to group size,
                           rounded by largest remainder
    flagged-only       ... uniform draw from skin- or symbol-flagged images
"""
import logging

# Numpy
import numpy as np

from .CQErrors import UsageError

__all__ = ['SampleTooLarge', 'STRATEGIES', 'stratifiedQuotas', 'sampleCorpus']

logger = logging.getLogger(__name__)


############################################
# MODULE SPECIFIC EXCEPTION
###########################################
class SampleTooLarge(UsageError):
    """More images requested than there are to sample from."""

    pass


STRATEGIES = ('uniform', 'stratified-cluster', 'flagged-only')


def stratifiedQuotas(sizes, n, available=None):
    """Split n draws over groups in proportion to sizes.

    Floors of the exact shares are topped up by largest remainder (ties to the
    lower group index). A group whose quota exceeds its available members
    passes the excess on to the groups with spare members, in the same order.
    """

    sizes = np.asarray(sizes, dtype=np.int64)
    available = sizes.copy() if available is None else np.asarray(available, dtype=np.int64)
    total = int(sizes.sum())
    if total == 0:
        return np.zeros(len(sizes), dtype=np.int64)

    # integer arithmetic keeps the shares exact
    quotas = (n * sizes) // total
    remainders = (n * sizes) % total
    ranking = sorted(range(len(sizes)), key=lambda j: (-remainders[j], j))
    for j in ranking[:n - int(quotas.sum())]:
        quotas[j] += 1

    excess = int(np.maximum(quotas - available, 0).sum())
    quotas = np.minimum(quotas, available)
    while excess > 0:
        spare = [j for j in ranking if quotas[j] < available[j]]
        if not spare:
            break
        for j in spare:
            if excess == 0:
                break
            quotas[j] += 1
            excess -= 1

    return quotas


def sampleCorpus(records, assignment, n, strategy, seed=2021):
    """Sample n image paths from the ok records.

    Parameters:
    -----------
    records    ... list of ImageRecord
    assignment ... ClusterAssignment (needed for stratified-cluster only)
    n          ... sample size, at most the number of ok records
    strategy   ... one of STRATEGIES
    seed       ... seed of the draw

    Returns:
    --------
    list of paths, without duplicates, in draw order
    """

    if strategy not in STRATEGIES:
        raise UsageError('unknown sampling strategy %r; choose from %s' % (strategy, ', '.join(STRATEGIES)))

    ok = sorted((r for r in records if r.ok), key=lambda r: r.path)
    if n < 0 or n > len(ok):
        logger.error('ERROR: cannot sample %d images from %d analysable images.', n, len(ok))
        raise SampleTooLarge('cannot sample %d images from %d analysable images' % (n, len(ok)))

    rng = np.random.default_rng(seed)

    if strategy == 'uniform':
        picks = rng.choice(len(ok), size=n, replace=False)
        return [ok[i].path for i in picks]

    if strategy == 'flagged-only':
        pool = [r for r in ok if (r.skin is not None and r.skin.flagged) or r.symbolFlagged]
        if not pool:
            logger.warning('no flagged images to sample from')
            return []
        if n > len(pool):
            logger.warning('only %d flagged images; sampling all of them', len(pool))
            n = len(pool)
        picks = rng.choice(len(pool), size=n, replace=False)
        return [pool[i].path for i in picks]

    if assignment is None:
        raise UsageError('stratified-cluster sampling needs a cluster assignment')

    ok_paths = {r.path for r in ok}
    members = [[p for p in assignment.members(gid) if p in ok_paths] for gid in range(assignment.g)]
    sizes = [len(assignment.members(gid)) for gid in range(assignment.g)]
    available = [len(m) for m in members]
    quotas = stratifiedQuotas(sizes, n, available)

    sample = []
    for group, quota in zip(members, quotas):
        if quota == 0:
            continue
        picks = rng.choice(len(group), size=int(quota), replace=False)
        sample.extend(group[i] for i in picks)

    if len(sample) < n:
        logger.warning('clusters cover only %d of the %d requested images', len(sample), n)
    return sample