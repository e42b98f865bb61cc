"""Weighted pool-adjacent-violators fit for binary labels.

Trials are assumed already ordered by ascending classifier score.  The fit
assigns each trial a value in [0, 1], nondecreasing along the sequence,
minimizing every weighted proper-scoring-rule objective simultaneously.
The solution is a partition into maximal blocks; each block's value is the
weighted proportion of its target count, m*v1 / (m*v1 + n*v2).

The algorithm is a single left-to-right pass keeping a stack of finished
blocks.  Each trial starts as its own block (value 1.0 for a target, 0.0
for a non-target); while the top of the stack has a value greater than or
equal to the new block's, the two merge: integer counts add exactly and
the value is recomputed from the merged counts.  Merging on equality, not
just on strict violation, is what makes the final block values strictly
increasing.  Values are compared as computed, with no epsilon: a spurious
merge of two pools with equal values is harmless, and near-ties land
within one rounding step of the exact solution either way.  Each trial is
pushed once and each merge pops one block, so the pass is O(T).
"""

from __future__ import annotations

from typing import Sequence

from .types import Block, BlockSolution, Label, WeightPair, as_weights, expand, pooled_value


def _pool_counts(
    ms: Sequence[int],
    ns: Sequence[int],
    v1: float,
    v2: float,
) -> tuple[list[int], list[int], list[int], list[int], list[float]]:
    """Stack pass over pre-counted items.

    ms[k] / ns[k] are the target / non-target counts of item k (an item is
    a single trial, or a group of trials pooled beforehand, e.g. score
    ties).  Returns parallel block arrays (start item, end item, m, n,
    value) with strictly increasing values.
    """
    starts: list[int] = []
    ends: list[int] = []
    bm: list[int] = []
    bn: list[int] = []
    vals: list[float] = []
    for k in range(len(ms)):
        m = ms[k]
        n = ns[k]
        a = m * v1
        val = a / (a + n * v2)
        start = k
        while vals and vals[-1] >= val:
            vals.pop()
            ends.pop()
            m += bm.pop()
            n += bn.pop()
            start = starts.pop()
            a = m * v1
            val = a / (a + n * v2)
        starts.append(start)
        ends.append(k)
        bm.append(m)
        bn.append(n)
        vals.append(val)
    return starts, ends, bm, bn, vals


def pav_fit(labels: Sequence[Label], weights: WeightPair | tuple[float, float]) -> BlockSolution:
    """Fit the monotone solution for a label sequence in score order.

    Args:
        labels: nonempty sequence of Label values, ascending-score order.
        weights: per-class trial weights (v1 targets, v2 non-targets).

    Returns:
        BlockSolution whose expansion is the optimal nondecreasing value
        sequence under every rule of the proper-scoring family at once.
    """
    w = as_weights(weights)
    flags = [lab is Label.TARGET for lab in labels]
    if not flags:
        raise ValueError("pav_fit needs at least one trial")
    ones = [not f for f in flags]
    starts, ends, bm, bn, vals = _pool_counts(flags, ones, w.v1, w.v2)
    blocks = tuple(
        Block(start=s, end=e, m=int(m), n=int(n), value=v)
        for s, e, m, n, v in zip(starts, ends, bm, bn, vals)
    )
    return BlockSolution(blocks=blocks, weights=w, total=len(flags))


def pav_posteriors(
    labels: Sequence[Label], weights: WeightPair | tuple[float, float]
) -> list[float]:
    """Per-trial fitted values of pav_fit, expanded."""
    return expand(pav_fit(labels, weights))


__all__ = ["pav_fit", "pav_posteriors", "pooled_value"]
