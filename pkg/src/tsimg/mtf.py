"""Quantile discretization, Markov transition matrix, and the transition field.

The series is discretized into rank-based quantile bins, consecutive-step
transitions between bins are counted into a row-stochastic matrix, and the
field spreads those probabilities over every pair of time steps. A blurring
step shrinks the field to a manageable image size by averaging
non-overlapping patches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import FieldKind, FieldMatrix, TimeSeries
from .errors import InvalidBinCountError, InvalidTargetSizeError


@dataclass(frozen=True)
class QuantileBinning:
    """Per-time-step bin assignment into `num_bins` value-rank buckets."""

    num_bins: int
    assignment: np.ndarray  # int bin index in [0, num_bins) per time step

    def __len__(self) -> int:
        return len(self.assignment)


@dataclass(frozen=True)
class MarkovMatrix:
    """Row-stochastic bin-to-bin transition probabilities.

    rows[a, b] = P(next point in bin b | current point in bin a). Rows of
    bins with no observed outgoing transition are all-zero.
    """

    rows: np.ndarray

    @property
    def size(self) -> int:
        return self.rows.shape[0]


def quantile_bins(series: TimeSeries | np.ndarray, num_bins: int) -> QuantileBinning:
    """Assign each point to a quantile bin by value rank.

    Points are stable-sorted by value; sorted position p goes to bin
    floor(p * Q / n). Ties keep original order, so every bin receives
    floor(n/Q) or ceil(n/Q) points and no bin is empty for n >= Q.

    Raises:
        InvalidBinCountError: if num_bins < 2 or num_bins > n.
    """
    values = series.values if isinstance(series, TimeSeries) else np.asarray(series, dtype=np.float64)
    n = len(values)
    if num_bins < 2 or num_bins > n:
        raise InvalidBinCountError(f"bin count must be in [2, {n}], got {num_bins}")
    order = np.argsort(values, kind="stable")
    assignment = np.empty(n, dtype=np.intp)
    # sorted position p -> bin floor(p*Q/n); the min() guards the cap Q-1
    assignment[order] = np.minimum(num_bins - 1, (np.arange(n) * num_bins) // n)
    return QuantileBinning(num_bins=num_bins, assignment=assignment)


def markov_matrix(binning: QuantileBinning) -> MarkovMatrix:
    """Count first-order transitions along the time axis and row-normalize.

    Raises:
        ValueError: if the binning covers fewer than 2 time steps (no
            transition pairs exist).
    """
    if len(binning) < 2:
        raise ValueError("need at least 2 time steps to count transitions")
    num_bins = binning.num_bins
    src = binning.assignment[:-1]
    dst = binning.assignment[1:]
    counts = np.zeros((num_bins, num_bins), dtype=np.float64)
    np.add.at(counts, (src, dst), 1.0)
    row_sums = counts.sum(axis=1, keepdims=True)
    rows = np.divide(counts, row_sums, out=np.zeros_like(counts), where=row_sums > 0)
    return MarkovMatrix(rows=rows)


def mtf(binning: QuantileBinning, transitions: MarkovMatrix) -> FieldMatrix:
    """Spread transition probabilities over all time-step pairs.

    cells[i, j] is the probability of moving from the bin holding point i
    to the bin holding point j; the output is n x n for an n-step series.
    """
    if transitions.size != binning.num_bins:
        raise ValueError(
            f"transition matrix size {transitions.size} != bin count {binning.num_bins}"
        )
    a = binning.assignment
    cells = transitions.rows[np.ix_(a, a)]
    return FieldMatrix(FieldKind.MTF, cells)


def blur_patch_width(n: int, target_size: int) -> int:
    """Patch width m = ceil(n / target_size) used by `aggregate`."""
    return math.ceil(n / target_size)


def aggregate(field: FieldMatrix, target_size: int) -> FieldMatrix:
    """Shrink a transition field by averaging non-overlapping m x m patches.

    m = ceil(n / target_size). When m does not divide n the last patch row
    and column are ragged and are averaged over the cells they actually
    cover (no padding), so the output size is ceil(n / m), which can be
    smaller than the requested target.

    Raises:
        InvalidTargetSizeError: if target_size < 1 or target_size > n.
    """
    n = field.size
    if target_size < 1 or target_size > n:
        raise InvalidTargetSizeError(f"target size must be in [1, {n}], got {target_size}")
    m = blur_patch_width(n, target_size)
    if m == 1:
        return FieldMatrix(field.kind, field.cells.copy(), field.rescale_mode)
    out_size = math.ceil(n / m)
    edges = np.minimum(np.arange(out_size + 1) * m, n)
    # average rows into patches, then columns; ragged last patch uses its true count
    row_sums = np.add.reduceat(field.cells, edges[:-1], axis=0)
    patch_sums = np.add.reduceat(row_sums, edges[:-1], axis=1)
    counts = np.diff(edges)
    cells = patch_sums / np.outer(counts, counts)
    return FieldMatrix(field.kind, cells, field.rescale_mode)


def encode_mtf(series: TimeSeries | np.ndarray, num_bins: int, target_size: int | None = None) -> FieldMatrix:
    """Full pipeline: quantile bins, transition matrix, field, optional blur."""
    binning = quantile_bins(series, num_bins)
    field = mtf(binning, markov_matrix(binning))
    if target_size is not None and target_size != field.size:
        field = aggregate(field, target_size)
    return field
