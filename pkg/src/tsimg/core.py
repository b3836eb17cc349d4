"""Core data types, min-max rescaling, and piecewise aggregate approximation.

Everything downstream (field encoders, reconstruction, imputation,
classification) builds on the types defined here. All operations are pure
functions of their inputs and safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ConstantSeriesError, InvalidSegmentsError, KindMismatchError


class RescaleMode(Enum):
    """Target interval of min-max rescaling."""

    UNIT = "unit"          # [0, 1]
    SYMMETRIC = "symmetric"  # [-1, 1]

    @property
    def bounds(self) -> tuple[float, float]:
        return (0.0, 1.0) if self is RescaleMode.UNIT else (-1.0, 1.0)


class FieldKind(Enum):
    """Which field a square matrix encodes."""

    GASF = "gasf"  # angular summation field, cos(phi_i + phi_j)
    GADF = "gadf"  # angular difference field, sin(phi_i - phi_j)
    MTF = "mtf"    # Markov transition field, bin-to-bin probabilities


def _as_float_array(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-D sequence, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """A univariate series of real observations with an optional class label."""

    values: np.ndarray
    label: int | None = None

    def __post_init__(self):
        arr = _as_float_array(self.values)
        if not np.all(np.isfinite(arr)):
            raise ValueError("time series values must be finite")
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ScaledSeries:
    """A rescaled series together with its target interval and source bounds.

    `origin` keeps the (min, max) of the source series so callers can map
    back to raw units; it is None for series that were never rescaled from
    raw data (e.g. constructed directly in tests).
    """

    values: np.ndarray
    mode: RescaleMode
    origin: tuple[float, float] | None = None

    _BOUNDS_TOL = 1e-12

    def __post_init__(self):
        arr = _as_float_array(self.values)
        if not np.all(np.isfinite(arr)):
            raise ValueError("scaled values must be finite")
        lo, hi = self.mode.bounds
        if arr.size and (arr.min() < lo - self._BOUNDS_TOL or arr.max() > hi + self._BOUNDS_TOL):
            raise ValueError(
                f"values outside {self.mode.value} bounds [{lo}, {hi}]: "
                f"range [{arr.min()}, {arr.max()}]"
            )
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return len(self.values)

    def to_raw(self) -> np.ndarray:
        """Map back to original units using the stored (min, max) provenance."""
        if self.origin is None:
            raise ValueError("no (min, max) provenance recorded for this series")
        lo, hi = self.origin
        if self.mode is RescaleMode.UNIT:
            return self.values * (hi - lo) + lo
        # symmetric: v = ((x - hi) + (x - lo)) / (hi - lo)  =>  x = (v*(hi-lo) + hi + lo) / 2
        return (self.values * (hi - lo) + hi + lo) / 2.0


@dataclass(frozen=True)
class PaaConfig:
    """Target segment count for piecewise aggregate approximation."""

    segments: int


@dataclass(frozen=True)
class FieldMatrix:
    """A square field image plus the metadata needed to interpret its cells.

    Construction validates the per-kind structural invariants: GASF is
    symmetric with cells in [-1, 1], GADF is antisymmetric with a zero main
    diagonal, MTF cells are probabilities in [0, 1].
    """

    kind: FieldKind
    cells: np.ndarray
    rescale_mode: RescaleMode | None = None

    _TOL = 1e-9

    def __post_init__(self):
        arr = np.asarray(self.cells, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise KindMismatchError(f"field matrix must be square, got shape {arr.shape}")
        object.__setattr__(self, "cells", arr)
        if self.kind in (FieldKind.GASF, FieldKind.GADF):
            if self.rescale_mode is None:
                raise KindMismatchError(f"{self.kind.value} requires a rescale mode tag")
            if arr.size and (arr.min() < -1 - self._TOL or arr.max() > 1 + self._TOL):
                raise KindMismatchError(f"{self.kind.value} cells outside [-1, 1]")
            if self.kind is FieldKind.GASF:
                if not np.allclose(arr, arr.T, atol=self._TOL, rtol=0):
                    raise KindMismatchError("GASF cells are not symmetric")
            else:
                if not np.allclose(arr, -arr.T, atol=self._TOL, rtol=0):
                    raise KindMismatchError("GADF cells are not antisymmetric")
                if arr.size and np.abs(np.diagonal(arr)).max() > self._TOL:
                    raise KindMismatchError("GADF main diagonal is not zero")
        else:
            if arr.size and (arr.min() < -self._TOL or arr.max() > 1 + self._TOL):
                raise KindMismatchError("MTF cells outside [0, 1]")

    @property
    def size(self) -> int:
        return self.cells.shape[0]


def rescale(series: TimeSeries | np.ndarray, mode: RescaleMode) -> ScaledSeries:
    """Min-max rescale a series into [0, 1] (unit) or [-1, 1] (symmetric).

    Unit mode maps x to (x - min) / (max - min); symmetric mode maps x to
    ((x - max) + (x - min)) / (max - min). Both are affine and
    order-preserving, and both are undefined for constant series.

    Raises:
        ConstantSeriesError: if max(X) == min(X).
    """
    values = series.values if isinstance(series, TimeSeries) else _as_float_array(series)
    lo = float(values.min())
    hi = float(values.max())
    if hi == lo:
        raise ConstantSeriesError(f"cannot rescale a constant series (all values == {lo})")
    return rescale_with_bounds(values, (lo, hi), mode)


def rescale_with_bounds(
    values: np.ndarray, bounds: tuple[float, float], mode: RescaleMode
) -> ScaledSeries:
    """Rescale with externally supplied (min, max) bounds.

    Used when a corrupted series must be mapped with the bounds of its clean
    counterpart so that untouched points land on identical scaled values.
    Results are clamped to the mode's interval: a corrupted zero can fall
    outside the clean series' range.
    """
    values = _as_float_array(values)
    lo, hi = float(bounds[0]), float(bounds[1])
    if hi <= lo:
        raise ConstantSeriesError(f"degenerate rescale bounds ({lo}, {hi})")
    if mode is RescaleMode.UNIT:
        scaled = (values - lo) / (hi - lo)
    elif mode is RescaleMode.SYMMETRIC:
        scaled = ((values - hi) + (values - lo)) / (hi - lo)
    else:
        raise ValueError(f"unknown rescale mode: {mode!r}")
    b_lo, b_hi = mode.bounds
    return ScaledSeries(np.clip(scaled, b_lo, b_hi), mode, origin=(lo, hi))


def paa(values, config: PaaConfig) -> np.ndarray:
    """Shrink a series to `config.segments` adjacent, non-overlapping means.

    Segment b (0-based) covers indices [floor(b*n/S), floor((b+1)*n/S)), so
    the segments partition [0, n) exactly even when S does not divide n.
    Requesting S == n returns the values unchanged.

    Raises:
        InvalidSegmentsError: if segments < 1 or segments > n.
    """
    values = _as_float_array(values)
    n = len(values)
    num_segments = config.segments
    if num_segments < 1 or num_segments > n:
        raise InvalidSegmentsError(f"segments must be in [1, {n}], got {num_segments}")
    if num_segments == n:
        return values.copy()
    edges = (np.arange(num_segments + 1) * n) // num_segments
    sums = np.add.reduceat(values, edges[:-1])
    counts = np.diff(edges)
    return sums / counts
