"""Compound three-channel images, a deterministic linear classifier, and the
grid model-selection protocol with its tie-breaking rules.

Each series becomes a (summation field, difference field, transition field)
image triple of one size, flattened channel-by-channel into a feature
vector. A one-vs-rest linear classifier with hinge loss is trained by
deterministic subgradient descent; the penalty C is chosen by stratified
5-fold cross validation, and (size, quantile) pairs are searched over a
grid with ties resolved toward the larger size, then larger quantile count,
then larger C.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import FieldKind, FieldMatrix, PaaConfig, RescaleMode, TimeSeries
from .datasets import Dataset
from .errors import (
    EmptyGridError,
    EmptyTestSetError,
    LengthMismatchError,
    SingleClassError,
    TooFewSamplesError,
)
from .gaf import encode_gaf
from .mtf import encode_mtf

DEFAULT_SIZES = (16, 24, 32, 40, 48)
DEFAULT_QUANTILES = (8, 16, 32, 64)
DEFAULT_PENALTIES = tuple(10.0 ** k for k in range(-4, 5))

_EPOCHS = 40  # full passes of the subgradient loop per binary classifier


@dataclass(frozen=True)
class CompoundImage:
    """Three aligned same-size channels, fixed order (GASF, GADF, MTF).

    `mtf_padded` records whether the transition-field channel was grown to
    the common size by replicating its last row/column (the blur step can
    land one patch short when the patch width does not divide the length).
    """

    channels: tuple[FieldMatrix, FieldMatrix, FieldMatrix]
    mtf_padded: bool = False

    @property
    def size(self) -> int:
        return self.channels[0].size

    def flatten(self) -> np.ndarray:
        """Row-major cells, channel by channel. The order is part of the
        feature-vector contract: permuting it changes classifier input."""
        return np.concatenate([ch.cells.ravel() for ch in self.channels])


@dataclass(frozen=True)
class SelectionGrid:
    sizes: tuple[int, ...] = DEFAULT_SIZES
    quantiles: tuple[int, ...] = DEFAULT_QUANTILES
    penalties: tuple[float, ...] = DEFAULT_PENALTIES


@dataclass(frozen=True)
class LinearModel:
    """One-vs-rest linear scorer; weights include the bias column."""

    classes: np.ndarray           # (K,) sorted class ids
    weights: np.ndarray           # (K, D + 1)
    penalty: float


@dataclass(frozen=True)
class SelectionResult:
    size: int
    quantiles: int
    penalty: float
    cv_error: float
    mode: RescaleMode
    model: LinearModel


def compound_image(
    series: TimeSeries,
    size: int,
    quantiles: int,
    mode: RescaleMode = RescaleMode.SYMMETRIC,
) -> CompoundImage:
    """Encode one series as aligned GASF / GADF / MTF channels of one size.

    The field channels are smoothed to `size` with PAA; the transition
    channel is blurred toward `size` and, in the ragged case where the blur
    comes up short, padded by replicating its last row and column.
    """
    gasf_ch = encode_gaf(series, mode, PaaConfig(size), FieldKind.GASF)
    gadf_ch = encode_gaf(series, mode, PaaConfig(size), FieldKind.GADF)
    mtf_ch = encode_mtf(series, quantiles, size)
    padded = mtf_ch.size != size
    if padded:
        grow = size - mtf_ch.size
        cells = np.pad(mtf_ch.cells, ((0, grow), (0, grow)), mode="edge")
        mtf_ch = FieldMatrix(FieldKind.MTF, cells)
    return CompoundImage(channels=(gasf_ch, gadf_ch, mtf_ch), mtf_padded=padded)


def compound_features(
    series_list: list[TimeSeries],
    size: int,
    quantiles: int,
    mode: RescaleMode = RescaleMode.SYMMETRIC,
) -> np.ndarray:
    """Stack flattened compound images into an (N, 3*size^2) feature matrix."""
    return np.array([compound_image(s, size, quantiles, mode).flatten() for s in series_list])


def _augment(features: np.ndarray) -> np.ndarray:
    return np.hstack([features, np.ones((features.shape[0], 1))])


def fit_linear(features, labels, penalty: float, seed: int = 0) -> LinearModel:
    """Train one-vs-rest hinge-loss linear classifiers.

    Minimizes lam/2 ||w||^2 + mean_i hinge(y_i, w.x_i) with
    lam = 1 / (penalty * N), by cycling deterministically through the
    samples in dataset order with step size 1/(lam * t) and a norm
    projection. Init is a small seeded uniform draw, so identical inputs
    give identical models.

    Raises:
        SingleClassError: if fewer than two classes are present.
    """
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels)
    classes = np.unique(labels)
    if classes.size < 2:
        raise SingleClassError(f"need at least 2 classes, got {classes.size}")
    n = features.shape[0]
    x = _augment(features)
    lam = 1.0 / (penalty * n)
    radius = 1.0 / np.sqrt(lam)
    rng = np.random.Generator(np.random.PCG64(seed))
    weights = rng.uniform(-1e-3, 1e-3, size=(classes.size, x.shape[1]))
    for k, cls in enumerate(classes):
        y = np.where(labels == cls, 1.0, -1.0)
        w = weights[k]
        t = 1
        for _ in range(_EPOCHS):
            for i in range(n):
                t += 1
                step = 1.0 / (lam * t)
                w *= 1.0 - 1.0 / t
                if y[i] * (w @ x[i]) < 1.0:
                    w += (step * y[i]) * x[i]
                norm = np.linalg.norm(w)
                if norm > radius:
                    w *= radius / norm
        weights[k] = w
    return LinearModel(classes=classes, weights=weights, penalty=penalty)


def predict(model: LinearModel, features) -> np.ndarray:
    """Argmax over per-class scores; score ties go to the lowest class id."""
    scores = _augment(np.asarray(features, dtype=np.float64)) @ model.weights.T
    return model.classes[np.argmax(scores, axis=1)]


def _error_rate(model: LinearModel, features: np.ndarray, labels: np.ndarray) -> float:
    return float(np.mean(predict(model, features) != labels))


def _stratified_folds(labels: np.ndarray, folds: int, seed: int) -> np.ndarray:
    """Deterministic per-class round-robin fold assignment."""
    rng = np.random.Generator(np.random.PCG64(seed))
    assignment = np.empty(len(labels), dtype=np.intp)
    next_fold = 0
    for cls in np.unique(labels):
        idx = np.flatnonzero(labels == cls)
        rng.shuffle(idx)
        for j, i in enumerate(idx):
            assignment[i] = (next_fold + j) % folds
        next_fold = (next_fold + len(idx)) % folds
    return assignment


def cv_select_c(
    features,
    labels,
    folds: int = 5,
    penalties: tuple[float, ...] = DEFAULT_PENALTIES,
    seed: int = 0,
) -> tuple[float, float]:
    """Pick the penalty with the lowest mean cross-validation error.

    Folds are stratified and deterministic per seed. Ties between penalties
    break toward the larger C.

    Raises:
        TooFewSamplesError: if there are fewer samples than folds.
    """
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels)
    if len(labels) < folds:
        raise TooFewSamplesError(f"{len(labels)} samples < {folds} folds")
    assignment = _stratified_folds(labels, folds, seed)
    best_c, best_err = None, None
    for c in sorted(penalties):
        fold_errors = []
        for f in range(folds):
            holdout = assignment == f
            model = fit_linear(features[~holdout], labels[~holdout], c, seed=seed)
            fold_errors.append(_error_rate(model, features[holdout], labels[holdout]))
        err = float(np.mean(fold_errors))
        if best_err is None or err <= best_err:  # <= so the larger C wins ties
            best_c, best_err = c, err
    return best_c, best_err


def model_select(
    train: Dataset,
    grid: SelectionGrid | None = None,
    seed: int = 0,
    mode: RescaleMode = RescaleMode.SYMMETRIC,
) -> SelectionResult:
    """Search the (size, quantile) grid with nested CV over the penalty.

    Grid points whose size or quantile count exceeds the series length are
    skipped. The combination with the lowest CV error wins; ties break
    toward larger size, then larger quantile count, then larger penalty.
    The returned model is refit on the full training set.

    Raises:
        EmptyGridError: if every grid combination was skipped.
    """
    if grid is None:
        grid = SelectionGrid()
    n = train.series_length
    labels = np.array([s.label for s in train.train])
    results = []  # (error, size, quantiles, penalty)
    for size in grid.sizes:
        if size > n:
            continue
        for quantiles in grid.quantiles:
            if quantiles > n:
                continue
            features = compound_features(train.train, size, quantiles, mode)
            c, err = cv_select_c(features, labels, 5, grid.penalties, seed)
            results.append((err, size, quantiles, c))
    if not results:
        raise EmptyGridError(f"no grid combination fits series length {n}")
    err, size, quantiles, c = min(results, key=lambda r: (r[0], -r[1], -r[2], -r[3]))
    features = compound_features(train.train, size, quantiles, mode)
    model = fit_linear(features, labels, c, seed=seed)
    return SelectionResult(
        size=size, quantiles=quantiles, penalty=c, cv_error=err, mode=mode, model=model
    )


def evaluate(
    model: LinearModel,
    test: Dataset,
    size: int,
    quantiles: int,
    mode: RescaleMode = RescaleMode.SYMMETRIC,
) -> float:
    """Misclassification rate of a trained model on a test set.

    Raises:
        EmptyTestSetError: if the test pool is empty.
    """
    if not test.test:
        raise EmptyTestSetError(f"dataset {test.name!r} has no test series")
    features = compound_features(test.test, size, quantiles, mode)
    labels = np.array([s.label for s in test.test])
    return _error_rate(model, features, labels)


def baseline_1nn(train: Dataset, test: Dataset) -> float:
    """1-nearest-neighbor error under Euclidean distance on raw values.

    Distance ties resolve to the earliest training index.

    Raises:
        LengthMismatchError: if train and test series lengths differ.
        EmptyTestSetError: if the test pool is empty.
    """
    if not test.test:
        raise EmptyTestSetError(f"dataset {test.name!r} has no test series")
    if train.series_length != test.series_length:
        raise LengthMismatchError(
            f"train length {train.series_length} != test length {test.series_length}"
        )
    train_x = np.array([s.values for s in train.train])
    train_y = np.array([s.label for s in train.train])
    test_x = np.array([s.values for s in test.test])
    test_y = np.array([s.label for s in test.test])
    dists = ((test_x[:, None, :] - train_x[None, :, :]) ** 2).sum(axis=2)
    nearest = np.argmin(dists, axis=1)  # first minimum = earliest index
    return float(np.mean(train_y[nearest] != test_y))
