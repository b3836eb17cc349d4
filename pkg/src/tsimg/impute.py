"""Salt-and-pepper corruption, a single-hidden-layer denoising autoencoder,
and the two imputation pipelines (raw series vs summation-field images).

The autoencoder is deliberately plain: sigmoid hidden layer, linear output
layer (field targets span [-1, 1], outside sigmoid's range), untied weights,
squared-error loss (summed over components, averaged over examples)
minimized by batch gradient descent over mini-batches taken in fixed
dataset order. Training stops once the epoch loss changes by less than a
threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import RescaleMode, ScaledSeries, TimeSeries, rescale, rescale_with_bounds
from .errors import (
    DimMismatchError,
    DivergenceError,
    EmptyMaskError,
    RateOutOfRangeError,
)
from .gaf import gasf
from .reconstruct import inverse_gasf_diagonal

DEFAULT_HIDDEN = 500
DEFAULT_NOISE_RATE = 0.2
GASF_TOLERANCE = 1e-3
RAW_TOLERANCE = 1e-5

# sub-stream tags for deriving independent generators from one experiment seed
_STREAM_TRAIN_CORRUPT = 0
_STREAM_INIT = 1
_STREAM_TEST_CORRUPT = 2


def _sub_rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, stream])))


@dataclass(frozen=True)
class CorruptionSpec:
    """Fraction of points to zero out and the seed choosing them."""

    rate: float = DEFAULT_NOISE_RATE
    seed: int = 0


@dataclass
class DaModel:
    """Single-hidden-layer denoising autoencoder parameters."""

    encoder_weights: np.ndarray  # (hidden_dim, input_dim)
    encoder_bias: np.ndarray     # (hidden_dim,)
    decoder_weights: np.ndarray  # (input_dim, hidden_dim)
    decoder_bias: np.ndarray     # (input_dim,)

    @property
    def input_dim(self) -> int:
        return self.encoder_weights.shape[1]

    @property
    def hidden_dim(self) -> int:
        return self.encoder_weights.shape[0]


@dataclass(frozen=True)
class TrainConfig:
    batch_size: int = 20
    tolerance: float = GASF_TOLERANCE
    learning_rate: float = 0.1
    max_epochs: int = 5000
    seed: int = 0

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be > 0")


@dataclass(frozen=True)
class RunScores:
    full_mse: float
    imputation_mse: float


@dataclass(frozen=True)
class ImputationReport:
    """Average and per-run MSEs of an imputation experiment."""

    pipeline: str
    full_mse: float
    imputation_mse: float
    runs: list[RunScores] = field(default_factory=list)


def _num_corrupt(rate: float, n: int) -> int:
    if not 0.0 < rate < 1.0:
        raise RateOutOfRangeError(f"corruption rate must be in (0, 1), got {rate}")
    count = int(math.floor(rate * n + 0.5))  # round half up
    if count < 1:
        raise RateOutOfRangeError(f"rate {rate} on length {n} corrupts no points")
    return count


def corrupt_with_rng(values: np.ndarray, rate: float, rng: np.random.Generator):
    """Zero out round(rate*n) distinct points chosen by `rng`."""
    n = len(values)
    count = _num_corrupt(rate, n)
    mask = np.sort(rng.choice(n, size=count, replace=False))
    corrupted = np.array(values, dtype=np.float64)
    corrupted[mask] = 0.0
    return corrupted, mask


def corrupt(series: TimeSeries | ScaledSeries, spec: CorruptionSpec):
    """Apply seeded salt-and-pepper corruption to a series.

    Returns a (corrupted, mask) pair where the corrupted series has the same
    type as the input and mask holds the sorted zeroed indices. The same
    seed always yields the same mask.

    Raises:
        RateOutOfRangeError: if rate is outside (0, 1) or corrupts no points.
    """
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    corrupted, mask = corrupt_with_rng(series.values, spec.rate, rng)
    if isinstance(series, TimeSeries):
        return TimeSeries(corrupted, label=series.label), mask
    return ScaledSeries(corrupted, series.mode, origin=series.origin), mask


def sigmoid(z: np.ndarray) -> np.ndarray:
    # split by sign to avoid overflow in exp
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def da_init(input_dim: int, hidden_dim: int = DEFAULT_HIDDEN, seed: int = 0) -> DaModel:
    """Seeded uniform init: weights in +-4*sqrt(6/(in+hidden)), zero biases."""
    if input_dim < 1 or hidden_dim < 1:
        raise ValueError("dimensions must be >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    limit = 4.0 * math.sqrt(6.0 / (input_dim + hidden_dim))
    return DaModel(
        encoder_weights=rng.uniform(-limit, limit, size=(hidden_dim, input_dim)),
        encoder_bias=np.zeros(hidden_dim),
        decoder_weights=rng.uniform(-limit, limit, size=(input_dim, hidden_dim)),
        decoder_bias=np.zeros(input_dim),
    )


def da_forward(model: DaModel, inputs: np.ndarray) -> np.ndarray:
    """Forward pass: decoder(sigmoid(encoder(x))). Accepts a vector or a
    (batch, input_dim) matrix and returns the same shape.

    Raises:
        DimMismatchError: if the trailing dimension is not the model's.
    """
    inputs = np.asarray(inputs, dtype=np.float64)
    single = inputs.ndim == 1
    batch = inputs[None, :] if single else inputs
    if batch.ndim != 2 or batch.shape[1] != model.input_dim:
        raise DimMismatchError(
            f"input dim {inputs.shape[-1]} != model input dim {model.input_dim}"
        )
    hidden = sigmoid(batch @ model.encoder_weights.T + model.encoder_bias)
    out = hidden @ model.decoder_weights.T + model.decoder_bias
    return out[0] if single else out


def da_loss(model: DaModel, inputs: np.ndarray, targets: np.ndarray) -> float:
    """Reconstruction loss: squared error summed over the components of each
    pair, then averaged over the pairs."""
    pred = da_forward(model, inputs)
    diff = np.atleast_2d(pred - np.asarray(targets, dtype=np.float64))
    return float(np.einsum("ij,ij->", diff, diff) / diff.shape[0])


def _da_gradients(model: DaModel, batch_in: np.ndarray, batch_target: np.ndarray):
    """Analytic gradients of the batch loss w.r.t. all four parameter blocks."""
    b = batch_in.shape[0]
    hidden = sigmoid(batch_in @ model.encoder_weights.T + model.encoder_bias)
    pred = hidden @ model.decoder_weights.T + model.decoder_bias
    d_pred = 2.0 * (pred - batch_target) / b
    grad_dec_w = d_pred.T @ hidden
    grad_dec_b = d_pred.sum(axis=0)
    d_hidden = (d_pred @ model.decoder_weights) * hidden * (1.0 - hidden)
    grad_enc_w = d_hidden.T @ batch_in
    grad_enc_b = d_hidden.sum(axis=0)
    return grad_enc_w, grad_enc_b, grad_dec_w, grad_dec_b


def da_train(
    model: DaModel,
    inputs,
    targets,
    config: TrainConfig,
) -> tuple[DaModel, list[float]]:
    """Train by batch gradient descent until the epoch loss settles.

    Mini-batches are consecutive slices of the dataset in its given order
    (no shuffling), so training is fully deterministic. After each epoch the
    loss over the whole training set (`da_loss`) is recorded; training stops
    when it changes by less than `config.tolerance` between consecutive
    epochs, or at `config.max_epochs`. Returns the trained model and the
    per-epoch losses.

    Raises:
        DimMismatchError: on inconsistent input/target shapes.
        DivergenceError: if the loss becomes non-finite.
    """
    inputs = np.atleast_2d(np.asarray(inputs, dtype=np.float64))
    targets = np.atleast_2d(np.asarray(targets, dtype=np.float64))
    if inputs.shape != targets.shape:
        raise DimMismatchError(f"inputs {inputs.shape} vs targets {targets.shape}")
    if inputs.shape[1] != model.input_dim:
        raise DimMismatchError(
            f"data dim {inputs.shape[1]} != model input dim {model.input_dim}"
        )
    n = inputs.shape[0]
    if n < 1:
        raise ValueError("need at least one training pair")

    model = DaModel(
        encoder_weights=model.encoder_weights.copy(),
        encoder_bias=model.encoder_bias.copy(),
        decoder_weights=model.decoder_weights.copy(),
        decoder_bias=model.decoder_bias.copy(),
    )
    lr = config.learning_rate
    history: list[float] = []
    starts = range(0, n, config.batch_size)
    for _ in range(config.max_epochs):
        for lo in starts:
            batch_in = inputs[lo : lo + config.batch_size]
            batch_target = targets[lo : lo + config.batch_size]
            g_ew, g_eb, g_dw, g_db = _da_gradients(model, batch_in, batch_target)
            model.encoder_weights -= lr * g_ew
            model.encoder_bias -= lr * g_eb
            model.decoder_weights -= lr * g_dw
            model.decoder_bias -= lr * g_db
        mse = da_loss(model, inputs, targets)
        if not math.isfinite(mse):
            raise DivergenceError(
                f"training loss became non-finite after epoch {len(history) + 1}"
            )
        history.append(mse)
        if len(history) >= 2 and abs(history[-1] - history[-2]) < config.tolerance:
            break
    return model, history


def _unit_with_clean_bounds(values: np.ndarray, bounds: tuple[float, float]) -> ScaledSeries:
    return rescale_with_bounds(values, bounds, RescaleMode.UNIT)


def build_training_pairs_gasf(series_list: list[TimeSeries], spec: CorruptionSpec):
    """Corrupt raw series, encode both versions as full-resolution unit-mode
    summation fields, and return (broken, clean) flattened image pairs.

    Corruption happens in raw space; the broken series is rescaled with the
    clean series' (min, max) so untouched points land on identical scaled
    values. No smoothing is applied: the images stay n x n so the inverse
    map recovers a series of the original length.
    """
    rng = _sub_rng(spec.seed, _STREAM_TRAIN_CORRUPT)
    inputs, targets = [], []
    for series in series_list:
        clean = rescale(series, RescaleMode.UNIT)
        broken_values, _ = corrupt_with_rng(series.values, spec.rate, rng)
        broken = _unit_with_clean_bounds(broken_values, clean.origin)
        targets.append(gasf(clean).cells.ravel())
        inputs.append(gasf(broken).cells.ravel())
    return np.array(inputs), np.array(targets)


def build_training_pairs_raw(series_list: list[TimeSeries], spec: CorruptionSpec):
    """Corrupt raw series and return (broken, clean) unit-rescaled pairs."""
    rng = _sub_rng(spec.seed, _STREAM_TRAIN_CORRUPT)
    inputs, targets = [], []
    for series in series_list:
        clean = rescale(series, RescaleMode.UNIT)
        broken_values, _ = corrupt_with_rng(series.values, spec.rate, rng)
        broken = _unit_with_clean_bounds(broken_values, clean.origin)
        targets.append(clean.values)
        inputs.append(broken.values)
    return np.array(inputs), np.array(targets)


def impute_via_gasf(
    model: DaModel, corrupted: TimeSeries, clean_bounds: tuple[float, float]
) -> ScaledSeries:
    """Recover a series by denoising its broken summation-field image.

    The corrupted series is rescaled with the clean bounds, encoded,
    forward-passed through the model, clamped to [-1, 1], symmetrized
    (the model does not know the symmetry constraint), and inverted from
    the main diagonal.

    Raises:
        DimMismatchError: if the model was trained on a different image size.
    """
    n = len(corrupted)
    if model.input_dim != n * n:
        raise DimMismatchError(
            f"model expects {model.input_dim} inputs, {n}x{n} image has {n * n}"
        )
    broken = _unit_with_clean_bounds(corrupted.values, clean_bounds)
    recovered = da_forward(model, gasf(broken).cells.ravel()).reshape(n, n)
    recovered = np.clip(recovered, -1.0, 1.0)
    recovered = (recovered + recovered.T) / 2.0
    restored = inverse_gasf_diagonal(np.diagonal(recovered))
    return ScaledSeries(restored.values, RescaleMode.UNIT, origin=clean_bounds)


def impute_via_raw(model: DaModel, corrupted: ScaledSeries) -> ScaledSeries:
    """Recover a series by denoising it directly; output clamped to [0, 1].

    Raises:
        DimMismatchError: if the model dimension is not the series length.
    """
    if model.input_dim != len(corrupted):
        raise DimMismatchError(
            f"model expects {model.input_dim} inputs, series has {len(corrupted)}"
        )
    recovered = np.clip(da_forward(model, corrupted.values), 0.0, 1.0)
    return ScaledSeries(recovered, RescaleMode.UNIT, origin=corrupted.origin)


def score(pred: ScaledSeries, truth: ScaledSeries, mask) -> RunScores:
    """Full MSE over all points and imputation MSE over the masked ones.

    Raises:
        DimMismatchError: on length mismatch.
        EmptyMaskError: if no indices are masked.
    """
    mask = np.asarray(mask, dtype=np.intp)
    if len(pred) != len(truth):
        raise DimMismatchError(f"prediction length {len(pred)} != truth length {len(truth)}")
    if mask.size == 0:
        raise EmptyMaskError("imputation MSE needs at least one masked index")
    sq = (pred.values - truth.values) ** 2
    return RunScores(full_mse=float(sq.mean()), imputation_mse=float(sq[mask].mean()))


def _evaluate_run(model: DaModel, pipeline: str, test: list[TimeSeries], rate: float,
                  rng: np.random.Generator) -> RunScores:
    fulls, imps = [], []
    for series in test:
        clean = rescale(series, RescaleMode.UNIT)
        broken_values, mask = corrupt_with_rng(series.values, rate, rng)
        if pipeline == "gasf":
            pred = impute_via_gasf(model, TimeSeries(broken_values), clean.origin)
        else:
            broken = _unit_with_clean_bounds(broken_values, clean.origin)
            pred = impute_via_raw(model, broken)
        run = score(pred, clean, mask)
        fulls.append(run.full_mse)
        imps.append(run.imputation_mse)
    return RunScores(full_mse=float(np.mean(fulls)), imputation_mse=float(np.mean(imps)))


def evaluate_imputation(
    model: DaModel,
    test: list[TimeSeries],
    pipeline: str,
    rate: float = DEFAULT_NOISE_RATE,
    runs: int = 10,
    seed: int = 0,
) -> ImputationReport:
    """Score a fixed trained model over `runs` corruption draws.

    Run k corrupts the test series with seed + k, so the protocol is
    reproducible from a single seed.
    """
    if pipeline not in ("gasf", "raw"):
        raise ValueError(f"pipeline must be 'gasf' or 'raw', got {pipeline!r}")
    per_run = [
        _evaluate_run(model, pipeline, test, rate, _sub_rng(seed + k, _STREAM_TEST_CORRUPT))
        for k in range(runs)
    ]
    return ImputationReport(
        pipeline=pipeline,
        full_mse=float(np.mean([r.full_mse for r in per_run])),
        imputation_mse=float(np.mean([r.imputation_mse for r in per_run])),
        runs=per_run,
    )


def train_da_pipeline(
    train: list[TimeSeries],
    pipeline: str,
    rate: float = DEFAULT_NOISE_RATE,
    hidden_dim: int = DEFAULT_HIDDEN,
    config: TrainConfig | None = None,
    seed: int = 0,
) -> tuple[DaModel, list[float]]:
    """Build training pairs for one pipeline and train a fresh model."""
    if pipeline == "gasf":
        inputs, targets = build_training_pairs_gasf(train, CorruptionSpec(rate, seed))
        tolerance = GASF_TOLERANCE
    elif pipeline == "raw":
        inputs, targets = build_training_pairs_raw(train, CorruptionSpec(rate, seed))
        tolerance = RAW_TOLERANCE
    else:
        raise ValueError(f"pipeline must be 'gasf' or 'raw', got {pipeline!r}")
    if config is None:
        config = TrainConfig(tolerance=tolerance, seed=seed)
    init_seed = int(_sub_rng(seed, _STREAM_INIT).integers(2**31))
    model = da_init(inputs.shape[1], hidden_dim, seed=init_seed)
    return da_train(model, inputs, targets, config)


def run_imputation_experiment(
    train: list[TimeSeries],
    test: list[TimeSeries],
    pipeline: str,
    rate: float = DEFAULT_NOISE_RATE,
    hidden_dim: int = DEFAULT_HIDDEN,
    runs: int = 10,
    seed: int = 0,
    config: TrainConfig | None = None,
) -> ImputationReport:
    """The full repeated protocol: retrain and rescore `runs` times.

    Run k derives every random choice (training corruption, weight init,
    test corruption) from seed + k, isolating runs from each other while
    keeping the whole experiment reproducible.
    """
    per_run = []
    for k in range(runs):
        run_seed = seed + k
        model, _ = train_da_pipeline(train, pipeline, rate, hidden_dim, config, seed=run_seed)
        per_run.append(
            _evaluate_run(model, pipeline, test, rate, _sub_rng(run_seed, _STREAM_TEST_CORRUPT))
        )
    return ImputationReport(
        pipeline=pipeline,
        full_mse=float(np.mean([r.full_mse for r in per_run])),
        imputation_mse=float(np.mean([r.imputation_mse for r in per_run])),
        runs=per_run,
    )
