"""UCR-format parsing, seeded synthetic data, and dataset merging.

All randomness in this package flows through numpy's PCG64 generator seeded
explicitly, so synthetic datasets and corruption masks are reproducible
run-to-run for a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import PaaConfig, TimeSeries, paa
from .errors import (
    EmptyFileError,
    IoFailureError,
    LengthMismatchError,
    MalformedLineError,
    UnknownGeneratorError,
)


@dataclass(frozen=True)
class Dataset:
    """Labeled train/test series pools sharing one series length."""

    name: str
    train: list[TimeSeries]
    test: list[TimeSeries] = field(default_factory=list)

    def __post_init__(self):
        lengths = {len(s) for s in self.train} | {len(s) for s in self.test}
        if len(lengths) > 1:
            raise LengthMismatchError(f"dataset {self.name!r} mixes series lengths {sorted(lengths)}")
        for s in self.train + self.test:
            if s.label is None:
                raise ValueError(f"dataset {self.name!r} contains an unlabeled series")

    @property
    def series_length(self) -> int:
        pool = self.train or self.test
        return len(pool[0]) if pool else 0


def parse_ucr(path) -> list[TimeSeries]:
    """Parse a UCR-format file: one series per line, integer label first.

    The delimiter (comma or whitespace) is sniffed from the first nonempty
    line and assumed consistent within the file. Real-valued labels such as
    "1.0" are truncated to integers.

    Raises:
        IoFailureError: if the file cannot be read.
        EmptyFileError: if no nonempty lines exist.
        MalformedLineError: on a field-count mismatch with the first line or
            an unparseable number, reported with its line number.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise IoFailureError(f"cannot read {path}: {exc}") from exc

    series: list[TimeSeries] = []
    delimiter: str | None = None
    expected_fields: int | None = None
    for line_number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if delimiter is None:
            delimiter = "," if "," in line else None  # None -> whitespace split
        fields = [f for f in line.split(delimiter) if f.strip()]
        if expected_fields is None:
            if len(fields) < 2:
                raise MalformedLineError(path, line_number, "need a label and at least one value")
            expected_fields = len(fields)
        elif len(fields) != expected_fields:
            raise MalformedLineError(
                path, line_number, f"expected {expected_fields} fields, found {len(fields)}"
            )
        try:
            label = int(float(fields[0]))
            values = np.array([float(f) for f in fields[1:]], dtype=np.float64)
        except ValueError as exc:
            raise MalformedLineError(path, line_number, f"unparseable number: {exc}") from exc
        series.append(TimeSeries(values, label=label))

    if not series:
        raise EmptyFileError(f"{path} has no data lines")
    return series


def load_dataset(train_path, test_path=None, name: str | None = None) -> Dataset:
    """Build a Dataset from UCR train (and optionally test) files."""
    train = parse_ucr(train_path)
    test = parse_ucr(test_path) if test_path is not None else []
    if name is None:
        name = Path(train_path).stem
    return Dataset(name=name, train=train, test=test)


def _gen_sin2(rng: np.random.Generator, count: int, length: int, params: dict) -> list[TimeSeries]:
    """Two-class sinusoids differing in base frequency, with additive noise,
    a per-series DC offset, and optional per-series frequency jitter.

    The offset (uniform on [-offset, offset]) moves each series' raw level
    without changing its shape — min-max rescaling removes it again, so it
    exercises the rescale path without hurting separability. freq_jitter
    scales the class frequency by 2**uniform(-freq_jitter, freq_jitter); the
    default of 0 keeps the two classes cleanly apart.
    """
    freqs = (float(params.get("freq0", 2.0)), float(params.get("freq1", 4.0)))
    noise = float(params.get("noise", 0.15))
    offset = float(params.get("offset", 0.75))
    freq_jitter = float(params.get("freq_jitter", 0.0))
    t = np.arange(length) / length
    series = []
    for i in range(count):
        label = i % 2
        phase = rng.uniform(0.0, 2.0 * np.pi)
        level = rng.uniform(-offset, offset)
        freq = freqs[label] * 2.0 ** rng.uniform(-freq_jitter, freq_jitter)
        values = level + np.sin(2.0 * np.pi * freq * t + phase)
        values = values + noise * rng.standard_normal(length)
        series.append(TimeSeries(values, label=label))
    return series


def _gen_cbf(rng: np.random.Generator, count: int, length: int, params: dict) -> list[TimeSeries]:
    """Cylinder / bell / funnel piecewise patterns, three classes."""
    noise = float(params.get("noise", 1.0))
    series = []
    for i in range(count):
        label = i % 3
        start = int(rng.integers(length // 8, length // 4 + 1))
        width = int(rng.integers(length // 4, 3 * length // 4 + 1))
        end = min(start + width, length - 1)
        amplitude = 6.0 + rng.standard_normal()
        values = noise * rng.standard_normal(length)
        ramp = np.arange(start, end + 1) - start
        if label == 0:  # cylinder: flat plateau
            values[start : end + 1] += amplitude
        elif label == 1:  # bell: rising ramp
            values[start : end + 1] += amplitude * ramp / (end - start + 1)
        else:  # funnel: falling ramp
            values[start : end + 1] += amplitude * (1.0 - ramp / (end - start + 1))
        series.append(TimeSeries(values, label=label))
    return series


_GENERATORS = {"sin2": _gen_sin2, "cbf": _gen_cbf}


def gen_synthetic(family: str, count: int, length: int, seed: int, **params) -> Dataset:
    """Generate a seeded synthetic dataset (all series in the train pool).

    Families: "sin2" (two-class sinusoids differing in frequency; params
    freq0, freq1, noise, offset, freq_jitter) and "cbf" (cylinder/bell/
    funnel, three classes; param noise). Labels cycle through the classes so
    counts stay balanced. Identical seeds give bitwise-identical datasets.

    Raises:
        UnknownGeneratorError: for an unrecognized family name.
        ValueError: if count < 2 or length < 8.
    """
    if family not in _GENERATORS:
        raise UnknownGeneratorError(
            f"unknown family {family!r}; available: {sorted(_GENERATORS)}"
        )
    if count < 2:
        raise ValueError(f"count must be >= 2, got {count}")
    if length < 8:
        raise ValueError(f"length must be >= 8, got {length}")
    rng = np.random.Generator(np.random.PCG64(seed))
    train = _GENERATORS[family](rng, count, length, params)
    return Dataset(name=f"{family}-n{count}-l{length}-s{seed}", train=train)


def merge_datasets(parts: list[Dataset]) -> Dataset:
    """Concatenate datasets, re-namespacing labels so sources never collide.

    Each part's sorted unique labels are mapped onto a dense range offset by
    the class counts of earlier parts.

    Raises:
        LengthMismatchError: if the parts disagree on series length (PAA the
            parts to a common length first).
    """
    if not parts:
        raise ValueError("nothing to merge")
    lengths = {p.series_length for p in parts}
    if len(lengths) > 1:
        raise LengthMismatchError(f"cannot merge series lengths {sorted(lengths)}")
    train: list[TimeSeries] = []
    test: list[TimeSeries] = []
    offset = 0
    for part in parts:
        labels = sorted({s.label for s in part.train + part.test})
        remap = {old: offset + i for i, old in enumerate(labels)}
        train.extend(TimeSeries(s.values, label=remap[s.label]) for s in part.train)
        test.extend(TimeSeries(s.values, label=remap[s.label]) for s in part.test)
        offset += len(labels)
    return Dataset(name="+".join(p.name for p in parts), train=train, test=test)


def paa_to_length(dataset: Dataset, length: int) -> Dataset:
    """Shrink every series to a common length via PAA (for merging)."""
    config = PaaConfig(length)
    shrink = lambda s: TimeSeries(paa(s.values, config), label=s.label)
    return Dataset(
        name=f"{dataset.name}@{length}",
        train=[shrink(s) for s in dataset.train],
        test=[shrink(s) for s in dataset.test],
    )
