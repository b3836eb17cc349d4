"""Bit-exact text persistence for field matrices and autoencoder models,
PNG rendering, and a writer for the label-first series format.

All numeric text uses 17 significant digits, which is enough to round-trip
any finite double exactly, so golden files stay stable across platforms
without a binary format.
"""

from __future__ import annotations

import numpy as np
from PIL import Image

from .classify import CompoundImage
from .core import FieldKind, FieldMatrix, RescaleMode, TimeSeries
from .errors import (
    BadMagicError,
    DimMismatchError,
    HeaderMismatchError,
    IoFailureError,
    KindMismatchError,
    MalformedLineError,
)
from .impute import DaModel

_MODEL_MAGIC = "TSIMG-DA 1"

# Pixel domains per field kind; values map affinely onto [0, 255].
_PIXEL_DOMAIN = {
    FieldKind.GASF: (-1.0, 1.0),
    FieldKind.GADF: (-1.0, 1.0),
    FieldKind.MTF: (0.0, 1.0),
}


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def write_matrix_csv(field: FieldMatrix, path) -> None:
    """Write a field matrix as a one-line header plus comma-separated rows."""
    header = f"# kind={field.kind.value} size={field.size}"
    if field.rescale_mode is not None:
        header += f" mode={field.rescale_mode.value}"
    try:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(header + "\n")
            for row in field.cells:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
    except OSError as exc:
        raise IoFailureError(f"cannot write {path}: {exc}") from exc


def read_matrix_csv(path) -> FieldMatrix:
    """Read a matrix written by :func:`write_matrix_csv`, bit-exactly.

    Raises:
        IoFailureError: unreadable path.
        HeaderMismatchError: header absent, inconsistent with the payload,
            or the cells violate the declared kind's invariants.
        MalformedLineError: a payload cell fails to parse as a float.
    """
    try:
        with open(path, "r", encoding="ascii") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise IoFailureError(f"cannot read {path}: {exc}") from exc
    if not lines or not lines[0].startswith("# "):
        raise HeaderMismatchError(f"{path}: missing '# kind=... size=...' header")
    fields = dict(
        tok.split("=", 1) for tok in lines[0][2:].split() if "=" in tok
    )
    try:
        kind = FieldKind(fields["kind"])
        size = int(fields["size"])
    except (KeyError, ValueError) as exc:
        raise HeaderMismatchError(f"{path}: bad header {lines[0]!r}") from exc
    mode = RescaleMode(fields["mode"]) if "mode" in fields else None
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != size:
        raise HeaderMismatchError(
            f"{path}: header declares size {size} but payload has {len(body)} rows"
        )
    cells = np.empty((size, size), dtype=np.float64)
    for i, line in enumerate(body):
        parts = line.split(",")
        if len(parts) != size:
            raise HeaderMismatchError(
                f"{path}: row {i} has {len(parts)} cells, expected {size}"
            )
        try:
            cells[i] = [float(p) for p in parts]
        except ValueError as exc:
            raise MalformedLineError(path, i + 2, f"unparseable cell: {exc}") from exc
    try:
        return FieldMatrix(kind, cells, rescale_mode=mode)
    except KindMismatchError as exc:
        raise HeaderMismatchError(f"{path}: {exc}") from exc


def _to_pixels(cells: np.ndarray, kind: FieldKind) -> np.ndarray:
    lo, hi = _PIXEL_DOMAIN[kind]
    scaled = (cells - lo) / (hi - lo) * 255.0
    # Half-up rounding keeps golden pixel values platform-independent.
    return np.clip(np.floor(scaled + 0.5), 0, 255).astype(np.uint8)


def render_png(image: FieldMatrix | CompoundImage, path) -> None:
    """Render a matrix as 8-bit grayscale, or a compound image as RGB.

    Row i of the matrix is row i of the image, so time runs from the
    top-left corner to the bottom-right. Compound channel order is
    R = GASF, G = GADF, B = MTF.
    """
    if isinstance(image, CompoundImage):
        planes = [_to_pixels(ch.cells, ch.kind) for ch in image.channels]
        pil = Image.fromarray(np.stack(planes, axis=-1), mode="RGB")
    else:
        pil = Image.fromarray(_to_pixels(image.cells, image.kind), mode="L")
    try:
        pil.save(path, format="PNG")
    except OSError as exc:
        raise IoFailureError(f"cannot write {path}: {exc}") from exc


def save_model(model: DaModel, path) -> None:
    """Persist an autoencoder in the versioned text format."""
    d, h = model.input_dim, model.hidden_dim
    try:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(_MODEL_MAGIC + "\n")
            fh.write(f"{d} {h}\n")
            for row in model.encoder_weights:
                fh.write(" ".join(_fmt(v) for v in row) + "\n")
            fh.write(" ".join(_fmt(v) for v in model.encoder_bias) + "\n")
            for row in model.decoder_weights:
                fh.write(" ".join(_fmt(v) for v in row) + "\n")
            fh.write(" ".join(_fmt(v) for v in model.decoder_bias) + "\n")
    except OSError as exc:
        raise IoFailureError(f"cannot write {path}: {exc}") from exc


def _parse_row(lines: list[str], index: int, width: int, path) -> np.ndarray:
    if index >= len(lines):
        raise DimMismatchError(f"{path}: truncated at line {index + 1}")
    parts = lines[index].split()
    if len(parts) != width:
        raise DimMismatchError(
            f"{path}: line {index + 1} has {len(parts)} values, expected {width}"
        )
    try:
        return np.array([float(p) for p in parts], dtype=np.float64)
    except ValueError as exc:
        raise MalformedLineError(path, index + 1, f"unparseable value: {exc}") from exc


def load_model(path) -> DaModel:
    """Load an autoencoder saved by :func:`save_model`, bit-exactly.

    Raises:
        IoFailureError: unreadable path.
        BadMagicError: first line is not the expected magic.
        DimMismatchError: truncated file or row width off.
    """
    try:
        with open(path, "r", encoding="ascii") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise IoFailureError(f"cannot read {path}: {exc}") from exc
    if not lines or lines[0] != _MODEL_MAGIC:
        got = lines[0] if lines else "<empty>"
        raise BadMagicError(f"{path}: expected {_MODEL_MAGIC!r}, got {got!r}")
    if len(lines) < 2:
        raise DimMismatchError(f"{path}: missing dimension line")
    parts = lines[1].split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise DimMismatchError(f"{path}: bad dimension line {lines[1]!r}")
    d, h = int(parts[0]), int(parts[1])
    if d < 1 or h < 1:
        raise DimMismatchError(f"{path}: dimensions must be positive, got {d} {h}")
    at = 2
    encoder_weights = np.stack([_parse_row(lines, at + i, d, path) for i in range(h)])
    at += h
    encoder_bias = _parse_row(lines, at, h, path)
    at += 1
    decoder_weights = np.stack([_parse_row(lines, at + i, h, path) for i in range(d)])
    at += d
    decoder_bias = _parse_row(lines, at, d, path)
    at += 1
    if any(ln.strip() for ln in lines[at:]):
        raise DimMismatchError(f"{path}: trailing content after line {at}")
    return DaModel(
        encoder_weights=encoder_weights,
        encoder_bias=encoder_bias,
        decoder_weights=decoder_weights,
        decoder_bias=decoder_bias,
    )


def write_ucr(series_list: list[TimeSeries], path) -> None:
    """Write series as label-first comma-separated rows (the loader's format).

    A series without a label is written with label 0.
    """
    try:
        with open(path, "w", encoding="ascii") as fh:
            for s in series_list:
                label = 0 if s.label is None else int(s.label)
                fh.write(",".join([str(label)] + [_fmt(v) for v in s.values]) + "\n")
    except OSError as exc:
        raise IoFailureError(f"cannot write {path}: {exc}") from exc
