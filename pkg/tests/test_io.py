"""Tests for text persistence of matrices and models, PNG rendering,
and the label-first series writer."""

import numpy as np
import pytest
from PIL import Image

from tsimg.classify import compound_image
from tsimg.core import FieldKind, FieldMatrix, RescaleMode, TimeSeries
from tsimg.datasets import parse_ucr
from tsimg.errors import (
    BadMagicError,
    DimMismatchError,
    HeaderMismatchError,
    IoFailureError,
    MalformedLineError,
)
from tsimg.gaf import encode_gaf
from tsimg.impute import DaModel, da_init
from tsimg.io import (
    load_model,
    read_matrix_csv,
    render_png,
    save_model,
    write_matrix_csv,
    write_ucr,
)
from tsimg.mtf import encode_mtf


def _random_series(seed: int, n: int = 16) -> TimeSeries:
    rng = np.random.default_rng(seed)
    return TimeSeries(rng.standard_normal(n))


# ---------------------------------------------------------------------------
# matrix CSV round-trips


@pytest.mark.parametrize("kind", [FieldKind.GASF, FieldKind.GADF])
@pytest.mark.parametrize("mode", [RescaleMode.UNIT, RescaleMode.SYMMETRIC])
def test_gaf_csv_round_trip_is_bit_exact(tmp_path, kind, mode):
    field = encode_gaf(_random_series(3), mode, kind=kind)
    path = tmp_path / "m.csv"
    write_matrix_csv(field, path)
    back = read_matrix_csv(path)
    assert back.kind is kind
    assert back.rescale_mode is mode
    assert np.array_equal(back.cells, field.cells)


def test_mtf_csv_round_trip_is_bit_exact(tmp_path):
    field = encode_mtf(_random_series(4, n=20), num_bins=4)
    path = tmp_path / "m.csv"
    write_matrix_csv(field, path)
    back = read_matrix_csv(path)
    assert back.kind is FieldKind.MTF
    assert back.rescale_mode is None
    assert np.array_equal(back.cells, field.cells)


def test_matrix_csv_header_line(tmp_path):
    field = encode_gaf(_random_series(5, n=8), RescaleMode.UNIT, kind=FieldKind.GASF)
    path = tmp_path / "m.csv"
    write_matrix_csv(field, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "# kind=gasf size=8 mode=unit"
    assert len(lines) == 9
    assert all(len(ln.split(",")) == 8 for ln in lines[1:])


def test_mtf_csv_header_has_no_mode_token(tmp_path):
    field = encode_mtf(_random_series(6, n=12), num_bins=3)
    path = tmp_path / "m.csv"
    write_matrix_csv(field, path)
    header = path.read_text().splitlines()[0]
    assert header == "# kind=mtf size=12"


def test_read_matrix_rejects_missing_header(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("1,0\n0,1\n")
    with pytest.raises(HeaderMismatchError):
        read_matrix_csv(path)


def test_read_matrix_rejects_unknown_kind(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("# kind=bogus size=1\n0.5\n")
    with pytest.raises(HeaderMismatchError):
        read_matrix_csv(path)


def test_read_matrix_rejects_row_count_mismatch(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("# kind=mtf size=3\n0,1,0\n1,0,0\n")
    with pytest.raises(HeaderMismatchError, match="2 rows"):
        read_matrix_csv(path)


def test_read_matrix_rejects_short_row(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("# kind=mtf size=2\n0,1\n0.5\n")
    with pytest.raises(HeaderMismatchError, match="row 1"):
        read_matrix_csv(path)


def test_read_matrix_reports_unparseable_cell_line(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("# kind=mtf size=2\n0,1\n0.5,oops\n")
    with pytest.raises(MalformedLineError) as exc_info:
        read_matrix_csv(path)
    # The bad cell sits on the third physical line of the file.
    assert ":3:" in str(exc_info.value)


def test_read_matrix_rejects_payload_violating_kind(tmp_path):
    # Declared GASF but the payload is not symmetric.
    path = tmp_path / "m.csv"
    path.write_text("# kind=gasf size=2 mode=unit\n0,0.5\n-0.5,0\n")
    with pytest.raises(HeaderMismatchError):
        read_matrix_csv(path)


def test_read_matrix_missing_file(tmp_path):
    with pytest.raises(IoFailureError):
        read_matrix_csv(tmp_path / "nope.csv")


def test_write_matrix_to_unwritable_path(tmp_path):
    field = encode_mtf(_random_series(1, n=6), num_bins=2)
    with pytest.raises(IoFailureError):
        write_matrix_csv(field, tmp_path)  # a directory, not a file


# ---------------------------------------------------------------------------
# PNG rendering


def _expected_pixels(cells: np.ndarray, lo: float, hi: float) -> np.ndarray:
    scaled = (cells - lo) / (hi - lo) * 255.0
    return np.clip(np.floor(scaled + 0.5), 0, 255).astype(np.uint8)


def test_render_png_gasf_golden_pixels(tmp_path):
    field = FieldMatrix(
        FieldKind.GASF,
        np.array([[1.0, 0.0], [0.0, -1.0]]),
        rescale_mode=RescaleMode.UNIT,
    )
    path = tmp_path / "m.png"
    render_png(field, path)
    with Image.open(path) as img:
        assert img.mode == "L"
        pixels = np.asarray(img)
    assert np.array_equal(pixels, [[255, 128], [128, 0]])


def test_render_png_mtf_golden_pixels(tmp_path):
    field = FieldMatrix(FieldKind.MTF, np.array([[0.0, 1.0], [0.5, 0.5]]))
    path = tmp_path / "m.png"
    render_png(field, path)
    with Image.open(path) as img:
        pixels = np.asarray(img)
    assert np.array_equal(pixels, [[0, 255], [128, 128]])


def test_render_png_matrix_orientation(tmp_path):
    # Row i of the cells must be row i of the image (top of the PNG).
    field = FieldMatrix(FieldKind.MTF, np.array([[1.0, 1.0], [0.0, 0.0]]))
    path = tmp_path / "m.png"
    render_png(field, path)
    with Image.open(path) as img:
        pixels = np.asarray(img)
    assert np.array_equal(pixels[0], [255, 255])
    assert np.array_equal(pixels[1], [0, 0])


def test_render_png_compound_rgb_channels(tmp_path):
    image = compound_image(_random_series(7, n=16), size=8, quantiles=4)
    path = tmp_path / "c.png"
    render_png(image, path)
    with Image.open(path) as img:
        assert img.mode == "RGB"
        pixels = np.asarray(img)
    assert pixels.shape == (8, 8, 3)
    domains = [(-1.0, 1.0), (-1.0, 1.0), (0.0, 1.0)]
    for idx, (channel, (lo, hi)) in enumerate(zip(image.channels, domains)):
        assert np.array_equal(pixels[:, :, idx], _expected_pixels(channel.cells, lo, hi))


# ---------------------------------------------------------------------------
# model persistence


def _random_model(seed: int, d: int = 5, h: int = 3) -> DaModel:
    model = da_init(d, h, seed=seed)
    rng = np.random.default_rng(seed + 1)
    model.encoder_bias[:] = rng.standard_normal(h)
    model.decoder_bias[:] = rng.standard_normal(d)
    return model


def test_model_round_trip_is_bit_exact(tmp_path):
    model = _random_model(11)
    path = tmp_path / "model.txt"
    save_model(model, path)
    back = load_model(path)
    assert np.array_equal(back.encoder_weights, model.encoder_weights)
    assert np.array_equal(back.encoder_bias, model.encoder_bias)
    assert np.array_equal(back.decoder_weights, model.decoder_weights)
    assert np.array_equal(back.decoder_bias, model.decoder_bias)


def test_load_model_rejects_wrong_magic(tmp_path):
    path = tmp_path / "model.txt"
    path.write_text("NOT-A-MODEL\n5 3\n")
    with pytest.raises(BadMagicError):
        load_model(path)


def test_load_model_rejects_empty_file(tmp_path):
    path = tmp_path / "model.txt"
    path.write_text("")
    with pytest.raises(BadMagicError):
        load_model(path)


def test_load_model_rejects_truncated_file(tmp_path):
    path = tmp_path / "model.txt"
    save_model(_random_model(12), path)
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines[:-1]) + "\n")
    with pytest.raises(DimMismatchError):
        load_model(path)


def test_load_model_rejects_short_row(tmp_path):
    path = tmp_path / "model.txt"
    save_model(_random_model(13), path)
    lines = path.read_text().splitlines()
    lines[2] = " ".join(lines[2].split()[:-1])
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(DimMismatchError):
        load_model(path)


def test_load_model_rejects_bad_dimension_line(tmp_path):
    path = tmp_path / "model.txt"
    path.write_text("TSIMG-DA 1\n5 x\n")
    with pytest.raises(DimMismatchError):
        load_model(path)


def test_load_model_rejects_trailing_content(tmp_path):
    path = tmp_path / "model.txt"
    save_model(_random_model(14), path)
    with open(path, "a") as fh:
        fh.write("0 0 0\n")
    with pytest.raises(DimMismatchError):
        load_model(path)


def test_load_model_missing_file(tmp_path):
    with pytest.raises(IoFailureError):
        load_model(tmp_path / "nope.txt")


# ---------------------------------------------------------------------------
# series writer


def test_write_ucr_round_trip(tmp_path):
    rng = np.random.default_rng(21)
    series = [TimeSeries(rng.standard_normal(6), label=k % 3) for k in range(5)]
    path = tmp_path / "data.csv"
    write_ucr(series, path)
    back = parse_ucr(path)
    assert len(back) == 5
    for orig, parsed in zip(series, back):
        assert parsed.label == orig.label
        assert np.array_equal(parsed.values, orig.values)


def test_write_ucr_unlabeled_series_gets_label_zero(tmp_path):
    path = tmp_path / "data.csv"
    write_ucr([TimeSeries([0.5, -0.25, 3.0])], path)
    assert path.read_text().splitlines()[0].split(",")[0] == "0"
    assert parse_ucr(path)[0].label == 0


def test_write_ucr_to_unwritable_path(tmp_path):
    with pytest.raises(IoFailureError):
        write_ucr([TimeSeries([1.0, 2.0])], tmp_path)
