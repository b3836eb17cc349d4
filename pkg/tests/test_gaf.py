"""Tests for polar encoding and the Gramian angular fields.

The algebraic outer-product implementations are checked against an
independent trigonometric oracle: phi = arccos(v), then an explicit double
loop over cos(phi_i + phi_j) and sin(phi_i - phi_j).
"""

import numpy as np
import pytest

from tsimg import (
    FieldKind,
    OutOfRangeError,
    PaaConfig,
    RescaleMode,
    ScaledSeries,
    encode_gaf,
    gadf,
    gasf,
    rescale,
    to_polar,
)


def trig_gasf(values):
    phi = np.arccos(values)
    n = len(values)
    return np.array([[np.cos(phi[i] + phi[j]) for j in range(n)] for i in range(n)])


def trig_gadf(values):
    phi = np.arccos(values)
    n = len(values)
    return np.array([[np.sin(phi[i] - phi[j]) for j in range(n)] for i in range(n)])


def random_scaled(seed, n=24, mode=RescaleMode.UNIT):
    rng = np.random.default_rng(seed)
    return rescale(rng.normal(size=n), mode)


class TestToPolar:
    def test_angles_are_arccos_of_values(self):
        scaled = random_scaled(0)
        polar = to_polar(scaled)
        np.testing.assert_allclose(polar.phi, np.arccos(scaled.values), atol=1e-15)

    def test_radii_span_unit_interval(self):
        scaled = random_scaled(1, n=10)
        polar = to_polar(scaled)
        np.testing.assert_allclose(polar.r, np.arange(1, 11) / 10.0, atol=1e-15)
        assert polar.span_constant == 10

    def test_custom_span_constant(self):
        scaled = random_scaled(2, n=5)
        polar = to_polar(scaled, span_constant=20)
        np.testing.assert_allclose(polar.r, np.arange(1, 6) / 20.0, atol=1e-15)

    def test_angle_map_is_bijective(self):
        # cos(arccos(v)) == v on [-1, 1]
        scaled = random_scaled(3, mode=RescaleMode.SYMMETRIC)
        polar = to_polar(scaled)
        np.testing.assert_allclose(np.cos(polar.phi), scaled.values, atol=1e-15)

    def test_unit_mode_angles_in_first_quadrant(self):
        polar = to_polar(random_scaled(4, mode=RescaleMode.UNIT))
        assert polar.phi.min() >= 0.0
        assert polar.phi.max() <= np.pi / 2 + 1e-12

    def test_symmetric_mode_angles_span_half_circle(self):
        polar = to_polar(random_scaled(5, mode=RescaleMode.SYMMETRIC))
        assert polar.phi.min() >= 0.0
        assert polar.phi.max() <= np.pi + 1e-12


class TestGasf:
    @pytest.mark.parametrize("mode", list(RescaleMode))
    @pytest.mark.parametrize("seed", range(5))
    def test_matches_trig_oracle(self, mode, seed):
        scaled = random_scaled(seed, mode=mode)
        field = gasf(scaled)
        np.testing.assert_allclose(field.cells, trig_gasf(scaled.values), rtol=0, atol=1e-12)

    def test_worked_three_point_example(self):
        scaled = ScaledSeries([1.0, 0.5, 0.0], RescaleMode.UNIT)
        expected = np.array(
            [
                [1.0, 0.5, 0.0],
                [0.5, -0.5, -np.sqrt(3) / 2],
                [0.0, -np.sqrt(3) / 2, -1.0],
            ]
        )
        np.testing.assert_allclose(gasf(scaled).cells, expected, atol=1e-15)

    def test_symmetric_exactly(self):
        field = gasf(random_scaled(7))
        np.testing.assert_array_equal(field.cells, field.cells.T)

    def test_diagonal_is_double_angle(self):
        # diag_i = cos(2*phi_i) = 2 v_i^2 - 1
        scaled = random_scaled(8)
        diag = np.diagonal(gasf(scaled).cells)
        np.testing.assert_allclose(diag, 2 * scaled.values**2 - 1, atol=1e-15)

    def test_two_point_edge_case(self):
        scaled = ScaledSeries([0.0, 1.0], RescaleMode.UNIT)
        np.testing.assert_allclose(
            gasf(scaled).cells, [[-1.0, 0.0], [0.0, 1.0]], atol=1e-15
        )

    def test_rejects_single_point(self):
        with pytest.raises(ValueError):
            gasf(ScaledSeries([0.5], RescaleMode.UNIT))

    def test_carries_rescale_mode_tag(self):
        assert gasf(random_scaled(9)).rescale_mode is RescaleMode.UNIT
        assert (
            gasf(random_scaled(9, mode=RescaleMode.SYMMETRIC)).rescale_mode
            is RescaleMode.SYMMETRIC
        )


class TestGadf:
    @pytest.mark.parametrize("mode", list(RescaleMode))
    @pytest.mark.parametrize("seed", range(5))
    def test_matches_trig_oracle(self, mode, seed):
        scaled = random_scaled(seed + 10, mode=mode)
        field = gadf(scaled)
        np.testing.assert_allclose(field.cells, trig_gadf(scaled.values), rtol=0, atol=1e-12)

    def test_worked_three_point_example(self):
        scaled = ScaledSeries([1.0, 0.5, 0.0], RescaleMode.UNIT)
        expected = np.array(
            [
                [0.0, -np.sqrt(3) / 2, -1.0],
                [np.sqrt(3) / 2, 0.0, -0.5],
                [1.0, 0.5, 0.0],
            ]
        )
        np.testing.assert_allclose(gadf(scaled).cells, expected, atol=1e-15)

    def test_two_point_example(self):
        # phi = [pi/2, 0], so sin(phi_0 - phi_1) = 1 above the diagonal
        scaled = ScaledSeries([0.0, 1.0], RescaleMode.UNIT)
        np.testing.assert_allclose(
            gadf(scaled).cells, [[0.0, 1.0], [-1.0, 0.0]], atol=1e-15
        )

    def test_antisymmetric_with_zero_diagonal_exactly(self):
        field = gadf(random_scaled(11))
        np.testing.assert_array_equal(field.cells, -field.cells.T)
        np.testing.assert_array_equal(np.diagonal(field.cells), np.zeros(field.size))

    def test_rejects_single_point(self):
        with pytest.raises(ValueError):
            gadf(ScaledSeries([0.5], RescaleMode.UNIT))


class TestEncodeGaf:
    def test_full_resolution_by_default(self):
        rng = np.random.default_rng(12)
        series = rng.normal(size=32)
        field = encode_gaf(series, RescaleMode.UNIT)
        assert field.size == 32
        np.testing.assert_allclose(
            field.cells, gasf(rescale(series, RescaleMode.UNIT)).cells, atol=1e-15
        )

    def test_paa_shrinks_to_requested_size(self):
        rng = np.random.default_rng(13)
        series = rng.normal(size=64)
        field = encode_gaf(series, RescaleMode.SYMMETRIC, PaaConfig(16))
        assert field.size == 16

    def test_paa_equal_to_length_is_identity(self):
        rng = np.random.default_rng(14)
        series = rng.normal(size=16)
        a = encode_gaf(series, RescaleMode.UNIT, PaaConfig(16))
        b = encode_gaf(series, RescaleMode.UNIT)
        np.testing.assert_array_equal(a.cells, b.cells)

    def test_gadf_kind_dispatch(self):
        rng = np.random.default_rng(15)
        series = rng.normal(size=20)
        field = encode_gaf(series, RescaleMode.UNIT, kind=FieldKind.GADF)
        assert field.kind is FieldKind.GADF
        np.testing.assert_allclose(
            field.cells, gadf(rescale(series, RescaleMode.UNIT)).cells, atol=1e-15
        )

    def test_mtf_kind_rejected(self):
        with pytest.raises(ValueError):
            encode_gaf(np.arange(4.0), RescaleMode.UNIT, kind=FieldKind.MTF)


class TestOutOfRange:
    def test_inverse_tolerance_boundary(self):
        # values just inside the 1e-12 tolerance are clamped, not rejected
        scaled = ScaledSeries([1.0 + 5e-13, 0.0], RescaleMode.UNIT)
        field = gasf(scaled)
        assert field.cells.max() <= 1.0

    def test_far_out_of_range_raises(self):
        from tsimg.gaf import _clamped_unit_interval

        with pytest.raises(OutOfRangeError):
            _clamped_unit_interval(np.array([1.5, 0.0]), 1e-12)
