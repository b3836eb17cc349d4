"""Exact inverse map from unit-mode summation-field diagonals to the series.

The main diagonal of a GASF holds cos(2*phi_i). For a series rescaled to
[0, 1] the angles lie in [0, pi/2], where cos(phi) = sqrt((cos(2*phi)+1)/2)
inverts the encoding exactly. Symmetric-mode fields are rejected: their
angles span [0, pi] and the half-angle square root is ambiguous there.
"""

from __future__ import annotations

import numpy as np

from .core import FieldKind, FieldMatrix, RescaleMode, ScaledSeries
from .errors import KindMismatchError, OutOfRangeError

# learned reconstructions drift slightly outside the valid cosine range;
# beyond this the input is not a plausible field diagonal
DIAGONAL_TOL = 1e-9


def diagonal(field: FieldMatrix) -> np.ndarray:
    """Main diagonal of a square field matrix, in time order."""
    return np.diagonal(field.cells).copy()


def inverse_gasf_diagonal(diag, tol: float = DIAGONAL_TOL) -> ScaledSeries:
    """Invert a unit-mode summation-field diagonal back to scaled values.

    Each entry d = cos(2*phi) maps to sqrt((d + 1) / 2) = cos(phi), the
    original value in [0, 1]. Entries within `tol` outside [-1, 1] are
    clamped; larger violations raise.

    Raises:
        OutOfRangeError: if any entry exceeds [-1, 1] by more than `tol`.
    """
    diag = np.asarray(diag, dtype=np.float64)
    if diag.size and (diag.min() < -1.0 - tol or diag.max() > 1.0 + tol):
        raise OutOfRangeError(
            f"diagonal entries outside [-1, 1] beyond tolerance {tol}: "
            f"range [{diag.min()}, {diag.max()}]"
        )
    clipped = np.clip(diag, -1.0, 1.0)
    values = np.sqrt((clipped + 1.0) / 2.0)
    return ScaledSeries(values, RescaleMode.UNIT)


def reconstruct_series(field: FieldMatrix, origin: tuple[float, float] | None = None) -> ScaledSeries:
    """Recover the unit-rescaled series from its summation field.

    Only unit-mode GASF matrices are accepted; the encoding of
    symmetric-mode data is not invertible from the diagonal.

    Raises:
        KindMismatchError: for non-GASF kinds or symmetric rescale mode.
    """
    if field.kind is not FieldKind.GASF:
        raise KindMismatchError(f"can only invert GASF fields, got {field.kind.value}")
    if field.rescale_mode is not RescaleMode.UNIT:
        raise KindMismatchError(
            "only unit-mode GASF is invertible; symmetric-mode angles are ambiguous"
        )
    recovered = inverse_gasf_diagonal(diagonal(field))
    if origin is None:
        return recovered
    return ScaledSeries(recovered.values, RescaleMode.UNIT, origin=origin)
