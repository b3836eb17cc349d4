"""tsimg: time series as images.

Encode univariate series as Gramian angular fields (summation and
difference forms) and Markov transition fields, reconstruct series from
unit-mode summation-field diagonals, impute missing values with a
denoising autoencoder over either field images or raw series, and run a
grid-searched linear classification harness over compound three-channel
images, with a 1NN baseline.
"""

from .core import (
    FieldKind,
    FieldMatrix,
    PaaConfig,
    RescaleMode,
    ScaledSeries,
    TimeSeries,
    paa,
    rescale,
    rescale_with_bounds,
)
from .datasets import (
    Dataset,
    gen_synthetic,
    load_dataset,
    merge_datasets,
    paa_to_length,
    parse_ucr,
)
from .errors import (
    BadMagicError,
    ConstantSeriesError,
    DimMismatchError,
    DivergenceError,
    EmptyFileError,
    EmptyGridError,
    EmptyMaskError,
    EmptyTestSetError,
    HeaderMismatchError,
    InvalidBinCountError,
    InvalidSegmentsError,
    InvalidTargetSizeError,
    IoFailureError,
    KindMismatchError,
    LengthMismatchError,
    MalformedLineError,
    OutOfRangeError,
    RateOutOfRangeError,
    SingleClassError,
    TooFewSamplesError,
    TsimgError,
    UnknownGeneratorError,
)
from .gaf import PolarSeries, encode_gaf, gadf, gasf, to_polar
from .mtf import (
    MarkovMatrix,
    QuantileBinning,
    aggregate,
    blur_patch_width,
    encode_mtf,
    markov_matrix,
    mtf,
    quantile_bins,
)
from .reconstruct import diagonal, inverse_gasf_diagonal, reconstruct_series
from .impute import (
    CorruptionSpec,
    DaModel,
    ImputationReport,
    TrainConfig,
    build_training_pairs_gasf,
    build_training_pairs_raw,
    corrupt,
    da_forward,
    da_init,
    da_loss,
    da_train,
    evaluate_imputation,
    impute_via_gasf,
    impute_via_raw,
    run_imputation_experiment,
    score,
    train_da_pipeline,
)
from .classify import (
    CompoundImage,
    LinearModel,
    SelectionGrid,
    SelectionResult,
    baseline_1nn,
    compound_features,
    compound_image,
    cv_select_c,
    evaluate,
    fit_linear,
    model_select,
    predict,
)
from .io import (
    load_model,
    read_matrix_csv,
    render_png,
    save_model,
    write_matrix_csv,
    write_ucr,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "TsimgError",
    "ConstantSeriesError",
    "InvalidSegmentsError",
    "MalformedLineError",
    "EmptyFileError",
    "UnknownGeneratorError",
    "LengthMismatchError",
    "OutOfRangeError",
    "InvalidBinCountError",
    "InvalidTargetSizeError",
    "RateOutOfRangeError",
    "DimMismatchError",
    "DivergenceError",
    "EmptyMaskError",
    "SingleClassError",
    "TooFewSamplesError",
    "EmptyGridError",
    "EmptyTestSetError",
    "KindMismatchError",
    "IoFailureError",
    "HeaderMismatchError",
    "BadMagicError",
    "TimeSeries",
    "ScaledSeries",
    "RescaleMode",
    "FieldKind",
    "FieldMatrix",
    "PaaConfig",
    "rescale",
    "rescale_with_bounds",
    "paa",
    "PolarSeries",
    "to_polar",
    "gasf",
    "gadf",
    "encode_gaf",
    "QuantileBinning",
    "MarkovMatrix",
    "quantile_bins",
    "markov_matrix",
    "mtf",
    "aggregate",
    "blur_patch_width",
    "encode_mtf",
    "diagonal",
    "inverse_gasf_diagonal",
    "reconstruct_series",
    "Dataset",
    "parse_ucr",
    "load_dataset",
    "gen_synthetic",
    "merge_datasets",
    "paa_to_length",
    "CorruptionSpec",
    "DaModel",
    "TrainConfig",
    "ImputationReport",
    "corrupt",
    "build_training_pairs_gasf",
    "build_training_pairs_raw",
    "da_init",
    "da_forward",
    "da_loss",
    "da_train",
    "score",
    "evaluate_imputation",
    "impute_via_gasf",
    "impute_via_raw",
    "train_da_pipeline",
    "run_imputation_experiment",
    "CompoundImage",
    "SelectionGrid",
    "SelectionResult",
    "LinearModel",
    "compound_image",
    "compound_features",
    "fit_linear",
    "predict",
    "cv_select_c",
    "model_select",
    "evaluate",
    "baseline_1nn",
    "write_matrix_csv",
    "read_matrix_csv",
    "render_png",
    "save_model",
    "load_model",
    "write_ucr",
]
