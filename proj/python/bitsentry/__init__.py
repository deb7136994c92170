"""Static trojan detection for FPGA bitstreams.

Thin Python surface over the C++ core: feature extraction, truncated SVD,
SMOTE resampling, classifier training, synthetic corpus generation, and
bundled inference.
"""

from ._core import (
    Classifier,
    Error,
    TsvdProjector,
    byte_histogram,
    evaluate,
    extract_file,
    fit_classifier,
    fit_tsvd,
    generate_dataset,
    label_names,
    model_names,
    predict_file,
    smote,
    train,
)

__all__ = [
    "Classifier",
    "Error",
    "TsvdProjector",
    "byte_histogram",
    "evaluate",
    "extract_file",
    "fit_classifier",
    "fit_tsvd",
    "generate_dataset",
    "label_names",
    "model_names",
    "predict_file",
    "smote",
    "train",
]
