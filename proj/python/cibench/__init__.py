"""Imbalanced-classification toolkit: datasets, augmenters, ensemble learners,
metrics and the benchmark grid. The heavy lifting lives in the C++ core."""

from ._core import (  # noqa: F401
    Catalog,
    CibenchError,
    Classifier,
    Dataset,
    augment,
    augmenter_names,
    imbalance_ratio,
    make_model,
    model_kinds,
    roc_auc_binary,
    run_cell,
    score_predictions,
    split,
)

__all__ = [
    "Catalog",
    "CibenchError",
    "Classifier",
    "Dataset",
    "augment",
    "augmenter_names",
    "imbalance_ratio",
    "make_model",
    "model_kinds",
    "roc_auc_binary",
    "run_cell",
    "score_predictions",
    "split",
]
