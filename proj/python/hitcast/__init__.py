"""Hit-song prediction pipeline: canonicalization, chart labels, listening
features, five classifiers and cross-validated ROC/AUC."""

from ._hitcast import (
    Dataset,
    DataError,
    InternalError,
    LabelTable,
    SongKey,
    TrainedModel,
    UsageError,
    __version__,
    build_audio_dataset,
    build_listening_dataset,
    cross_validate,
    generate_synthetic,
    make_song_key,
    normalize_text,
    roc_curve,
    stratified_folds,
    train,
)

__all__ = [
    "Dataset",
    "DataError",
    "InternalError",
    "LabelTable",
    "SongKey",
    "TrainedModel",
    "UsageError",
    "__version__",
    "build_audio_dataset",
    "build_listening_dataset",
    "cross_validate",
    "generate_synthetic",
    "make_song_key",
    "normalize_text",
    "roc_curve",
    "stratified_folds",
    "train",
]
