"""Random-forest risk classifier: encoding, trees, metrics, risk scale."""

from .backend import BACKEND, available_backends, best_split
from .encoding import (
    EncodingSchema,
    TransformReport,
    encode_labels,
    encode_matrix,
    encode_row,
    fit_schema,
)
from .forest import (
    Forest,
    ForestConfig,
    deserialize_model,
    feature_importance,
    grouped_importance,
    load_model,
    predict_proba,
    predict_proba_matrix,
    save_model,
    serialize_model,
    train,
    train_matrix,
)
from .metrics import EvalReport, evaluate, metrics_from_confusion, split_train_test
from .risk import RISK_LABELS, RiskAssessment, risk_level
from .trees import Tree, grow_tree, max_features_for

__all__ = [
    "BACKEND",
    "EncodingSchema",
    "EvalReport",
    "Forest",
    "ForestConfig",
    "RISK_LABELS",
    "RiskAssessment",
    "TransformReport",
    "Tree",
    "available_backends",
    "best_split",
    "deserialize_model",
    "encode_labels",
    "encode_matrix",
    "encode_row",
    "evaluate",
    "feature_importance",
    "fit_schema",
    "grouped_importance",
    "grow_tree",
    "load_model",
    "max_features_for",
    "metrics_from_confusion",
    "predict_proba",
    "predict_proba_matrix",
    "risk_level",
    "save_model",
    "serialize_model",
    "split_train_test",
    "train",
    "train_matrix",
]
