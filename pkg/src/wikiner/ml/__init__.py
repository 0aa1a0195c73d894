"""Character n-gram classifiers and the cross-validation harness."""

from .evaluate import (
    BadK,
    CrossValidationResult,
    EvalConfig,
    FractionTooSmall,
    cross_validate,
    learning_curve,
    learning_curve_csv,
    stratified_kfold,
    write_report,
)
from .features import (
    FeatureSpace,
    SparseVector,
    SpaceNotFrozen,
    char_ngrams,
    featurize,
    fit_feature_space,
)
from .metrics import (
    ClassMetrics,
    EmptyConfusion,
    EvalReport,
    confusion_matrix,
    evaluate_predictions,
    metrics_from_confusion,
)
from .models import (
    MODEL_KINDS,
    DegenerateData,
    DimensionMismatch,
    Hyperparams,
    LinearModel,
    NaiveBayesModel,
    class_order,
    default_hyperparams,
    lr_loss_and_grad,
    svm_loss_and_grad,
    to_dense,
    train,
)
