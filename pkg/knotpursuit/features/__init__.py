from knotpursuit.features.methods import (
    BaseMethod,
    MethodRegistry,
    ProposedMethod,
    VCAMethod,
    method_registry,
    register_methods,
)
from knotpursuit.features.training import ClassFeatureModel, restrict_higher_degrees, train_class_models
from knotpursuit.features.extraction import (
    export_features_csv,
    extract_feature_matrix,
    extract_features,
    feature_header,
)

register_methods()

__all__ = [
    "BaseMethod",
    "ClassFeatureModel",
    "MethodRegistry",
    "ProposedMethod",
    "VCAMethod",
    "export_features_csv",
    "extract_feature_matrix",
    "extract_features",
    "feature_header",
    "method_registry",
    "register_methods",
    "restrict_higher_degrees",
    "train_class_models",
]
