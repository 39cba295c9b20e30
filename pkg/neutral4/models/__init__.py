from neutral4.models.registry import (
    MODELS,
    SUITE_NAMES,
    ModelBundle,
    ModelInfo,
    builtin,
    describe_model,
    list_models,
    load_geometry,
)

__all__ = [
    "MODELS",
    "SUITE_NAMES",
    "ModelBundle",
    "ModelInfo",
    "builtin",
    "describe_model",
    "list_models",
    "load_geometry",
]
