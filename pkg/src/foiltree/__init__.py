"""Contrastive explanations for tabular classifiers.

Answers "why class A and not class B?" by training a small decision tree
around the questioned instance on model-labeled local samples, locating the
region where the contrast class holds, and reporting the minimal set of
per-feature conditions separating it from the instance's own region.
"""

from .dataset import Dataset, FeatureMeta, Scaler, fit_scaler, load_builtin, load_csv, split
from .errors import (
    DegenerateSplit,
    EmptyDataset,
    FoilEqualsFact,
    FoilTreeError,
    InconsistentConditions,
    InsufficientData,
    LeafNotInTree,
    LengthMismatch,
    MalformedCsv,
    UnknownSchema,
)
from .explanation import (
    ExplainerConfig,
    Explanation,
    explain,
    explain_with_tree,
    from_json,
    render_text,
    to_json,
)
from .models import MODEL_KINDS, TrainedModel, f1_score, fit, load_model, save_model
from .sampling import LocalSample, generate_local, proximity_weights
from .tree import (
    AccuracyWeightedStrategy,
    FoilTree,
    Literal,
    NearestLeafStrategy,
    TreeNode,
    TreeParams,
    complement,
    determine_foil,
    find_fact_leaf,
    find_foil_leaf,
    merge_literals,
    train_foil_tree,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyWeightedStrategy",
    "Dataset",
    "DegenerateSplit",
    "EmptyDataset",
    "ExplainerConfig",
    "Explanation",
    "FeatureMeta",
    "FoilEqualsFact",
    "FoilTree",
    "FoilTreeError",
    "InconsistentConditions",
    "InsufficientData",
    "LeafNotInTree",
    "LengthMismatch",
    "Literal",
    "LocalSample",
    "MODEL_KINDS",
    "MalformedCsv",
    "NearestLeafStrategy",
    "Scaler",
    "TrainedModel",
    "TreeNode",
    "TreeParams",
    "UnknownSchema",
    "complement",
    "determine_foil",
    "explain",
    "explain_with_tree",
    "f1_score",
    "find_fact_leaf",
    "find_foil_leaf",
    "fit",
    "fit_scaler",
    "from_json",
    "generate_local",
    "load_builtin",
    "load_csv",
    "load_model",
    "merge_literals",
    "proximity_weights",
    "render_text",
    "save_model",
    "split",
    "to_json",
    "train_foil_tree",
]
