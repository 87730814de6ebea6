"""Syntactic representations from constituency parse-tree traversals.

A tree is linearized by left-first and right-first depth-first walks into
two constituent-label sequences; a shared embedding and two GRUs turn
them into per-word feature vectors, regularized by maximizing the nuclear
norm of the label-embedding table and trained against a proxy prosodic
break task. Features can be upsampled to phoneme level for a downstream
synthesizer.
"""

from .ambiguity import (
    CollisionReport,
    EnumerationSpec,
    collision_report,
    collision_witness,
    enumerate_trees,
)
from .encoder import (
    EmbeddingTable,
    GruParameters,
    SyntacticFeatureSet,
    embed_sequence,
    encode_sentence,
    extract_features,
    gru_backward,
    gru_forward,
)
from .errors import SynrepError
from .linearizer import (
    Linearization,
    LinearizationPair,
    linearize_left,
    linearize_pair,
    linearize_right,
)
from .model import ModelParameters, init_model, load_model, save_model
from .nml import NmlResult, nml_loss, nuclear_norm
from .numerics import check_gradient, make_rng, pca_2d, svd
from .prosody import (
    EvalMetrics,
    Lexicon,
    PhonemeLevelFeatures,
    TrainConfig,
    TrainResult,
    corpus_from_trees,
    evaluate,
    majority_class_rate,
    make_phoneme_level,
    oracle_breaks,
    train,
    upsample,
)
from .treebank import (
    ConstituentTree,
    LabelVocabulary,
    TreeNode,
    build_vocabulary,
    parse_tree,
    read_tree_file,
    serialize_tree,
)

__all__ = [
    "CollisionReport",
    "ConstituentTree",
    "EmbeddingTable",
    "EnumerationSpec",
    "EvalMetrics",
    "GruParameters",
    "LabelVocabulary",
    "Linearization",
    "LinearizationPair",
    "Lexicon",
    "ModelParameters",
    "NmlResult",
    "PhonemeLevelFeatures",
    "SynrepError",
    "SyntacticFeatureSet",
    "TrainConfig",
    "TrainResult",
    "TreeNode",
    "build_vocabulary",
    "check_gradient",
    "collision_report",
    "collision_witness",
    "corpus_from_trees",
    "embed_sequence",
    "encode_sentence",
    "enumerate_trees",
    "evaluate",
    "extract_features",
    "gru_backward",
    "gru_forward",
    "init_model",
    "linearize_left",
    "linearize_pair",
    "linearize_right",
    "load_model",
    "majority_class_rate",
    "make_phoneme_level",
    "make_rng",
    "nml_loss",
    "nuclear_norm",
    "oracle_breaks",
    "parse_tree",
    "pca_2d",
    "read_tree_file",
    "save_model",
    "serialize_tree",
    "svd",
    "train",
    "upsample",
]
