"""Cycle statistics for repetitive skeleton motion.

Detects the repetition period of a cyclic activity, aligns its cycles on
the PSD-cone pose manifold, computes cross-sectional pose statistics,
and scores one performer's execution against another's via per-pose
precision and fit indices.
"""

from .alignment import (
    AlignmentResult,
    WarpingPath,
    correspondences,
    dtw,
    dtw_from_cost,
    sequence_distance,
)
from .cycles import (
    CycleProfile,
    CycleSegmentation,
    auto_template_length,
    cluster_minima,
    cycle_profile,
    estimate_period,
    find_local_minima,
    segment_cycles,
)
from .estimators import (
    ComparisonResult,
    CycleAnalyzer,
    ExerciseComparator,
    GramTransformer,
    TorsoNormalizer,
)
from .manifold import (
    factor_distance_matrix,
    geodesic_distance,
    gram_factors,
    gram_of,
    gram_sequence,
    pairwise_distances,
    psd_sqrt,
)
from .skeleton import (
    BODY_25,
    PoseSequence,
    SkeletonModel,
    SkeletonPose,
    load_sequence,
    mean_center,
    normalize_pose,
    normalize_sequence,
    parse_openpose_frame,
)
from .stats import (
    BarycenterResult,
    FitEntry,
    FitReport,
    PoseSet,
    PoseSetStats,
    align_mean_sequences,
    average_deviation,
    build_pose_sets,
    bures_barycenter,
    fit_indices,
    mean_pose,
    medoid_pose,
    pose_set_stats,
    precision_index,
)
from .synth import (
    SynthConfig,
    brute_force_dtw,
    commuting_distance_oracle,
    generate_cyclic_sequence,
    to_openpose_document,
    write_openpose_sequence,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentResult",
    "BODY_25",
    "BarycenterResult",
    "ComparisonResult",
    "CycleAnalyzer",
    "CycleProfile",
    "CycleSegmentation",
    "ExerciseComparator",
    "FitEntry",
    "FitReport",
    "GramTransformer",
    "PoseSequence",
    "PoseSet",
    "PoseSetStats",
    "SkeletonModel",
    "SkeletonPose",
    "SynthConfig",
    "TorsoNormalizer",
    "WarpingPath",
    "align_mean_sequences",
    "auto_template_length",
    "average_deviation",
    "brute_force_dtw",
    "build_pose_sets",
    "bures_barycenter",
    "cluster_minima",
    "commuting_distance_oracle",
    "correspondences",
    "cycle_profile",
    "dtw",
    "dtw_from_cost",
    "estimate_period",
    "factor_distance_matrix",
    "find_local_minima",
    "fit_indices",
    "generate_cyclic_sequence",
    "geodesic_distance",
    "gram_factors",
    "gram_of",
    "gram_sequence",
    "load_sequence",
    "mean_center",
    "mean_pose",
    "medoid_pose",
    "normalize_pose",
    "normalize_sequence",
    "pairwise_distances",
    "parse_openpose_frame",
    "pose_set_stats",
    "precision_index",
    "psd_sqrt",
    "segment_cycles",
    "sequence_distance",
    "to_openpose_document",
    "write_openpose_sequence",
]
