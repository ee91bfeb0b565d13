"""Scikit-learn-style estimators wrapping the analysis pipeline.

``TorsoNormalizer`` and ``GramTransformer`` are stateless transformers;
``CycleAnalyzer`` fits per-pose cross-cycle statistics to one sequence;
``ExerciseComparator`` fits on a reference (trainer) sequence and scores
another (user) sequence against it. All estimators follow the usual
``get_params``/``set_params``/fitted-attribute conventions, so they
compose with pipelines and ``clone``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import cycles as _cycles
from . import stats as _stats
from ._validation import check_coords_stack
from .alignment import WarpingPath, correspondences, dtw_from_cost
from .manifold import factor_distance_matrix, geodesic_distance, gram_factors, gram_sequence
from .skeleton import (
    BODY_25,
    PoseSequence,
    SkeletonModel,
    SkeletonPose,
    normalize_sequence,
)


def _as_pose_sequence(X, model: SkeletonModel) -> PoseSequence:
    if isinstance(X, PoseSequence):
        return X
    coords = check_coords_stack(X, n_joints=model.joint_count)
    poses = [
        SkeletonPose(coords=c, confidence=np.ones(model.joint_count), frame_index=i)
        for i, c in enumerate(coords)
    ]
    return PoseSequence(poses=poses, model=model)


class TorsoNormalizer(TransformerMixin, BaseEstimator):
    """Normalize poses to a mid-hip origin and unit torso length."""

    def __init__(self, model: SkeletonModel | None = None):
        self.model = model

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        model = self.model or BODY_25
        seq = normalize_sequence(_as_pose_sequence(X, model))
        return seq if isinstance(X, PoseSequence) else seq.coords_array()


class GramTransformer(TransformerMixin, BaseEstimator):
    """Encode poses as Gram matrices, shape (frames, n, n)."""

    def __init__(self, model: SkeletonModel | None = None):
        self.model = model

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        if isinstance(X, PoseSequence):
            return gram_sequence(X)
        model = self.model or BODY_25
        return gram_sequence(check_coords_stack(X, n_joints=model.joint_count))


class CycleAnalyzer(BaseEstimator):
    """Detect the repetition period and fit per-pose cross-cycle statistics.

    Parameters
    ----------
    template_len : int or None
        Cycle-profile template length; None picks ``seq_len // 8``.
    min_exclusion : int or None
        Local-minima exclusion radius; None picks half the template.
    cluster_gap_mult : float
        Gap threshold multiplier for the minima value clustering.
    mean_method : {"medoid", "barycenter"}
        Mean-pose estimator for each pose-set.
    epsilon : float
        Regularizer in the precision index 1 / (sigma + epsilon).
    model : SkeletonModel or None
        Skeleton topology; None means the 25-joint default.

    Attributes (after ``fit``)
    --------------------------
    period_, cycle_ranges_, profile_, minima_, selected_minima_,
    pose_sets_, stats_, mean_poses_, mean_factors_, deviations_,
    precisions_, barycenter_fallbacks_, n_frames_, template_length_.
    """

    def __init__(
        self,
        template_len: int | None = None,
        min_exclusion: int | None = None,
        cluster_gap_mult: float = 2.0,
        mean_method: str = "medoid",
        epsilon: float = 1e-6,
        model: SkeletonModel | None = None,
    ):
        self.template_len = template_len
        self.min_exclusion = min_exclusion
        self.cluster_gap_mult = cluster_gap_mult
        self.mean_method = mean_method
        self.epsilon = epsilon
        self.model = model

    def fit(self, X, y=None):
        model = self.model or BODY_25
        seq = normalize_sequence(_as_pose_sequence(X, model))
        grams = gram_sequence(seq)
        self.n_frames_ = grams.shape[0]

        t_len = (
            int(self.template_len)
            if self.template_len is not None
            else _cycles.auto_template_length(self.n_frames_)
        )
        self.template_length_ = t_len
        profile = _cycles.cycle_profile(grams, t_len)
        self.profile_ = profile

        exclusion = (
            int(self.min_exclusion)
            if self.min_exclusion is not None
            else max(1, t_len // 2)
        )
        minima = _cycles.find_local_minima(profile, exclusion)
        self.minima_ = minima
        selected = _cycles.cluster_minima(
            [(t, float(profile.values[t])) for t in minima],
            gap_mult=self.cluster_gap_mult,
        )
        self.selected_minima_ = selected
        self.period_ = _cycles.estimate_period(selected)

        segmentation = _cycles.segment_cycles(grams, self.period_, minima_used=selected)
        self.cycle_ranges_ = segmentation.cycle_ranges
        cycle_stacks = [grams[a : b + 1] for a, b in segmentation.cycle_ranges]
        self.pose_sets_ = _stats.build_pose_sets(cycle_stacks)

        stats, fallbacks = [], []
        for pose_set in self.pose_sets_:
            stat, fell_back = _stats.pose_set_stats(
                pose_set, method=self.mean_method, epsilon=self.epsilon
            )
            stats.append(stat)
            if fell_back:
                fallbacks.append(pose_set.anchor_index)
        self.stats_ = stats
        self.barycenter_fallbacks_ = fallbacks
        self.mean_poses_ = np.stack([s.mean_pose for s in stats])
        self.mean_factors_ = gram_factors(self.mean_poses_)
        self.deviations_ = np.array([s.avg_deviation for s in stats])
        self.precisions_ = np.array([s.precision for s in stats])
        return self

    def __sklearn_is_fitted__(self):
        return hasattr(self, "stats_")


@dataclass
class ComparisonResult:
    """Everything the per-anchor comparison report needs."""

    report: _stats.FitReport
    path: WarpingPath
    trainer: CycleAnalyzer
    user: CycleAnalyzer
    user_sigma_matched: np.ndarray
    mean_pose_distance: np.ndarray


class ExerciseComparator(BaseEstimator):
    """Score a user's sequence against a fitted trainer reference.

    ``fit`` analyzes the trainer sequence; ``predict`` returns the index
    of fit per trainer anchor for a user sequence (near 1: matched
    precision, above 1: user less precise); ``compare`` returns the full
    per-anchor result.
    """

    def __init__(
        self,
        template_len: int | None = None,
        min_exclusion: int | None = None,
        cluster_gap_mult: float = 2.0,
        mean_method: str = "medoid",
        epsilon: float = 1e-6,
        model: SkeletonModel | None = None,
    ):
        self.template_len = template_len
        self.min_exclusion = min_exclusion
        self.cluster_gap_mult = cluster_gap_mult
        self.mean_method = mean_method
        self.epsilon = epsilon
        self.model = model

    def _analyzer(self) -> CycleAnalyzer:
        return CycleAnalyzer(
            template_len=self.template_len,
            min_exclusion=self.min_exclusion,
            cluster_gap_mult=self.cluster_gap_mult,
            mean_method=self.mean_method,
            epsilon=self.epsilon,
            model=self.model,
        )

    def fit(self, X, y=None):
        self.trainer_ = self._analyzer().fit(X)
        return self

    def __sklearn_is_fitted__(self):
        return hasattr(self, "trainer_")

    def compare(self, X) -> ComparisonResult:
        check_is_fitted(self)
        user = self._analyzer().fit(X)
        trainer = self.trainer_

        width = max(trainer.mean_factors_.shape[2], user.mean_factors_.shape[2])
        t_fac = gram_factors(trainer.mean_poses_, width=width)
        u_fac = gram_factors(user.mean_poses_, width=width)
        path = dtw_from_cost(factor_distance_matrix(t_fac, u_fac)).path
        report = _stats.fit_indices(trainer.stats_, user.stats_, path)

        corr = correspondences(path)
        sigma = np.empty(len(trainer.stats_))
        mu_dist = np.empty(len(trainer.stats_))
        for i in range(len(trainer.stats_)):
            matched = corr[i]
            sigma[i] = sum(user.stats_[j].avg_deviation for j in matched) / len(matched)
            mu_dist[i] = sum(
                geodesic_distance(trainer.mean_poses_[i], user.mean_poses_[j])
                for j in matched
            ) / len(matched)
        return ComparisonResult(
            report=report,
            path=path,
            trainer=trainer,
            user=user,
            user_sigma_matched=sigma,
            mean_pose_distance=mu_dist,
        )

    def predict(self, X) -> np.ndarray:
        """Index of fit per trainer anchor for the given user sequence."""
        return np.array([e.fit for e in self.compare(X).report.per_pose])
