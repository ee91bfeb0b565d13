"""Cross-cycle pose statistics and trainer/user comparison indices.

Consecutive cycles are registered in time with DTW; chaining the
correspondences groups every pose of the first cycle with its matches
in all later cycles (its pose-set). Each pose-set is summarized by a
mean pose, the average geodesic deviation from it, and a precision
index inversely proportional to that deviation. Comparing the per-pose
precision of two performers yields the index of fit: values near 1 mean
matched consistency, values well above 1 flag poses the second performer
repeats less precisely than the first.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._validation import as_gram_stack
from .alignment import WarpingPath, correspondences, dtw, dtw_from_cost
from .errors import (
    BarycenterNonConvergenceError,
    EmptySequenceError,
    EmptySetError,
    InputError,
    PathMismatchError,
    TooFewCyclesError,
)
from .manifold import (
    factor_distance_matrix,
    geodesic_distance,
    gram_factors,
    psd_sqrt,
)

PRECISION_EPS = 1e-6
BARYCENTER_TOL = 1e-8
BARYCENTER_MAX_ITER = 100


@dataclass
class PoseSet:
    """One anchor pose of the first cycle plus its matches in later cycles."""

    anchor_index: int
    member_ids: list[tuple[int, int]]  # (cycle_id, frame within cycle)
    grams: np.ndarray  # (n_members, n, n), aligned with member_ids

    def __len__(self) -> int:
        return len(self.member_ids)


@dataclass
class PoseSetStats:
    """Cross-sectional summary of one pose-set."""

    mean_pose: np.ndarray
    avg_deviation: float
    precision: float


@dataclass
class BarycenterResult:
    """Fixed-point barycenter outcome, including the residual trail."""

    matrix: np.ndarray
    converged: bool
    n_iter: int
    residuals: list[float] = field(default_factory=list)


@dataclass
class FitEntry:
    anchor_index: int
    trainer_precision: float
    user_precision: float
    fit: float


@dataclass
class FitReport:
    """Per-anchor fit indices with the best/worst anchors flagged."""

    per_pose: list[FitEntry]
    best_index: int
    worst_index: int


def build_pose_sets(cycles) -> list[PoseSet]:
    """Group corresponding poses across cycles via chained DTW.

    ``cycles`` is a list of Gram-matrix stacks, one per cycle. Each
    consecutive pair is aligned with DTW and the correspondences are
    composed transitively, so every frame of cycle 0 collects at least
    one match in every later cycle.
    """
    stacks = [as_gram_stack(c, f"cycle {k}") for k, c in enumerate(cycles)]
    if len(stacks) < 2:
        raise TooFewCyclesError("pose-sets need at least 2 cycles")

    # one joint factorization keeps all cycles at a common width
    bounds = np.cumsum([0] + [s.shape[0] for s in stacks])
    factors = gram_factors(np.concatenate(stacks))
    cyc_factors = [factors[a:b] for a, b in zip(bounds, bounds[1:])]

    step_corrs = []
    for cur, nxt in zip(cyc_factors, cyc_factors[1:]):
        cost = factor_distance_matrix(cur, nxt)
        step_corrs.append(correspondences(dtw_from_cost(cost).path))

    pose_sets = []
    for anchor in range(stacks[0].shape[0]):
        matched = {anchor}
        member_ids = [(0, anchor)]
        for cycle_id, corr in enumerate(step_corrs, start=1):
            matched = sorted({j for i in matched for j in corr[i]})
            member_ids.extend((cycle_id, j) for j in matched)
        grams = np.stack([stacks[c][f] for c, f in member_ids])
        pose_sets.append(
            PoseSet(anchor_index=anchor, member_ids=member_ids, grams=grams)
        )
    return pose_sets


def medoid_pose(pose_set: PoseSet) -> tuple[np.ndarray, int]:
    """Member minimizing the summed distance to all other members.

    Ties resolve to the lowest (cycle_id, frame) member.
    """
    if len(pose_set) == 0:
        raise EmptySetError("empty pose-set has no medoid")
    factors = gram_factors(pose_set.grams)
    dists = factor_distance_matrix(factors, factors)
    np.fill_diagonal(dists, 0.0)
    sums = dists.sum(axis=1)
    order = sorted(range(len(pose_set)), key=lambda k: tuple(pose_set.member_ids[k]))
    idx = min(order, key=lambda k: sums[k])
    return pose_set.grams[idx].copy(), idx


def bures_barycenter(
    grams,
    init=None,
    max_iter: int = BARYCENTER_MAX_ITER,
    tol: float = BARYCENTER_TOL,
    strict: bool = False,
) -> BarycenterResult:
    """Fixed-point barycenter of PSD matrices under the geodesic distance.

    The iteration runs on the range of the initial matrix (members are
    projected there), which keeps every step strictly positive definite
    and the residuals monotonically shrinking even for rank-deficient
    inputs. Stops when consecutive iterates are closer than ``tol`` in
    geodesic distance.
    """
    stack = as_gram_stack(grams, "grams")
    if stack.shape[0] == 0:
        raise EmptySetError("barycenter of an empty set")
    start = stack[0] if init is None else np.asarray(init, dtype=float)

    lam, vec = np.linalg.eigh(start)
    keep = lam > 1e-12 * max(lam[-1], np.finfo(float).tiny)
    if not keep.any():  # zero matrix: already the mean of its own range
        return BarycenterResult(matrix=start.copy(), converged=True, n_iter=0)
    basis = vec[:, keep]
    members = np.einsum("ni,knm,mj->kij", basis, stack, basis)
    current = basis.T @ start @ basis

    residuals: list[float] = []
    converged = False
    for _ in range(max_iter):
        root = psd_sqrt(current)
        mean_map = np.mean([psd_sqrt(root @ m @ root) for m in members], axis=0)
        lam_c, vec_c = np.linalg.eigh(current)
        lam_c = np.clip(lam_c, 0.0, None)
        inv_root = (
            vec_c
            * np.where(lam_c > 1e-15 * max(lam_c[-1], np.finfo(float).tiny),
                       1.0 / np.sqrt(np.where(lam_c > 0, lam_c, 1.0)), 0.0)
        ) @ vec_c.T
        nxt = inv_root @ mean_map @ mean_map @ inv_root
        nxt = (nxt + nxt.T) / 2.0
        residuals.append(geodesic_distance(current, nxt))
        current = nxt
        if residuals[-1] < tol:
            converged = True
            break
    if strict and not converged:
        raise BarycenterNonConvergenceError(
            f"barycenter residual {residuals[-1]:.3e} after {max_iter} iterations"
        )
    lifted = basis @ current @ basis.T
    return BarycenterResult(
        matrix=(lifted + lifted.T) / 2.0,
        converged=converged,
        n_iter=len(residuals),
        residuals=residuals,
    )


def mean_pose(pose_set: PoseSet, method: str = "medoid") -> np.ndarray:
    """Mean pose of a pose-set.

    ``medoid`` (default) picks the member minimizing the summed distance
    to the others; ``barycenter`` runs the fixed-point iteration seeded
    at the medoid and falls back to the medoid if it does not converge.
    """
    if method not in ("medoid", "barycenter"):
        raise InputError(f"unknown mean method {method!r}")
    matrix, _ = medoid_pose(pose_set)
    if method == "medoid":
        return matrix
    result = bures_barycenter(pose_set.grams, init=matrix)
    if not result.converged:
        return matrix
    return result.matrix


def average_deviation(pose_set: PoseSet, mu) -> float:
    """Mean geodesic distance of the members from the mean pose."""
    if len(pose_set) == 0:
        raise EmptySetError("empty pose-set has no deviation")
    mu = np.asarray(mu, dtype=float)
    dists = [geodesic_distance(g, mu) for g in pose_set.grams]
    return float(sum(dists) / len(dists))


def precision_index(sigma: float, epsilon: float = PRECISION_EPS) -> float:
    """Precision of a pose-set: inverse of its average deviation.

    ``epsilon`` caps the value for perfectly repeated poses.
    """
    if sigma < 0:
        raise InputError(f"deviation must be non-negative, got {sigma}")
    return 1.0 / (sigma + epsilon)


def pose_set_stats(
    pose_set: PoseSet, method: str = "medoid", epsilon: float = PRECISION_EPS
) -> tuple[PoseSetStats, bool]:
    """Full summary of one pose-set; also reports a barycenter fallback."""
    fallback = False
    matrix, _ = medoid_pose(pose_set)
    if method == "barycenter":
        result = bures_barycenter(pose_set.grams, init=matrix)
        if result.converged:
            matrix = result.matrix
        else:
            fallback = True
    elif method != "medoid":
        raise InputError(f"unknown mean method {method!r}")
    sigma = average_deviation(pose_set, matrix)
    return (
        PoseSetStats(
            mean_pose=matrix,
            avg_deviation=sigma,
            precision=precision_index(sigma, epsilon),
        ),
        fallback,
    )


def align_mean_sequences(user_means, trainer_means) -> WarpingPath:
    """DTW path between the two mean-pose sequences, trainer as reference."""
    if len(user_means) == 0 or len(trainer_means) == 0:
        raise EmptySequenceError("mean sequences must be non-empty")
    return dtw(trainer_means, user_means).path


def fit_indices(
    trainer_stats: list[PoseSetStats],
    user_stats: list[PoseSetStats],
    path: WarpingPath,
) -> FitReport:
    """Index of fit per trainer anchor: trainer precision over user precision.

    When one trainer anchor matches several user indices, the user
    precisions are averaged arithmetically before the ratio. The best
    anchor has the lowest fit, the worst the highest; ties resolve to
    the lowest anchor index.
    """
    if path.len_a != len(trainer_stats) or path.len_b != len(user_stats):
        raise PathMismatchError(
            f"path spans {path.len_a}x{path.len_b}, stats are "
            f"{len(trainer_stats)}x{len(user_stats)}"
        )
    corr = correspondences(path)
    entries = []
    for i, t_stat in enumerate(trainer_stats):
        matched = corr[i]
        user_precision = sum(user_stats[j].precision for j in matched) / len(matched)
        entries.append(
            FitEntry(
                anchor_index=i,
                trainer_precision=t_stat.precision,
                user_precision=user_precision,
                fit=t_stat.precision / user_precision,
            )
        )
    fits = [e.fit for e in entries]
    return FitReport(
        per_pose=entries,
        best_index=int(np.argmin(fits)),
        worst_index=int(np.argmax(fits)),
    )
