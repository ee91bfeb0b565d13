"""Period detection for cyclic activities.

The template window (the first T poses) is slid along the sequence; the
normalized DTW distance between the template and each window forms the
cycle profile. Its deep local minima mark the frames where the action
repeats, and the mean gap between the selected minima estimates the
period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _parallel
from ._validation import as_gram_stack
from .errors import (
    EmptyListError,
    InputError,
    NoMinimaError,
    SequenceTooShortError,
    TemplateTooLongError,
    TemplateTooShortError,
    TooFewCyclesError,
)
from .manifold import factor_distance_matrix, gram_factors

_WINDOW_CHUNK = 256


@dataclass
class CycleProfile:
    """Normalized template-vs-window distances, indexed by window start."""

    values: np.ndarray
    template_length: int

    def __len__(self) -> int:
        return len(self.values)


@dataclass
class CycleSegmentation:
    """Estimated period plus the fixed-length cycle intervals."""

    period: float
    cycle_ranges: list[tuple[int, int]]
    minima_used: list[int] = field(default_factory=list)

    @property
    def num_cycles(self) -> int:
        return len(self.cycle_ranges)


def auto_template_length(seq_len: int) -> int:
    """Default template length: an eighth of the sequence, at least 2."""
    if seq_len < 8:
        raise SequenceTooShortError(
            f"need at least 8 frames to pick a template, got {seq_len}"
        )
    return max(2, seq_len // 8)


def _window_dtw_values(dist_rows: np.ndarray, t_len: int) -> np.ndarray:
    """Normalized DTW cost of the template against every window.

    ``dist_rows`` holds the distances from the first ``t_len`` frames to
    every frame, shape (t_len, seq_len). All windows are swept through
    one dynamic program vectorized over the window axis; ties prefer the
    diagonal step, then (0,1), then (1,0), exactly as in ``dtw_from_cost``.
    """
    seq_len = dist_rows.shape[1]
    n_win = seq_len - t_len + 1
    # windows[i, t, j] == dist_rows[i, t + j], a strided view
    windows = np.lib.stride_tricks.sliding_window_view(dist_rows, t_len, axis=1)

    def solve(win_range: tuple[int, int]) -> np.ndarray:
        lo, hi = win_range
        w = hi - lo
        cost = np.empty((w, t_len))
        plen = np.empty((w, t_len))
        row0 = windows[0, lo:hi]
        cost[:, 0] = row0[:, 0]
        plen[:, 0] = 1.0
        for j in range(1, t_len):
            cost[:, j] = cost[:, j - 1] + row0[:, j]
            plen[:, j] = j + 1.0
        prev_c, prev_l = cost, plen
        cur_c = np.empty_like(cost)
        cur_l = np.empty_like(plen)
        for i in range(1, t_len):
            ci = windows[i, lo:hi]
            cur_c[:, 0] = prev_c[:, 0] + ci[:, 0]
            cur_l[:, 0] = prev_l[:, 0] + 1.0
            for j in range(1, t_len):
                diag = prev_c[:, j - 1]
                left = cur_c[:, j - 1]
                up = prev_c[:, j]
                best = np.minimum(diag, np.minimum(left, up))
                steps = np.where(
                    diag == best,
                    prev_l[:, j - 1],
                    np.where(left == best, cur_l[:, j - 1], prev_l[:, j]),
                )
                cur_c[:, j] = ci[:, j] + best
                cur_l[:, j] = steps + 1.0
            prev_c, cur_c = cur_c, prev_c
            prev_l, cur_l = cur_l, prev_l
        return prev_c[:, -1] / prev_l[:, -1]

    chunks = _parallel.chunk_ranges(n_win, _WINDOW_CHUNK)
    return np.concatenate(_parallel.run_chunked(solve, chunks))


def cycle_profile(seq, template_length: int) -> CycleProfile:
    """Distance of the leading template window to every window of the sequence.

    ``seq`` is a stack or list of Gram matrices. Entry t is the
    normalized DTW distance between frames [0, T) and [t, t + T).
    """
    grams = as_gram_stack(seq, "seq")
    seq_len = grams.shape[0]
    t_len = int(template_length)
    if t_len < 2:
        raise TemplateTooShortError(f"template length {t_len} < 2")
    if 2 * t_len > seq_len:
        raise TemplateTooLongError(
            f"template length {t_len} exceeds half the sequence ({seq_len} frames)"
        )
    factors = gram_factors(grams)
    dist_rows = factor_distance_matrix(factors[:t_len], factors)
    values = _window_dtw_values(dist_rows, t_len)
    return CycleProfile(values=values, template_length=t_len)


def find_local_minima(profile: CycleProfile, exclusion: int) -> list[int]:
    """Indices that minimize the profile over a +/- ``exclusion`` window.

    Flat runs keep only their first index; index 0 (the trivial
    self-match) is never reported.
    """
    if exclusion < 1:
        raise InputError(f"exclusion radius must be >= 1, got {exclusion}")
    v = profile.values
    n = len(v)
    out: list[int] = []
    run_start = None
    run_value = None
    for t in range(1, n):
        lo = max(0, t - exclusion)
        hi = min(n, t + exclusion + 1)
        if v[t] <= v[lo:hi].min():
            if run_start is not None and t == run_start + 1 and v[t] == run_value:
                run_start = t  # same flat run, keep the first index
                continue
            out.append(t)
            run_start = t
            run_value = v[t]
        else:
            run_start = None
    return out


# A value gap only separates clusters when it is also large relative to
# the lowest minimum: genuine period matches scatter by a fraction of
# their own level, while spurious minima sit far above it.
CLUSTER_FLOOR_FRAC = 2.0
CLUSTER_FLOOR_ABS = 1e-6


def cluster_minima(minima: list[tuple[int, float]], gap_mult: float = 2.0) -> list[int]:
    """Select the period-marking minima by single-linkage clustering on value.

    Minima are sorted by value; cutting every inter-value gap larger than
    the threshold yields the clusters (this is exactly single linkage in
    one dimension). The threshold is ``gap_mult`` times the lower-median
    gap, floored at ``CLUSTER_FLOOR_FRAC`` times the lowest minimum value.
    The cluster with the lowest mean value and at least two members wins;
    with no such cluster all minima are returned. Output indices are
    sorted ascending.
    """
    if not minima:
        raise NoMinimaError("no minima to cluster")
    if len(minima) == 1:
        return [int(minima[0][0])]
    by_value = sorted(minima, key=lambda m: (m[1], m[0]))
    gaps = [b[1] - a[1] for a, b in zip(by_value, by_value[1:])]
    median_gap = sorted(gaps)[(len(gaps) - 1) // 2]
    floor = max(CLUSTER_FLOOR_FRAC * by_value[0][1], CLUSTER_FLOOR_ABS)
    threshold = max(gap_mult * median_gap, floor)

    clusters: list[list[tuple[int, float]]] = [[by_value[0]]]
    for gap, item in zip(gaps, by_value[1:]):
        if gap > threshold:
            clusters.append([item])
        else:
            clusters[-1].append(item)

    eligible = [c for c in clusters if len(c) >= 2]
    if not eligible:
        return sorted(int(i) for i, _ in minima)
    best = min(eligible, key=lambda c: sum(v for _, v in c) / len(c))
    return sorted(int(i) for i, _ in best)


def estimate_period(selected_indices) -> float:
    """Mean gap between consecutive selected minima.

    A single minimum is itself the period (first repeat of the template).
    """
    idx = sorted(int(i) for i in selected_indices)
    if not idx:
        raise EmptyListError("cannot estimate a period from no minima")
    if len(idx) == 1:
        return float(idx[0])
    gaps = [b - a for a, b in zip(idx, idx[1:])]
    return sum(gaps) / len(gaps)


def segment_cycles(seq, period: float, minima_used=()) -> CycleSegmentation:
    """Cut the sequence into consecutive cycles of round(period) frames.

    ``seq`` may be anything with a length (pose sequence, Gram stack).
    A trailing partial cycle is discarded.
    """
    seq_len = len(seq)
    if period <= 0:
        raise InputError(f"period must be positive, got {period}")
    frames = max(1, int(math.floor(period + 0.5)))
    num = seq_len // frames
    if num < 2:
        raise TooFewCyclesError(
            f"{seq_len} frames hold fewer than 2 cycles of {frames} frames"
        )
    ranges = [(k * frames, (k + 1) * frames - 1) for k in range(num)]
    return CycleSegmentation(
        period=float(period), cycle_ranges=ranges, minima_used=list(minima_used)
    )
