"""Dynamic time warping between pose sequences.

The local cost is the geodesic distance between Gram matrices, the step
pattern is the unconstrained {(1,0), (0,1), (1,1)} set with no window,
and exact cost ties prefer the diagonal step, then (0,1), then (1,0).
The resulting warping is what lets poses from cycles executed at
different speeds be matched up; it is deliberately not symmetric in its
arguments and is not a true metric.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import as_gram_stack
from .errors import EmptySequenceError, InputError
from .manifold import pairwise_distances

# direction codes in the DP table
_DIAG, _LEFT, _UP = 0, 1, 2


@dataclass(frozen=True)
class WarpingPath:
    """Monotone index correspondence between two sequences.

    Starts at (0, 0), ends at (len_a - 1, len_b - 1) and advances i, j or
    both by exactly one at every step.
    """

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.pairs:
            raise InputError("warping path cannot be empty")
        if self.pairs[0] != (0, 0):
            raise InputError("warping path must start at (0, 0)")
        for (i0, j0), (i1, j1) in zip(self.pairs, self.pairs[1:]):
            if (i1 - i0, j1 - j0) not in ((1, 0), (0, 1), (1, 1)):
                raise InputError(f"illegal step ({i0},{j0}) -> ({i1},{j1})")

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @property
    def len_a(self) -> int:
        return self.pairs[-1][0] + 1

    @property
    def len_b(self) -> int:
        return self.pairs[-1][1] + 1


@dataclass(frozen=True)
class AlignmentResult:
    """Optimal path plus its cumulative and per-step cost."""

    path: WarpingPath
    total_cost: float
    normalized_cost: float


def dtw_from_cost(cost) -> AlignmentResult:
    """Dynamic time warping over a precomputed local-cost matrix."""
    c = np.asarray(cost, dtype=float)
    if c.ndim != 2 or c.size == 0:
        raise EmptySequenceError("cost matrix must be 2-d and non-empty")
    la, lb = c.shape
    acc = np.empty((la, lb))
    direction = np.empty((la, lb), dtype=np.int8)
    acc[0, 0] = c[0, 0]
    direction[0, 0] = _DIAG
    for j in range(1, lb):
        acc[0, j] = acc[0, j - 1] + c[0, j]
        direction[0, j] = _LEFT
    for i in range(1, la):
        acc[i, 0] = acc[i - 1, 0] + c[i, 0]
        direction[i, 0] = _UP
        row = acc[i]
        prev = acc[i - 1]
        ci = c[i]
        for j in range(1, lb):
            diag = prev[j - 1]
            left = row[j - 1]
            up = prev[j]
            if diag <= left and diag <= up:
                best, direction[i, j] = diag, _DIAG
            elif left <= up:
                best, direction[i, j] = left, _LEFT
            else:
                best, direction[i, j] = up, _UP
            row[j] = ci[j] + best

    pairs = [(la - 1, lb - 1)]
    i, j = la - 1, lb - 1
    while (i, j) != (0, 0):
        d = direction[i, j]
        if d == _DIAG and i > 0 and j > 0:
            i, j = i - 1, j - 1
        elif d == _LEFT:
            j -= 1
        else:
            i -= 1
        pairs.append((i, j))
    pairs.reverse()
    path = WarpingPath(tuple(pairs))
    total = float(acc[-1, -1])
    return AlignmentResult(path=path, total_cost=total, normalized_cost=total / len(path))


def dtw(a, b) -> AlignmentResult:
    """Align two sequences of Gram matrices.

    The path minimizes the cumulative geodesic distance; the normalized
    cost divides by the path length so sequences of different lengths
    stay comparable.
    """
    if len(a) == 0 or len(b) == 0:
        raise EmptySequenceError("dtw requires non-empty sequences")
    ga = as_gram_stack(a, "a")
    gb = as_gram_stack(b, "b")
    return dtw_from_cost(pairwise_distances(ga, gb))


def sequence_distance(a, b) -> float:
    """Path-length-normalized DTW cost between two Gram sequences."""
    return dtw(a, b).normalized_cost


def correspondences(path: WarpingPath) -> dict[int, list[int]]:
    """Map each index of sequence A to its matched indices in sequence B.

    Every A index maps to a non-empty contiguous run of B indices, and
    the runs jointly cover all of B.
    """
    out: dict[int, list[int]] = {}
    for i, j in path:
        out.setdefault(i, []).append(j)
    return out
