"""Rotation-invariant pose geometry on the cone of PSD matrices.

A mean-centered pose ``C`` (n joints x d coordinates) is represented by
its Gram matrix ``G = C C^T``. Two joint configurations that differ only
by a rotation share the same Gram matrix, so any metric between Gram
matrices is a rotation-invariant pose dissimilarity. The metric used
throughout is the Bures/Wasserstein-style geodesic distance on the PSD
cone::

    delta(Gi, Gj) = sqrt( tr(Gi) + tr(Gj) - 2 tr( (Gi^1/2 Gj Gi^1/2)^1/2 ) )

For matrices of rank <= w this equals the orthogonal-Procrustes residual
between rank-w factors, ``min_R || Ci - Cj R ||_F``, which is both much
cheaper and far better conditioned near zero; the scalar entry point and
the vectorized pairwise kernel below evaluate that form.
"""

from __future__ import annotations

import math

import numpy as np

from ._validation import as_gram_stack
from .errors import DimensionMismatchError, EigenFailureError

# Relative cutoff that separates genuine spectrum from numerical noise
# when inferring the factor rank of a Gram matrix.
RANK_EPS = 1e-12


def gram_of(pose) -> np.ndarray:
    """Gram matrix of one pose: mean-center the coordinates, then C C^T.

    Accepts a SkeletonPose or a bare (n, d) coordinate array. The input
    is expected to be normalized already; this function only removes the
    centroid.
    """
    coords = np.asarray(getattr(pose, "coords", pose), dtype=float)
    centered = coords - coords.mean(axis=0)
    return centered @ centered.T


def gram_sequence(seq) -> np.ndarray:
    """Gram matrices for a whole sequence, shape (frames, n, n).

    Accepts a PoseSequence or a (frames, n, d) coordinate stack.
    """
    coords = np.asarray(
        seq.coords_array() if hasattr(seq, "coords_array") else seq, dtype=float
    )
    centered = coords - coords.mean(axis=1, keepdims=True)
    return np.einsum("fnd,fmd->fnm", centered, centered)


def psd_sqrt(g) -> np.ndarray:
    """Symmetric PSD square root via eigendecomposition.

    Eigenvalues are clamped at zero before the square root, so slightly
    indefinite inputs (numerical noise) still yield a real result.
    """
    arr = np.asarray(g, dtype=float)
    try:
        lam, vec = np.linalg.eigh(arr)
    except np.linalg.LinAlgError as exc:
        raise EigenFailureError(f"eigendecomposition failed: {exc}") from exc
    root = (vec * np.sqrt(np.clip(lam, 0.0, None))) @ vec.T
    return (root + root.T) / 2.0


def gram_factors(grams, width: int | None = None) -> np.ndarray:
    """Rank-revealing factors C with C C^T ~= G, shape (..., n, width).

    ``width`` defaults to the largest numerical rank found in the stack.
    Any factor basis gives identical distances, so the eigenbasis choice
    made here is immaterial beyond determinism.
    """
    stack = as_gram_stack(grams, "grams")
    try:
        lam, vec = np.linalg.eigh(stack)
    except np.linalg.LinAlgError as exc:
        raise EigenFailureError(f"eigendecomposition failed: {exc}") from exc
    lam = np.clip(lam, 0.0, None)
    if width is None:
        top = lam[:, -1].max() if lam.size else 0.0
        width = max(1, int((lam > RANK_EPS * max(top, np.finfo(float).tiny)).sum(axis=1).max()))
    factors = vec[:, :, -width:] * np.sqrt(lam[:, None, -width:])
    if np.asarray(grams).ndim == 2:
        return factors[0]
    return factors


def _nuclear_norms(m: np.ndarray) -> np.ndarray:
    """Sum of singular values for a (..., w, w) stack; closed form for w <= 2."""
    w = m.shape[-1]
    if w == 1:
        return np.abs(m[..., 0, 0])
    if w == 2:
        fro2 = np.einsum("...ij,...ij->...", m, m)
        det = m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]
        return np.sqrt(np.clip(fro2 + 2.0 * np.abs(det), 0.0, None))
    return np.linalg.svd(m, compute_uv=False).sum(axis=-1)


def factor_distance_matrix(fa: np.ndarray, fb: np.ndarray) -> np.ndarray:
    """All pairwise geodesic distances between two factor stacks.

    ``fa`` is (la, n, w), ``fb`` is (lb, n, w); returns (la, lb). Uses
    the identity delta^2 = ||Ci||^2 + ||Cj||^2 - 2 ||Ci^T Cj||_* with the
    nuclear norm evaluated on w x w blocks, fully vectorized.
    """
    fa = np.asarray(fa, dtype=float)
    fb = np.asarray(fb, dtype=float)
    if fa.shape[1:] != fb.shape[1:]:
        raise DimensionMismatchError(
            f"factor stacks disagree: {fa.shape[1:]} vs {fb.shape[1:]}"
        )
    cross = np.einsum("inw,jnv->ijwv", fa, fb)
    sq_a = np.einsum("inw,inw->i", fa, fa)
    sq_b = np.einsum("jnw,jnw->j", fb, fb)
    d2 = sq_a[:, None] + sq_b[None, :] - 2.0 * _nuclear_norms(cross)
    return np.sqrt(np.clip(d2, 0.0, None))


def pairwise_distances(a, b) -> np.ndarray:
    """Pairwise geodesic distances between two stacks of Gram matrices."""
    ga = as_gram_stack(a, "a")
    gb = as_gram_stack(b, "b")
    if ga.shape[1] != gb.shape[1]:
        raise DimensionMismatchError(
            f"gram sizes disagree: {ga.shape[1]} vs {gb.shape[1]}"
        )
    fa = gram_factors(ga)
    fb = gram_factors(gb)
    width = max(fa.shape[2], fb.shape[2])
    if fa.shape[2] < width:
        fa = gram_factors(ga, width=width)
    if fb.shape[2] < width:
        fb = gram_factors(gb, width=width)
    return factor_distance_matrix(fa, fb)


def geodesic_distance(gi, gj) -> float:
    """Geodesic distance between two Gram matrices on the PSD cone.

    Evaluated as the orthogonal-Procrustes residual between rank-revealing
    factors, ``min_R ||Ci - Cj R||_F``, which equals the trace formula but
    stays exactly symmetric and non-negative in floating point.
    """
    ga = np.asarray(gi, dtype=float)
    gb = np.asarray(gj, dtype=float)
    if ga.ndim != 2 or ga.shape != gb.shape or ga.shape[0] != ga.shape[1]:
        raise DimensionMismatchError(
            f"gram matrices disagree: {ga.shape} vs {gb.shape}"
        )
    fa = gram_factors(ga)
    fb = gram_factors(gb)
    width = max(fa.shape[1], fb.shape[1])
    if fa.shape[1] < width:
        fa = np.pad(fa, ((0, 0), (0, width - fa.shape[1])))
    if fb.shape[1] < width:
        fb = np.pad(fb, ((0, 0), (0, width - fb.shape[1])))
    u, _, vt = np.linalg.svd(fb.T @ fa)
    return float(np.linalg.norm(fa - fb @ (u @ vt)))
