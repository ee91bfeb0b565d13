"""Input validation helpers shared across the package."""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, InputError

# Tolerances for the Gram-matrix invariants.
GRAM_SYMMETRY_ATOL = 1e-10
GRAM_EIGENVALUE_FLOOR = -1e-9
GRAM_RANK_RTOL = 1e-9


def as_float_array(x, name: str, ndim: int | None = None) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if ndim is not None and arr.ndim != ndim:
        raise InputError(f"{name} must be a {ndim}-d array, got shape {arr.shape}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains non-finite values")
    return arr


def check_coords(coords, n_joints: int | None = None) -> np.ndarray:
    """Validate a single-pose coordinate block of shape (n, d), d in {2, 3}."""
    arr = as_float_array(coords, "coords", ndim=2)
    n, d = arr.shape
    if d not in (2, 3):
        raise InputError(f"coords must have 2 or 3 columns, got {d}")
    if n_joints is not None and n != n_joints:
        raise DimensionMismatchError(f"expected {n_joints} joints, got {n}")
    return arr


def check_coords_stack(coords, n_joints: int | None = None) -> np.ndarray:
    """Validate a pose-sequence coordinate stack of shape (frames, n, d)."""
    arr = as_float_array(coords, "coords", ndim=3)
    if arr.shape[2] not in (2, 3):
        raise InputError(f"coords must have 2 or 3 columns, got {arr.shape[2]}")
    if n_joints is not None and arr.shape[1] != n_joints:
        raise DimensionMismatchError(
            f"expected {n_joints} joints, got {arr.shape[1]}"
        )
    return arr


def check_gram(g, rank_bound: int | None = None) -> np.ndarray:
    """Validate one Gram matrix: square, symmetric, numerically PSD.

    With ``rank_bound`` also checks that at most that many eigenvalues
    exceed ``GRAM_RANK_RTOL`` relative to the largest one.
    """
    arr = as_float_array(g, "gram", ndim=2)
    n, m = arr.shape
    if n != m:
        raise DimensionMismatchError(f"gram matrix must be square, got {arr.shape}")
    if n and np.abs(arr - arr.T).max() > GRAM_SYMMETRY_ATOL:
        raise InputError("gram matrix is not symmetric")
    lam = np.linalg.eigvalsh(arr)
    if lam.size and lam[0] < GRAM_EIGENVALUE_FLOOR:
        raise InputError(f"gram matrix has eigenvalue {lam[0]:.3e} below the PSD floor")
    if rank_bound is not None and lam.size:
        rank = int((lam > GRAM_RANK_RTOL * max(lam[-1], 0.0)).sum())
        if rank > rank_bound:
            raise InputError(f"gram matrix rank {rank} exceeds bound {rank_bound}")
    return arr


def as_gram_stack(seq, name: str = "sequence") -> np.ndarray:
    """Coerce a list of Gram matrices (or an (m, n, n) array) into a stack."""
    arr = np.asarray(seq, dtype=float)
    if arr.ndim == 2:
        arr = arr[None]
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise DimensionMismatchError(
            f"{name} must stack square matrices, got shape {arr.shape}"
        )
    if arr.size and not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains non-finite values")
    return arr
