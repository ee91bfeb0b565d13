"""Synthetic cyclic skeleton sequences with known ground truth.

Stands in for recorded exercise videos: a jumping-jack-style articulated
figure on the 25-joint skeleton whose limb angles follow sinusoids of a
known period, with optional coordinate noise and per-cycle phase jitter.
Also houses the brute-force oracles used to validate the production
distance and alignment code; the oracles deliberately share no code with
those modules.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    InvalidConfigError,
    LengthMismatchError,
    TooLongForOracleError,
)
from .skeleton import BODY_25, PoseSequence, SkeletonModel, SkeletonPose

ORACLE_MAX_LEN = 8


@dataclass(frozen=True)
class SynthConfig:
    """Ground-truth parameters of a generated sequence."""

    period: int
    num_cycles: int
    noise_sigma: float = 0.0
    phase_jitter: int = 0
    amplitude: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.period < 8:
            raise InvalidConfigError(f"period must be >= 8 frames, got {self.period}")
        if self.num_cycles < 2:
            raise InvalidConfigError(f"need >= 2 cycles, got {self.num_cycles}")
        if self.noise_sigma < 0:
            raise InvalidConfigError("noise_sigma must be >= 0")
        if not 0 <= self.phase_jitter < self.period / 4:
            raise InvalidConfigError(
                f"phase_jitter {self.phase_jitter} must lie in [0, period/4)"
            )


# Base figure in image-like coordinates (y grows downward), sized so the
# torso spans 160 units. Offsets are relative to the named anchor joint.
_MIDHIP = np.array([960.0, 600.0])
_NECK_OFFSET = np.array([0.0, -160.0])
_HEAD = {  # relative to neck
    0: (0.0, -40.0),    # nose
    15: (-12.0, -52.0), # right eye
    16: (12.0, -52.0),  # left eye
    17: (-24.0, -46.0), # right ear
    18: (24.0, -46.0),  # left ear
}
_SHOULDER = 55.0
_UPPER_ARM = 70.0
_FOREARM = 65.0
_HIP = 32.0
_THIGH = 95.0
_SHIN = 90.0
_FOOT = {  # relative to ankle, mirrored via the side sign
    "big_toe": (-10.0, 18.0),
    "small_toe": (-20.0, 14.0),
    "heel": (6.0, 8.0),
}


def _figure(theta: float, amplitude: float) -> np.ndarray:
    """Joint coordinates of the articulated figure at cycle phase theta.

    Arms swing on sin(theta) and legs spread on 1 - cos(theta), so the
    pose traces a closed loop with no repeated configuration inside one
    cycle.
    """
    coords = np.zeros((25, 2))
    neck = _MIDHIP + _NECK_OFFSET
    coords[8] = _MIDHIP
    coords[1] = neck
    for joint, off in _HEAD.items():
        coords[joint] = neck + off

    # arm abduction angle from hanging straight down
    arm = math.radians(90.0 + 75.0 * amplitude * math.sin(theta))
    leg = math.radians(12.5 * amplitude * (1.0 - math.cos(theta)))
    for side, sign in (("right", -1.0), ("left", 1.0)):
        arm_dir = np.array([sign * math.sin(arm), math.cos(arm)])
        shoulder = neck + np.array([sign * _SHOULDER, 8.0])
        elbow = shoulder + _UPPER_ARM * arm_dir
        wrist = elbow + _FOREARM * arm_dir
        leg_dir = np.array([sign * math.sin(leg), math.cos(leg)])
        hip = _MIDHIP + np.array([sign * _HIP, 0.0])
        knee = hip + _THIGH * leg_dir
        ankle = knee + _SHIN * leg_dir
        if side == "right":
            coords[2], coords[3], coords[4] = shoulder, elbow, wrist
            coords[9], coords[10], coords[11] = hip, knee, ankle
            toe_ix = (22, 23, 24)
        else:
            coords[5], coords[6], coords[7] = shoulder, elbow, wrist
            coords[12], coords[13], coords[14] = hip, knee, ankle
            toe_ix = (19, 20, 21)
        for joint, key in zip(toe_ix, ("big_toe", "small_toe", "heel")):
            dx, dy = _FOOT[key]
            coords[joint] = ankle + np.array([sign * dx, dy])
    return coords


def generate_cyclic_sequence(cfg: SynthConfig, model: SkeletonModel = BODY_25) -> PoseSequence:
    """Deterministic cyclic sequence of ``period * num_cycles`` frames.

    Zero noise and jitter give bit-exact frame-level periodicity; noise
    adds i.i.d. Gaussian offsets of ``noise_sigma`` times the torso
    length; jitter shifts each cycle's phase by a seeded uniform integer
    in [-phase_jitter, +phase_jitter].
    """
    if (
        model.joint_count != 25
        or model.neck_index != BODY_25.neck_index
        or model.midhip_index != BODY_25.midhip_index
    ):
        raise InvalidConfigError("the generator is built on the 25-joint topology")
    rng = np.random.default_rng(cfg.seed)
    jitters = (
        rng.integers(-cfg.phase_jitter, cfg.phase_jitter + 1, size=cfg.num_cycles)
        if cfg.phase_jitter > 0
        else np.zeros(cfg.num_cycles, dtype=int)
    )
    n_frames = cfg.period * cfg.num_cycles
    torso = float(np.linalg.norm(_NECK_OFFSET))
    frames = np.empty((n_frames, 25, 2))
    for f in range(n_frames):
        phase = (f % cfg.period) + jitters[f // cfg.period]
        theta = 2.0 * math.pi * phase / cfg.period
        frames[f] = _figure(theta, cfg.amplitude)
    if cfg.noise_sigma > 0:
        frames += rng.normal(0.0, cfg.noise_sigma * torso, size=frames.shape)
    poses = [
        SkeletonPose(coords=frames[f], confidence=np.ones(25), frame_index=f)
        for f in range(n_frames)
    ]
    return PoseSequence(poses=poses, model=model)


def to_openpose_document(pose: SkeletonPose) -> dict:
    """One pose as an OpenPose-style frame document."""
    if pose.dim == 2:
        key, columns = "pose_keypoints_2d", 3
    else:
        key, columns = "pose_keypoints_3d", 4
    table = np.empty((pose.joint_count, columns))
    table[:, :-1] = pose.coords
    table[:, -1] = pose.confidence
    return {"version": 1.3, "people": [{"person_id": [-1], key: table.ravel().tolist()}]}


def write_openpose_sequence(seq: PoseSequence, dest) -> Path:
    """Write a sequence in the OpenPose JSON layout read by ``load_sequence``.

    A ``.jsonl`` destination gets one frame document per line; any other
    path becomes a directory of zero-padded per-frame ``*_keypoints.json``
    files. Output bytes are deterministic.
    """
    dest = Path(dest)
    docs = [json.dumps(to_openpose_document(p), separators=(",", ":")) for p in seq.poses]
    if dest.suffix == ".jsonl":
        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_text("\n".join(docs) + "\n")
    else:
        dest.mkdir(parents=True, exist_ok=True)
        for idx, doc in enumerate(docs):
            (dest / f"frame_{idx:012d}_keypoints.json").write_text(doc)
    return dest


def brute_force_dtw(a, b, cost) -> float:
    """Minimum cumulative cost over all monotone warping paths, by enumeration.

    ``cost(x, y)`` prices one matched pair. Paths run from (0, 0) to the
    final pair under steps {(1,0), (0,1), (1,1)}; costs accumulate in
    path order, which keeps results bit-comparable with a forward dynamic
    program over the same values. Purely exponential on purpose: this is
    an oracle, not an algorithm.
    """
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        raise TooLongForOracleError("oracle needs non-empty sequences")
    if la > ORACLE_MAX_LEN or lb > ORACLE_MAX_LEN:
        raise TooLongForOracleError(
            f"oracle handles lengths <= {ORACLE_MAX_LEN}, got {la}x{lb}"
        )

    best = math.inf
    stack = [(0, 0, cost(a[0], b[0]))]
    while stack:
        i, j, acc = stack.pop()
        if i == la - 1 and j == lb - 1:
            best = min(best, acc)
            continue
        if i + 1 < la and j + 1 < lb:
            stack.append((i + 1, j + 1, acc + cost(a[i + 1], b[j + 1])))
        if j + 1 < lb:
            stack.append((i, j + 1, acc + cost(a[i], b[j + 1])))
        if i + 1 < la:
            stack.append((i + 1, j, acc + cost(a[i + 1], b[j])))
    return best


def commuting_distance_oracle(eigs_i, eigs_j) -> float:
    """Closed-form geodesic distance for simultaneously diagonal PSD matrices.

    Given matched eigenvalue lists, the distance is the Euclidean norm of
    the difference of the eigenvalue square roots.
    """
    lam = list(eigs_i)
    mu = list(eigs_j)
    if len(lam) != len(mu):
        raise LengthMismatchError(f"eigenvalue lists differ: {len(lam)} vs {len(mu)}")
    return math.sqrt(sum((math.sqrt(x) - math.sqrt(y)) ** 2 for x, y in zip(lam, mu)))
