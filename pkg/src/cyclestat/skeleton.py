"""Skeleton keypoint I/O and pose normalization.

Parses OpenPose-style JSON keypoint streams into typed pose sequences
and normalizes them for translation/scale invariance: the mid-hip joint
is moved to the origin and coordinates are divided by the torso length
(neck to mid-hip distance).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ._validation import check_coords
from .errors import (
    AllJointsMissingError,
    DegenerateTorsoError,
    EmptyFrameError,
    GapTooLongError,
    InputError,
    MalformedKeypointsError,
    NoFramesError,
)

MAX_GAP_FRAMES = 5
TORSO_EPS = 1e-9

BODY25_JOINT_NAMES = (
    "Nose", "Neck", "RShoulder", "RElbow", "RWrist",
    "LShoulder", "LElbow", "LWrist", "MidHip", "RHip",
    "RKnee", "RAnkle", "LHip", "LKnee", "LAnkle",
    "REye", "LEye", "REar", "LEar", "LBigToe",
    "LSmallToe", "LHeel", "RBigToe", "RSmallToe", "RHeel",
)


@dataclass(frozen=True)
class SkeletonModel:
    """Fixed skeleton topology: joint count plus the two torso anchors."""

    joint_count: int
    neck_index: int
    midhip_index: int
    joint_names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.joint_count < 2:
            raise InputError("skeleton model needs at least 2 joints")
        if self.neck_index == self.midhip_index:
            raise InputError("neck and mid-hip indices must differ")
        for idx in (self.neck_index, self.midhip_index):
            if not 0 <= idx < self.joint_count:
                raise InputError(f"joint index {idx} out of range")
        if self.joint_names and len(self.joint_names) != self.joint_count:
            raise InputError("joint_names length must match joint_count")


BODY_25 = SkeletonModel(
    joint_count=25, neck_index=1, midhip_index=8, joint_names=BODY25_JOINT_NAMES
)


@dataclass
class SkeletonPose:
    """One frame: joint coordinates (n, d) plus per-joint confidences."""

    coords: np.ndarray
    confidence: np.ndarray
    frame_index: int = 0
    interpolated: bool = False

    def __post_init__(self):
        self.coords = check_coords(self.coords)
        self.confidence = np.asarray(self.confidence, dtype=float)
        if self.confidence.shape != (self.coords.shape[0],):
            raise InputError("confidence must have one entry per joint")
        if self.confidence.size and (
            self.confidence.min() < 0.0 or self.confidence.max() > 1.0
        ):
            raise InputError("confidence entries must lie in [0, 1]")

    @property
    def joint_count(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]


@dataclass
class PoseSequence:
    """Ordered poses sharing one skeleton model."""

    poses: list[SkeletonPose]
    model: SkeletonModel
    normalized: bool = field(default=False)

    def __post_init__(self):
        last = None
        for pose in self.poses:
            if pose.joint_count != self.model.joint_count:
                raise InputError("pose joint count does not match the model")
            if pose.dim != self.poses[0].dim:
                raise InputError("all poses must share the same dimensionality")
            if last is not None and pose.frame_index <= last:
                raise InputError("frame_index must be strictly increasing")
            last = pose.frame_index

    def __len__(self) -> int:
        return len(self.poses)

    @property
    def dim(self) -> int:
        return self.poses[0].dim if self.poses else 0

    def coords_array(self) -> np.ndarray:
        """Stacked coordinates, shape (frames, n, d)."""
        return np.stack([p.coords for p in self.poses])

    def confidence_array(self) -> np.ndarray:
        return np.stack([p.confidence for p in self.poses])


def _person_keypoints(person, model: SkeletonModel):
    """Extract (coords, confidence) from one person record."""
    n = model.joint_count
    if not isinstance(person, dict):
        raise MalformedKeypointsError("person record is not an object")
    if "pose_keypoints_2d" in person:
        raw, per_joint = person["pose_keypoints_2d"], 3
    elif "pose_keypoints_3d" in person:
        raw, per_joint = person["pose_keypoints_3d"], 4
    else:
        raise MalformedKeypointsError("person record has no keypoint array")
    try:
        flat = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise MalformedKeypointsError(f"non-numeric keypoint array: {exc}") from exc
    if flat.ndim != 1 or flat.size != per_joint * n:
        raise MalformedKeypointsError(
            f"keypoint array has length {flat.size}, expected {per_joint * n}"
        )
    table = flat.reshape(n, per_joint)
    return table[:, :-1], table[:, -1]


def parse_openpose_frame(frame_text, model: SkeletonModel = BODY_25, frame_index: int = 0) -> SkeletonPose:
    """Parse one OpenPose JSON frame document into a pose.

    With several detected people the one with the highest summed joint
    confidence wins; exact ties go to the lowest array index.
    """
    if isinstance(frame_text, (str, bytes)):
        try:
            doc = json.loads(frame_text)
        except json.JSONDecodeError as exc:
            raise MalformedKeypointsError(f"invalid JSON frame: {exc}") from exc
    else:
        doc = frame_text
    if not isinstance(doc, dict) or "people" not in doc:
        raise MalformedKeypointsError('frame document has no "people" array')
    people = doc["people"]
    if not people:
        raise EmptyFrameError("frame contains no people")

    parsed = [_person_keypoints(person, model) for person in people]
    sums = np.array([conf.sum() for _, conf in parsed])
    coords, confidence = parsed[int(np.argmax(sums))]
    if not np.any(confidence > 0.0):
        raise AllJointsMissingError("selected person has zero confidence everywhere")
    return SkeletonPose(
        coords=coords.copy(),
        confidence=np.clip(confidence, 0.0, 1.0),
        frame_index=frame_index,
    )


def _read_frame_docs(source) -> list[str]:
    path = Path(source)
    try:
        if path.is_dir():
            files = sorted(path.glob("*.json"))
            return [f.read_text() for f in files]
        if not path.exists():
            raise NoFramesError(f"no such file or directory: {path}")
        return [line for line in path.read_text().splitlines() if line.strip()]
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _fill_gaps(slots: list[SkeletonPose | None], model: SkeletonModel) -> list[SkeletonPose]:
    """Linearly interpolate runs of empty frames of length <= MAX_GAP_FRAMES."""
    valid = [i for i, p in enumerate(slots) if p is not None]
    if not valid:
        raise NoFramesError("every frame in the source is empty")
    n = len(slots)
    filled = list(slots)
    i = 0
    while i < n:
        if filled[i] is not None:
            i += 1
            continue
        j = i
        while j < n and filled[j] is None:
            j += 1
        gap = j - i
        if gap > MAX_GAP_FRAMES:
            raise GapTooLongError(
                f"gap of {gap} empty frames at {i} exceeds limit {MAX_GAP_FRAMES}"
            )
        prev = filled[i - 1] if i > 0 else None
        nxt = filled[j] if j < n else None
        for k in range(i, j):
            if prev is not None and nxt is not None:
                alpha = (k - i + 1) / (gap + 1)
                coords = (1.0 - alpha) * prev.coords + alpha * nxt.coords
            else:
                coords = (prev or nxt).coords.copy()
            filled[k] = SkeletonPose(
                coords=coords,
                confidence=np.zeros(model.joint_count),
                frame_index=k,
                interpolated=True,
            )
        i = j
    return filled


def load_sequence(source, model: SkeletonModel = BODY_25) -> PoseSequence:
    """Load a pose sequence from a directory of frame files or a JSON-lines file.

    Directory entries sort lexicographically into frame order (OpenPose
    zero-pads its indices). Empty frames become gaps and are filled by
    linear interpolation of the neighboring frames when the gap spans at
    most five frames.
    """
    docs = _read_frame_docs(source)
    if not docs:
        raise NoFramesError(f"no frames found in {source}")
    slots: list[SkeletonPose | None] = []
    for idx, doc in enumerate(docs):
        try:
            slots.append(parse_openpose_frame(doc, model, frame_index=idx))
        except EmptyFrameError:
            slots.append(None)
    return PoseSequence(poses=_fill_gaps(slots, model), model=model)


def normalize_pose(pose: SkeletonPose, model: SkeletonModel) -> SkeletonPose:
    """Translate the mid-hip to the origin and scale to unit torso length."""
    anchor = pose.coords[model.midhip_index]
    torso = float(np.linalg.norm(pose.coords[model.neck_index] - anchor))
    if torso < TORSO_EPS:
        raise DegenerateTorsoError(
            f"torso length {torso:.3e} below {TORSO_EPS:.0e} at frame {pose.frame_index}"
        )
    return replace(pose, coords=(pose.coords - anchor) / torso)


def mean_center(pose: SkeletonPose) -> SkeletonPose:
    """Subtract the joint centroid so every coordinate column has zero mean."""
    return replace(pose, coords=pose.coords - pose.coords.mean(axis=0))


def _carry_forward(seq: PoseSequence) -> list[SkeletonPose]:
    """Replace zero-confidence joints with their last confidently seen coordinates.

    Joints never seen so far sit at the frame's own mid-hip position.
    Gap-interpolated frames already carry trusted coordinates and are
    left untouched.
    """
    model = seq.model
    n = model.joint_count
    seen = np.zeros(n, dtype=bool)
    last_seen: np.ndarray | None = None
    out = []
    for pose in seq.poses:
        coords = pose.coords.copy()
        if not pose.interpolated:
            if last_seen is None:
                last_seen = np.zeros_like(coords)
            confident = pose.confidence > 0.0
            carry = ~confident & seen
            never = ~confident & ~seen
            coords[carry] = last_seen[carry]
            coords[never] = coords[model.midhip_index]
            last_seen[confident] = coords[confident]
            seen |= confident
        out.append(replace(pose, coords=coords))
    return out


def normalize_sequence(seq: PoseSequence) -> PoseSequence:
    """Carry forward missing joints, then normalize every pose."""
    if seq.normalized:
        return seq
    poses = [normalize_pose(p, seq.model) for p in _carry_forward(seq)]
    return PoseSequence(poses=poses, model=seq.model, normalized=True)
