import json

import numpy as np
import pytest

from cyclestat.errors import (
    AllJointsMissingError,
    DegenerateTorsoError,
    EmptyFrameError,
    GapTooLongError,
    InputError,
    MalformedKeypointsError,
    NoFramesError,
)
from cyclestat.skeleton import (
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


def frame_doc(coords, confidence):
    flat = []
    for (x, y), c in zip(coords, confidence):
        flat += [x, y, c]
    return {"people": [{"pose_keypoints_2d": flat}]}


def simple_pose_coords(n=25):
    # a spread-out pose with unit-distinct joints; neck=1, midhip=8
    pts = [(float(i % 5), float(i // 5)) for i in range(n)]
    pts[1] = (2.0, 4.0)
    pts[8] = (2.0, 2.0)
    return pts


class TestParseFrame:
    def test_single_person_body25(self):
        coords = simple_pose_coords()
        pose = parse_openpose_frame(json.dumps(frame_doc(coords, [1.0] * 25)))
        assert pose.joint_count == 25
        assert pose.dim == 2
        np.testing.assert_array_equal(pose.coords, np.array(coords))

    def test_empty_people(self):
        with pytest.raises(EmptyFrameError):
            parse_openpose_frame('{"people": []}')

    def test_picks_highest_summed_confidence(self):
        coords = simple_pose_coords()
        weak = frame_doc(coords, [0.2] * 25)["people"][0]
        strong_coords = [(x + 100.0, y) for x, y in coords]
        strong = frame_doc(strong_coords, [0.8] * 25)["people"][0]
        pose = parse_openpose_frame({"people": [weak, strong]})
        assert pose.coords[0, 0] == pytest.approx(100.0)

    def test_tie_takes_first(self):
        coords = simple_pose_coords()
        a = frame_doc(coords, [0.5] * 25)["people"][0]
        b = frame_doc([(x + 7.0, y) for x, y in coords], [0.5] * 25)["people"][0]
        pose = parse_openpose_frame({"people": [a, b]})
        assert pose.coords[0, 0] == pytest.approx(0.0)

    def test_wrong_length(self):
        with pytest.raises(MalformedKeypointsError):
            parse_openpose_frame({"people": [{"pose_keypoints_2d": [1.0] * 74}]})

    def test_all_joints_missing(self):
        coords = simple_pose_coords()
        with pytest.raises(AllJointsMissingError):
            parse_openpose_frame(frame_doc(coords, [0.0] * 25))

    def test_missing_people_key(self):
        with pytest.raises(MalformedKeypointsError):
            parse_openpose_frame("{}")

    def test_invalid_json(self):
        with pytest.raises(MalformedKeypointsError):
            parse_openpose_frame("{not json")

    def test_non_numeric_keypoints(self):
        with pytest.raises(MalformedKeypointsError):
            parse_openpose_frame({"people": [{"pose_keypoints_2d": ["x"] * 75}]})

    def test_person_not_an_object(self):
        with pytest.raises(MalformedKeypointsError):
            parse_openpose_frame({"people": [42]})

    def test_3d_variant(self):
        flat = []
        for i in range(25):
            flat += [float(i), float(i + 1), float(i + 2), 0.9]
        pose = parse_openpose_frame({"people": [{"pose_keypoints_3d": flat}]})
        assert pose.dim == 3
        assert pose.coords[3, 2] == pytest.approx(5.0)


class TestLoadSequence:
    def write_frames(self, tmp_path, docs):
        for i, doc in enumerate(docs):
            (tmp_path / f"frame_{i:06d}_keypoints.json").write_text(json.dumps(doc))
        return tmp_path

    def test_directory_load(self, tmp_path):
        coords = simple_pose_coords()
        docs = [frame_doc(coords, [1.0] * 25) for _ in range(12)]
        seq = load_sequence(self.write_frames(tmp_path, docs))
        assert len(seq) == 12
        assert [p.frame_index for p in seq.poses] == list(range(12))

    def test_jsonl_load(self, tmp_path):
        coords = simple_pose_coords()
        lines = [json.dumps(frame_doc(coords, [1.0] * 25)) for _ in range(5)]
        path = tmp_path / "seq.jsonl"
        path.write_text("\n".join(lines) + "\n")
        assert len(load_sequence(path)) == 5

    def test_round_trip_preserves_coords(self, tmp_path):
        rng = np.random.default_rng(5)
        docs = []
        originals = []
        for _ in range(6):
            coords = rng.normal(size=(25, 2)) * 10
            coords[1] = (0.0, 10.0)
            coords[8] = (0.0, 0.0)
            originals.append(coords.copy())
            docs.append(frame_doc([tuple(c) for c in coords], [1.0] * 25))
        seq = load_sequence(self.write_frames(tmp_path, docs))
        for pose, want in zip(seq.poses, originals):
            np.testing.assert_array_equal(pose.coords, want)

    def test_gap_interpolation_midpoint(self, tmp_path):
        coords_a = [(float(i), 0.0) for i in range(25)]
        coords_a[1] = (0.0, 2.0)
        coords_b = [(float(i) + 2.0, 0.0) for i in range(25)]
        coords_b[1] = (2.0, 2.0)
        docs = [frame_doc(coords_a, [1.0] * 25)] * 5
        docs += [{"people": []}]
        docs += [frame_doc(coords_b, [1.0] * 25)] * 4
        seq = load_sequence(self.write_frames(tmp_path, docs))
        assert len(seq) == 10
        gap = seq.poses[5]
        assert gap.interpolated
        assert np.all(gap.confidence == 0.0)
        np.testing.assert_allclose(
            gap.coords, (np.array(coords_a) + np.array(coords_b)) / 2.0
        )

    def test_gap_too_long(self, tmp_path):
        coords = simple_pose_coords()
        docs = [frame_doc(coords, [1.0] * 25)] * 2
        docs += [{"people": []}] * 8
        seq_dir = self.write_frames(tmp_path, docs)
        with pytest.raises(GapTooLongError):
            load_sequence(seq_dir)

    def test_no_frames(self, tmp_path):
        with pytest.raises(NoFramesError):
            load_sequence(tmp_path)

    def test_leading_gap_copies_first_valid(self, tmp_path):
        coords = simple_pose_coords()
        docs = [{"people": []}] + [frame_doc(coords, [1.0] * 25)] * 4
        seq = load_sequence(self.write_frames(tmp_path, docs))
        np.testing.assert_array_equal(seq.poses[0].coords, seq.poses[1].coords)
        assert seq.poses[0].interpolated


class TestNormalizePose:
    def test_worked_example(self):
        coords = np.zeros((25, 2))
        coords[1] = (2.0, 4.0)   # neck
        coords[8] = (2.0, 2.0)   # midhip
        coords[0] = (4.0, 2.0)   # any third joint
        pose = SkeletonPose(coords=coords, confidence=np.ones(25))
        out = normalize_pose(pose, BODY_25)
        np.testing.assert_allclose(out.coords[1], (0.0, 1.0), atol=1e-15)
        np.testing.assert_allclose(out.coords[8], (0.0, 0.0), atol=1e-15)
        np.testing.assert_allclose(out.coords[0], (1.0, 0.0), atol=1e-15)

    def test_idempotent(self, rng):
        coords = rng.normal(size=(25, 2)) * 7
        coords[8] = (0.3, 0.4)
        coords[1] = coords[8] + (3.0, 4.0)
        pose = SkeletonPose(coords=coords, confidence=np.ones(25))
        once = normalize_pose(pose, BODY_25)
        twice = normalize_pose(once, BODY_25)
        np.testing.assert_allclose(twice.coords, once.coords, atol=1e-12)

    def test_scale_translation_invariance(self, rng):
        for _ in range(20):
            coords = rng.normal(size=(25, 2)) * 3
            coords[1] = coords[8] + rng.normal(size=2) + (0.0, 2.0)
            pose = SkeletonPose(coords=coords, confidence=np.ones(25))
            s = float(10 ** rng.uniform(-2, 2))
            v = rng.normal(size=2) * 50
            moved = SkeletonPose(coords=coords * s + v, confidence=np.ones(25))
            np.testing.assert_allclose(
                normalize_pose(moved, BODY_25).coords,
                normalize_pose(pose, BODY_25).coords,
                atol=1e-9,
            )

    def test_degenerate_torso(self):
        coords = np.ones((25, 2))
        pose = SkeletonPose(coords=coords, confidence=np.ones(25))
        with pytest.raises(DegenerateTorsoError):
            normalize_pose(pose, BODY_25)


class TestMeanCenter:
    def test_worked_example(self):
        pose = SkeletonPose(
            coords=np.array([[1.0, 0.0], [3.0, 0.0]]), confidence=np.ones(2)
        )
        np.testing.assert_allclose(
            mean_center(pose).coords, [[-1.0, 0.0], [1.0, 0.0]], atol=1e-15
        )

    def test_idempotent(self, rng):
        pose = SkeletonPose(coords=rng.normal(size=(25, 2)), confidence=np.ones(25))
        once = mean_center(pose)
        np.testing.assert_allclose(mean_center(once).coords, once.coords, atol=1e-15)

    def test_repeated_point_goes_to_zero(self):
        pose = SkeletonPose(coords=np.full((25, 2), 3.7), confidence=np.ones(25))
        np.testing.assert_allclose(mean_center(pose).coords, 0.0, atol=1e-12)

    def test_columns_sum_below_tolerance(self, rng):
        for _ in range(20):
            pose = SkeletonPose(
                coords=rng.normal(size=(25, 2)) * 100, confidence=np.ones(25)
            )
            sums = np.abs(mean_center(pose).coords.sum(axis=0))
            assert np.all(sums < 1e-12)


class TestNormalizeSequence:
    def make_seq(self, frames):
        poses = [
            SkeletonPose(coords=c, confidence=conf, frame_index=i)
            for i, (c, conf) in enumerate(frames)
        ]
        return PoseSequence(poses=poses, model=BODY_25)

    def base_coords(self):
        coords = np.array(simple_pose_coords(), dtype=float)
        return coords

    def test_carry_forward_uses_last_seen(self):
        c0 = self.base_coords()
        c1 = self.base_coords() + 10.0
        conf0 = np.ones(25)
        conf1 = np.ones(25)
        conf1[0] = 0.0  # nose occluded in frame 1
        seq = self.make_seq([(c0, conf0), (c1, conf1)])
        out = normalize_sequence(seq)
        # frame 1's nose should be frame 0's nose, normalized in frame 1's frame
        torso = np.linalg.norm(c1[1] - c1[8])
        want = (c0[0] - c1[8]) / torso
        np.testing.assert_allclose(out.poses[1].coords[0], want, atol=1e-12)

    def test_never_seen_joint_sits_at_origin(self):
        c0 = self.base_coords()
        conf = np.ones(25)
        conf[0] = 0.0
        seq = self.make_seq([(c0, conf), (c0, conf)])
        out = normalize_sequence(seq)
        for pose in out.poses:
            np.testing.assert_allclose(pose.coords[0], (0.0, 0.0), atol=1e-12)

    def test_normalized_flag_and_unit_torso(self):
        seq = self.make_seq([(self.base_coords(), np.ones(25))] * 3)
        out = normalize_sequence(seq)
        assert out.normalized
        for pose in out.poses:
            assert np.linalg.norm(pose.coords[1] - pose.coords[8]) == pytest.approx(1.0)


class TestModelInvariants:
    def test_bad_models_rejected(self):
        with pytest.raises(InputError):
            SkeletonModel(joint_count=1, neck_index=0, midhip_index=0)
        with pytest.raises(InputError):
            SkeletonModel(joint_count=5, neck_index=2, midhip_index=2)
        with pytest.raises(InputError):
            SkeletonModel(joint_count=5, neck_index=2, midhip_index=9)

    def test_body25_preset(self):
        assert BODY_25.joint_count == 25
        assert BODY_25.neck_index == 1
        assert BODY_25.midhip_index == 8

    def test_frame_index_must_increase(self):
        coords = np.array(simple_pose_coords(), dtype=float)
        poses = [
            SkeletonPose(coords=coords, confidence=np.ones(25), frame_index=0),
            SkeletonPose(coords=coords, confidence=np.ones(25), frame_index=0),
        ]
        with pytest.raises(InputError):
            PoseSequence(poses=poses, model=BODY_25)
