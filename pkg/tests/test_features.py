import math

import numpy as np
import pytest

from actionseg.errors import DegenerateVector, NoPriorValue, TopologyMismatch
from actionseg.features import (
    BoneSpec,
    FeatureExtractor,
    JointSpec,
    KeypointFrame,
    SkeletonTopology,
    bone_length,
    compute_features,
    default_topology,
    joint_angle,
)


def simple_topology():
    return SkeletonTopology(
        joints=(JointSpec("elbow", 0, 1, 2),),
        bones=(BoneSpec("upper", 0, 1),),
    )


class TestJointAngle:
    def test_orthogonal_rays(self):
        assert joint_angle((0, 1), (0, 0), (1, 0)) == pytest.approx(90.0, abs=1e-12)

    def test_parallel_rays(self):
        assert joint_angle((1, 0), (0, 0), (2, 0)) == pytest.approx(0.0, abs=1e-6)

    def test_opposite_rays(self):
        assert joint_angle((-1, 0), (0, 0), (1, 0)) == pytest.approx(180.0, abs=1e-6)

    def test_zero_length_ray_raises(self):
        with pytest.raises(DegenerateVector):
            joint_angle((0, 0), (0, 0), (1, 0))

    def test_symmetric_in_outer_points(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            a, b, c = rng.normal(size=(3, 2))
            assert joint_angle(a, b, c) == pytest.approx(joint_angle(c, b, a))

    def test_similarity_invariance(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            pts = rng.normal(size=(3, 2))
            base = joint_angle(*pts)
            angle = rng.uniform(0, 2 * math.pi)
            rot = np.array(
                [
                    [math.cos(angle), -math.sin(angle)],
                    [math.sin(angle), math.cos(angle)],
                ]
            )
            shift = rng.normal(size=2) * 10
            scale = rng.uniform(0.1, 10.0)
            moved = (pts @ rot.T) * scale + shift
            assert joint_angle(*moved) == pytest.approx(base, abs=1e-9)

    def test_range_clamped(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            pts = rng.normal(size=(3, 2))
            if np.allclose(pts[0], pts[1]) or np.allclose(pts[2], pts[1]):
                continue
            assert 0.0 <= joint_angle(*pts) <= 180.0


class TestBoneLength:
    def test_three_four_five(self):
        assert bone_length((0, 0), (3, 4)) == pytest.approx(5.0)

    def test_coincident(self):
        assert bone_length((1, 1), (1, 1)) == 0.0

    def test_unit(self):
        assert bone_length((0, 0), (1, 0)) == pytest.approx(1.0)

    def test_symmetry_and_triangle_inequality(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            a, b, c = rng.normal(size=(3, 2))
            assert bone_length(a, b) == pytest.approx(bone_length(b, a))
            assert bone_length(a, c) <= bone_length(a, b) + bone_length(b, c) + 1e-12


class TestComputeFeatures:
    def test_unit_square_geometry(self):
        frame = KeypointFrame(t=0, keypoints=[(0, 0), (1, 0), (1, 1)])
        sample = compute_features(frame, simple_topology())
        assert sample.angles.tolist() == pytest.approx([90.0])
        assert sample.lengths.tolist() == pytest.approx([1.0])

    def test_out_of_range_index(self):
        topo = SkeletonTopology(
            joints=(JointSpec("elbow", 0, 1, 2),),
            bones=(BoneSpec("far", 0, 5),),
        )
        frame = KeypointFrame(t=0, keypoints=[(0, 0), (1, 0), (1, 1)])
        with pytest.raises(TopologyMismatch):
            compute_features(frame, topo)

    def test_carry_forward_matches_oracle(self):
        # Hand-rolled oracle: entries touching an invalid keypoint keep the
        # previous value, everything else is recomputed from this frame.
        topo = SkeletonTopology(
            joints=(JointSpec("elbow", 0, 1, 2),),
            bones=(BoneSpec("upper", 0, 1), BoneSpec("lower", 1, 2)),
        )
        f1 = KeypointFrame(t=1, keypoints=[(0, 0), (1, 0), (1, 1)])
        s1 = compute_features(f1, topo)
        f2 = KeypointFrame(t=2, keypoints=[(np.nan, 0), (1, 0), (1, 2)])
        s2 = compute_features(f2, topo, prev=s1)
        # keypoint 0 invalid: angle and bone "upper" carried from frame 1
        assert s2.angles[0] == s1.angles[0]
        assert s2.lengths[0] == s1.lengths[0]
        # bone "lower" only uses keypoints 1 and 2: recomputed
        assert s2.lengths[1] == pytest.approx(bone_length((1, 0), (1, 2)))

    def test_confidence_floor_triggers_carry_forward(self):
        topo = simple_topology()
        f1 = KeypointFrame(t=0, keypoints=[(0, 0), (1, 0), (1, 1)])
        s1 = compute_features(f1, topo)
        f2 = KeypointFrame(
            t=1,
            keypoints=[(5, 5), (1, 0), (1, 1)],
            confidence=[0.2, 0.9, 0.9],
        )
        s2 = compute_features(f2, topo, prev=s1, confidence_floor=0.5)
        assert s2.angles[0] == s1.angles[0]
        assert s2.lengths[0] == s1.lengths[0]

    def test_first_frame_invalid_raises(self):
        frame = KeypointFrame(t=0, keypoints=[(np.nan, 0), (1, 0), (1, 1)])
        with pytest.raises(NoPriorValue):
            compute_features(frame, simple_topology())

    def test_deterministic(self):
        topo = default_topology()
        rng = np.random.default_rng(17)
        kp = rng.normal(size=(12, 2))
        frame = KeypointFrame(t=0, keypoints=kp)
        a = compute_features(frame, topo)
        b = compute_features(frame, topo)
        assert np.array_equal(a.angles, b.angles)
        assert np.array_equal(a.lengths, b.lengths)


class TestTopology:
    def test_duplicate_names_rejected(self):
        with pytest.raises(ValueError):
            SkeletonTopology(
                joints=(JointSpec("a", 0, 1, 2), JointSpec("a", 2, 1, 0)),
                bones=(),
            )

    def test_repeated_joint_indices_rejected(self):
        with pytest.raises(ValueError):
            SkeletonTopology(joints=(JointSpec("a", 0, 0, 2),), bones=())

    def test_degenerate_bone_rejected(self):
        with pytest.raises(ValueError):
            SkeletonTopology(joints=(), bones=(BoneSpec("b", 3, 3),))

    def test_default_topology_shape(self):
        topo = default_topology()
        assert len(topo.joints) == 8
        assert len(topo.bones) == 9
        assert topo.bone_index("torso") is not None
        assert topo.max_index() == 11
        assert len(topo.signal_names) == 17

    def test_roundtrip_dict(self):
        topo = default_topology()
        again = SkeletonTopology.from_dict(topo.to_dict())
        assert again == topo


class TestFeatureExtractor:
    def test_carry_forward_state(self):
        topo = simple_topology()
        ex = FeatureExtractor(topo)
        _, s1 = ex.push(KeypointFrame(t=0, keypoints=[(0, 0), (1, 0), (1, 1)]))
        _, s2 = ex.push(KeypointFrame(t=1, keypoints=[(np.nan, 0), (1, 0), (1, 1)]))
        assert s2.angles[0] == s1.angles[0]

    def test_normalization_by_torso(self):
        topo = SkeletonTopology(
            joints=(),
            bones=(BoneSpec("torso", 0, 1),),
        )
        ex = FeatureExtractor(topo, normalize=True)
        frame, sample = ex.push(KeypointFrame(t=0, keypoints=[(0, 0), (0, 2)]))
        assert sample.lengths[0] == pytest.approx(1.0)
        assert frame.keypoints[1][1] == pytest.approx(1.0)
