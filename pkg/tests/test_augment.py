import pytest

from camkit.augment import (
    CropPlan,
    manifest_row,
    reverse_labels,
    reverse_pose_sequence,
    zoom_plan,
)
from camkit.labeler import pose_to_labels
from camkit.synth import SynthSpec, synthesize
from camkit.taxonomy import LabelSet, Rejected, enumerate_valid_sets


def L(*names):
    return LabelSet(names)


class TestReverseLabels:
    def test_directional_swap(self, base_matrix):
        assert reverse_labels(L("pan-left"), base_matrix).primitives == ("pan-right",)

    def test_static_unchanged(self, base_matrix):
        assert reverse_labels(L("static"), base_matrix).primitives == ("static",)

    def test_memberwise_on_triple(self, base_matrix):
        got = reverse_labels(L("tilt-up", "roll-cw", "dolly-in"), base_matrix)
        assert got.primitives == ("tilt-down", "roll-ccw", "dolly-out")

    def test_zoom_swap(self, zoom_matrix):
        got = reverse_labels(L("pan-left", "zoom-in"), zoom_matrix)
        assert got.primitives == ("pan-right", "zoom-out")

    def test_involution_over_every_valid_set(self, base_matrix):
        for s in enumerate_valid_sets(base_matrix):
            twice = reverse_labels(reverse_labels(s, base_matrix), base_matrix)
            assert twice.primitives == s.primitives

    def test_commutes_with_labeler(self, base_matrix, conv, th):
        targets = [
            L("pan-left"),
            L("dolly-in"),
            L("truck-left", "crane-up"),
            L("tilt-up", "dolly-out", "arc-ccw"),
        ]
        for target in targets:
            seq = synthesize(SynthSpec(target=target, seed=2), conv=conv, th=th)
            via_labels = reverse_labels(
                pose_to_labels(seq, th, conv, base_matrix), base_matrix
            )
            via_poses = pose_to_labels(
                reverse_pose_sequence(seq), th, conv, base_matrix
            )
            assert via_labels.primitives == via_poses.primitives


class TestZoomPlans:
    def test_zoom_in_linear_schedule(self):
        plan, _ = zoom_plan("zoom_in", target_ratio=0.8, frames=5)
        assert plan.widths() == pytest.approx([1.0, 0.95, 0.9, 0.85, 0.8])
        assert all(r[0] == r[1] == 0.5 for r in plan.rects)

    def test_zoom_out_is_reversed(self):
        plan, _ = zoom_plan("zoom_out", target_ratio=0.8, frames=5)
        assert plan.widths() == pytest.approx([0.8, 0.85, 0.9, 0.95, 1.0])

    def test_center_crop_constant(self):
        plan, labels = zoom_plan(
            "center_crop", target_ratio=0.7, frames=4, labels=L("pan-left")
        )
        assert plan.widths() == pytest.approx([0.7, 0.7, 0.7, 0.7])
        assert labels.primitives == ("pan-left",)

    def test_zoom_in_adds_label(self):
        _, labels = zoom_plan("zoom_in", target_ratio=0.8, frames=5, labels=L("pan-left"))
        assert labels.primitives == ("pan-left", "zoom-in")

    def test_conflicting_dolly_rejected(self):
        _, labels = zoom_plan("zoom_in", target_ratio=0.8, frames=5, labels=L("dolly-in"))
        assert isinstance(labels, Rejected) and labels.reason == "conflict"
        _, labels = zoom_plan("zoom_out", target_ratio=0.8, frames=5, labels=L("dolly-out"))
        assert isinstance(labels, Rejected) and labels.reason == "conflict"

    def test_static_conflicts_with_zoom(self):
        _, labels = zoom_plan("zoom_in", target_ratio=0.8, frames=5, labels=L("static"))
        assert isinstance(labels, Rejected) and labels.reason == "conflict"

    def test_counter_zoom_is_allowed(self):
        _, labels = zoom_plan("zoom_in", target_ratio=0.8, frames=5, labels=L("dolly-out"))
        assert labels.primitives == ("dolly-out", "zoom-in")

    def test_sampled_target_is_deterministic_and_in_range(self):
        a, _ = zoom_plan("zoom_in", frames=6, seed=11)
        b, _ = zoom_plan("zoom_in", frames=6, seed=11)
        c, _ = zoom_plan("zoom_in", frames=6, seed=12)
        assert a.widths() == b.widths()
        assert a.widths() != c.widths()
        assert 0.6 <= a.widths()[-1] <= 0.9

    def test_target_out_of_range(self):
        with pytest.raises(ValueError):
            zoom_plan("zoom_in", target_ratio=0.5, frames=5)
        with pytest.raises(ValueError):
            zoom_plan("zoom_in", target_ratio=0.95, frames=5)

    def test_frames_minimum(self):
        with pytest.raises(ValueError):
            zoom_plan("zoom_in", target_ratio=0.8, frames=1)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            zoom_plan("dolly_zoom", target_ratio=0.8, frames=5)


class TestCropPlanInvariants:
    def test_rejects_off_center(self):
        with pytest.raises(ValueError):
            CropPlan(kind="zoom_in", rects=((0.4, 0.5, 0.8, 0.8),))

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            CropPlan(kind="zoom_in", rects=((0.5, 0.5, 0.8, 0.7),))

    def test_rejects_width_out_of_band(self):
        with pytest.raises(ValueError):
            CropPlan(kind="zoom_in", rects=((0.5, 0.5, 0.5, 0.5),))

    def test_json_shape(self):
        plan, _ = zoom_plan("center_crop", target_ratio=0.7, frames=2)
        blob = plan.to_json()
        assert blob["kind"] == "center_crop"
        assert blob["rects"] == [[0.5, 0.5, 0.7, 0.7], [0.5, 0.5, 0.7, 0.7]]


class TestManifest:
    def test_row_shape(self):
        plan, labels = zoom_plan("zoom_in", target_ratio=0.8, frames=3, labels=L("pan-left"))
        row = manifest_row("vid:0", "zoom_in", labels, plan)
        assert row["source_segment_id"] == "vid:0"
        assert row["segment_id"] == "vid:0#zoom_in"
        assert row["labels"] == ["pan-left", "zoom-in"]
        assert row["crop_plan"]["kind"] == "zoom_in"
