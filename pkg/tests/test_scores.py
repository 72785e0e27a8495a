import numpy as np
import pytest

from gendensity import (
    AnchorSet,
    DensityProfile,
    InputDimensionError,
    LatentPrior,
    ScoreConfig,
    ScoreUndefinedError,
    decay_profile,
    decay_score,
    dip_score,
    identity,
    linear,
    nearest_neighbor_pairs,
    score_run,
)
from gendensity.paths import FLAG_DEGENERATE, FLAG_OK

from conftest import ANCHORS2, ANCHORS4


def make_anchor_set(outputs):
    outputs = np.asarray(outputs, dtype=np.float64)
    return AnchorSet(latents=outputs.copy(), outputs=outputs)


def make_profile(s, logs, flags=None, times=None):
    s = np.asarray(s, dtype=np.float64)
    logs = np.asarray(logs, dtype=np.float64)
    times = np.asarray(times if times is not None else np.linspace(0, 1, s.size))
    flags = list(flags) if flags is not None else [FLAG_OK] * s.size
    return DensityProfile(times, s, logs, flags)


def test_nearest_neighbor_line_layout():
    anchors = make_anchor_set([[0.0], [1.0], [5.0]])
    assert nearest_neighbor_pairs(anchors) == [(0, 1), (1, 0), (2, 1)]


def test_nearest_neighbor_identical_outputs():
    anchors = make_anchor_set([[2.0, 2.0], [2.0, 2.0], [9.0, 9.0]])
    pairs = nearest_neighbor_pairs(anchors)
    assert pairs[0] == (0, 1) and pairs[1] == (1, 0)


def test_nearest_neighbor_matches_exhaustive_scan_and_permutation():
    rng = np.random.default_rng(17)
    pts = rng.normal(size=(100, 3))
    anchors = make_anchor_set(pts)
    pairs = nearest_neighbor_pairs(anchors)
    d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
    np.fill_diagonal(d, np.inf)
    expected = np.argmin(d, axis=1)
    assert [j for _, j in pairs] == list(expected)

    perm = rng.permutation(100)
    pairs_p = nearest_neighbor_pairs(make_anchor_set(pts[perm]))
    inv = np.argsort(perm)
    for i, j in pairs:
        assert pairs_p[inv[i]] == (inv[i], inv[j])


def test_nearest_neighbor_needs_two():
    with pytest.raises(InputDimensionError):
        nearest_neighbor_pairs(make_anchor_set([[0.0]]))


def test_dip_constant_profile_is_zero():
    profile = make_profile(np.linspace(0, 1, 11), np.full(11, -2.0))
    assert dip_score(profile) == 0.0


def test_dip_hand_arithmetic():
    profile = make_profile([0.0, 0.5, 1.0], [0.0, -2.0, 0.0])
    assert dip_score(profile) == pytest.approx(4.0, abs=1e-15)


def test_dip_uses_arclength_midpoint_not_time_midpoint():
    # time midpoint sits at s=0.2 (plateau); the arclength midpoint s=0.5
    # lands on the third sample
    s = np.array([0.0, 0.2, 0.55, 0.8, 1.0])
    logs = np.array([1.0, 5.0, -3.0, 5.0, 1.0])
    profile = make_profile(s, logs)
    assert dip_score(profile) == pytest.approx(1.0 + 1.0 - 2 * (-3.0), abs=1e-15)


def test_dip_flagged_samples_undefined():
    profile = make_profile([0.0, 0.5, 1.0], [0.0, -2.0, 0.0],
                           flags=[FLAG_DEGENERATE, FLAG_OK, FLAG_OK])
    with pytest.raises(ScoreUndefinedError):
        dip_score(profile)
    profile = make_profile([0.0, 0.5, 1.0], [0.0, np.nan, 0.0],
                           flags=[FLAG_OK, FLAG_DEGENERATE, FLAG_OK])
    with pytest.raises(ScoreUndefinedError):
        dip_score(profile)


def test_memorizer_vs_smooth_two_center_dip(mem2, smooth2):
    from gendensity import LatentPath, path_density

    prior = LatentPrior.standard_normal(2)
    seg = LatentPath.segment(ANCHORS2[0], ANCHORS2[1], 101)
    dip_mem = dip_score(path_density(mem2, seg, prior))
    dip_smooth = dip_score(path_density(smooth2, seg, prior))
    assert dip_mem - dip_smooth >= 5.0


def test_decay_identity_closed_form():
    g = identity(2)
    prior = LatentPrior.standard_normal(2)
    profile = decay_profile(g, [0.0, 0.0], 0, prior, t_max=3.0, n_per_side=151)
    mean, per_point, excluded = decay_score([profile], radii=(0.5, 1.0))
    assert excluded == 0
    etas = per_point[0]["etas"]
    assert etas["0.5"] == pytest.approx(-0.5, abs=1e-3)
    assert etas["1.0"] == pytest.approx(-1.0, abs=1e-3)
    assert mean == pytest.approx(-0.75, abs=1e-3)


def test_decay_constant_profile_is_zero():
    g = identity(2)
    prior = LatentPrior.uniform_box(2, -10.0, 10.0)
    profile = decay_profile(g, [0.0, 0.0], 0, prior, t_max=2.0, n_per_side=25)
    mean, per_point, excluded = decay_score([profile], radii=(0.5, 1.0))
    assert mean == pytest.approx(0.0, abs=1e-12)
    assert excluded == 0


def test_decay_unreachable_radius_excluded():
    g = identity(2)
    prior = LatentPrior.standard_normal(2)
    profile = decay_profile(g, [0.0, 0.0], 0, prior, t_max=0.75, n_per_side=20)
    mean, per_point, excluded = decay_score([profile], radii=(0.5, 1.0))
    assert excluded == 1
    assert per_point[0]["etas"]["1.0"] is None
    assert per_point[0]["etas"]["0.5"] is not None


def test_score_run_constant_density_pair():
    g = identity(2)
    prior = LatentPrior.uniform_box(2, -5.0, 5.0)
    anchors = AnchorSet.from_latents(g, [[0.0, 0.0], [1.0, 0.0]])
    report = score_run(g, anchors, prior)
    assert report.mean_dip == pytest.approx(0.0, abs=1e-12)
    assert report.mean_decay == pytest.approx(0.0, abs=1e-12)
    assert report.n_paths == 2
    assert report.n_excluded == 0


def test_score_run_memorizer_signs(mem4):
    prior = LatentPrior.standard_normal(2)
    anchors = AnchorSet.from_latents(mem4, ANCHORS4)
    report = score_run(mem4, anchors, prior)
    assert report.mean_dip > 0
    assert report.mean_decay < 0


def test_score_run_smooth_is_an_order_of_magnitude_quieter(mem4, smooth4):
    prior = LatentPrior.standard_normal(2)
    rep_mem = score_run(mem4, AnchorSet.from_latents(mem4, ANCHORS4), prior)
    rep_smooth = score_run(smooth4, AnchorSet.from_latents(smooth4, ANCHORS4), prior)
    assert abs(rep_smooth.mean_dip) <= 0.1 * abs(rep_mem.mean_dip)
    assert abs(rep_smooth.mean_decay) <= 0.1 * abs(rep_mem.mean_decay)


def test_score_run_permutation_invariant(smooth4):
    prior = LatentPrior.standard_normal(2)
    base = score_run(smooth4, AnchorSet.from_latents(smooth4, ANCHORS4), prior)
    perm = [2, 0, 3, 1]
    permuted = score_run(
        smooth4, AnchorSet.from_latents(smooth4, ANCHORS4[perm]), prior
    )
    assert permuted.mean_dip == pytest.approx(base.mean_dip, rel=1e-12)
    assert permuted.mean_decay == pytest.approx(base.mean_decay, rel=1e-12)


def test_scores_invariant_under_constant_log_offset(mem4):
    # two uniform boxes differ only by a constant log-prior offset; second
    # differences cancel it exactly
    wide = LatentPrior.uniform_box(2, -20.0, 20.0)
    narrow = LatentPrior.uniform_box(2, -10.0, 10.0)
    anchors = AnchorSet.from_latents(mem4, ANCHORS4)
    rep_a = score_run(mem4, anchors, wide)
    rep_b = score_run(mem4, anchors, narrow)
    assert rep_a.mean_dip == pytest.approx(rep_b.mean_dip, rel=1e-10)
    assert rep_a.mean_decay == pytest.approx(rep_b.mean_decay, rel=1e-10)


def test_report_records_directions_and_sigmas(mem4):
    prior = LatentPrior.standard_normal(2)
    report = score_run(mem4, AnchorSet.from_latents(mem4, ANCHORS4), prior)
    for detail in report.per_point_decays:
        assert detail["direction_index"] == 0
        assert detail["sigma"] > 0
        assert len(detail["direction"]) == 2
    doc = report.to_dict()
    assert set(doc) >= {"mean_dip", "mean_decay", "per_path_dips", "n_excluded"}


def test_anchor_outputs_are_recomputable(mem4):
    anchors = AnchorSet.from_latents(mem4, ANCHORS4)
    np.testing.assert_array_equal(anchors.outputs, mem4.evaluate_batch(ANCHORS4))


def test_anchor_labels_propagate(smooth4):
    prior = LatentPrior.standard_normal(2)
    anchors = AnchorSet.from_latents(
        smooth4, ANCHORS4, labels=["a", "b", "c", "d"]
    )
    report = score_run(smooth4, anchors, prior)
    labelled = [d for d in report.path_diagnostics if "labels" in d]
    assert len(labelled) == 4


def test_latent_metric_option(smooth4):
    anchors = AnchorSet.from_latents(smooth4, ANCHORS4)
    pairs_out = nearest_neighbor_pairs(anchors, "output")
    pairs_lat = nearest_neighbor_pairs(anchors, "latent")
    assert pairs_out == pairs_lat  # affine map preserves the ordering here
