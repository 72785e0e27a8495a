import numpy as np
import pytest

from gendensity import (
    DegeneratePointError,
    FdConfig,
    InputDimensionError,
    RankPolicy,
    circle_embed,
    jacobian,
    linear,
    log_volume_factor,
    nondegenerate_directions,
    svd_spectrum,
    volume_factor,
)

from conftest import ANCHORS4


def test_diagonal_case():
    spec = svd_spectrum(np.array([[1.0, 0.0], [0.0, 2.0], [0.0, 0.0]]))
    np.testing.assert_allclose(spec.singular_values, [2.0, 1.0], atol=1e-15)
    assert spec.rank == 2


def test_zero_matrix_has_rank_zero():
    spec = svd_spectrum(np.zeros((3, 2)))
    assert spec.rank == 0
    assert np.all(spec.singular_values == 0.0)


def test_memorizer_plateau_vs_ramp(mem4):
    # plateau sigma collapses at least a million-fold relative to the ramp
    plateau = svd_spectrum(jacobian(mem4, ANCHORS4[0], FdConfig()))
    mid = 0.5 * (ANCHORS4[0] + ANCHORS4[1])
    ramp = svd_spectrum(jacobian(mem4, mid, FdConfig()))
    assert plateau.singular_values[0] <= 1e-6 * ramp.singular_values[0]
    # collinear anchors collapse the perpendicular direction exactly
    assert plateau.singular_values[1] == 0.0
    assert plateau.rank == 1


def test_volume_factor_examples():
    spec = svd_spectrum(np.array([[1.0, 0.0], [0.0, 2.0]]))
    assert volume_factor(spec) == pytest.approx(2.0, rel=1e-15)

    spec = svd_spectrum(np.diag([3.0, 1e-12]))
    assert spec.rank == 1
    assert volume_factor(spec) == pytest.approx(3.0, rel=1e-15)

    a = np.zeros((5, 2))
    a[0, 0] = 2.0
    a[1, 1] = 3.0
    spec = svd_spectrum(a)
    expect = np.sqrt(np.linalg.det(a.T @ a))
    assert volume_factor(spec) == pytest.approx(expect, rel=1e-12)


def test_volume_factor_rank_zero_raises():
    spec = svd_spectrum(np.zeros((2, 2)))
    with pytest.raises(DegeneratePointError):
        volume_factor(spec)
    with pytest.raises(DegeneratePointError):
        log_volume_factor(spec)


def test_volume_factor_matches_gram_determinant():
    rng = np.random.default_rng(9)
    for n, m in [(3, 2), (5, 4), (10, 6), (7, 7)]:
        a = rng.normal(size=(n, m))
        spec = svd_spectrum(a)
        expect = np.sqrt(np.linalg.det(a.T @ a))
        assert volume_factor(spec) == pytest.approx(expect, rel=1e-9)
        assert log_volume_factor(spec) == pytest.approx(np.log(expect), rel=1e-9)


def test_nondegenerate_directions_ordering():
    dirs = nondegenerate_directions(svd_spectrum(np.array([[1.0, 0.0], [0.0, 2.0], [0.0, 0.0]])))
    assert len(dirs) == 2
    np.testing.assert_allclose(np.abs(dirs[0]), [0.0, 1.0], atol=1e-15)
    np.testing.assert_allclose(np.abs(dirs[1]), [1.0, 0.0], atol=1e-15)

    assert nondegenerate_directions(svd_spectrum(np.zeros((2, 2)))) == []

    dirs = nondegenerate_directions(svd_spectrum(jacobian(circle_embed(), [0.3])))
    assert len(dirs) == 1
    assert abs(abs(dirs[0][0]) - 1.0) <= 1e-12


def test_reconstruction_and_orthonormality():
    rng = np.random.default_rng(2)
    for _ in range(20):
        a = rng.normal(size=rng.integers(2, 8, size=2))
        spec = svd_spectrum(a)
        u, s, v = spec.left_vectors, spec.singular_values, spec.right_vectors
        recon = u @ np.diag(s) @ v.T
        top = s[0] if s[0] > 0 else 1.0
        assert np.max(np.abs(recon - a)) <= 1e-9 * top
        k = s.size
        assert np.max(np.abs(u.T @ u - np.eye(k))) <= 1e-10
        assert np.max(np.abs(v.T @ v - np.eye(k))) <= 1e-10


def test_threshold_boundary_tie_counts_as_nonzero():
    spec = svd_spectrum(np.diag([1.0, 1e-6]), RankPolicy(relative_threshold=1e-6))
    assert spec.rank == 2


def test_fixed_rank_override():
    a = np.diag([5.0, 4.0, 3.0])
    spec = svd_spectrum(a, RankPolicy(fixed_rank=2))
    assert spec.rank == 2
    assert volume_factor(spec) == pytest.approx(20.0, rel=1e-12)
    spec = svd_spectrum(a, RankPolicy(fixed_rank=10))
    assert spec.rank == 3


def test_policy_validation():
    with pytest.raises(InputDimensionError):
        RankPolicy(relative_threshold=0.0)
    with pytest.raises(InputDimensionError):
        RankPolicy(relative_threshold=1.5)
    with pytest.raises(InputDimensionError):
        RankPolicy(fixed_rank=-1)
