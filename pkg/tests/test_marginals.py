"""Tests for hhgeom.marginals."""
import numpy as np
import pytest

from hhgeom.bodies import cross_polytope, cube, random_hull
from hhgeom.marginals import (
    BrunnProfile,
    Subspace,
    brunn_eval,
    check_brunn_concavity,
    check_brunn_minkowski,
    fubini_volume,
    is_projection_symmetric,
    max_section_volume,
    profile_concave_fn,
    project,
    section,
    section_volume,
)
from hhgeom.polytope import affine_image, volume
from hhgeom.utils import same_point_set


def test_subspace_frames(rng):
    subspace = Subspace.random(5, 2, rng)
    frame = np.vstack([subspace.basis, subspace.complement_basis])

    assert subspace.dim == 2
    assert subspace.codim == 3
    assert np.allclose(frame @ frame.T, np.eye(5), atol=1e-12)


def test_subspace_from_vectors_keeps_orientation():
    subspace = Subspace.from_vectors([[2.0, 0.0, 0.0], [1.0, 3.0, 0.0]])

    assert np.allclose(subspace.basis, [[1, 0, 0], [0, 1, 0]])


def test_subspace_rejects_dependent_vectors():
    with pytest.raises(ValueError):
        Subspace.from_vectors([[1.0, 1.0, 0.0], [2.0, 2.0, 0.0]])

    with pytest.raises(ValueError):
        Subspace.coordinate(3, [0, 1, 2])


def test_subspace_dict_round_trip():
    subspace = Subspace.coordinate(4, [1, 3])

    assert np.allclose(Subspace.from_dict(subspace.to_dict()).basis, subspace.basis)


def test_projections(cube3, pyramid, slab3):
    square = project(cube3, Subspace.coordinate(3, [0, 1]))
    assert same_point_set(square.vertices, cube(2).vertices)

    triangle = project(pyramid, Subspace.coordinate(3, [0, 2]))
    assert same_point_set(triangle.vertices, np.array([[-1.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
    assert volume(triangle) == pytest.approx(1)

    interval = project(slab3, Subspace.coordinate(3, [0]))
    assert same_point_set(interval.vertices, np.array([[-1.0], [1.0]]))


def test_sections(cube3, pyramid):
    assert section_volume(cube3, Subspace.coordinate(3, [0, 1]), [0, 0]) == pytest.approx(2)

    plane = Subspace.coordinate(3, [0, 2])
    assert section_volume(pyramid, plane, [0, 1 / 3]) == pytest.approx(4 / 3)
    assert section_volume(pyramid, plane, [0, 1 / 4]) == pytest.approx(3 / 2)


def test_sections_outside_and_at_the_boundary(cube3, cross3):
    H = Subspace.coordinate(3, [0])

    assert section(cube3, H, [2.0]).is_empty
    assert section_volume(cube3, H, [2.0]) == 0.0
    assert section_volume(cross3, H, [1.0]) == 0.0


@pytest.mark.parametrize("tilt", [1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8])
def test_sections_for_nearly_coordinate_lines(cube3, tilt):
    # H = lin{(1, tilt, 0)}: the cut of [-1, 1]^3 at x has area 4 sqrt(1 + tilt^2) while the cut stays inside the cube
    H = Subspace.from_vectors([[1.0, tilt, 0.0]])

    for x in (0.0, 0.5, -0.9):
        piece = section(cube3, H, [x])
        assert len(piece.vertices) == 4
        assert section_volume(cube3, H, [x]) == pytest.approx(4 * np.sqrt(1 + tilt**2), rel=1e-9)


def test_sections_for_nearly_coordinate_planes(cube3):
    H = Subspace.from_vectors([[1.0, 0.0, 1e-7], [0.0, 1.0, 0.0]])

    assert section_volume(cube3, H, [0.0, 0.0]) == pytest.approx(2, rel=1e-9)
    assert section_volume(cube3, H, [0.5, -0.5]) == pytest.approx(2, rel=1e-9)


def test_section_is_rotation_covariant(rng):
    body = random_hull(4, count=20, seed=6)
    H = Subspace.random(4, 2, rng)
    rotation, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    rotated_body = affine_image(body, rotation)
    rotated_H = Subspace.from_vectors(H.basis @ rotation.T)
    x = 0.1 * np.ones(2)

    assert section_volume(rotated_body, rotated_H, x) == pytest.approx(section_volume(body, H, x), rel=1e-9)


def test_brunn_profiles(cube3, slab3):
    H = Subspace.coordinate(3, [0])

    assert brunn_eval(BrunnProfile(subspace=H, body=cube3), [0.3]) == pytest.approx(2)
    assert brunn_eval(BrunnProfile(subspace=H, body=slab3), [0.5]) == pytest.approx(1.5)
    assert brunn_eval(BrunnProfile(subspace=H, body=slab3), [1.5]) == 0.0


def test_brunn_concavity(cross3):
    report = check_brunn_concavity(cross3, Subspace.coordinate(3, [0]), trials=30, seed=0)
    assert report.passed

    body = random_hull(4, count=15, seed=8)
    report = check_brunn_concavity(body, Subspace.coordinate(4, [0, 1]), trials=30, seed=1)
    assert report.violations == 0


def test_fubini_quadrature(cube3, slab3):
    H = Subspace.coordinate(3, [0])

    estimate = fubini_volume(cube3, H, grid=50)
    assert estimate.method == "quadrature"
    assert estimate.value == pytest.approx(8, rel=1e-9)

    assert fubini_volume(slab3, H, grid=20).value == pytest.approx(8 / 3, rel=1e-9)

    body = random_hull(4, count=15, seed=9)
    assert fubini_volume(body, H, grid=50).value == pytest.approx(volume(body), rel=1e-9)


def test_fubini_monte_carlo():
    body = random_hull(3, count=15, seed=10)
    estimate = fubini_volume(body, Subspace.coordinate(3, [0, 1]), grid=2000, seed=0)

    assert estimate.method == "monte_carlo"
    assert abs(estimate.value - volume(body)) <= 5 * estimate.std_error + 1e-9


def test_projection_symmetry(cube3, pyramid):
    assert is_projection_symmetric(cube3, Subspace.coordinate(3, [0, 1]))
    assert is_projection_symmetric(pyramid, Subspace.coordinate(3, [0, 1]))
    assert not is_projection_symmetric(pyramid, Subspace.coordinate(3, [0, 2]))


def test_max_section_volume(slab3, pyramid):
    value, point = max_section_volume(slab3, Subspace.coordinate(3, [0]))
    assert value == pytest.approx(4, rel=1e-6)
    assert point[0] == pytest.approx(1, abs=1e-4)

    value, _ = max_section_volume(pyramid, Subspace.coordinate(3, [0, 2]))
    assert 4 / 3 <= value <= 2 + 1e-9


def test_brunn_minkowski(cube3, cross3):
    report = check_brunn_minkowski(cube3, cross3, 0.3)

    assert report.passed
    assert check_brunn_minkowski(cube3, cube(3, half_width=2), 0.5).verdict == "equality"


def test_profile_concave_fn(cross3):
    H = Subspace.coordinate(3, [0])
    f = profile_concave_fn(cross3, H, np.array([[-0.5], [0.0], [0.5]]))

    assert float(f([0.25])[0]) == pytest.approx(np.sqrt(2) * 0.75)
    assert float(f([-1.0])[0]) == pytest.approx(0, abs=1e-9)

    with pytest.raises(ValueError):
        profile_concave_fn(cross3, H, np.zeros((1, 1)), power=2)
