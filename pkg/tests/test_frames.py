import numpy as np
import pytest

from hypcs.cartan import forms_on_coordinates, frame_jet, levi_civita_forms
from hypcs.errors import NonConstantFrameError
from hypcs.foliation import WarpedCollar, metric_at_infinity
from hypcs.frames import (
    build_constant_frame,
    frame_at_infinity,
    gauge_between,
    regauged,
    rotation,
    twist_angle,
    twisted,
    verify_constant,
)

RADII = (0.0, 0.5, 1.5, 3.0)


def test_rotation_is_special_orthogonal():
    for axis in range(3):
        r = rotation(axis, np.linspace(-3, 3, 7))
        assert np.allclose(r @ np.swapaxes(r, -1, -2), np.eye(3))
        assert np.allclose(np.linalg.det(r), 1.0)


def test_constant_construction_reproduces_fermi(collar, fermi):
    built = build_constant_frame(lambda c1, c2: fermi(c1, c2, 0.0), collar)
    c1, c2 = collar.grid.nodes()
    for r in RADII:
        assert np.allclose(built(c1, c2, r), fermi(c1, c2, r), atol=1e-12)
        assert fermi.orthonormality_residual(r) < 1e-12


def test_constant_construction_of_twisted_frame(collar, twist):
    built = build_constant_frame(lambda c1, c2: twist(c1, c2, 0.0), collar)
    c1, c2 = collar.grid.nodes()
    for r in RADII:
        assert np.allclose(built(c1, c2, r), twist(c1, c2, r), atol=1e-12)


def test_constant_construction_of_bumped_frame(bumped_adapted):
    for r in RADII:
        assert bumped_adapted.orthonormality_residual(r) < 1e-12
    assert bumped_adapted.is_adapted(1.0)


def test_verify_constant(fermi, twist, tilt, bumped_adapted):
    for field in (fermi, twist, tilt, bumped_adapted):
        assert verify_constant(field, RADII) < 1e-9
    drifting = regauged(fermi, lambda c1, c2, r: rotation(2, 0.3 * r + 0 * np.asarray(c1)), "drift")
    expected = np.linalg.norm(rotation(2, 0.3 * RADII[-1]) - np.eye(3))
    assert verify_constant(drifting, RADII) == pytest.approx(expected, rel=1e-10)
    with pytest.raises(NonConstantFrameError):
        verify_constant(drifting, RADII, tol=1e-6)


def test_gauge_between(collar, fermi, twist, tilt):
    c1, c2 = collar.grid.nodes()
    metric = collar.metric(c1, c2, 0.7)
    a = fermi(c1, c2, 0.7)
    assert np.allclose(gauge_between(a, a, metric), np.eye(3))
    g = gauge_between(a, twist(c1, c2, 0.7), metric)
    assert np.allclose(g, rotation(2, twist_angle(c1, c2, 1, 0)))
    base = gauge_between(fermi(c1, c2, 0.0), tilt(c1, c2, 0.0), collar.metric(c1, c2, 0.0))
    for r in RADII:
        g = gauge_between(fermi(c1, c2, r), tilt(c1, c2, r), collar.metric(c1, c2, r))
        assert np.max(np.linalg.norm(g - base, axis=(-2, -1))) < 1e-9


def test_frame_at_infinity_of_fermi(collar, fermi, tube):
    inf = frame_at_infinity(fermi)
    c1, c2 = collar.grid.nodes()
    e = inf(c1, c2, 0.0)
    assert np.allclose(e[..., 2, :], [0.0, 0.0, 1.0])
    coeff = 0.5 * np.exp(2.0)
    assert np.allclose(e[..., 0, 0], 1 / (tube.length * np.sqrt(coeff)))
    assert np.allclose(e[..., 1, 1], 1 / (2 * np.pi * np.sqrt(coeff)))
    for r in RADII:
        assert inf.orthonormality_residual(r) < 1e-12


def test_frame_at_infinity_orthonormal_for_tilted(tilt, bumped_adapted):
    for field in (tilt, twisted(bumped_adapted, 1, 1)):
        inf = frame_at_infinity(field)
        assert np.allclose(inf.normal_components(1.0), field.normal_components(1.0))
        for r in RADII:
            assert inf.orthonormality_residual(r) < 1e-9


def test_frame_at_infinity_is_parallel_along_rays(tilt, bumped_adapted):
    for field in (tilt, twisted(bumped_adapted, 0, 1)):
        inf = frame_at_infinity(field, WarpedCollar(field.collar))
        for r in (0.0, 1.0, 2.5):
            jet = frame_jet(inf, r)
            radial = forms_on_coordinates(jet, levi_civita_forms(jet))[..., 2, :, :]
            assert np.max(np.abs(radial)) < 1e-5


def test_gauges_at_infinity_match(collar, fermi, tilt):
    c1, c2 = collar.grid.nodes()
    warped = WarpedCollar(collar)
    a, b = frame_at_infinity(fermi, warped), frame_at_infinity(tilt, warped)
    for r in RADII:
        upstairs = gauge_between(fermi(c1, c2, r), tilt(c1, c2, r), collar.metric(c1, c2, r))
        at_inf = gauge_between(a(c1, c2, r), b(c1, c2, r), warped.metric(c1, c2, r))
        assert np.max(np.abs(upstairs - at_inf)) < 1e-9
