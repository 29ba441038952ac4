import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypcs.errors import DomainError
from hypcs.hypgeom import (
    BASE_FRAME,
    BASE_POINT,
    FermiChart,
    apply_isometry,
    christoffel,
    fermi_embed,
    fermi_jet,
    frame_to_isometry,
    hyperbolic_distance,
    isometry_differential,
    isometry_to_frame,
    metric_at,
    normal_flow,
    normalize_sign,
)

finite = st.floats(-2.0, 2.0, allow_nan=False)


def sl2(entries):
    """Determinant-one matrix from four complex entries, or None if degenerate."""
    g = np.array(entries, dtype=complex).reshape(2, 2)
    det = np.linalg.det(g)
    if abs(det) < 0.1:
        return None
    return g / np.sqrt(det)


complexes = st.builds(complex, finite, finite)
isometries = st.lists(complexes, min_size=4, max_size=4).map(sl2).filter(lambda g: g is not None)
points = st.tuples(finite, finite, st.floats(0.2, 3.0)).map(np.array)


def test_metric_examples():
    assert np.allclose(metric_at(BASE_POINT), np.eye(3))
    assert np.allclose(metric_at([0.0, 0.0, 2.0]), np.eye(3) / 4)
    g = metric_at([5.0, -3.0, 0.5])
    assert np.sqrt(g[2, 2]) == pytest.approx(2.0)


def test_metric_rejects_nonpositive_height():
    with pytest.raises(DomainError):
        metric_at([0.0, 0.0, 0.0])
    with pytest.raises(DomainError):
        metric_at([0.0, 0.0, -1.0])


def test_christoffel_matches_metric_derivatives():
    p = np.array([0.3, -0.2, 0.7])
    h = 1e-5
    dg = np.stack([(metric_at(p + h * e) - metric_at(p - h * e)) / (2 * h) for e in np.eye(3)])
    # low[k, i, j] = (d_i g_kj + d_j g_ki - d_k g_ij) / 2
    low = 0.5 * (np.einsum("ikj->kij", dg) + np.einsum("jki->kij", dg) - dg)
    expected = np.einsum("kl,lij->kij", np.linalg.inv(metric_at(p)), low)
    assert np.allclose(christoffel(p), expected, atol=1e-8)


def test_apply_isometry_examples():
    p = np.array([0.4, -1.2, 0.3])
    assert np.allclose(apply_isometry(np.eye(2), p), p)
    assert np.allclose(apply_isometry(np.array([[1, 1], [0, 1]]), BASE_POINT), [1.0, 0.0, 1.0])
    dil = np.diag([np.sqrt(2), 1 / np.sqrt(2)])
    assert np.allclose(apply_isometry(dil, BASE_POINT), [0.0, 0.0, 2.0])


def test_apply_isometry_rejects_degenerate():
    with pytest.raises(DomainError):
        apply_isometry(np.array([[1, 1], [1, 1]]), BASE_POINT)


def test_frame_to_isometry_examples():
    assert np.allclose(frame_to_isometry(BASE_POINT, BASE_FRAME), np.eye(2))
    g = frame_to_isometry(np.array([0.0, 0.0, 2.0]), 2 * np.eye(3))
    assert np.allclose(g, np.diag([np.sqrt(2), 1 / np.sqrt(2)]))
    alpha = 0.7
    c, s = np.cos(alpha), np.sin(alpha)
    rotated = np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])
    expected = normalize_sign(np.diag([np.exp(1j * alpha / 2), np.exp(-1j * alpha / 2)]))
    assert np.allclose(frame_to_isometry(BASE_POINT, rotated), expected)


def test_frame_to_isometry_rejects_bad_frames():
    with pytest.raises(DomainError):
        frame_to_isometry(BASE_POINT, 2 * np.eye(3))
    with pytest.raises(DomainError):
        frame_to_isometry(BASE_POINT, np.diag([1.0, 1.0, -1.0]))


def test_normal_flow_examples():
    r = 0.8
    q, transport = normal_flow(BASE_POINT, np.array([0.0, 0.0, 1.0]), r)
    assert np.allclose(q, [0.0, 0.0, np.exp(r)])
    q, transport = normal_flow(BASE_POINT, np.array([0.0, 0.0, 1.0]), 0.0)
    assert np.allclose(q, BASE_POINT) and np.allclose(transport, np.eye(3))
    q, _ = normal_flow(BASE_POINT, np.array([1.0, 0.0, 0.0]), r)
    assert np.allclose(q, [np.tanh(r), 0.0, 1 / np.cosh(r)])


def test_normal_flow_rejects_non_unit():
    with pytest.raises(DomainError):
        normal_flow(BASE_POINT, np.array([0.0, 0.0, 2.0]), 1.0)


def test_fermi_examples():
    u = 1.0
    p = fermi_embed(u, 0.0, 0.0)
    assert hyperbolic_distance(p, BASE_POINT) == pytest.approx(u)
    h = 1e-5
    x_s = (fermi_embed(u, h, 0.0) - fermi_embed(u, -h, 0.0)) / (2 * h)
    x_t = (fermi_embed(u, 0.0, h) - fermi_embed(u, 0.0, -h)) / (2 * h)
    g = metric_at(p)
    assert x_s @ g @ x_s == pytest.approx(2.38110, abs=1e-5)
    assert x_t @ g @ x_t == pytest.approx(1.38110, abs=1e-5)
    assert x_s @ g @ x_t == pytest.approx(0.0, abs=1e-9)


def test_fermi_rejects_nonpositive_radius():
    with pytest.raises(DomainError):
        fermi_embed(0.0, 0.0, 0.0)


def test_fermi_jet_matches_finite_differences(rng):
    u, s, th = 0.9, 0.2, 1.1
    x, d1, d2 = fermi_jet(u, s, th)
    h = 1e-5
    base = np.array([u, s, th])
    for k in range(3):
        e = np.eye(3)[k] * h
        fd = (fermi_embed(*(base + e)) - fermi_embed(*(base - e))) / (2 * h)
        assert np.allclose(d1[k], fd, atol=1e-8)
        _, dp, _ = fermi_jet(*(base + e))
        _, dm, _ = fermi_jet(*(base - e))
        assert np.allclose(d2[k], (dp - dm) / (2 * h), atol=1e-7)


def test_fermi_metric_and_holonomy():
    chart = FermiChart(2.0, 0.4)
    assert np.allclose(chart.metric(1.0), np.diag([1.0, np.cosh(1) ** 2, np.sinh(1) ** 2]))
    p = chart.embed(0.8, 0.3, 0.5)
    moved = apply_isometry(chart.holonomy(), p)
    assert np.allclose(moved, chart.embed(0.8, 2.3, 0.9))


@settings(max_examples=60, deadline=None)
@given(isometries, points, points)
def test_isometries_preserve_distance(g, p, q):
    d = hyperbolic_distance(p, q)
    moved = hyperbolic_distance(apply_isometry(g, p), apply_isometry(g, q))
    assert moved == pytest.approx(d, abs=1e-9, rel=1e-9)


@settings(max_examples=60, deadline=None)
@given(isometries)
def test_frame_round_trip(g):
    point, frame = isometry_to_frame(g)
    assert np.allclose(frame_to_isometry(point, frame), normalize_sign(g), atol=1e-8)


@settings(max_examples=60, deadline=None)
@given(isometries, points)
def test_differential_is_conformal_isometry(g, p):
    d = isometry_differential(g, p)
    q = apply_isometry(g, p)
    assert np.allclose(d.T @ metric_at(q) @ d, metric_at(p), atol=1e-8 * np.max(metric_at(p)))


@settings(max_examples=60, deadline=None)
@given(isometries)
def test_sign_normalization_is_idempotent_and_sign_blind(g):
    n = normalize_sign(g)
    assert np.allclose(normalize_sign(-g), n)
    assert np.allclose(normalize_sign(n), n)


direction = st.tuples(finite, finite, finite).filter(lambda v: np.linalg.norm(v) > 0.1)


@settings(max_examples=60, deadline=None)
@given(points, direction, st.floats(-2.0, 2.0))
def test_normal_flow_geodesic_properties(p, v, r):
    n = p[2] * np.array(v) / np.linalg.norm(v)
    q, transport = normal_flow(p, n, r)
    assert hyperbolic_distance(p, q) == pytest.approx(abs(r), abs=1e-7)
    assert np.allclose(transport.T @ metric_at(q) @ transport, metric_at(p), atol=1e-9 / p[2] ** 2)
    back, _ = normal_flow(q, transport @ n, -r)
    assert np.allclose(back, p, atol=1e-9)
