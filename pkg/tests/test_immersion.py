import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deltaideal.delta_opt import OptimizerOptions
from deltaideal.errors import DomainError, RankDeficiency
from deltaideal.immersion import (
    ParametricImmersion,
    SampledImmersion,
    builtin_shape,
    cylinder,
    ellipsoid,
    fundamental_forms,
    ideality_residual,
    induced_curvature,
    is_ideal,
    plane,
    product_torus,
    reparametrize,
    sample_points,
    sphere,
    torus,
    verify_inequality,
)
from deltaideal.partitions import Partition
from deltaideal.tensor_core import constant_curvature_tensor, scalar_curvature, sectional_curvature

SHAPES = [sphere(2), sphere(3), plane(), cylinder(1.5), torus(2.0, 1.0), ellipsoid(1, 2, 3),
          product_torus(), product_torus(1.0, 0.5)]


def gauss_curvature(sample):
    R = induced_curvature(sample)
    return sectional_curvature(R, [1, 0], [0, 1])


def test_sphere_first_form_and_mean_curvature():
    s = fundamental_forms(sphere(2), [0.7, 1.3])
    np.testing.assert_allclose(s.g, np.diag([1.0, np.sin(0.7) ** 2]), atol=1e-14)
    assert s.H2 == pytest.approx(1.0, abs=1e-12)
    # unit sphere: H points back to the centre
    np.testing.assert_allclose(s.mean_curvature_vector, -s.position, atol=1e-12)


def test_radius_scales_mean_curvature():
    s = fundamental_forms(sphere(3, radius=2.0), [0.4, 1.1, 2.0])
    assert s.H2 == pytest.approx(0.25, abs=1e-12)


def test_plane_is_flat_and_totally_geodesic():
    s = fundamental_forms(plane(), [0.3, -2.0])
    assert np.abs(s.h).max() == 0
    assert s.H2 == 0
    assert gauss_curvature(s) == 0


def test_cylinder_forms():
    s = fundamental_forms(cylinder(1.0), [1.0, 2.0])
    assert s.H2 == pytest.approx(0.25, abs=1e-14)
    assert abs(gauss_curvature(s)) < 1e-14


@pytest.mark.parametrize("im", SHAPES, ids=lambda im: f"{im.name}{im.n}")
def test_numeric_derivatives_match_analytic(im, rng):
    numeric = im.numeric()
    assert numeric.derivative_source == "numeric" and im.derivative_source == "analytic"
    for u in sample_points(im, 10, rng, margin=0.05):
        a, b = fundamental_forms(im, u), fundamental_forms(numeric, u)
        np.testing.assert_allclose(b.g, a.g, atol=1e-6)
        np.testing.assert_allclose(b.h, a.h, atol=1e-6)
        assert b.H2 == pytest.approx(a.H2, abs=1e-6)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_sphere_gauss_equation_gives_space_form(n, rng):
    im = sphere(n)
    for u in sample_points(im, 5, rng, margin=0.05):
        R = induced_curvature(fundamental_forms(im, u))
        np.testing.assert_allclose(R.components, constant_curvature_tensor(n, 1.0).components, atol=1e-8)


def test_torus_curvatures_match_closed_forms(rng):
    R, r = 2.0, 1.0
    im = torus(R, r)
    for theta, phi in sample_points(im, 50, rng):
        s = fundamental_forms(im, [theta, phi])
        w = R + r * np.cos(theta)
        assert gauss_curvature(s) == pytest.approx(np.cos(theta) / (r * w), abs=1e-12)
        H = (R + 2 * r * np.cos(theta)) / (2 * r * w)
        assert s.H2 == pytest.approx(H**2, abs=1e-12)


def test_product_torus_is_flat():
    s = fundamental_forms(product_torus(), [0.4, 2.2])
    assert np.abs(induced_curvature(s).components).max() < 1e-15
    assert s.H2 == pytest.approx(1.0, abs=1e-14)  # |H|^2 = (1/r1^2 + 1/r2^2) / 4


def test_domain_and_rank_errors():
    with pytest.raises(DomainError):
        fundamental_forms(torus(), [7.0, 0.0])
    with pytest.raises(DomainError):
        fundamental_forms(torus(), [0.0])
    degenerate = ParametricImmersion(
        2, 3, lambda u: np.array([u[0], u[0], 0.0]), ((0, 1), (0, 1)), name="line"
    )
    with pytest.raises(RankDeficiency):
        fundamental_forms(degenerate, [0.5, 0.5])
    with pytest.raises(RankDeficiency):
        fundamental_forms(sphere(2), [0.0, 1.0])  # coordinate pole


def test_rotation_reparametrization_invariance():
    im = torus(3.0, 1.0)
    c, s = np.cos(0.3), np.sin(0.3)
    A = np.array([[c, -s], [s, c]])
    re = reparametrize(im, A, shift=[1.0, 2.0])
    for v in [[0.1, 0.2], [0.5, -0.4], [1.0, 1.5]]:
        u = A @ np.array(v) + [1.0, 2.0]
        a, b = fundamental_forms(im, u), fundamental_forms(re, v)
        assert b.H2 == pytest.approx(a.H2, abs=1e-8)
        assert scalar_curvature(induced_curvature(b)) == pytest.approx(
            scalar_curvature(induced_curvature(a)), abs=1e-8
        )
        # numeric derivatives of the reparametrized chart agree too
        assert fundamental_forms(re.numeric(), v).H2 == pytest.approx(a.H2, abs=1e-6)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.2, 5.0), st.floats(0.1, 3.0), st.floats(0.0, 6.28))
def test_torus_mean_curvature_at_least_gauss(R_minus_r, r, theta):
    # H^2 >= K on any surface: (k1 - k2)^2 / 4 >= 0
    im = torus(r + R_minus_r, r)
    s = fundamental_forms(im, [theta, 1.0])
    assert s.H2 - gauss_curvature(s) >= -1e-12


# inequality and ideality


def test_sphere_attains_equality_everywhere():
    im = sphere(2)
    report = verify_inequality(im, sample_points(im, 500, 7))
    assert not report.violated
    assert report.max_abs_slack(Partition(2, ())) < 1e-6
    assert report.nonconverged == 0


def test_torus_has_strict_slack():
    im = torus(2.0, 1.0)
    report = verify_inequality(im, sample_points(im, 1000, 11))
    assert not report.violated
    assert report.min_slack > 0


def test_plane_equality_and_cylinder_residual():
    assert verify_inequality(plane(), sample_points(plane(), 20, 0)).max_abs_slack(Partition(2, ())) == 0
    res = ideality_residual(cylinder(1.0), sample_points(cylinder(1.0), 20, 0))
    np.testing.assert_allclose(res, 0.25, atol=1e-12)
    assert not is_ideal(res)


def test_three_sphere_is_ideal():
    im = sphere(3)
    res = ideality_residual(im, sample_points(im, 20, 3))
    assert is_ideal(res)
    report = verify_inequality(im, sample_points(im, 20, 3))
    assert not report.violated
    # Clifford-type slack for (2) on the unit 3-sphere: c H^2 - delta = 9/4 - 2
    assert report.max_abs_slack(Partition(3, (2,))) == pytest.approx(0.25, abs=1e-8)


def test_torus_is_not_ideal_at_inner_equator():
    res = ideality_residual(torus(2.0, 1.0), [[np.pi, 0.5]])
    assert res[0] > 0.1


def test_maximum_principle_on_ellipsoid(rng):
    # delta0 <= H^2 pointwise for any submanifold
    im = ellipsoid(1.0, 1.5, 2.5)
    res = ideality_residual(im, sample_points(im, 40, rng, margin=0.05))
    assert res.min() >= -1e-9


def test_report_serialisation():
    im = sphere(3)
    report = verify_inequality(im, sample_points(im, 3, 0), OptimizerOptions(restarts=4))
    data = json.loads(json.dumps(report.to_json(records=True)))
    assert len(data["records"]) == 6
    assert data["partitions"][0]["partition"] == []
    lines = report.to_csv().splitlines()
    assert lines[0] == "point,u,partition,delta,cH2,slack,converged"
    assert len(lines) == 7


def test_violation_flagged_with_negative_tolerance():
    im = torus()
    report = verify_inequality(im, sample_points(im, 5, 0), tol=-1.0)
    assert report.violated


# sampled grids


def sampled_sphere_json(count=41):
    thetas = np.linspace(0.6, 2.4, count)
    phis = np.linspace(0.5, 2.5, count)
    im = sphere(2)
    grid = [[[t, p], im.position([t, p]).tolist()] for t in thetas for p in phis]
    return {"n": 2, "m": 3, "grid": grid}


def test_sampled_grid_approximates_sphere(tmp_path):
    path = tmp_path / "grid.json"
    path.write_text(json.dumps(sampled_sphere_json()))
    im = SampledImmersion.from_json(path)
    pts = im.default_points()
    assert len(pts) == 37 * 37
    res = ideality_residual(im, pts[::97])
    assert np.abs(res).max() < 1e-2
    s = im.sample(pts[200])
    assert s.H2 == pytest.approx(1.0, abs=1e-2)


def test_sampled_grid_errors():
    data = sampled_sphere_json(9)
    im = SampledImmersion.from_json(data)
    with pytest.raises(DomainError):
        im.sample([0.6, 0.5])  # boundary node
    with pytest.raises(ValueError):
        SampledImmersion.from_json({**data, "grid": data["grid"][:-1]})


def test_builtin_lookup():
    assert builtin_shape("sphere", 4).n == 4
    assert builtin_shape("torus", 3, 1).params == {"R": 3.0, "r": 1.0}
    with pytest.raises(KeyError):
        builtin_shape("klein-bottle")


@pytest.mark.parametrize("im", [sphere(2), sphere(3), torus(2.0, 1.0), ellipsoid(1, 2, 3), cylinder(1.0)],
                         ids=lambda im: f"{im.name}{im.n}")
def test_pointwise_maximum_principle(im):
    pts = sample_points(im, 15, 4, margin=0.05)
    report = verify_inequality(im, pts)
    res = ideality_residual(im, pts)
    for i in range(len(pts)):
        if any(abs(r.slack) < 1e-6 for r in report.records if r.point == i):
            assert res[i] < 1e-5
