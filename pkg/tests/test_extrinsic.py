"""Pointwise immersion geometry against closed-form and FD oracles."""

import numpy as np
import pytest

from almost_schur.catalog import (
    make_ellipsoid,
    make_geodesic_sphere_s4,
    make_immersed_sphere,
    make_product_torus,
    make_quartic_sphere,
)
from almost_schur.domains import Box
from almost_schur.errors import (
    CodimensionError,
    DegenerateImmersionError,
    NumericError,
)
from almost_schur.extrinsic_geometry import (
    AmbientSpace,
    ImmersionChart,
    fd_jacobian_hessian,
    gauss_riemann,
    gauss_riemann_batch,
    point_geometry,
    point_geometry_batch,
    principal_curvatures,
    ricci_bound_certificate,
    ricci_onb_batch,
)
from almost_schur.quadrature import build_grid
from almost_schur.tensor_algebra import curvature_symmetry_residuals


def plane_chart():
    def eval_map(u):
        u = np.atleast_2d(u)
        batch = u.shape[0]
        F = np.concatenate([u, np.zeros((batch, 1))], axis=1)
        J = np.zeros((batch, 3, 2))
        J[:, 0, 0] = 1.0
        J[:, 1, 1] = 1.0
        return F, J, np.zeros((batch, 3, 2, 2))

    return ImmersionChart(
        name="plane", n=2, m=3,
        domain=Box((-1, -1), (1, 1), (False, False)),
        eval=eval_map,
    )


def cylinder_chart(rho=0.5):
    def eval_map(u):
        u = np.atleast_2d(u)
        th, z = u[:, 0], u[:, 1]
        batch = u.shape[0]
        F = np.stack([rho * np.cos(th), rho * np.sin(th), z], axis=1)
        J = np.zeros((batch, 3, 2))
        J[:, 0, 0] = -rho * np.sin(th)
        J[:, 1, 0] = rho * np.cos(th)
        J[:, 2, 1] = 1.0
        H = np.zeros((batch, 3, 2, 2))
        H[:, 0, 0, 0] = -rho * np.cos(th)
        H[:, 1, 0, 0] = -rho * np.sin(th)
        return F, J, H

    def orient(F, nu):
        # outward from the axis
        dots = np.einsum("nm,nm->n", F[:, :2], nu[:, :2])
        return np.where(dots >= 0, 1.0, -1.0)

    return ImmersionChart(
        name="cylinder", n=2, m=3,
        domain=Box((0.0, -1.0), (2 * np.pi, 1.0), (True, False)),
        eval=eval_map, orient=orient,
    )


class TestPointGeometry:
    @pytest.mark.parametrize("radius", [1.0, 2.0])
    def test_sphere_principal_curvatures(self, radius):
        sphere = make_immersed_sphere(2, radius)
        pg = point_geometry(sphere.charts[0], [0.3, -0.2])
        np.testing.assert_allclose(
            principal_curvatures(pg), [1 / radius, 1 / radius], atol=1e-12
        )

    def test_analytic_derivatives_match_fd_oracle(self):
        sphere = make_immersed_sphere(2, 1.0)
        chart = sphere.charts[0]
        u = np.array([[0.4, 0.1], [-0.7, 0.3]])
        _, J, H = chart.eval(u)
        Jfd, Hfd = fd_jacobian_hessian(chart, u, h=1e-5)
        assert np.abs(J - Jfd).max() < 1e-8
        assert np.abs(H - Hfd).max() < 1e-5

    def test_flat_plane_is_totally_geodesic(self):
        pg = point_geometry(plane_chart(), [0.2, 0.6])
        assert np.abs(pg.A.entries).max() == 0.0

    def test_product_torus_second_fundamental_form(self):
        torus = make_product_torus(1.0, 3.0)
        pg = point_geometry(torus.charts[0], [0.7, 2.1])
        a = pg.A.entries  # orthonormal frame values
        norms = np.linalg.norm(a, axis=2)
        np.testing.assert_allclose(norms[0, 0], 1.0, atol=1e-12)  # 1/a
        np.testing.assert_allclose(norms[1, 1], 1 / 3.0, atol=1e-12)  # 1/b
        assert norms[0, 1] < 1e-14

    def test_ellipsoid_equator_closed_form(self):
        # semi-axes (1, 1, 2): meridian ellipse gives a/c^2, parallel gives 1/a
        ell = make_ellipsoid([1.0, 1.0, 2.0])
        pg = point_geometry(ell.charts[0], [1.0, 0.0])  # |u| = 1 maps to z = 0
        np.testing.assert_allclose(
            principal_curvatures(pg), [1.0 / 4.0, 1.0], atol=1e-10
        )

    def test_cylinder_curvatures(self):
        pg = point_geometry(cylinder_chart(0.5), [1.0, 0.2])
        np.testing.assert_allclose(principal_curvatures(pg), [0.0, 2.0], atol=1e-12)

    def test_codim_two_principal_curvatures_refused(self):
        torus = make_product_torus()
        pg = point_geometry(torus.charts[0], [0.5, 0.5])
        with pytest.raises(CodimensionError):
            principal_curvatures(pg)

    def test_rank_deficient_chart_rejected(self):
        def bad(u):
            u = np.atleast_2d(u)
            batch = u.shape[0]
            F = np.stack([u[:, 0], u[:, 0], np.zeros(batch)], axis=1)
            J = np.zeros((batch, 3, 2))
            J[:, 0, 0] = 1.0
            J[:, 1, 0] = 1.0
            return F, J, np.zeros((batch, 3, 2, 2))

        chart = ImmersionChart(
            name="degenerate", n=2, m=3,
            domain=Box((-1, -1), (1, 1), (False, False)), eval=bad,
        )
        with pytest.raises(DegenerateImmersionError):
            point_geometry(chart, [0.0, 0.0])

    def test_normal_frame_orthonormal_and_orthogonal_to_tangent(self):
        qs = make_quartic_sphere()
        data = point_geometry_batch(qs.charts[0], np.array([[0.2, -0.4, 0.6]]))
        nu = data["normal"][0]
        tangent = data["tangent"][0]
        assert np.abs(nu.T @ nu - np.eye(nu.shape[1])).max() < 1e-10
        assert np.abs(tangent.T @ nu).max() < 1e-10

    def test_sign_coherence_mean_curvature_positive(self):
        # outward normal with A = -(Hessian normal part) makes H_1 = n/rho > 0
        sphere = make_immersed_sphere(3, 1.0)
        pg = point_geometry(sphere.charts[1], [0.1, 0.2, 0.3])
        assert np.sum(principal_curvatures(pg)) > 0


class TestGaussRiemann:
    def test_unit_sphere_gives_unit_curvature_tensor(self):
        sphere = make_immersed_sphere(3, 1.0)
        pg = point_geometry(sphere.charts[0], [0.1, -0.2, 0.05])
        rm = gauss_riemann(pg).entries
        eye = np.eye(3)
        b = np.einsum("ik,jl->ijkl", eye, eye) - np.einsum("il,jk->ijkl", eye, eye)
        assert np.abs(rm - b).max() < 1e-11

    def test_product_torus_is_flat(self):
        torus = make_product_torus(1.0, 2.0)
        pg = point_geometry(torus.charts[0], [1.1, 0.4])
        assert np.abs(gauss_riemann(pg).entries).max() < 1e-13

    def test_random_convex_quadric_bianchi(self):
        rng = np.random.default_rng(11)
        axes = rng.uniform(0.8, 1.6, size=4)
        ell = make_ellipsoid(axes)
        data = point_geometry_batch(ell.charts[0], rng.uniform(-0.8, 0.8, (5, 3)))
        rm = gauss_riemann_batch(data["a_onb"], 0.0)
        for t in rm:
            res = curvature_symmetry_residuals(t)
            assert res["bianchi"] < 1e-11 * max(res["scale"], 1.0)

    @pytest.mark.parametrize("name_axes", [[1.0, 1.0, 1.3], [0.9, 1.1, 1.4]])
    def test_scalar_curvature_is_twice_sigma2(self, name_axes):
        ell = make_ellipsoid(name_axes)
        data = point_geometry_batch(ell.charts[0], np.array([[0.3, 0.2], [-0.5, 0.8]]))
        rm = gauss_riemann_batch(data["a_onb"], 0.0)
        scal = np.einsum("bii->b", ricci_onb_batch(rm))
        k = data["principal"]
        sigma2 = k[:, 0] * k[:, 1]
        np.testing.assert_allclose(scal, 2 * sigma2, rtol=1e-9)

    def test_geodesic_sphere_sectional_curvature(self):
        # hypersurface of S^4 at colatitude theta0: sectional = 1 + cot^2(theta0)
        theta0 = np.pi / 3
        gs = make_geodesic_sphere_s4(theta0)
        pg = point_geometry(gs.charts[0], [0.2, -0.1, 0.3], gs.ambient)
        np.testing.assert_allclose(
            principal_curvatures(pg), [1 / np.tan(theta0)] * 3, atol=1e-10
        )
        rm = gauss_riemann(pg, gs.ambient).entries
        np.testing.assert_allclose(rm[0, 1, 0, 1], 1 / np.sin(theta0) ** 2, atol=1e-10)

    def test_sphere_ambient_requires_points_on_sphere(self):
        torus = make_product_torus()
        with pytest.raises(NumericError):
            point_geometry(torus.charts[0], [0.3, 0.4], AmbientSpace("sphere", 1.0))


class TestReparametrizationInvariance:
    def test_principal_curvatures_agree_across_charts(self):
        ell = make_ellipsoid([1.0, 1.0, 1.3])
        u = np.array([0.7, -0.4])
        u_other = u / np.sum(u**2)  # transition map u -> u / |u|^2 (rho = 1)
        pg0 = point_geometry(ell.charts[0], u)
        pg1 = point_geometry(ell.charts[1], u_other)
        np.testing.assert_allclose(pg0.position, pg1.position, atol=1e-12)
        np.testing.assert_allclose(
            principal_curvatures(pg0), principal_curvatures(pg1), atol=1e-8
        )

    def test_ricci_eigenvalues_agree_across_charts(self):
        qs = make_quartic_sphere()
        u = np.array([0.5, -0.3, 0.4])
        u_other = u / np.sum(u**2)
        vals = []
        for chart, point in ((qs.charts[0], u), (qs.charts[1], u_other)):
            data = point_geometry_batch(chart, point[None])
            rm = gauss_riemann_batch(data["a_onb"], 0.0)
            vals.append(np.linalg.eigvalsh(ricci_onb_batch(rm)[0]))
        np.testing.assert_allclose(vals[0], vals[1], atol=1e-8)


class TestFrameCovariance:
    def test_scalars_invariant_under_rotated_normal_frame(self):
        from almost_schur.curvature_functionals import (
            mean_curvature,
            newton_transform,
            traceless_part,
        )

        torus = make_product_torus(1.0, 2.0)
        base = torus.charts[0]
        rng = np.random.default_rng(12)
        theta = 0.9

        def rotated_frame(u):
            nu = base.normal_frame(u)
            c, s = np.cos(theta), np.sin(theta)
            rot = np.array([[c, -s], [s, c]])
            return np.einsum("nmq,qp->nmp", nu, rot)

        rotated = ImmersionChart(
            name="torus-rot", n=2, m=4, domain=base.domain,
            eval=base.eval, normal_frame=rotated_frame,
        )
        u = rng.uniform(0.2, 6.0, size=(4, 2))
        for chart in (base, rotated):
            data = point_geometry_batch(chart, u)
            h1 = mean_curvature(data["a_onb"], 1)
            t1 = newton_transform(data["a_onb"], 1)
            t0n2 = np.einsum("bijq,bijq->b", traceless_part(t1), traceless_part(t1))
            h1n2 = np.einsum("bq,bq->b", h1, h1)
            if chart is base:
                ref = (h1n2.copy(), t0n2.copy())
            else:
                np.testing.assert_allclose(h1n2, ref[0], rtol=1e-10)
                np.testing.assert_allclose(t0n2, ref[1], rtol=1e-10)


class TestRicciCertificate:
    def test_unit_sphere3(self):
        sphere = make_immersed_sphere(3, 1.0)
        grid = build_grid(sphere, 10)
        cert = ricci_bound_certificate(sphere, grid)
        np.testing.assert_allclose(cert.ricci_min, 2.0, atol=1e-9)
        assert cert.K == 0.0

    def test_ellipsoid_convexity(self):
        ell = make_ellipsoid([1.0, 1.0, 1.2])
        grid = build_grid(ell, 24)
        cert = ricci_bound_certificate(ell, grid)
        assert cert.convex is True
        assert cert.K == 0.0

    def test_product_torus_flat(self):
        torus = make_product_torus(1.0, 3.0)
        grid = build_grid(torus, 16)
        cert = ricci_bound_certificate(torus, grid)
        assert abs(cert.ricci_min) < 1e-12
        assert cert.K == 0.0
