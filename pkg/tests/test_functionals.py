"""Mean curvatures, Newton transformations, Lovelock tensors: contraction
definitions against subset-enumeration and eigenbasis oracles."""

from itertools import combinations, product
from math import comb, factorial

import numpy as np
import pytest

from almost_schur.catalog import (
    make_ellipsoid,
    make_geodesic_sphere_s4,
    make_immersed_sphere,
    make_product_torus,
    make_quartic_sphere,
)
from almost_schur.curvature_functionals import (
    LovelockData,
    NewtonTensor,
    einstein_newton_bridge,
    elementary_symmetric,
    lovelock,
    lovelock_batch,
    mean_curvature,
    mean_curvature_hypersurface,
    mean_curvatures_from_shape,
    newton_from_shape,
    newton_transform,
    traceless_newton,
    traceless_part,
)
from almost_schur.errors import ArgumentError
from almost_schur.extrinsic_geometry import gauss_riemann_batch, point_geometry
from almost_schur.tensor_algebra import gen_kronecker, kn_product


def sigma_oracle(k, r):
    """Subset enumeration of the elementary symmetric polynomial."""
    return sum(np.prod([k[i] for i in idx]) for idx in combinations(range(len(k)), r))


def hr_bruteforce(a, r):
    """Full index-tuple loop over the defining contraction (no subset trick)."""
    n = a.shape[0]
    total = 0.0 if r % 2 == 0 else np.zeros(a.shape[2])
    for iidx in product(range(n), repeat=r):
        for jidx in product(range(n), repeat=r):
            eps = gen_kronecker(iidx, jidx)
            if eps == 0:
                continue
            term = 1.0
            for p in range(r // 2):
                term *= a[iidx[2 * p], jidx[2 * p]] @ a[iidx[2 * p + 1], jidx[2 * p + 1]]
            if r % 2:
                total = total + eps * term * a[iidx[r - 1], jidx[r - 1]]
            else:
                total += eps * term
    return total / factorial(r)


class TestMeanCurvature:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_unit_sphere_binomials(self, n):
        a = np.eye(n)[:, :, None]
        for r in range(1, n + 1):
            h = mean_curvature(a, r)
            h = h[0] if r % 2 else h
            assert abs(h - comb(n, r)) < 1e-12

    def test_totally_geodesic_vanishes(self):
        a = np.zeros((3, 3, 2))
        assert mean_curvature(a, 2) == 0.0
        assert np.abs(mean_curvature(a, 1)).max() == 0.0

    def test_sigma_of_123(self):
        assert mean_curvature_hypersurface(np.array([1.0, 2.0, 3.0]), 2) == 11.0

    def test_sigma_against_subset_oracle_n6(self):
        rng = np.random.default_rng(0)
        k = rng.standard_normal(6)
        for r in range(1, 7):
            got = mean_curvature_hypersurface(k, r)
            want = sigma_oracle(k, r)
            assert abs(got - want) < 1e-11 * max(abs(want), 1.0)

    def test_product_torus_h2_matches_bruteforce(self):
        torus = make_product_torus(1.0, 2.0)
        pg = point_geometry(torus.charts[0], [0.8, 1.7])
        a = pg.A.entries
        got = mean_curvature(a, 2)
        want = hr_bruteforce(a, 2)
        assert abs(got - want) < 1e-12
        assert abs(got) < 1e-13  # orthogonal normal directions: H_2 = 0

    def test_product_torus_h1_matches_bruteforce(self):
        torus = make_product_torus(1.0, 3.0)
        pg = point_geometry(torus.charts[0], [0.2, 0.5])
        a = pg.A.entries
        np.testing.assert_allclose(mean_curvature(a, 1), hr_bruteforce(a, 1), atol=1e-13)

    def test_out_of_range_order(self):
        with pytest.raises(ArgumentError):
            mean_curvature(np.zeros((3, 3, 1)), 4)

    def test_newton_identity_route_matches_eigenvalues(self):
        rng = np.random.default_rng(1)
        s = rng.standard_normal((4, 4))
        s = 0.5 * (s + s.T)
        e_direct = elementary_symmetric(np.linalg.eigvalsh(s))
        e_newton = mean_curvatures_from_shape(s)
        np.testing.assert_allclose(e_newton, e_direct, atol=1e-11)


class TestNewtonTransform:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_unit_sphere_value(self, n):
        a = np.eye(n)[:, :, None]
        for r in range(1, n):
            t = newton_transform(a, r)
            t = t[..., 0] if r % 2 else t
            np.testing.assert_allclose(t, comb(n - 1, r) * np.eye(n), atol=1e-12)
            # trace identity: n C(n-1, r) = (n-r) C(n, r)
            assert abs(np.trace(t) - (n - r) * comb(n, r)) < 1e-11

    def test_zero_input(self):
        assert np.abs(newton_transform(np.zeros((4, 4, 2)), 2)).max() == 0.0

    def test_eigenbasis_oracle_n4(self):
        # contraction path vs sigma_r with one eigenvalue omitted; this also
        # pins the unnormalized convention (no 1/C(n,r) factor), the only one
        # compatible with the trace identity tr T^r = (n-r) H_r
        rng = np.random.default_rng(2)
        s = rng.standard_normal((4, 4))
        s = 0.5 * (s + s.T)
        vals, vecs = np.linalg.eigh(s)
        a = s[:, :, None]
        for r in (1, 2, 3):
            t = newton_transform(a, r)
            t = t[..., 0] if r % 2 else t
            diag = vecs.T @ t @ vecs
            omitted = [
                sigma_oracle(np.delete(vals, i), r) for i in range(4)
            ]
            np.testing.assert_allclose(diag, np.diag(omitted), atol=1e-10)

    def test_top_order_is_zero(self):
        rng = np.random.default_rng(3)
        a = rng.standard_normal((3, 3, 2))
        a = 0.5 * (a + a.transpose(1, 0, 2))
        assert np.abs(newton_transform(a, 3)).max() == 0.0

    def test_fast_path_recursion_matches_contraction(self):
        rng = np.random.default_rng(4)
        for n in (3, 4, 5, 6):
            for _ in range(5):
                s = rng.standard_normal((n, n))
                s = 0.5 * (s + s.T)
                a = s[:, :, None]
                for r in range(1, n):
                    t_eps = newton_transform(a, r)
                    t_eps = t_eps[..., 0] if r % 2 else t_eps
                    t_fast = newton_from_shape(s, r)
                    scale = max(np.abs(t_fast).max(), 1.0)
                    assert np.abs(t_eps - t_fast).max() < 1e-11 * scale


class TestTracelessNewton:
    def test_sphere_traceless_part_vanishes(self):
        a = np.eye(3)[:, :, None]
        t = NewtonTensor(r=1, parity="odd", entries=newton_transform(a, 1),
                         mean=mean_curvature(a, 1))
        t0 = traceless_newton(t)
        assert np.abs(t0.entries).max() < 1e-14

    def test_ellipsoid_order1_equals_traceless_shape(self):
        # traceless T^1 = -(traceless A) for hypersurfaces
        ell = make_ellipsoid([1.0, 1.0, 1.3])
        pg = point_geometry(ell.charts[0], [0.4, -0.6])
        shape = pg.A.entries[..., 0]
        t1 = newton_from_shape(shape, 1)
        t1_traceless = traceless_part(t1)
        a_traceless = traceless_part(shape)
        np.testing.assert_allclose(t1_traceless, -a_traceless, atol=1e-11)
        assert abs(np.linalg.norm(t1_traceless) - np.linalg.norm(a_traceless)) < 1e-11

    def test_pythagoras_split(self):
        rng = np.random.default_rng(5)
        n = 4
        for _ in range(50):
            s = rng.standard_normal((n, n))
            s = 0.5 * (s + s.T)
            r = int(rng.integers(1, n))
            t = newton_from_shape(s, r)
            hr = mean_curvatures_from_shape(s)[r]
            hbar = rng.standard_normal()  # any constant
            t0 = traceless_part(t)
            lhs = np.sum((t - (n - r) / n * hbar * np.eye(n)) ** 2)
            rhs = np.sum(t0**2) + (n - r) ** 2 / n * (hr - hbar) ** 2
            assert abs(lhs - rhs) < 1e-11 * max(lhs, 1.0)

    def test_trace_invariant_enforced(self):
        with pytest.raises(ArgumentError):
            NewtonTensor(r=1, parity="scalar-codim1", entries=np.eye(3), mean=77.0)


class TestLovelock:
    def test_unit_s4_order1(self):
        eye = np.eye(4)
        b = np.einsum("ik,jl->ijkl", eye, eye) - np.einsum("il,jk->ijkl", eye, eye)
        data = lovelock(b, 1)
        assert abs(data.Rk - 12.0) < 1e-11
        # trace companion (R/2) g - Ric = +3 g on the unit 4-sphere; the
        # opposite sign would break the trace identity tr E = (n-2)/2 R
        np.testing.assert_allclose(data.Ek, 3.0 * eye, atol=1e-11)

    def test_flat_curvature_gives_zero(self):
        data = lovelock(np.zeros((4, 4, 4, 4)), 1)
        assert data.Rk == 0.0
        assert np.abs(data.Ek).max() == 0.0

    def test_order1_reduces_to_scalar_and_einstein_companion(self):
        rng = np.random.default_rng(6)
        n = 4
        s1 = rng.standard_normal((n, n))
        s2 = rng.standard_normal((n, n))
        rm = kn_product(0.5 * (s1 + s1.T), 0.5 * (s1 + s1.T)) + kn_product(
            0.5 * (s2 + s2.T), 0.5 * (s2 + s2.T)
        )
        ric = np.einsum("ijil->jl", rm)
        scal = np.trace(ric)
        data = lovelock(rm, 1)
        assert abs(data.Rk - scal) < 1e-11 * max(abs(scal), 1.0)
        np.testing.assert_allclose(
            data.Ek, 0.5 * scal * np.eye(n) - ric, atol=1e-11 * max(abs(scal), 1.0)
        )

    def test_random_curvature_k2_trace_identity(self):
        rng = np.random.default_rng(7)
        n = 5
        s1 = rng.standard_normal((n, n))
        s2 = rng.standard_normal((n, n))
        rm = kn_product(0.5 * (s1 + s1.T), 0.5 * (s1 + s1.T)) + kn_product(
            0.5 * (s2 + s2.T), 0.5 * (s2 + s2.T)
        )
        rk, ek = lovelock_batch(rm[None], 2)
        tr = np.trace(ek[0])
        assert abs(tr - 0.5 * (n - 4) * rk[0]) < 1e-10 * max(abs(rk[0]), 1.0)
        LovelockData(k=2, Rk=float(rk[0]), Ek=ek[0])  # invariant must not raise

    def test_order_out_of_range(self):
        with pytest.raises(ArgumentError):
            lovelock(np.zeros((4, 4, 4, 4)), 2)


class TestFrameInvariance:
    def test_scalars_under_random_tangent_rotation(self):
        rng = np.random.default_rng(8)
        n, q = 4, 2
        a = rng.standard_normal((n, n, q))
        a = 0.5 * (a + a.transpose(1, 0, 2))
        rot, _ = np.linalg.qr(rng.standard_normal((n, n)))
        a_rot = np.einsum("ai,bj,abq->ijq", rot, rot, a)
        for r in (1, 2, 3):
            h = mean_curvature(a, r)
            h_rot = mean_curvature(a_rot, r)
            np.testing.assert_allclose(
                np.linalg.norm(np.atleast_1d(h)),
                np.linalg.norm(np.atleast_1d(h_rot)),
                rtol=1e-10,
            )
            t0 = traceless_part(newton_transform(a, r))
            t0_rot = traceless_part(newton_transform(a_rot, r))
            np.testing.assert_allclose(
                np.sum(t0**2), np.sum(t0_rot**2), rtol=1e-10
            )

    def test_lovelock_under_random_rotation(self):
        rng = np.random.default_rng(9)
        n = 5
        s1 = rng.standard_normal((n, n))
        rm = kn_product(0.5 * (s1 + s1.T), 0.5 * (s1 + s1.T))
        rot, _ = np.linalg.qr(rng.standard_normal((n, n)))
        rm_rot = np.einsum("ai,bj,ck,dl,abcd->ijkl", rot, rot, rot, rot, rm)
        for k in (1, 2):
            rk, ek = lovelock_batch(rm[None], k)
            rk2, ek2 = lovelock_batch(rm_rot[None], k)
            assert abs(rk[0] - rk2[0]) < 1e-10 * max(abs(rk[0]), 1.0)
            e0 = traceless_part(ek[0])
            e02 = traceless_part(ek2[0])
            assert abs(np.sum(e0**2) - np.sum(e02**2)) < 1e-9 * max(np.sum(e0**2), 1.0)


class TestEinsteinNewtonBridge:
    def test_unit_s4_in_r5(self):
        sphere = make_immersed_sphere(4, 1.0)
        pg = point_geometry(sphere.charts[0], [0.2, -0.1, 0.4, 0.3])
        assert einstein_newton_bridge(pg, sphere.ambient, 1) < 1e-10

    def test_totally_geodesic_plane(self):
        import almost_schur.extrinsic_geometry as ext
        from almost_schur.domains import Box
        from almost_schur.extrinsic_geometry import ImmersionChart

        def eval_map(u):
            u = np.atleast_2d(u)
            batch = u.shape[0]
            F = np.concatenate([u, np.zeros((batch, 1))], axis=1)
            J = np.zeros((batch, 4, 3))
            J[:, 0, 0] = J[:, 1, 1] = J[:, 2, 2] = 1.0
            return F, J, np.zeros((batch, 4, 3, 3))

        chart = ImmersionChart(
            name="plane3", n=3, m=4,
            domain=Box((-1,) * 3, (1,) * 3, (False,) * 3), eval=eval_map,
        )
        pg = ext.point_geometry(chart, [0.1, 0.2, 0.3])
        assert einstein_newton_bridge(pg, ext.EUCLIDEAN, 1) == 0.0

    def test_random_convex_hypersurface_n4(self):
        rng = np.random.default_rng(10)
        axes = rng.uniform(0.9, 1.4, size=5)
        ell = make_ellipsoid(axes)
        for _ in range(5):
            u = rng.uniform(-0.8, 0.8, 4)
            pg = point_geometry(ell.charts[0], u)
            assert einstein_newton_bridge(pg, ell.ambient, 1) < 1e-9

    def test_n5_hypersurface_k2(self):
        rng = np.random.default_rng(11)
        axes = rng.uniform(0.9, 1.3, size=6)
        ell = make_ellipsoid(axes)
        pg = point_geometry(ell.charts[0], rng.uniform(-0.6, 0.6, 5))
        assert einstein_newton_bridge(pg, ell.ambient, 2) < 1e-9

    def test_spherical_ambient_offset_constant(self):
        # E^(1) - T^2 = C(n-1, 2) c I for a hypersurface of the unit sphere
        gs = make_geodesic_sphere_s4(np.pi / 3)
        pg = point_geometry(gs.charts[0], [0.3, -0.2, 0.1], gs.ambient)
        assert einstein_newton_bridge(pg, gs.ambient, 1) < 1e-10

        rm = gauss_riemann_batch(pg.A.entries[None], gs.ambient.c)
        _, ek = lovelock_batch(rm, 1)
        t2 = newton_from_shape(pg.A.entries[..., 0], 2)
        offset = ek[0] - t2
        beta = offset[0, 0] / gs.ambient.c
        assert abs(beta - comb(2, 2)) < 1e-10  # C(n-1, 2) with n = 3

    def test_curved_ambient_higher_order_refused(self):
        gs = make_geodesic_sphere_s4()
        pg = point_geometry(gs.charts[0], [0.3, -0.2, 0.1], gs.ambient)
        with pytest.raises(ArgumentError):
            einstein_newton_bridge(pg, gs.ambient, 2)

    def test_independent_paths_on_quartic_sphere(self):
        qs = make_quartic_sphere()
        rng = np.random.default_rng(12)
        for _ in range(3):
            pg = point_geometry(qs.charts[0], rng.uniform(-0.7, 0.7, 3))
            assert einstein_newton_bridge(pg, qs.ambient, 1) < 1e-9
