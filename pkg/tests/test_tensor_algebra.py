"""Tensor-algebra kernels against independent index-loop oracles."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from almost_schur.errors import ArgumentError, PositivityError
from almost_schur.tensor_algebra import (
    AlgCurvTensor4,
    SymTensor2,
    curvature_symmetry_residuals,
    gen_kronecker,
    inner4,
    kn_product,
    kulkarni_nomizu,
    norm2_curv,
    norm2_sym2,
    traceless2,
    trace2,
    unit_curvature_tensor,
    weyl_decompose,
)


def cycle_sign(perm):
    """Permutation sign via cycle decomposition (independent of the
    inversion-count implementation)."""
    perm = list(perm)
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def kron_oracle(upper, lower):
    if len(set(upper)) < len(upper) or len(set(lower)) < len(lower):
        return 0
    if set(upper) != set(lower):
        return 0
    pos = {v: i for i, v in enumerate(upper)}
    return cycle_sign([pos[v] for v in lower])


class TestGenKronecker:
    def test_identity_permutation(self):
        assert gen_kronecker((1, 2), (1, 2)) == 1

    def test_single_transposition(self):
        assert gen_kronecker((1, 2), (2, 1)) == -1

    def test_repeated_index_is_zero(self):
        assert gen_kronecker((1, 1), (1, 2)) == 0

    def test_set_mismatch_is_zero(self):
        assert gen_kronecker((0, 1), (0, 2)) == 0

    def test_length_mismatch_raises(self):
        with pytest.raises(ArgumentError):
            gen_kronecker((0, 1), (0,))

    def test_out_of_range_raises(self):
        with pytest.raises(ArgumentError):
            gen_kronecker((0, 5), (5, 0), n=3)

    def test_against_cycle_oracle_10k(self):
        rng = np.random.default_rng(0)
        n = 7
        for _ in range(10_000):
            p = int(rng.integers(1, 7))
            upper = tuple(int(x) for x in rng.integers(0, n, size=p))
            lower = tuple(int(x) for x in rng.integers(0, n, size=p))
            assert gen_kronecker(upper, lower) == kron_oracle(upper, lower)

    @given(
        st.lists(st.integers(0, 5), min_size=1, max_size=6),
        st.data(),
    )
    @settings(max_examples=200, deadline=None)
    def test_hypothesis_agrees_with_oracle(self, upper, data):
        lower = data.draw(st.permutations(upper))
        assert gen_kronecker(tuple(upper), tuple(lower)) == kron_oracle(
            tuple(upper), tuple(lower)
        )


def kn_oracle(a, b):
    n = a.shape[0]
    out = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    out[i, j, k, l] = (
                        a[i, k] * b[j, l]
                        + a[j, l] * b[i, k]
                        - a[i, l] * b[j, k]
                        - a[j, k] * b[i, l]
                    )
    return out


class TestKulkarniNomizu:
    def test_half_g_wedge_g_is_unit_curvature(self):
        g = SymTensor2(np.eye(3))
        b = 0.5 * kulkarni_nomizu(g, g).entries
        eye = np.eye(3)
        expected = np.einsum("ik,jl->ijkl", eye, eye) - np.einsum(
            "il,jk->ijkl", eye, eye
        )
        np.testing.assert_allclose(b, expected, atol=1e-15)

    def test_zero_factor_gives_zero(self):
        zero = SymTensor2(np.zeros((3, 3)))
        beta = SymTensor2(np.diag([1.0, 2.0, 3.0]))
        assert np.abs(kulkarni_nomizu(zero, beta).entries).max() == 0.0

    def test_matches_index_loop_oracle(self):
        rng = np.random.default_rng(1)
        a = rng.standard_normal((3, 3))
        a = 0.5 * (a + a.T)
        b = rng.standard_normal((3, 3))
        b = 0.5 * (b + b.T)
        np.testing.assert_allclose(kn_product(a, b), kn_oracle(a, b), atol=1e-13)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_invariants_hold_for_random_inputs(self, n):
        rng = np.random.default_rng(n)
        for _ in range(100):
            a = rng.standard_normal((n, n))
            b = rng.standard_normal((n, n))
            t = kulkarni_nomizu(SymTensor2(a), SymTensor2(b))
            res = curvature_symmetry_residuals(t.entries)
            tol = 1e-12 * max(res["scale"], 1.0)
            assert res["antisym_first"] <= tol
            assert res["antisym_second"] <= tol
            assert res["pair"] <= tol
            assert res["bianchi"] <= tol

    def test_dim_mismatch_raises(self):
        with pytest.raises(ArgumentError):
            kulkarni_nomizu(SymTensor2(np.eye(2)), SymTensor2(np.eye(3)))


def inner4_loop_oracle(t, s):
    """Direct summation over all four indices (identity metric)."""
    total = 0.0
    n = t.shape[0]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    total += t[i, j, k, l] * s[i, j, k, l]
    return total


class TestInner4:
    def test_unit_curvature_self_product_n3(self):
        b = unit_curvature_tensor(np.eye(3))
        by_loop = inner4_loop_oracle(b, b)
        assert by_loop == 12.0  # 2 n (n-1) for n = 3
        assert abs(inner4(b, b, np.eye(3)) - by_loop) < 1e-12

    def test_zero_argument(self):
        b = unit_curvature_tensor(np.eye(3))
        assert inner4(b, np.zeros((3, 3, 3, 3)), np.eye(3)) == 0.0

    def test_gs_product_norm_identity_n4_exact(self):
        # |g (.) S|^2 = 4 (n-2) |S|^2 for traceless symmetric S
        rng = np.random.default_rng(2)
        n = 4
        s = rng.standard_normal((n, n))
        s = 0.5 * (s + s.T)
        s -= np.trace(s) / n * np.eye(n)
        gs = kn_product(np.eye(n), s)
        lhs = inner4(gs, gs, np.eye(n))
        rhs = 4 * (n - 2) * np.sum(s * s)
        assert abs(lhs - rhs) <= 1e-12 * abs(rhs)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_gs_product_norm_identity_metric_aware(self, n):
        rng = np.random.default_rng(10 + n)
        for _ in range(50):
            m = rng.standard_normal((n, n))
            g = m @ m.T + n * np.eye(n)
            ginv = np.linalg.inv(g)
            s = rng.standard_normal((n, n))
            s = 0.5 * (s + s.T)
            s -= trace2(s[None], ginv[None])[0] / n * g  # traceless wrt g
            gs = kn_product(g, s)
            lhs = inner4(gs, gs, g)
            rhs = 4 * (n - 2) * norm2_sym2(s[None], ginv[None])[0]
            assert abs(lhs - rhs) <= 1e-11 * max(abs(rhs), 1e-12)

    def test_pair_swap_invariance(self):
        rng = np.random.default_rng(3)
        s1 = rng.standard_normal((4, 4))
        s2 = rng.standard_normal((4, 4))
        t = kn_product(0.5 * (s1 + s1.T), 0.5 * (s2 + s2.T))
        u = kn_product(0.5 * (s2 + s2.T), 0.5 * (s1 + s1.T))
        g = np.eye(4)
        swapped = t.transpose(2, 3, 0, 1)
        assert abs(inner4(t, u, g) - inner4(swapped, u, g)) < 1e-12

    def test_positive_semidefinite(self):
        rng = np.random.default_rng(4)
        s1 = rng.standard_normal((3, 3))
        t = kn_product(0.5 * (s1 + s1.T), 0.5 * (s1 + s1.T))
        assert inner4(t, t, np.eye(3)) >= 0.0

    def test_non_pd_metric_raises(self):
        b = unit_curvature_tensor(np.eye(3))
        with pytest.raises(PositivityError):
            inner4(b, b, -np.eye(3))


class TestTraceless2:
    def test_metric_itself_maps_to_zero(self):
        g = SymTensor2(np.diag([1.0, 2.0, 3.0]))
        out = traceless2(g, g)
        assert np.abs(out.entries).max() < 1e-14

    def test_round_sphere_ricci_is_einstein(self):
        # Ric = g on the unit 2-sphere, so the traceless part vanishes
        g = SymTensor2(np.diag([1.0, np.sin(0.7) ** 2]))
        assert np.abs(traceless2(g, g).entries).max() < 1e-14

    def test_random_output_is_traceless(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            s = rng.standard_normal((3, 3))
            m = rng.standard_normal((3, 3))
            g = m @ m.T + 3 * np.eye(3)
            out = traceless2(SymTensor2(s), SymTensor2(g))
            tr = trace2(out.entries[None], np.linalg.inv(g)[None])[0]
            scale = max(np.abs(s).max(), 1.0)
            assert abs(tr) < 1e-13 * scale

    @given(st.integers(0, 10_000))
    @settings(max_examples=50, deadline=None)
    def test_idempotent(self, seed):
        rng = np.random.default_rng(seed)
        s = SymTensor2(rng.standard_normal((4, 4)))
        g = SymTensor2(np.eye(4))
        once = traceless2(s, g)
        twice = traceless2(once, g)
        np.testing.assert_allclose(once.entries, twice.entries, atol=1e-13)


class TestCurvatureType:
    def test_random_array_rejected(self):
        rng = np.random.default_rng(6)
        with pytest.raises(ArgumentError):
            AlgCurvTensor4(rng.standard_normal((3, 3, 3, 3)))

    def test_kn_products_accepted(self):
        rng = np.random.default_rng(7)
        a = rng.standard_normal((4, 4))
        t = kn_product(0.5 * (a + a.T), 0.5 * (a + a.T))
        AlgCurvTensor4(t)  # must not raise


class TestWeylDecomposition:
    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_parts_orthogonal_and_reassemble(self, n):
        rng = np.random.default_rng(20 + n)
        for _ in range(20):
            s1 = rng.standard_normal((n, n))
            s2 = rng.standard_normal((n, n))
            rm = kn_product(0.5 * (s1 + s1.T), 0.5 * (s1 + s1.T)) + kn_product(
                0.5 * (s2 + s2.T), 0.5 * (s2 + s2.T)
            )
            g = np.eye(n)
            dec = weyl_decompose(rm, g)
            total = dec["scalar_part"] + dec["ricci_part"] + dec["weyl"]
            scale = max(np.abs(rm).max(), 1.0)
            assert np.abs(total - rm).max() < 1e-10 * scale
            for a, b in (
                ("scalar_part", "ricci_part"),
                ("scalar_part", "weyl"),
                ("ricci_part", "weyl"),
            ):
                ip = inner4(dec[a], dec[b], g)
                assert abs(ip) < 1e-9 * scale**2

    def test_weyl_vanishes_in_three_dimensions(self):
        rng = np.random.default_rng(30)
        s1 = rng.standard_normal((3, 3))
        s2 = rng.standard_normal((3, 3))
        rm = kn_product(0.5 * (s1 + s1.T), 0.5 * (s1 + s1.T)) + kn_product(
            0.5 * (s2 + s2.T), 0.5 * (s2 + s2.T)
        )
        dec = weyl_decompose(rm, np.eye(3))
        assert np.abs(dec["weyl"]).max() < 1e-10 * max(np.abs(rm).max(), 1.0)

    def test_dimension_two_rejected(self):
        with pytest.raises(ArgumentError):
            weyl_decompose(np.zeros((2, 2, 2, 2)), np.eye(2))


class TestBatchedNorms:
    def test_norm2_curv_matches_inner4(self):
        rng = np.random.default_rng(8)
        a = rng.standard_normal((3, 3))
        t = kn_product(0.5 * (a + a.T), 0.5 * (a + a.T))
        m = rng.standard_normal((3, 3))
        g = m @ m.T + 3 * np.eye(3)
        batched = norm2_curv(t[None], np.linalg.inv(g)[None])[0]
        assert abs(batched - inner4(t, t, g)) < 1e-10 * max(abs(batched), 1.0)
