"""Fast self-contained invariant suite behind the ``selftest`` CLI command.

Each check is independent and returns (name, passed, detail); the runner
prints one line per check.  The pytest suite covers the same ground (and
much more) at full depth; this module is the quick in-the-field sanity run.
"""

from __future__ import annotations

import numpy as np

from .catalog import (
    get_manifold,
    make_ellipsoid,
    make_immersed_sphere,
    make_round_sphere_metric,
)
from .curvature_functionals import (
    lovelock_batch,
    mean_curvature,
    mean_curvature_hypersurface,
    newton_from_shape,
    newton_transform,
)
from .extrinsic_geometry import gauss_riemann_batch, point_geometry_batch
from .intrinsic_geometry import curvature_batch
from .quadrature import build_grid
from .spectral import registry_verification_residual
from .tensor_algebra import gen_kronecker, kn_product, norm2_curv, norm2_sym2
from .verifier import verify_thm_R, verify_thm_main

__all__ = ["run_selftest"]


def _cycle_sign(perm) -> int:
    """Permutation sign by cycle decomposition (independent oracle)."""
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


def _check_gen_kronecker():
    rng = np.random.default_rng(0)
    n = 7
    for _ in range(2000):
        p = int(rng.integers(1, 7))
        upper = tuple(rng.integers(0, n, size=p))
        lower = tuple(rng.integers(0, n, size=p))
        got = gen_kronecker(upper, lower, n=n)
        if len(set(upper)) < p or len(set(lower)) < p or set(upper) != set(lower):
            want = 0
        else:
            pos = {v: i for i, v in enumerate(upper)}
            want = _cycle_sign([pos[v] for v in lower])
        if got != want:
            return False, f"mismatch at {upper}->{lower}: {got} vs {want}"
    return True, "2000 random tuples vs cycle-decomposition oracle"


def _check_kn_identity():
    rng = np.random.default_rng(1)
    worst = 0.0
    for n in (3, 4, 5):
        for _ in range(25):
            s = rng.standard_normal((n, n))
            s = 0.5 * (s + s.T)
            s -= np.trace(s) / n * np.eye(n)
            g = np.eye(n)
            lhs = norm2_curv(kn_product(g, s)[None], np.eye(n)[None])[0]
            rhs = 4 * (n - 2) * norm2_sym2(s[None], np.eye(n)[None])[0]
            worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-300))
    return worst < 1e-11, f"max relative deviation {worst:.2e}"


def _check_fast_slow():
    rng = np.random.default_rng(2)
    worst = 0.0
    for n in (2, 3, 4, 5):
        for _ in range(10):
            s = rng.standard_normal((n, n))
            s = 0.5 * (s + s.T)
            k = np.linalg.eigvalsh(s)
            a = s[:, :, None]
            for r in range(1, n + 1):
                h_eps = mean_curvature(a, r)
                h_eps = h_eps[0] if r % 2 else h_eps
                h_sig = mean_curvature_hypersurface(k, r)
                worst = max(worst, abs(h_eps - h_sig) / max(abs(h_sig), 1.0))
                if r <= n - 1:
                    t_eps = newton_transform(a, r)
                    t_eps = t_eps[..., 0] if r % 2 else t_eps
                    t_fast = newton_from_shape(s, r)
                    worst = max(
                        worst,
                        np.abs(t_eps - t_fast).max() / max(np.abs(t_fast).max(), 1.0),
                    )
    return worst < 1e-11, f"max relative deviation {worst:.2e}"


def _check_trace_identities():
    rng = np.random.default_rng(3)
    worst = 0.0
    for n in (4, 5):
        a = rng.standard_normal((20, n, n, 2))
        a = 0.5 * (a + a.transpose(0, 2, 1, 3))
        for r in range(1, n):
            t = newton_transform(a, r)
            h = mean_curvature(a, r)
            if r % 2:
                tr = np.einsum("biiq->bq", t)
            else:
                tr = np.einsum("bii->b", t)
            worst = max(worst, float(np.abs(tr - (n - r) * h).max()))
        s1 = rng.standard_normal((20, n, n))
        s1 = 0.5 * (s1 + s1.transpose(0, 2, 1))
        s2 = rng.standard_normal((20, n, n))
        s2 = 0.5 * (s2 + s2.transpose(0, 2, 1))
        rm = kn_product(s1, s1) + kn_product(s2, s2)
        for k in range(1, (n - 1) // 2 + 1):
            rk, ek = lovelock_batch(rm, k)
            tr = np.einsum("bii->b", ek)
            worst = max(worst, float(np.abs(tr - 0.5 * (n - 2 * k) * rk).max()))
    return worst < 1e-8, f"max absolute trace residual {worst:.2e}"


def _check_convention_lock():
    worst = 0.0
    for n in (2, 3, 4):
        mc = make_round_sphere_metric(n).charts[0]
        u = np.array([[0.2] * n])
        scal = float(curvature_batch(mc, u)["scal"][0])
        worst = max(worst, abs(scal - n * (n - 1)))
    return worst < 1e-10, f"max |scalar - n(n-1)| = {worst:.2e}"


def _check_gauss_bridge():
    ell = make_ellipsoid([1.0, 1.0, 1.3])
    data = point_geometry_batch(ell.charts[0], np.array([[0.3, -0.4], [0.9, 0.2]]))
    rm = gauss_riemann_batch(data["a_onb"], 0.0)
    ric = np.einsum("bijil->bjl", rm)
    scal = np.einsum("bii->b", ric)
    k = data["principal"]
    sigma2 = k[:, 0] * k[:, 1]
    resid = float(np.abs(scal - 2 * sigma2).max())
    return resid < 1e-9, f"scalar vs 2*sigma2 residual {resid:.2e}"


def _check_sphere_area():
    grid = build_grid(make_immersed_sphere(2), 64)
    err = abs(grid.area() - 4 * np.pi) / (4 * np.pi)
    return err < 1e-8, f"area error {err:.2e} at resolution 64"


def _check_lambda_registry():
    m = make_round_sphere_metric(2)
    res = registry_verification_residual(m, build_grid(m, 24))
    return res < 1e-8, f"eigenfunction residual {res:.2e}"


def _check_equality_cases():
    rep = verify_thm_main(get_manifold("sphere2"), 1, resolution=16)
    if rep.verdict != "equality":
        return False, f"sphere2 r=1 verdict {rep.verdict}"
    ri, rii = verify_thm_R(get_manifold("round_s3"), resolution=8)
    if ri.verdict != "equality" or rii.verdict != "equality":
        return False, f"round_s3 verdicts {ri.verdict}/{rii.verdict}"
    rep = verify_thm_main(get_manifold("product_torus_12"), 2, resolution=16)
    if rep.verdict != "equality":
        return False, f"product torus r=2 verdict {rep.verdict}"
    return True, "sphere and flat-torus equality verdicts"


def _check_soundness_sample():
    rep = verify_thm_main(get_manifold("ellipsoid2_130"), 1, resolution=32)
    if rep.verdict != "holds" or not rep.ratio <= 1.0:
        return False, f"ellipsoid verdict {rep.verdict} ratio {rep.ratio}"
    return True, f"ellipsoid (1,1,1.3) ratio {rep.ratio:.3f}"


_CHECKS = [
    ("generalized Kronecker vs cycle oracle", _check_gen_kronecker),
    ("Kulkarni-Nomizu norm identity", _check_kn_identity),
    ("fast vs contraction paths (H_r, T^r)", _check_fast_slow),
    ("trace identities (Newton, Lovelock)", _check_trace_identities),
    ("curvature convention lock (round spheres)", _check_convention_lock),
    ("Gauss-equation scalar bridge", _check_gauss_bridge),
    ("sphere atlas quadrature area", _check_sphere_area),
    ("eigenvalue registry verification", _check_lambda_registry),
    ("equality-case verdicts", _check_equality_cases),
    ("soundness sample (ellipsoid)", _check_soundness_sample),
]


def run_selftest(verbose: bool = True) -> bool:
    """Run every invariant check; returns True iff all pass."""
    all_ok = True
    for name, fn in _CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failure, not an abort
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        all_ok &= ok
        if verbose:
            print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return all_ok
