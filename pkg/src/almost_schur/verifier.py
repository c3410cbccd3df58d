"""Assemble both sides of each almost-Schur inequality and produce verdicts.

Every verification runs at two resolutions (N and 2N per axis), applies the
exact constants, and classifies the outcome:

- ``equality``   : both sides below the equality tolerance (0 = 0 cases);
- ``holds``      : lhs <= rhs at the finer resolution (1e-6 ratio slack);
- ``violated``   : ratio > 1 + 1e-6 at BOTH resolutions (a build-stopping
                   event for the catalog: the constants are exact, so a
                   stable violation means an implementation bug);
- ``inconclusive``: the correction factor needs a lower bound on the first
                   eigenvalue that only an upper-bound estimate could supply
                   (K > 0 without an analytic eigenvalue), or the two
                   resolutions disagree.

The Ricci lower-bound parameter K is always taken from the computed grid
certificate; a user-supplied K is accepted only in exploratory mode and is
marked in the report.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .catalog import ImmersedManifold, MetricManifold, make_conformal_sphere
from .curvature_functionals import (
    elementary_symmetric,
    lovelock_batch,
    mean_curvature,
    newton_from_shape,
    newton_transform,
    normal_to_ambient,
    traceless_part,
)
from .errors import AdmissibilityError, ArgumentError, DomainError, NumericError
from .extrinsic_geometry import (
    gauss_riemann_batch,
    point_geometry_batch,
    ricci_onb_batch,
)
from .intrinsic_geometry import MetricChart, curvature_batch
from .quadrature import build_grid, integrate_values
from .spectral import EigenvalueEstimate, lambda1
from .tensor_algebra import unit_curvature_tensor, weyl_decompose

__all__ = [
    "InequalityContext",
    "InequalityReport",
    "default_resolution",
    "verify_thm_main",
    "verify_thm_R",
    "verify_cor_B",
    "verify_gwx",
    "sharpness_sweep",
    "write_sweep_csv",
    "equality_taxonomy",
]

DEFAULT_RESOLUTION = {2: 96, 3: 48, 4: 24}
RATIO_SLACK = 1e-6
_CHUNK = 2048


def default_resolution(n: int) -> int:
    return DEFAULT_RESOLUTION.get(n, 16)


@dataclass(frozen=True)
class InequalityContext:
    """Admissibility-checked parameters of one inequality instance."""

    theorem: str
    n: int
    r: int | None = None
    k: int | None = None
    K: float = 0.0
    lam: EigenvalueEstimate | None = None
    resolution: int | None = None
    exploratory: bool = False


@dataclass(frozen=True)
class InequalityReport:
    """Both sides, constants and verdict of one inequality instance."""

    case: str
    theorem: str
    params: dict
    lhs: float
    rhs_raw: float
    constant: float
    correction: float | None
    rhs: float | None
    ratio: float
    verdict: str
    resolutions: list
    k_certificate: dict
    lam: dict

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "theorem": self.theorem,
            "params": self.params,
            "lhs": self.lhs,
            "rhs_raw": self.rhs_raw,
            "constant": self.constant,
            "correction": self.correction,
            "ratio": self.ratio,
            "verdict": self.verdict,
            "resolutions": self.resolutions,
            "k_certificate": self.k_certificate,
            "lambda": self.lam,
        }


# ---------------------------------------------------------------------------
# pointwise field passes


def _chunks(total: int):
    for start in range(0, total, _CHUNK):
        yield slice(start, min(start + _CHUNK, total))


def _submanifold_pass(manifold: ImmersedManifold, grid, r: int) -> dict:
    """Per-chart H_r values and Newton-transformation norms on the grid.

    Vector-valued quantities (odd r above codimension one) are stored in
    ambient components so that averages across charts are meaningful.
    """
    n = manifold.n
    amb = manifold.ambient
    out = {"hr": [], "tn2": [], "t0n2": [], "hmax": 0.0, "tmax": 0.0, "trace_err": 0.0}
    for chart, nodes, _ in grid.per_chart():
        hr_parts, tn2_parts, t0n2_parts = [], [], []
        for sl in _chunks(nodes.shape[0]):
            data = point_geometry_batch(chart, nodes[sl], amb)
            a_onb = data["a_onb"]
            codim = a_onb.shape[-1]
            if codim == 1:
                shape = a_onb[..., 0]
                kvals = np.linalg.eigvalsh(shape)
                e = elementary_symmetric(kvals)
                hr = e[:, r]
                if r < n:
                    t = newton_from_shape(shape, r)
                else:
                    t = np.zeros_like(shape)
                tr = np.einsum("bii->b", t)
                tn2 = np.einsum("bij,bij->b", t, t)
                trace_err = np.abs(tr - (n - r) * hr).max()
            else:
                hr = mean_curvature(a_onb, r)
                t = newton_transform(a_onb, r)
                if r % 2:
                    nu = data["normal"]
                    hr = normal_to_ambient(hr, nu)
                    t = np.einsum("bijq,bmq->bijm", t, nu)
                    tr = np.einsum("biim->bm", t)
                    tn2 = np.einsum("bijm,bijm->b", t, t)
                    trace_err = np.abs(tr - (n - r) * hr).max()
                else:
                    tr = np.einsum("bii->b", t)
                    tn2 = np.einsum("bij,bij->b", t, t)
                    trace_err = np.abs(tr - (n - r) * hr).max()
            hr2 = hr**2 if hr.ndim == 1 else np.einsum("bm,bm->b", hr, hr)
            t0n2 = tn2 - (n - r) ** 2 * hr2 / n
            out["trace_err"] = max(out["trace_err"], float(trace_err))
            out["hmax"] = max(out["hmax"], float(np.sqrt(hr2.max(initial=0.0))))
            out["tmax"] = max(out["tmax"], float(np.sqrt(tn2.max(initial=0.0))))
            hr_parts.append(hr)
            tn2_parts.append(tn2)
            t0n2_parts.append(t0n2)
        out["hr"].append(np.concatenate(hr_parts, axis=0))
        out["tn2"].append(np.concatenate(tn2_parts))
        out["t0n2"].append(np.concatenate(t0n2_parts))
    scale = max(out["hmax"], out["tmax"], 1.0)
    if out["trace_err"] > 1e-9 * scale:
        raise NumericError(
            f"Newton trace identity violated on the grid: {out['trace_err']:.3e}"
        )
    return out


def _rm_to_onb(rm, g):
    """Transform coordinate curvature components to an orthonormal frame."""
    L = np.linalg.cholesky(g)
    cf = np.linalg.inv(L).transpose(0, 2, 1)  # e_i = cf[:, a, i] d_a
    t = np.einsum("bai,bajkl->bijkl", cf, rm)
    t = np.einsum("baj,biakl->bijkl", cf, t)
    t = np.einsum("bak,bijal->bijkl", cf, t)
    t = np.einsum("bal,bijka->bijkl", cf, t)
    return t, cf


def _metric_pass(manifold, grid, k: int | None = None, want_weyl: bool = True) -> dict:
    """Orthonormal-frame curvature scalars per grid node.

    Works for metric manifolds (chart-derivative curvature) and immersed
    manifolds (Gauss-equation curvature).  All norms are taken in the
    orthonormal frame, so they agree with the metric-aware norms exactly.
    """
    n = manifold.n
    out = {
        "scal": [],
        "ric0n2": [],
        "rmdev2": [],
        "rmn2": [],
        "weyl2": [],
        "rk": [],
        "ek0n2": [],
        "ric_min": np.inf,
        "qmax": 0.0,
        "chain_violation": -np.inf,
        "ortho_err": 0.0,
        "convex": None,
    }
    eye = None
    shape_min = np.inf
    for chart, nodes, _ in grid.per_chart():
        cols = {key: [] for key in ("scal", "ric0n2", "rmdev2", "rmn2", "weyl2", "rk", "ek0n2")}
        for sl in _chunks(nodes.shape[0]):
            if isinstance(chart, MetricChart):
                cb = curvature_batch(chart, nodes[sl])
                rm_onb, _ = _rm_to_onb(cb["rm"], cb["g"])
            else:
                data = point_geometry_batch(chart, nodes[sl], manifold.ambient)
                rm_onb = gauss_riemann_batch(data["a_onb"], manifold.ambient.c)
                if data["principal"] is not None:
                    shape_min = min(shape_min, float(data["principal"].min()))
            batch = rm_onb.shape[0]
            if eye is None:
                eye = np.eye(n)
            ric = ricci_onb_batch(rm_onb)
            scal = np.einsum("bii->b", ric)
            ric0 = ric - scal[:, None, None] * eye / n
            ric0n2 = np.einsum("bij,bij->b", ric0, ric0)
            rmn2 = np.einsum("bijkl,bijkl->b", rm_onb, rm_onb)
            ip = 2.0 * np.einsum("bijij->b", rm_onb)  # <Rm, B> in the onb
            ortho = np.abs(ip - 2.0 * scal).max()
            out["ortho_err"] = max(out["ortho_err"], float(ortho))
            # |Rm - (R / n(n-1)) B|^2 via the verified orthogonal split
            rmdev2 = rmn2 - 2.0 * scal**2 / (n * (n - 1))
            out["ric_min"] = min(
                out["ric_min"], float(np.linalg.eigvalsh(ric).min())
            )
            out["qmax"] = max(out["qmax"], float(np.sqrt(rmn2.max(initial=0.0))))
            chain = ric0n2 - 0.25 * (n - 2) * rmdev2
            out["chain_violation"] = max(out["chain_violation"], float(chain.max()))

            cols["scal"].append(scal)
            cols["ric0n2"].append(ric0n2)
            cols["rmdev2"].append(rmdev2)
            cols["rmn2"].append(rmn2)
            if want_weyl and n >= 3:
                dec = weyl_decompose(rm_onb, np.broadcast_to(eye, (batch, n, n)))
                w2 = np.einsum("bijkl,bijkl->b", dec["weyl"], dec["weyl"])
                cols["weyl2"].append(w2)
            if k is not None:
                rk, ek = lovelock_batch(rm_onb, k)
                ek0 = traceless_part(ek)
                cols["rk"].append(rk)
                cols["ek0n2"].append(np.einsum("bij,bij->b", ek0, ek0))
        for key, parts in cols.items():
            if parts:
                out[key].append(np.concatenate(parts))
    if np.isfinite(shape_min):
        out["convex"] = bool(shape_min >= -1e-10 * max(abs(shape_min), 1.0))
    scale = max(out["qmax"] ** 2, 1.0)
    if out["ortho_err"] > 1e-9 * scale:
        raise NumericError(
            f"<Rm, B> = 2R orthogonality identity violated: {out['ortho_err']:.3e}"
        )
    if out["chain_violation"] > 1e-10 * scale:
        raise NumericError(
            "pointwise |Ric0|^2 <= (n-2)/4 |Rm - (R/n(n-1))B|^2 violated by "
            f"{out['chain_violation']:.3e}"
        )
    return out


# ---------------------------------------------------------------------------
# certificates, eigenvalues, verdicts


def _ricci_certificate(manifold, passes: list) -> dict:
    n = manifold.n
    ric_min = min(p["ric_min"] for p in passes)
    scale = max(abs(ric_min), 1.0)
    K = 0.0 if ric_min >= -1e-10 * scale else -ric_min / (n - 1)
    convex = passes[-1].get("convex")
    return {"K": K, "ricci_min": ric_min, "convex": convex}


def _lambda_info(manifold, grid) -> tuple:
    try:
        est = lambda1(manifold, grid)
        return est, {"value": est.value, "kind": est.kind}
    except Exception:
        return None, {"value": None, "kind": "unavailable"}


def _correction(K: float, lam: EigenvalueEstimate | None, coeff: float):
    """Correction factor 1 + coeff*K/lambda; None when it cannot be certified.

    The factor is decreasing in lambda, so an upper-bound estimate may not be
    substituted when K > 0; K = 0 gives exactly 1 with no eigenvalue needed.
    """
    if K == 0.0:
        return 1.0
    if lam is not None and lam.kind == "analytic":
        return 1.0 + coeff * K / lam.value
    return None


def _decide(res_entries: list, tau: float) -> str:
    """Verdict from per-resolution (lhs, rhs) pairs; final entry decides
    holds/equality, violation needs every resolution to exceed the slack."""
    lhs_f, rhs_f = res_entries[-1]["lhs"], res_entries[-1]["rhs"]
    if rhs_f is None:
        return "inconclusive"
    if lhs_f < tau and rhs_f < tau:
        return "equality"
    exceed = [
        e["rhs"] is not None and e["lhs"] > e["rhs"] * (1.0 + RATIO_SLACK)
        for e in res_entries
    ]
    if all(exceed):
        return "violated"
    if lhs_f <= rhs_f * (1.0 + RATIO_SLACK):
        return "holds"
    return "inconclusive"


def _resolution_pair(manifold, resolution: int | None) -> tuple:
    base = resolution if resolution is not None else default_resolution(manifold.n)
    return base, 2 * base


def _finish_report(
    manifold,
    theorem: str,
    params: dict,
    constant: float,
    corr_coeff: float,
    entries: list,
    cert: dict,
    lam_est,
    lam_info: dict,
    tau: float,
    exploratory_K: float | None,
) -> InequalityReport:
    K = cert["K"]
    if exploratory_K is not None:
        K = float(exploratory_K)
        params = dict(params, exploratory_K=K, K_source="user-supplied (exploratory)")
    correction = _correction(K, lam_est, corr_coeff)
    res_entries = []
    for N, lhs, rhs_raw in entries:
        rhs = None if correction is None else constant * correction * rhs_raw
        if math.isinf(constant) and rhs_raw == 0.0:
            rhs = 0.0  # degenerate top order: 0 * inf read as the zero limit
        res_entries.append({"N": N, "lhs": lhs, "rhs": rhs})
    lhs = entries[-1][1]
    rhs_raw = entries[-1][2]
    rhs = res_entries[-1]["rhs"]
    verdict = _decide(res_entries, tau)
    if correction is None and verdict != "equality":
        verdict = "inconclusive"
    ratio = 0.0
    if verdict != "equality" and rhs not in (None, 0.0):
        ratio = lhs / rhs
    stable = _stability(entries, tau)
    return InequalityReport(
        case=manifold.name,
        theorem=theorem,
        params=dict(params, n=manifold.n, K=K, equality_tolerance=tau, stable=stable),
        lhs=lhs,
        rhs_raw=rhs_raw,
        constant=constant,
        correction=correction,
        rhs=rhs,
        ratio=ratio,
        verdict=verdict,
        resolutions=res_entries,
        k_certificate=cert,
        lam=lam_info,
    )


def _stability(entries: list, tau: float) -> bool:
    (n1, l1, r1), (n2, l2, r2) = entries[-2], entries[-1]
    def rel(a, b):
        denom = max(abs(a), abs(b), tau)
        return abs(a - b) / denom
    return bool(rel(l1, l2) < 1e-5 and rel(r1, r2) < 1e-5)


# ---------------------------------------------------------------------------
# theorem: higher mean curvatures of submanifolds


def _check_thm_main_admissible(manifold: ImmersedManifold, r: int):
    n = manifold.n
    if not 1 <= r <= n:
        raise AdmissibilityError(f"order r={r} outside [1, {n}]")
    codim = manifold.codim
    if r % 2 == 1:
        if manifold.ambient.kind != "euclidean" and codim != 1:
            raise AdmissibilityError(
                "odd order needs a Euclidean ambient or a hypersurface "
                "(admissible cases: r even; r odd in R^m; codimension one)"
            )
    if r == n and r % 2 == 1:
        raise AdmissibilityError(f"top order r=n={n} is only admitted for even r")


def verify_thm_main(
    manifold: ImmersedManifold,
    r: int,
    resolution: int | None = None,
    exploratory_K: float | None = None,
) -> InequalityReport:
    """Almost-Schur inequality for the r-th mean curvature of a submanifold.

    lhs = int |H_r - mean(H_r)|^2, rhs = n(n-1)/(n-r)^2 (1 + nK/lambda)
    int |traceless T^r|^2.  Also emits the equivalent reformulation in terms
    of |T^r - ((n-r)/n) mean(H_r) I|^2 (params["rephrased"]) and checks the
    two against the pointwise Pythagoras split.
    """
    _check_thm_main_admissible(manifold, r)
    n = manifold.n
    n1, n2 = _resolution_pair(manifold, resolution)
    entries = []
    passes = []
    reph = None
    cert_passes = []
    for N in (n1, n2):
        grid = build_grid(manifold, N)
        fields = _submanifold_pass(manifold, grid, r)
        hbar = integrate_values(grid, fields["hr"]) / grid.area()
        dev = [
            np.sum((h - hbar) ** 2, axis=-1) if np.ndim(h) > 1 else (h - hbar) ** 2
            for h in fields["hr"]
        ]
        lhs = integrate_values(grid, dev)
        rhs_raw = integrate_values(grid, fields["t0n2"])
        entries.append((N, lhs, rhs_raw))
        passes.append((grid, fields, hbar))
        mpass = _metric_pass(manifold, grid, want_weyl=False)
        cert_passes.append(mpass)

    grid, fields, hbar = passes[-1]
    area = grid.area()
    q = max(fields["hmax"], fields["tmax"])
    tau = 1e-10 * area * max(1.0, q**2)
    cert = _ricci_certificate(manifold, cert_passes)
    lam_est, lam_info = _lambda_info(manifold, grid)
    constant = math.inf if r == n else n * (n - 1) / (n - r) ** 2

    # reformulated inequality: |T - c hbar I|^2 <= n (1 + (n-1)K/lambda) |T0|^2
    c = (n - r) / n
    hbar_arr = np.atleast_1d(hbar)
    int_h = np.atleast_1d(integrate_values(grid, fields["hr"]))
    int_tn2 = integrate_values(grid, fields["tn2"])
    lhs_reph = (
        int_tn2
        - 2.0 * c * (n - r) * float(hbar_arr @ int_h)
        + n * c**2 * float(hbar_arr @ hbar_arr) * area
    )
    rhs_reph_raw = integrate_values(grid, fields["t0n2"])
    # Pythagoras: lhs_reph = int |T0|^2 + (n-r)^2/n * lhs
    pyth_resid = abs(lhs_reph - (rhs_reph_raw + (n - r) ** 2 / n * entries[-1][1]))
    # the expansion cancels terms of the size of int |T|^2, so that sets the scale
    pyth_scale = max(int_tn2, lhs_reph, rhs_reph_raw, tau)
    if pyth_resid > 1e-9 * pyth_scale:
        raise NumericError(
            f"Pythagoras split of the reformulated inequality failed: {pyth_resid:.3e}"
        )
    K = cert["K"] if exploratory_K is None else float(exploratory_K)
    corr_reph = _correction(K, lam_est, float(n - 1))
    reph = {
        "lhs": lhs_reph,
        "rhs_raw": rhs_reph_raw,
        "constant": float(n),
        "correction": corr_reph,
        "pythagoras_residual": pyth_resid,
    }

    params = {"r": r, "codim": manifold.codim, "ambient": manifold.ambient.kind,
              "rephrased": reph}
    return _finish_report(
        manifold, "thm_main", params, constant, float(n), entries, cert,
        lam_est, lam_info, tau, exploratory_K,
    )


# ---------------------------------------------------------------------------
# theorem: scalar curvature vs Ricci and Riemann deviations


def _metric_entries(manifold, resolutions, k=None, want_weyl=True):
    """Run the curvature pass at each resolution; returns entries and passes."""
    runs = []
    for N in resolutions:
        grid = build_grid(manifold, N)
        fields = _metric_pass(manifold, grid, k=k, want_weyl=want_weyl)
        rbar = integrate_values(grid, fields["scal"]) / grid.area()
        runs.append((N, grid, fields, rbar))
    return runs


def verify_thm_R(
    manifold,
    resolution: int | None = None,
    exploratory_K: float | None = None,
) -> tuple:
    """Both scalar-curvature almost-Schur inequalities on a closed manifold.

    report_i: int (R - Rbar)^2 <= 4n(n-1)/(n-2)^2 (1 + nK/lambda) int |Ric0|^2
    report_ii: same lhs against n(n-1)/(n-2) (1 + nK/lambda)
    int |Rm - (R/(n(n-1))) B|^2, with the pointwise chain between the two
    right-hand sides asserted at every node.
    """
    n = manifold.n
    if n < 3:
        raise AdmissibilityError(f"scalar-curvature inequalities need n >= 3, got n={n}")
    n1, n2 = _resolution_pair(manifold, resolution)
    runs = _metric_entries(manifold, (n1, n2))
    entries_i, entries_ii = [], []
    for N, grid, fields, rbar in runs:
        lhs = integrate_values(grid, [(s - rbar) ** 2 for s in fields["scal"]])
        rhs_i = integrate_values(grid, fields["ric0n2"])
        rhs_ii = integrate_values(grid, fields["rmdev2"])
        entries_i.append((N, lhs, rhs_i))
        entries_ii.append((N, lhs, rhs_ii))

    N, grid, fields, rbar = runs[-1]
    cert = _ricci_certificate(manifold, [f for _, _, f, _ in runs])
    lam_est, lam_info = _lambda_info(manifold, grid)
    tau = 1e-10 * grid.area() * max(1.0, fields["qmax"] ** 2)
    c1 = 4.0 * n * (n - 1) / (n - 2) ** 2
    c2 = n * (n - 1) / (n - 2)

    # integrated chain: C1 * int|Ric0|^2 <= C2 * int|Rm - (R/n(n-1))B|^2;
    # the floor tracks roundoff of the cancellations inside both integrals
    chain_slack = c1 * entries_i[-1][2] - c2 * entries_ii[-1][2]
    chain_floor = 1e-12 * grid.area() * max(1.0, fields["qmax"] ** 2) * max(c1, c2)
    if chain_slack > 1e-10 * max(c2 * entries_ii[-1][2], 0.0) + chain_floor:
        raise NumericError(f"integrated (i)->(ii) chain violated by {chain_slack:.3e}")

    weyl_l2 = (
        math.sqrt(max(integrate_values(grid, fields["weyl2"]), 0.0))
        if fields["weyl2"]
        else 0.0
    )
    params = {"weyl_l2": weyl_l2,
              "chain_margin": c2 * entries_ii[-1][2] - c1 * entries_i[-1][2]}
    rep_i = _finish_report(
        manifold, "thm_R_i", params, c1, float(n), entries_i, cert,
        lam_est, lam_info, tau, exploratory_K,
    )
    rep_ii = _finish_report(
        manifold, "thm_R_ii", params, c2, float(n), entries_ii, cert,
        lam_est, lam_info, tau, exploratory_K,
    )
    return rep_i, rep_ii


def verify_cor_B(
    manifold,
    resolution: int | None = None,
    exploratory_K: float | None = None,
) -> InequalityReport:
    """Deviation of Rm from the constant-curvature model at the average scalar
    curvature: int |Rm - (Rbar/(n(n-1))) B|^2 <= n/(n-2) (1 + 2K/lambda)
    int |Rm - (R/(n(n-1))) B|^2."""
    n = manifold.n
    if n < 3:
        raise AdmissibilityError(f"needs n >= 3, got n={n}")
    n1, n2 = _resolution_pair(manifold, resolution)
    runs = _metric_entries(manifold, (n1, n2), want_weyl=False)
    entries = []
    for N, grid, fields, rbar in runs:
        # |Rm - (Rbar/(n(n-1))) B|^2 expanded against the verified
        # <Rm, B> = 2R identity; the subsample check below recomputes it
        # tensor-directly.
        lhs_vals = [
            rmn2 - 4.0 * s * rbar / (n * (n - 1)) + 2.0 * rbar**2 / (n * (n - 1))
            for rmn2, s in zip(fields["rmn2"], fields["scal"])
        ]
        lhs = integrate_values(grid, lhs_vals)
        rhs_raw = integrate_values(grid, fields["rmdev2"])
        entries.append((N, lhs, rhs_raw))

    N, grid, fields, rbar = runs[-1]
    tau = 1e-10 * grid.area() * max(1.0, fields["qmax"] ** 2)
    _corB_subsample_identity(manifold, grid, rbar, tau)
    cert = _ricci_certificate(manifold, [f for _, _, f, _ in runs])
    lam_est, lam_info = _lambda_info(manifold, grid)
    constant = n / (n - 2)
    params = {"rbar": rbar}
    return _finish_report(
        manifold, "cor_B", params, constant, 2.0, entries, cert,
        lam_est, lam_info, tau, exploratory_K,
    )


def _corB_subsample_identity(manifold, grid, rbar: float, tau: float):
    """Tensor-direct Pythagoras check |Rm - RbarB'|^2 = |Rm - RB'|^2 +
    (2/(n(n-1)))(R - Rbar)^2 on the first chunk of every chart."""
    n = manifold.n
    eye = np.eye(n)
    b = unit_curvature_tensor(eye)
    for chart, nodes, _ in grid.per_chart():
        sl = slice(0, min(_CHUNK, nodes.shape[0]))
        if isinstance(chart, MetricChart):
            cb = curvature_batch(chart, nodes[sl])
            rm_onb, _ = _rm_to_onb(cb["rm"], cb["g"])
        else:
            data = point_geometry_batch(chart, nodes[sl], manifold.ambient)
            rm_onb = gauss_riemann_batch(data["a_onb"], manifold.ambient.c)
        scal = np.einsum("bii->b", ricci_onb_batch(rm_onb))
        dev_bar = rm_onb - (rbar / (n * (n - 1))) * b
        dev = rm_onb - (scal / (n * (n - 1)))[:, None, None, None, None] * b
        lhs = np.einsum("bijkl,bijkl->b", dev_bar, dev_bar)
        rhs = np.einsum("bijkl,bijkl->b", dev, dev) + 2.0 / (n * (n - 1)) * (
            scal - rbar
        ) ** 2
        resid = np.abs(lhs - rhs).max()
        scale = max(float(lhs.max(initial=0.0)), tau, 1e-12)
        if resid > 1e-10 * scale:
            raise NumericError(
                f"pointwise model-deviation Pythagoras identity failed: {resid:.3e}"
            )


def verify_gwx(
    manifold,
    k: int,
    resolution: int | None = None,
    exploratory_K: float | None = None,
) -> InequalityReport:
    """Almost-Schur inequality for the order-k Lovelock curvature:
    int |R^(k) - mean|^2 <= 4n(n-1)/(n-2k)^2 (1 + nK/lambda) int |E^(k)0|^2."""
    n = manifold.n
    if not 1 <= k or 2 * k >= n:
        raise AdmissibilityError(f"needs 1 <= k < n/2, got k={k}, n={n}")
    n1, n2 = _resolution_pair(manifold, resolution)
    runs = _metric_entries(manifold, (n1, n2), k=k, want_weyl=False)
    entries = []
    for N, grid, fields, _ in runs:
        rkbar = integrate_values(grid, fields["rk"]) / grid.area()
        lhs = integrate_values(grid, [(v - rkbar) ** 2 for v in fields["rk"]])
        rhs_raw = integrate_values(grid, fields["ek0n2"])
        entries.append((N, lhs, rhs_raw))
    N, grid, fields, _ = runs[-1]
    cert = _ricci_certificate(manifold, [f for _, _, f, _ in runs])
    lam_est, lam_info = _lambda_info(manifold, grid)
    tau = 1e-10 * grid.area() * max(1.0, fields["qmax"] ** 2)
    constant = 4.0 * n * (n - 1) / (n - 2 * k) ** 2
    params = {"k": k}
    return _finish_report(
        manifold, "gwx", params, constant, float(n), entries, cert,
        lam_est, lam_info, tau, exploratory_K,
    )


# ---------------------------------------------------------------------------
# sharpness sweep and taxonomy


def sharpness_sweep(
    n: int = 4,
    f_name: str = "height",
    t_min: float = 0.01,
    t_max: float = 0.1,
    steps: int = 10,
    resolution: int | None = None,
) -> list:
    """Conformal perturbation sweep ``(1 + t f) g0`` on the round n-sphere.

    Each row verifies both scalar-curvature inequalities, records their
    ratios, the Ricci minimum (rows losing positivity are marked excluded,
    not failed), the Weyl L2 norm (zero up to quadrature: the family is
    conformally flat), and checks that the two right-hand sides agree after
    their constants are applied (the conformally-flat coincidence).
    """
    rows = []
    t_grid = np.linspace(t_min, t_max, steps)
    c1 = 4.0 * n * (n - 1) / (n - 2) ** 2
    c2 = n * (n - 1) / (n - 2)
    for t in t_grid:
        row = {"t": float(t), "ratio_i": None, "ratio_ii": None,
               "ricci_min": None, "weyl_l2": None, "verdict": None,
               "rhs_agreement": None}
        try:
            manifold = make_conformal_sphere(n, f_name, float(t))
            rep_i, rep_ii = verify_thm_R(manifold, resolution=resolution)
        except DomainError:
            row["verdict"] = "excluded"
            rows.append(row)
            continue
        ric_min = rep_i.k_certificate["ricci_min"]
        row["ricci_min"] = ric_min
        if ric_min <= 0.0:
            row["verdict"] = "excluded"
            rows.append(row)
            continue
        row["ratio_i"] = rep_i.ratio
        row["ratio_ii"] = rep_ii.ratio
        row["weyl_l2"] = rep_i.params["weyl_l2"]
        # conformal flatness: C1 * int|Ric0|^2 = C2 * int|Rm - (R/n(n-1))B|^2
        a = c1 * rep_i.rhs_raw
        b = c2 * rep_ii.rhs_raw
        agreement = abs(a - b) / max(a, b, 1e-300)
        row["rhs_agreement"] = agreement
        verdicts = {rep_i.verdict, rep_ii.verdict}
        if "violated" in verdicts:
            row["verdict"] = "violated"
        elif "inconclusive" in verdicts:
            row["verdict"] = "inconclusive"
        elif verdicts == {"equality"}:
            row["verdict"] = "equality"
        else:
            row["verdict"] = "holds"
        if agreement > 1e-6:
            raise NumericError(
                f"conformally-flat right-hand sides disagree at t={t}: {agreement:.3e}"
            )
        rows.append(row)
    return rows


def write_sweep_csv(rows: list, path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "ratio_i", "ratio_ii", "ricci_min", "weyl_l2", "verdict"])
        for row in rows:
            writer.writerow(
                [
                    row["t"],
                    row["ratio_i"],
                    row["ratio_ii"],
                    row["ricci_min"],
                    row["weyl_l2"],
                    row["verdict"],
                ]
            )


def equality_taxonomy(manifold, resolution: int | None = None, r: int | None = None) -> dict:
    """Numerical equality-case flags with ground-truth assertions.

    Computes L2-normalized predicates (traceless-Ricci norm -> Einstein flag;
    Weyl norm -> conformal-flatness flag for n >= 4; traceless Newton norm ->
    umbilic flag for submanifolds) and, where the catalog records the class,
    asserts that the inequality verdicts match.  With unknown ground truth
    the flags are reported without assertion.
    """
    n = manifold.n
    n1, n2 = _resolution_pair(manifold, resolution)
    report = {"case": manifold.name, "flags": {}, "verdicts": {}, "assertions": []}
    truth = manifold.ground_truth

    if isinstance(manifold, ImmersedManifold):
        order = r if r is not None else 1
        grid = build_grid(manifold, n2)
        fields = _submanifold_pass(manifold, grid, order)
        t0 = math.sqrt(max(integrate_values(grid, fields["t0n2"]), 0.0))
        tn = math.sqrt(max(integrate_values(grid, fields["tn2"]), 0.0))
        umbilic = t0 < 1e-8 * max(tn, 1.0)
        report["flags"][f"umbilic_r{order}"] = umbilic
        rep = verify_thm_main(manifold, order, resolution=n1)
        report["verdicts"]["thm_main"] = rep.verdict
        ok = (rep.verdict == "equality") == umbilic
        report["assertions"].append((f"umbilic flag matches verdict (r={order})", bool(ok)))
        if truth.get("umbilic") is not None and order == 1:
            report["assertions"].append(
                ("umbilic flag matches catalog", bool(truth["umbilic"] == umbilic))
            )
        return report

    grid = build_grid(manifold, n2)
    fields = _metric_pass(manifold, grid, want_weyl=True)
    ric0_l2 = math.sqrt(max(integrate_values(grid, fields["ric0n2"]), 0.0))
    rm_l2 = math.sqrt(max(integrate_values(grid, fields["rmn2"]), 0.0))
    weyl_l2 = (
        math.sqrt(max(integrate_values(grid, fields["weyl2"]), 0.0))
        if fields["weyl2"]
        else 0.0
    )
    scale = max(rm_l2, 1.0)
    einstein = ric0_l2 < 1e-8 * scale
    lcf = weyl_l2 < 1e-8 * scale
    report["flags"]["einstein"] = einstein
    report["flags"]["lcf"] = lcf

    rep_i, rep_ii = verify_thm_R(manifold, resolution=n1)
    report["verdicts"]["thm_R_i"] = rep_i.verdict
    report["verdicts"]["thm_R_ii"] = rep_ii.verdict
    ok_i = (rep_i.verdict == "equality") == einstein
    report["assertions"].append(("Einstein flag matches (i) equality", bool(ok_i)))
    if n >= 4:
        ok_ii = (rep_ii.verdict == "equality") == lcf
        report["assertions"].append(("conformal-flatness flag matches (ii) equality", bool(ok_ii)))
    if truth.get("einstein") is not None:
        report["assertions"].append(
            ("Einstein flag matches catalog", bool(truth["einstein"] == einstein))
        )
    if truth.get("lcf") is not None and n >= 4:
        report["assertions"].append(
            ("conformal-flatness flag matches catalog", bool(truth["lcf"] == lcf))
        )
    return report
