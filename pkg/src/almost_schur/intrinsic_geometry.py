"""Curvature of metrics given componentwise on charts.

A :class:`MetricChart` supplies exact closures for the metric and its first
and second coordinate derivatives on a rectangular domain.  From these we
build Christoffel symbols, the Riemann/Ricci/scalar curvature, conformal
perturbation families ``(1 + t f) g0``, and a finite-difference covariant
divergence for mixed (1,1) tensor fields.

Derivative array layout (leading batch axis ``N`` everywhere):

- ``g``    : (N, n, n)
- ``dg``   : (N, n, n, n)       with ``dg[:, p, i, j] = d_p g_ij``
- ``d2g``  : (N, n, n, n, n)    with ``d2g[:, q, p, i, j] = d_q d_p g_ij``

Curvature is stored so that ``rm[:, i, j, i, j]`` is the sectional curvature
of the coordinate plane ``(i, j)`` in an orthonormal frame; the unit round
n-sphere has scalar curvature ``n (n - 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .domains import Box
from .errors import ArgumentError, DomainError, PositivityError
from .tensor_algebra import (
    AlgCurvTensor4,
    SymTensor2,
    assert_finite,
    ricci_contraction,
    scalar_contraction,
    trace2,
)

__all__ = [
    "MetricChart",
    "ScalarChartFunction",
    "ConformalFamily",
    "christoffel",
    "christoffel_batch",
    "curvature_batch",
    "riemann",
    "ricci",
    "scalar_curvature",
    "conformal_metric",
    "chart_christoffel",
    "covariant_divergence",
    "metric_compatibility_residual",
    "function_laplacian",
    "function_grad_norm2",
    "constant_metric_chart",
    "conformally_flat_chart",
    "product_metric_chart",
]


@dataclass(frozen=True)
class ScalarChartFunction:
    """A scalar function on a chart with exact derivative closures.

    ``value(u) -> (N,)``, ``grad(u) -> (N, n)`` (coordinate partials) and
    ``hess(u) -> (N, n, n)`` (coordinate second partials).
    """

    value: Callable
    grad: Callable
    hess: Callable


@dataclass(frozen=True)
class MetricChart:
    """An intrinsic Riemannian metric on one chart of an atlas.

    ``eval(u)`` must accept an ``(N, n)`` array and return ``(g, dg, d2g)``
    in the layout documented at module level.  ``atlas_weight`` is the
    partition-of-unity weight for multi-chart manifolds (None means the
    constant 1).
    """

    name: str
    n: int
    domain: Box
    eval: Callable = field(repr=False)
    atlas_weight: Callable | None = field(default=None, repr=False)

    def weight(self, u: np.ndarray) -> np.ndarray:
        u = np.atleast_2d(np.asarray(u, dtype=float))
        if self.atlas_weight is None:
            return np.ones(u.shape[0])
        return np.asarray(self.atlas_weight(u), dtype=float)


@dataclass(frozen=True)
class ConformalFamily:
    """The conformal perturbation ``g_t = (1 + t f) g0`` of a base chart."""

    base: MetricChart
    f: ScalarChartFunction
    t: float


def _eval_chart(mc: MetricChart, u: np.ndarray):
    u = np.atleast_2d(np.asarray(u, dtype=float))
    if u.shape[1] != mc.n:
        raise ArgumentError(f"points have dimension {u.shape[1]}, chart has {mc.n}")
    g, dg, d2g = mc.eval(u)
    return u, np.asarray(g, float), np.asarray(dg, float), np.asarray(d2g, float)


def _inv_pd(g: np.ndarray, what: str) -> np.ndarray:
    try:
        np.linalg.cholesky(g)
    except np.linalg.LinAlgError as exc:
        raise PositivityError(f"{what}: metric not positive definite") from exc
    return np.linalg.inv(g)


def christoffel_batch(g, dg):
    """Christoffel symbols ``gamma[:, c, a, b]`` from metric and first derivatives."""
    ginv = _inv_pd(g, "christoffel")
    t1 = dg                                       # d_a g_bd
    t2 = np.einsum("...bad->...abd", dg)          # d_b g_ad
    t3 = np.einsum("...dab->...abd", dg)          # d_d g_ab
    return 0.5 * np.einsum("...cd,...abd->...cab", ginv, t1 + t2 - t3), ginv


def christoffel(mc: MetricChart, u) -> np.ndarray:
    """Levi-Civita Christoffel symbols at one point, shape (n, n, n).

    ``out[c, a, b]`` multiplies ``du^a du^b`` in the geodesic equation and is
    symmetric in ``(a, b)``.
    """
    u, g, dg, _ = _eval_chart(mc, u)
    mc.domain.require_inside(u)
    gamma, _ = christoffel_batch(g, dg)
    return gamma[0]


def curvature_batch(mc: MetricChart, u: np.ndarray) -> dict:
    """Metric, Christoffels and curvature tensors at a batch of points.

    Returns a dict with ``g, ginv, gamma, rm, ric, scal`` (all batched).
    """
    u, g, dg, d2g = _eval_chart(mc, u)
    assert_finite(g, f"metric on chart {mc.name}")
    gamma, ginv = christoffel_batch(g, dg)

    dginv = -np.einsum("...ce,...pef,...fd->...pcd", ginv, dg, ginv)
    dsym = (
        np.einsum("...pabd->...pabd", d2g)
        + np.einsum("...pbad->...pabd", d2g)
        - np.einsum("...pdab->...pabd", d2g)
    )
    t1 = dg
    t2 = np.einsum("...bad->...abd", dg)
    t3 = np.einsum("...dab->...abd", dg)
    dgamma = 0.5 * (
        np.einsum("...pcd,...abd->...pcab", dginv, t1 + t2 - t3)
        + np.einsum("...cd,...pabd->...pcab", ginv, dsym)
    )

    # R(d_i, d_j) d_l = rmix[:, a, i, j, l] d_a
    rmix = (
        np.einsum("...iajl->...aijl", dgamma)
        - np.einsum("...jail->...aijl", dgamma)
        + np.einsum("...aib,...bjl->...aijl", gamma, gamma)
        - np.einsum("...ajb,...bil->...aijl", gamma, gamma)
    )
    rm = np.einsum("...ka,...aijl->...ijkl", g, rmix)
    ric = ricci_contraction(rm, ginv)
    scal = scalar_contraction(rm, ginv)
    return {"u": u, "g": g, "ginv": ginv, "gamma": gamma, "rm": rm, "ric": ric, "scal": scal}


def riemann(mc: MetricChart, u) -> AlgCurvTensor4:
    """Riemann tensor at one point as an :class:`AlgCurvTensor4`."""
    data = curvature_batch(mc, np.atleast_2d(np.asarray(u, dtype=float)))
    return AlgCurvTensor4(data["rm"][0])


def ricci(mc: MetricChart, u) -> SymTensor2:
    data = curvature_batch(mc, np.atleast_2d(np.asarray(u, dtype=float)))
    return SymTensor2(data["ric"][0])


def scalar_curvature(mc: MetricChart, u) -> float:
    data = curvature_batch(mc, np.atleast_2d(np.asarray(u, dtype=float)))
    return float(data["scal"][0])


def metric_compatibility_residual(mc: MetricChart, u) -> float:
    """Max-abs residual of ``nabla g = 0`` using the exact derivative closures."""
    u, g, dg, _ = _eval_chart(mc, u)
    gamma, _ = christoffel_batch(g, dg)
    corr = np.einsum("...aki,...aj->...kij", gamma, g) + np.einsum(
        "...akj,...ia->...kij", gamma, g
    )
    return float(np.abs(dg - corr).max())


# ---------------------------------------------------------------------------
# conformal families


def conformal_metric(family: ConformalFamily) -> MetricChart:
    """Chart for ``(1 + t f) g0`` with derivatives assembled by product rule.

    Evaluation raises :class:`DomainError` (naming the first offending node)
    if ``1 + t f`` is not positive at every requested point.
    """
    base, f, t = family.base, family.f, float(family.t)

    def eval_conformal(u):
        u = np.atleast_2d(np.asarray(u, dtype=float))
        g, dg, d2g = base.eval(u)
        w = 1.0 + t * np.asarray(f.value(u), float)
        if np.any(w <= 0.0):
            bad = u[np.argmin(w)]
            raise DomainError(
                f"conformal factor 1+t*f not positive at node {bad.tolist()} (t={t})"
            )
        dw = t * np.asarray(f.grad(u), float)
        d2w = t * np.asarray(f.hess(u), float)
        g_t = w[:, None, None] * g
        dg_t = dw[:, :, None, None] * g[:, None, :, :] + w[:, None, None, None] * dg
        d2g_t = (
            d2w[:, :, :, None, None] * g[:, None, None, :, :]
            + dw[:, None, :, None, None] * dg[:, None, :, :, :]
            + dw[:, :, None, None, None] * dg[:, None, :, :, :].swapaxes(1, 2)
            + w[:, None, None, None, None] * d2g
        )
        return g_t, dg_t, d2g_t

    return MetricChart(
        name=f"{base.name}|conformal(t={t})",
        n=base.n,
        domain=base.domain,
        eval=eval_conformal,
        atlas_weight=base.atlas_weight,
    )


# ---------------------------------------------------------------------------
# covariant divergence of (1,1) fields by finite differences


def chart_christoffel(chart, u: np.ndarray):
    """(gamma, ginv) for a metric chart or an immersion chart.

    An immersion chart's induced metric has exact first derivatives
    ``d_p g_ab = H_pa . J_b + J_a . H_pb``, so no numerical differentiation
    is involved here.
    """
    u = np.atleast_2d(np.asarray(u, dtype=float))
    first, second, third = chart.eval(u)
    first = np.asarray(first, float)
    if first.ndim == 2:  # immersion chart: eval returned (F, J, H)
        J = np.asarray(second, float)
        H = np.asarray(third, float)
        g = np.einsum("nma,nmb->nab", J, J)
        dg = np.einsum("nmpa,nmb->npab", H, J) + np.einsum("nma,nmpb->npab", J, H)
    else:
        g = first
        dg = np.asarray(second, float)
    return christoffel_batch(g, dg)


def covariant_divergence(field_fn: Callable, chart, u, h: float | None = None):
    """Divergence ``(div T)_j = nabla_i T^i_j`` of a mixed (1,1) field.

    ``field_fn(u) -> (N, n, n)`` returns the components ``T^i_j`` (first
    index up) in the coordinate frame.  Partials are central differences
    with step ``h`` (default ``1e-4`` of the smallest domain width);
    Christoffel corrections use the exact metric derivatives at the center.
    Works over metric charts and immersion charts (induced metric).  Raises
    :class:`DomainError` if a stencil point leaves a non-periodic domain.
    """
    u = np.atleast_2d(np.asarray(u, dtype=float))
    n = chart.domain.dim
    if h is None:
        h = 1e-4 * min(hi - lo for lo, hi in zip(chart.domain.lo, chart.domain.hi))
    chart.domain.require_inside(u)

    dT = np.zeros((u.shape[0], n, n, n))  # dT[:, p, i, j] = d_p T^i_j
    for p in range(n):
        up = u.copy()
        um = u.copy()
        up[:, p] += h
        um[:, p] -= h
        if chart.domain.periodic[p]:
            up = chart.domain.wrap(up)
            um = chart.domain.wrap(um)
        else:
            if not (np.all(chart.domain.contains(up)) and np.all(chart.domain.contains(um))):
                raise DomainError(
                    f"divergence stencil leaves non-periodic domain on axis {p} (h={h})"
                )
        dT[:, p] = (np.asarray(field_fn(up), float) - np.asarray(field_fn(um), float)) / (
            2.0 * h
        )

    gamma, _ = chart_christoffel(chart, u)
    T0 = np.asarray(field_fn(u), float)
    div = (
        np.einsum("...iij->...j", dT)
        + np.einsum("...iia,...aj->...j", gamma, T0)
        - np.einsum("...aij,...ia->...j", gamma, T0)
    )
    return div


# ---------------------------------------------------------------------------
# scalar functions on charts


def function_grad_norm2(fn: ScalarChartFunction, g_inv: np.ndarray, u: np.ndarray):
    """|grad f|^2 = g^ij f_i f_j at a batch of points."""
    df = np.asarray(fn.grad(np.atleast_2d(u)), float)
    return np.einsum("...ij,...i,...j->...", g_inv, df, df)


def function_laplacian(fn: ScalarChartFunction, mc: MetricChart, u: np.ndarray):
    """Positive Laplacian ``-g^ij (f_ij - Gamma^k_ij f_k)`` at a batch of points.

    Sign convention: eigenfunctions satisfy ``Delta f = lambda f`` with
    ``lambda > 0`` (ambient coordinates on the unit n-sphere give lambda = n).
    """
    u, g, dg, _ = _eval_chart(mc, u)
    gamma, ginv = christoffel_batch(g, dg)
    df = np.asarray(fn.grad(u), float)
    d2f = np.asarray(fn.hess(u), float)
    hess_cov = d2f - np.einsum("...kij,...k->...ij", gamma, df)
    return -trace2(hess_cov, ginv)


# ---------------------------------------------------------------------------
# chart builders


def constant_metric_chart(name: str, diag, domain: Box) -> MetricChart:
    """Flat chart with a constant diagonal metric (e.g. a flat torus)."""
    diag = np.asarray(diag, dtype=float)
    n = diag.shape[0]
    if domain.dim != n:
        raise ArgumentError("domain dimension does not match metric dimension")
    g0 = np.diag(diag)

    def eval_const(u):
        u = np.atleast_2d(np.asarray(u, dtype=float))
        batch = u.shape[0]
        g = np.broadcast_to(g0, (batch, n, n)).copy()
        dg = np.zeros((batch, n, n, n))
        d2g = np.zeros((batch, n, n, n, n))
        return g, dg, d2g

    return MetricChart(name=name, n=n, domain=domain, eval=eval_const)


def conformally_flat_chart(
    name: str,
    n: int,
    domain: Box,
    psi: ScalarChartFunction,
    atlas_weight: Callable | None = None,
) -> MetricChart:
    """Chart with metric ``psi(u) * identity`` (``psi > 0``)."""

    eye = np.eye(n)

    def eval_cf(u):
        u = np.atleast_2d(np.asarray(u, dtype=float))
        w = np.asarray(psi.value(u), float)
        dw = np.asarray(psi.grad(u), float)
        d2w = np.asarray(psi.hess(u), float)
        g = w[:, None, None] * eye
        dg = dw[:, :, None, None] * eye
        d2g = d2w[:, :, :, None, None] * eye
        return g, dg, d2g

    return MetricChart(name=name, n=n, domain=domain, eval=eval_cf, atlas_weight=atlas_weight)


def product_metric_chart(a: MetricChart, b: MetricChart, name: str | None = None) -> MetricChart:
    """Direct-sum metric chart for a product manifold."""
    na, nb = a.n, b.n
    n = na + nb
    domain = Box(
        lo=a.domain.lo + b.domain.lo,
        hi=a.domain.hi + b.domain.hi,
        periodic=a.domain.periodic + b.domain.periodic,
    )

    def eval_prod(u):
        u = np.atleast_2d(np.asarray(u, dtype=float))
        batch = u.shape[0]
        ga, dga, d2ga = a.eval(u[:, :na])
        gb, dgb, d2gb = b.eval(u[:, na:])
        g = np.zeros((batch, n, n))
        dg = np.zeros((batch, n, n, n))
        d2g = np.zeros((batch, n, n, n, n))
        g[:, :na, :na] = ga
        g[:, na:, na:] = gb
        dg[:, :na, :na, :na] = dga
        dg[:, na:, na:, na:] = dgb
        d2g[:, :na, :na, :na, :na] = d2ga
        d2g[:, na:, na:, na:, na:] = d2gb
        return g, dg, d2g

    def weight_prod(u):
        u = np.atleast_2d(np.asarray(u, dtype=float))
        wa = a.weight(u[:, :na])
        wb = b.weight(u[:, na:])
        return wa * wb

    return MetricChart(
        name=name or f"{a.name}*{b.name}",
        n=n,
        domain=domain,
        eval=eval_prod,
        atlas_weight=weight_prod,
    )
