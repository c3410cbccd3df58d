"""Quadrature over closed manifolds given by chart atlases.

Tensor-product rules per chart: Gauss-Legendre on non-periodic axes,
trapezoidal (uniform) on periodic axes, which is spectrally accurate for
smooth periodic integrands.  Node weights include the Riemannian area
element ``sqrt(det g)`` and the partition-of-unity weight of the chart;
nodes where the atlas weight vanishes are dropped at build time.

Reductions are deterministic: fixed-batch partial sums combined with
``math.fsum``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ArgumentError, GridError, NumericError
from .extrinsic_geometry import ImmersionChart
from .intrinsic_geometry import MetricChart

__all__ = [
    "QuadratureGrid",
    "build_grid",
    "integrate",
    "integrate_values",
    "average",
    "l2_deviation",
]

_BATCH = 4096


@dataclass(frozen=True)
class ChartNodes:
    chart: object
    nodes: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True)
class QuadratureGrid:
    """Nodes and weights for integrating over a closed manifold.

    ``parts`` holds one :class:`ChartNodes` per chart; weights are strictly
    positive and already include the area element and atlas weight.
    """

    parts: tuple
    resolution: int
    rejected: int = 0
    total_candidates: int = 0
    _area: float = field(default=None, repr=False)

    def per_chart(self):
        for part in self.parts:
            yield part.chart, part.nodes, part.weights

    @property
    def node_count(self) -> int:
        return sum(p.nodes.shape[0] for p in self.parts)

    def area(self) -> float:
        return self._area


def _axis_rule(lo: float, hi: float, periodic: bool, count: int):
    if periodic:
        step = (hi - lo) / count
        nodes = lo + step * np.arange(count)
        weights = np.full(count, step)
    else:
        x, w = np.polynomial.legendre.leggauss(count)
        nodes = 0.5 * (hi + lo) + 0.5 * (hi - lo) * x
        weights = 0.5 * (hi - lo) * w
    return nodes, weights


def _metric_dets(chart, nodes: np.ndarray) -> np.ndarray:
    """det g at the nodes, for either chart kind."""
    if isinstance(chart, ImmersionChart):
        _, J, _ = chart.eval(nodes)
        g = np.einsum("...ma,...mb->...ab", np.asarray(J, float), np.asarray(J, float))
    elif isinstance(chart, MetricChart):
        g, _, _ = chart.eval(nodes)
        g = np.asarray(g, float)
    else:
        raise ArgumentError(f"unsupported chart type {type(chart).__name__}")
    return np.linalg.det(g)


def build_grid(manifold, resolution: int) -> QuadratureGrid:
    """Tensor-product quadrature grid over all charts of a manifold.

    ``resolution`` is the node count per axis (>= 8).  Degenerate nodes
    (non-finite or non-positive ``det g``) are rejected with a diagnostic;
    more than 0.1% rejections aborts with :class:`GridError`.
    """
    if resolution < 8:
        raise GridError(f"resolution {resolution} below the minimum of 8 nodes per axis")
    parts = []
    rejected = 0
    candidates = 0
    partials = []
    for chart in manifold.charts:
        box = chart.domain
        axes = [
            _axis_rule(box.lo[ax], box.hi[ax], box.periodic[ax], resolution)
            for ax in range(box.dim)
        ]
        mesh = np.meshgrid(*[a[0] for a in axes], indexing="ij")
        nodes = np.stack([m.reshape(-1) for m in mesh], axis=1)
        wmesh = np.meshgrid(*[a[1] for a in axes], indexing="ij")
        base_w = np.ones(nodes.shape[0])
        for wm in wmesh:
            base_w = base_w * wm.reshape(-1)
        candidates += nodes.shape[0]

        atlas_w = chart.weight(nodes)
        keep = atlas_w > 0.0
        nodes = nodes[keep]
        base_w = base_w[keep] * atlas_w[keep]
        if nodes.shape[0] == 0:
            continue

        dets = np.empty(nodes.shape[0])
        for start in range(0, nodes.shape[0], _BATCH):
            sl = slice(start, min(start + _BATCH, nodes.shape[0]))
            dets[sl] = _metric_dets(chart, nodes[sl])
        good = np.isfinite(dets) & (dets > 0.0)
        if not np.all(good):
            rejected += int((~good).sum())
            nodes = nodes[good]
            base_w = base_w[good]
            dets = dets[good]
        weights = base_w * np.sqrt(dets)
        parts.append(ChartNodes(chart=chart, nodes=nodes, weights=weights))
        for start in range(0, weights.shape[0], _BATCH):
            partials.append(float(np.sum(weights[start : start + _BATCH])))

    if candidates and rejected > 1e-3 * candidates:
        raise GridError(
            f"{rejected} of {candidates} nodes rejected as degenerate (>0.1%)"
        )
    area = math.fsum(partials)
    if not parts or area <= 0:
        raise GridError("grid has no usable nodes or non-positive area")
    return QuadratureGrid(
        parts=tuple(parts),
        resolution=resolution,
        rejected=rejected,
        total_candidates=candidates,
        _area=area,
    )


def integrate(grid: QuadratureGrid, fn: Callable):
    """Weighted sum of ``fn(chart, nodes)`` over the grid.

    ``fn`` must return values of shape ``(N,)`` or ``(N, d)``; the result is
    a float or a length-d vector (componentwise integrals).  Non-finite
    values raise :class:`NumericError` naming the chart and node.
    """
    partials = []
    for chart, nodes, weights in grid.per_chart():
        for start in range(0, nodes.shape[0], _BATCH):
            sl = slice(start, min(start + _BATCH, nodes.shape[0]))
            vals = np.asarray(fn(chart, nodes[sl]), float)
            if not np.all(np.isfinite(vals)):
                bad = int(np.argwhere(~np.isfinite(vals))[0][0])
                raise NumericError(
                    f"non-finite integrand on chart "
                    f"{getattr(chart, 'name', '?')} at node {nodes[sl][bad].tolist()}"
                )
            if vals.ndim == 1:
                partials.append(np.array([np.sum(weights[sl] * vals)]))
            else:
                partials.append(weights[sl] @ vals)
    if not partials:
        raise NumericError("empty grid")
    stacked = np.vstack(partials)
    out = np.array([math.fsum(stacked[:, j]) for j in range(stacked.shape[1])])
    return float(out[0]) if out.shape[0] == 1 else out


def integrate_values(grid: QuadratureGrid, per_chart_values):
    """Integrate precomputed node values (one array per chart, grid order).

    Values may be ``(N,)`` or ``(N, d)``; returns a float or a length-d
    vector.  Same deterministic reduction as :func:`integrate`.
    """
    partials = []
    for (chart, nodes, weights), vals in zip(grid.per_chart(), per_chart_values):
        vals = np.asarray(vals, float)
        if vals.shape[0] != nodes.shape[0]:
            raise ArgumentError(
                f"value array length {vals.shape[0]} != node count {nodes.shape[0]} "
                f"on chart {getattr(chart, 'name', '?')}"
            )
        if not np.all(np.isfinite(vals)):
            bad = int(np.argwhere(~np.isfinite(vals))[0][0])
            raise NumericError(
                f"non-finite integrand on chart {getattr(chart, 'name', '?')} "
                f"at node {nodes[bad].tolist()}"
            )
        for start in range(0, nodes.shape[0], _BATCH):
            sl = slice(start, min(start + _BATCH, nodes.shape[0]))
            if vals.ndim == 1:
                partials.append(np.array([np.sum(weights[sl] * vals[sl])]))
            else:
                partials.append(weights[sl] @ vals[sl])
    if not partials:
        raise NumericError("empty grid")
    stacked = np.vstack(partials)
    out = np.array([math.fsum(stacked[:, j]) for j in range(stacked.shape[1])])
    return float(out[0]) if out.shape[0] == 1 else out


def average(grid: QuadratureGrid, fn: Callable):
    """Area average of a scalar or vector quantity."""
    total = integrate(grid, fn)
    return total / grid.area()


def l2_deviation(grid: QuadratureGrid, fn: Callable, mean) -> float:
    """``int |q - mean|^2`` with an internal accumulation cross-check.

    ``mean`` is a precomputed constant (scalar or vector, typically the grid
    average).  The direct integral is cross-checked against the expansion
    ``int |q|^2 - 2 <mean, int q> + area |mean|^2``; disagreement beyond
    1e-10 (relative, floored) raises :class:`NumericError`.
    """
    mean_arr = np.atleast_1d(np.asarray(mean, float))

    def dev2(chart, nodes):
        vals = np.asarray(fn(chart, nodes), float)
        if vals.ndim == 1:
            vals = vals[:, None]
        d = vals - mean_arr[None, :]
        return np.einsum("nd,nd->n", d, d)

    direct = integrate(grid, dev2)

    def sq(chart, nodes):
        vals = np.asarray(fn(chart, nodes), float)
        if vals.ndim == 1:
            vals = vals[:, None]
        return np.einsum("nd,nd->n", vals, vals)

    int_sq = integrate(grid, sq)
    int_q = integrate(grid, fn)
    int_q = np.atleast_1d(np.asarray(int_q, float))
    expansion = (
        int_sq - 2.0 * float(mean_arr @ int_q) + grid.area() * float(mean_arr @ mean_arr)
    )
    scale = max(abs(direct), abs(int_sq), 1.0e-12)
    if abs(direct - expansion) > 1e-10 * scale:
        raise NumericError(
            f"l2_deviation cross-check failed: direct={direct}, expansion={expansion}"
        )
    return direct
