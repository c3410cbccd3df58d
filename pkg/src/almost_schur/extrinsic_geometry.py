"""Pointwise geometry of parametrized immersions.

Turns an immersion ``u -> F(u)`` (with exact Jacobian/Hessian closures) into
the induced metric, an orthonormal tangent frame, a normal frame, the
vector-valued second fundamental form and, for hypersurfaces, principal
curvatures.  The Gauss equation then produces the intrinsic curvature tensor
without ever differentiating the metric.

Sign convention: the second fundamental form is minus the normal part of the
parameter Hessian, so the unit sphere with outward normal has principal
curvatures +1 and all higher mean curvatures positive.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .domains import Box
from .errors import (
    ArgumentError,
    CodimensionError,
    DegenerateImmersionError,
    NumericError,
)
from .tensor_algebra import AlgCurvTensor4, SymTensor2, VecValuedSym2

__all__ = [
    "AmbientSpace",
    "ImmersionChart",
    "PointGeometry",
    "point_geometry",
    "point_geometry_batch",
    "principal_curvatures",
    "gauss_riemann",
    "gauss_riemann_batch",
    "ricci_onb_batch",
    "ricci_bound_certificate",
    "RicciCertificate",
    "fd_jacobian_hessian",
]

_RANK_TOL = 1e-8


@dataclass(frozen=True)
class AmbientSpace:
    """A constant-curvature ambient: Euclidean space, sphere or hyperbolic space."""

    kind: str = "euclidean"
    c: float = 0.0

    def __post_init__(self):
        if self.kind not in ("euclidean", "sphere", "hyperbolic"):
            raise ArgumentError(f"unknown ambient kind {self.kind!r}")
        if self.kind == "euclidean" and self.c != 0.0:
            raise ArgumentError("euclidean ambient requires c = 0")
        if self.kind == "sphere" and self.c <= 0.0:
            raise ArgumentError("sphere ambient requires c > 0")
        if self.kind == "hyperbolic" and self.c >= 0.0:
            raise ArgumentError("hyperbolic ambient requires c < 0")


EUCLIDEAN = AmbientSpace("euclidean", 0.0)


@dataclass(frozen=True)
class ImmersionChart:
    """One chart of a parametrized immersion into R^m.

    ``eval(u)`` takes ``(N, n)`` parameter points and returns ``(F, J, H)``
    with shapes ``(N, m)``, ``(N, m, n)`` and ``(N, m, n, n)``; all three are
    exact analytic closures, never finite differences.  ``orient`` optionally
    fixes the sign of the hypersurface normal (input ``(F, nu)``, output
    ``+-1`` per node); ``normal_frame`` optionally supplies an analytic
    normal frame ``(N, m, codim)`` used instead of the QR completion.
    """

    name: str
    n: int
    m: int
    domain: Box
    eval: Callable = field(repr=False)
    atlas_weight: Callable | None = field(default=None, repr=False)
    orient: Callable | None = field(default=None, repr=False)
    normal_frame: Callable | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.m <= self.n:
            raise ArgumentError("ambient dimension must exceed intrinsic dimension")

    def weight(self, u: np.ndarray) -> np.ndarray:
        u = np.atleast_2d(np.asarray(u, dtype=float))
        if self.atlas_weight is None:
            return np.ones(u.shape[0])
        return np.asarray(self.atlas_weight(u), dtype=float)


@dataclass(frozen=True)
class PointGeometry:
    """All pointwise geometric data of an immersion at one parameter point."""

    u: np.ndarray
    position: np.ndarray
    g: SymTensor2
    ginv: SymTensor2
    A: VecValuedSym2              # orthonormal tangent frame, normal-frame values
    normal_frame: np.ndarray      # (m, codim) columns
    tangent_frame: np.ndarray     # (m, n) columns, orthonormal
    coframe: np.ndarray           # (n, n): e_i = sum_a coframe[a, i] d_a
    A_coord: np.ndarray           # (n, n, codim) coordinate-frame components
    principal: np.ndarray | None  # ascending, codim-1 only

    @property
    def n(self) -> int:
        return self.g.dim

    @property
    def codim(self) -> int:
        return self.A.codim


def _eval_immersion(chart: ImmersionChart, u: np.ndarray):
    u = np.atleast_2d(np.asarray(u, dtype=float))
    if u.shape[1] != chart.n:
        raise ArgumentError(f"points have dimension {u.shape[1]}, chart has {chart.n}")
    F, J, H = chart.eval(u)
    return (
        u,
        np.asarray(F, float),
        np.asarray(J, float),
        np.asarray(H, float),
    )


def point_geometry_batch(
    chart: ImmersionChart,
    u: np.ndarray,
    ambient: AmbientSpace = EUCLIDEAN,
) -> dict:
    """Batched pointwise geometry; returns raw arrays keyed by name.

    For a sphere ambient the chart must land on the sphere of radius
    ``1/sqrt(c)`` about the origin and the radial direction is removed from
    the normal space, so ``A`` is the second fundamental form within the
    sphere.
    """
    u, F, J, H = _eval_immersion(chart, u)
    batch, m, n = J.shape

    sv = np.linalg.svd(J, compute_uv=False)
    bad = sv[:, -1] <= _RANK_TOL * sv[:, 0]
    if np.any(bad):
        raise DegenerateImmersionError(
            f"rank-deficient Jacobian on chart {chart.name} at u={u[bad][0].tolist()}"
        )

    g = np.einsum("...ma,...mb->...ab", J, J)
    L = np.linalg.cholesky(g)
    ginv = np.linalg.inv(g)
    coframe = np.linalg.inv(L).transpose(0, 2, 1)  # L^{-T}
    tangent = np.einsum("...ma,...ai->...mi", J, coframe)

    radial = None
    if ambient.kind == "sphere":
        rho = 1.0 / np.sqrt(ambient.c)
        radii = np.linalg.norm(F, axis=1)
        if np.abs(radii - rho).max() > 1e-10 * rho:
            raise NumericError(
                f"chart {chart.name} does not lie on the ambient sphere of radius {rho}"
            )
        radial = F / radii[:, None]
    elif ambient.kind == "hyperbolic":
        raise ArgumentError("hyperbolic ambient charts are not provided by the catalog")

    if chart.normal_frame is not None:
        nu = np.asarray(chart.normal_frame(u), float)
    else:
        cols = [tangent]
        if radial is not None:
            cols.append(radial[:, :, None])
        cols.append(np.broadcast_to(np.eye(m), (batch, m, m)))
        seed = np.concatenate(cols, axis=2)
        q_full, _ = np.linalg.qr(seed, mode="reduced")
        skip = n + (1 if radial is not None else 0)
        nu = q_full[:, :, skip:m]
    codim = nu.shape[2]
    if codim < 1:
        raise ArgumentError("no normal directions available")

    if chart.orient is not None and codim == 1:
        sign = np.asarray(chart.orient(F, nu[:, :, 0]), float)
        nu = nu * sign[:, None, None]

    # A = -(normal part of the parameter Hessian), then to the orthonormal frame
    a_coord = -np.einsum("...mab,...mq->...abq", H, nu)
    a_onb = np.einsum("...ai,...bj,...abq->...ijq", coframe, coframe, a_coord)

    principal = None
    if codim == 1:
        principal = np.linalg.eigvalsh(a_onb[..., 0])

    return {
        "u": u,
        "F": F,
        "J": J,
        "H": H,
        "g": g,
        "ginv": ginv,
        "coframe": coframe,
        "tangent": tangent,
        "normal": nu,
        "a_coord": a_coord,
        "a_onb": a_onb,
        "principal": principal,
    }


def point_geometry(
    chart: ImmersionChart, u, ambient: AmbientSpace = EUCLIDEAN
) -> PointGeometry:
    """Pointwise geometric data at a single parameter point."""
    data = point_geometry_batch(chart, np.atleast_2d(np.asarray(u, float)), ambient)
    principal = data["principal"][0] if data["principal"] is not None else None
    return PointGeometry(
        u=data["u"][0],
        position=data["F"][0],
        g=SymTensor2(data["g"][0]),
        ginv=SymTensor2(data["ginv"][0]),
        A=VecValuedSym2(data["a_onb"][0]),
        normal_frame=data["normal"][0],
        tangent_frame=data["tangent"][0],
        coframe=data["coframe"][0],
        A_coord=data["a_coord"][0],
        principal=principal,
    )


def principal_curvatures(pg: PointGeometry) -> np.ndarray:
    """Principal curvatures (ascending) of a hypersurface point."""
    if pg.codim != 1:
        raise CodimensionError(
            f"principal curvatures need codimension one, got {pg.codim}"
        )
    return np.asarray(pg.principal)


def gauss_riemann_batch(a_onb: np.ndarray, c: float = 0.0) -> np.ndarray:
    """Intrinsic curvature from the Gauss equation, orthonormal components.

    ``rm_ijkl = c (d_ik d_jl - d_il d_jk) + <A_ik, A_jl> - <A_il, A_jk>``.
    """
    a_onb = np.asarray(a_onb, float)
    n = a_onb.shape[-3]
    rm = np.einsum("...ikq,...jlq->...ijkl", a_onb, a_onb) - np.einsum(
        "...ilq,...jkq->...ijkl", a_onb, a_onb
    )
    if c != 0.0:
        eye = np.eye(n)
        rm = rm + c * (
            np.einsum("ik,jl->ijkl", eye, eye) - np.einsum("il,jk->ijkl", eye, eye)
        )
    return rm


def gauss_riemann(pg: PointGeometry, ambient: AmbientSpace = EUCLIDEAN) -> AlgCurvTensor4:
    """Riemann tensor of the submanifold at one point (orthonormal frame)."""
    return AlgCurvTensor4(gauss_riemann_batch(pg.A.entries, ambient.c))


def ricci_onb_batch(rm_onb: np.ndarray) -> np.ndarray:
    """Ricci tensor from orthonormal curvature components."""
    return np.einsum("...ijil->...jl", rm_onb)


@dataclass(frozen=True)
class RicciCertificate:
    """Grid certificate for the Ricci lower bound and convexity.

    ``K`` satisfies ``Ric >= -(n-1) K`` at every sampled node; eigenvalues
    within ``clamp_tol`` of zero are treated as zero so that flat and
    nonnegatively curved catalog shapes certify ``K = 0``.
    """

    K: float
    ricci_min: float
    convex: bool | None
    nodes_checked: int
    clamp_tol: float


def ricci_bound_certificate(
    manifold, grid, ambient: AmbientSpace | None = None
) -> RicciCertificate:
    """Scan a grid for the minimum Ricci eigenvalue and a convexity flag.

    ``manifold`` is an immersed manifold (charts + ambient); ``grid`` is a
    quadrature grid over it.  The convexity flag (codimension one only)
    reports whether the shape operator is positive semidefinite everywhere
    sampled.
    """
    amb = ambient if ambient is not None else getattr(manifold, "ambient", EUCLIDEAN)
    ric_min = np.inf
    shape_min = np.inf
    count = 0
    codim1 = None
    for chart, nodes, _ in grid.per_chart():
        data = point_geometry_batch(chart, nodes, amb)
        rm = gauss_riemann_batch(data["a_onb"], amb.c)
        ric = ricci_onb_batch(rm)
        ric_min = min(ric_min, float(np.linalg.eigvalsh(ric).min()))
        if data["principal"] is not None:
            codim1 = True
            shape_min = min(shape_min, float(data["principal"].min()))
        else:
            codim1 = False
        count += nodes.shape[0]

    n = manifold.n
    scale = max(abs(ric_min), 1.0)
    clamp_tol = 1e-10 * scale
    K = 0.0 if ric_min >= -clamp_tol else -ric_min / (n - 1)
    convex = None
    if codim1:
        convex = bool(shape_min >= -1e-10 * max(abs(shape_min), 1.0))
    return RicciCertificate(
        K=K, ricci_min=ric_min, convex=convex, nodes_checked=count, clamp_tol=clamp_tol
    )


def fd_jacobian_hessian(chart: ImmersionChart, u, h: float = 1e-5):
    """Finite-difference Jacobian and Hessian of the immersion map.

    Test harness only: central differences of the position closure, used to
    cross-check the analytic derivative closures.
    """
    u = np.atleast_2d(np.asarray(u, float))
    batch, n = u.shape

    def pos(x):
        F, _, _ = chart.eval(x)
        return np.asarray(F, float)

    m = pos(u).shape[1]
    J = np.zeros((batch, m, n))
    H = np.zeros((batch, m, n, n))
    for a in range(n):
        up, um = u.copy(), u.copy()
        up[:, a] += h
        um[:, a] -= h
        J[:, :, a] = (pos(up) - pos(um)) / (2 * h)
        H[:, :, a, a] = (pos(up) - 2 * pos(u) + pos(um)) / h**2
    for a in range(n):
        for b in range(a + 1, n):
            upp, upm, ump, umm = u.copy(), u.copy(), u.copy(), u.copy()
            upp[:, a] += h; upp[:, b] += h
            upm[:, a] += h; upm[:, b] -= h
            ump[:, a] -= h; ump[:, b] += h
            umm[:, a] -= h; umm[:, b] -= h
            mixed = (pos(upp) - pos(upm) - pos(ump) + pos(umm)) / (4 * h**2)
            H[:, :, a, b] = mixed
            H[:, :, b, a] = mixed
    return J, H
