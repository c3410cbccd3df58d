"""Built-in analytic manifolds and the JSON catalog manifests.

Closed n-spheres are covered by two stereographic charts glued with a smooth
partition of unity; ellipsoids and perturbed spheres reuse the sphere atlas
through exact compositions.  Flat tori and product manifolds use periodic
charts.  Every chart supplies exact derivative closures (no numerical
differentiation anywhere in the evaluation path).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np

from .domains import Box
from .errors import ArgumentError
from .extrinsic_geometry import AmbientSpace, EUCLIDEAN, ImmersionChart
from .intrinsic_geometry import (
    ConformalFamily,
    MetricChart,
    ScalarChartFunction,
    conformal_metric,
    conformally_flat_chart,
    constant_metric_chart,
    product_metric_chart,
)

__all__ = [
    "ImmersedManifold",
    "MetricManifold",
    "get_manifold",
    "list_catalog",
    "lambda_registry",
    "make_immersed_sphere",
    "make_ellipsoid",
    "make_product_torus",
    "make_quartic_sphere",
    "make_geodesic_sphere_s4",
    "make_round_sphere_metric",
    "make_flat_torus",
    "make_s2xs1",
    "make_s2xs2",
    "make_conformal_sphere",
    "sphere_coordinate_function",
    "function_product",
]

# Atlas transition parameters per intrinsic dimension: (steepness, box cut).
# The two chart weights blend over |u|/rho in [1/cut, cut]; steeper profiles
# favour high per-axis resolutions (n = 2, 3 defaults run 96/48 nodes), the
# gentler n = 4 profile keeps the 24-node default stable to 1e-6 on areas.
_ATLAS_PROFILE = {2: (2.0, 1.6), 3: (2.0, 1.6), 4: (1.0, 1.8)}
_ATLAS_DEFAULT_PROFILE = (1.0, 1.8)


def _atlas_profile(n: int) -> tuple:
    return _ATLAS_PROFILE.get(n, _ATLAS_DEFAULT_PROFILE)


@dataclass(frozen=True)
class ImmersedManifold:
    """A closed submanifold given by an atlas of immersion charts."""

    name: str
    n: int
    m: int
    charts: tuple
    ambient: AmbientSpace = EUCLIDEAN
    ground_truth: dict = field(default_factory=dict)
    lambda_key: str | None = None

    kind = "immersed"

    @property
    def codim(self) -> int:
        extra = 1 if self.ambient.kind == "sphere" else 0
        return self.m - self.n - extra


@dataclass(frozen=True)
class MetricManifold:
    """A closed manifold given by an atlas of metric charts."""

    name: str
    n: int
    charts: tuple
    ground_truth: dict = field(default_factory=dict)
    lambda_key: str | None = None
    functions: dict = field(default_factory=dict)

    kind = "metric"


# ---------------------------------------------------------------------------
# smooth partition of unity for two-chart sphere atlases


def _smooth_step(x: np.ndarray, c: float) -> np.ndarray:
    """C-infinity step: 0 for x <= 0, 1 for x >= 1, s(x) + s(1-x) = 1."""
    x = np.asarray(x, float)
    with np.errstate(divide="ignore", over="ignore", under="ignore"):
        a = np.where(x > 0.0, np.exp(-c / np.clip(x, 1e-300, None)), 0.0)
        b = np.where(x < 1.0, np.exp(-c / np.clip(1.0 - x, 1e-300, None)), 0.0)
    return a / (a + b)


def _stereo_weight(rho: float, n: int):
    """Partition-of-unity weight for one stereographic chart.

    The transition argument is the sphere height ``z = (|u|^2 - rho^2) /
    (|u|^2 + rho^2)`` (rational in u); the antipodal chart inverts ``|u| /
    rho`` and so negates z, which makes the two weights sum to exactly 1 on
    the overlap.  The weight is 1 below ``|u| = rho/cut`` and 0 above
    ``|u| = rho*cut``.
    """
    c, cut = _atlas_profile(n)
    z0 = (cut**2 - 1.0) / (cut**2 + 1.0)

    def weight(u):
        u = np.atleast_2d(np.asarray(u, float))
        r2 = np.sum(u**2, axis=1)
        z = (r2 - rho**2) / (r2 + rho**2)
        out = np.zeros(z.shape[0])
        out[z <= -z0] = 1.0
        mid = np.abs(z) < z0
        if np.any(mid):
            out[mid] = 1.0 - _smooth_step((z[mid] / z0 + 1.0) / 2.0, c)
        return out

    return weight


# ---------------------------------------------------------------------------
# stereographic sphere maps


def _stereo_map(rho: float, n: int, sheet: int):
    """Inverse stereographic immersion of one sheet of the n-sphere.

    Sheet 0 projects from the north pole (u = 0 maps to the south pole),
    sheet 1 from the south pole; the transition map is u -> rho^2 u / |u|^2.
    Returns a closure ``u -> (F, J, H)`` into R^(n+1).
    """
    sign = -1.0 if sheet == 0 else 1.0  # sign of the last ambient coordinate at u=0... see below

    def eval_map(u):
        u = np.atleast_2d(np.asarray(u, float))
        batch = u.shape[0]
        s = rho**2 + np.sum(u**2, axis=1)
        m = n + 1
        F = np.zeros((batch, m))
        J = np.zeros((batch, m, n))
        H = np.zeros((batch, m, n, n))
        eye = np.eye(n)

        F[:, :n] = 2 * rho**2 * u / s[:, None]
        # last coordinate: sheet 0 gives rho (|u|^2 - rho^2) / s = rho - 2 rho^3 / s
        F[:, n] = sign * (2 * rho**3 / s - rho)

        J[:, :n, :] = 2 * rho**2 * (
            eye[None] / s[:, None, None]
            - 2 * u[:, :, None] * u[:, None, :] / s[:, None, None] ** 2
        )
        J[:, n, :] = sign * (-4 * rho**3) * u / s[:, None] ** 2

        H[:, :n] = 2 * rho**2 * (
            -2
            * (
                eye[None, :, :, None] * u[:, None, None, :]
                + eye[None, :, None, :] * u[:, None, :, None]
                + eye[None, None, :, :] * u[:, :, None, None]
            )
            / s[:, None, None, None] ** 2
            + 8
            * u[:, :, None, None]
            * u[:, None, :, None]
            * u[:, None, None, :]
            / s[:, None, None, None] ** 3
        )
        H[:, n] = sign * (-4 * rho**3) * (
            eye[None] / s[:, None, None] ** 2
            - 4 * u[:, :, None] * u[:, None, :] / s[:, None, None] ** 3
        )
        return F, J, H

    return eval_map


def _sphere_box(rho: float, n: int) -> Box:
    half = rho * _atlas_profile(n)[1]
    return Box(lo=(-half,) * n, hi=(half,) * n, periodic=(False,) * n)


def _outward_from_origin(F, nu):
    dots = np.einsum("nm,nm->n", F, nu)
    return np.where(dots >= 0.0, 1.0, -1.0)


def sphere_coordinate_function(rho: float, n: int, sheet: int, alpha: int) -> ScalarChartFunction:
    """Restriction of the ambient coordinate ``x_alpha`` to one sphere chart."""
    base = _stereo_map(rho, n, sheet)

    def value(u):
        F, _, _ = base(u)
        return F[:, alpha]

    def grad(u):
        _, J, _ = base(u)
        return J[:, alpha, :]

    def hess(u):
        _, _, H = base(u)
        return H[:, alpha, :, :]

    return ScalarChartFunction(value=value, grad=grad, hess=hess)


def function_product(f: ScalarChartFunction, g: ScalarChartFunction) -> ScalarChartFunction:
    """Pointwise product with product-rule derivative closures."""

    def value(u):
        return np.asarray(f.value(u), float) * np.asarray(g.value(u), float)

    def grad(u):
        fv = np.asarray(f.value(u), float)
        gv = np.asarray(g.value(u), float)
        return fv[:, None] * np.asarray(g.grad(u), float) + gv[:, None] * np.asarray(
            f.grad(u), float
        )

    def hess(u):
        fv = np.asarray(f.value(u), float)
        gv = np.asarray(g.value(u), float)
        fg = np.asarray(f.grad(u), float)
        gg = np.asarray(g.grad(u), float)
        return (
            fv[:, None, None] * np.asarray(g.hess(u), float)
            + gv[:, None, None] * np.asarray(f.hess(u), float)
            + fg[:, :, None] * gg[:, None, :]
            + gg[:, :, None] * fg[:, None, :]
        )

    return ScalarChartFunction(value=value, grad=grad, hess=hess)


# ---------------------------------------------------------------------------
# immersed shapes


def make_immersed_sphere(n: int, rho: float = 1.0, name: str | None = None) -> ImmersedManifold:
    """Round n-sphere of radius rho in R^(n+1), two-chart atlas."""
    charts = []
    for sheet in (0, 1):
        charts.append(
            ImmersionChart(
                name=f"sphere{n}(r={rho})#{sheet}",
                n=n,
                m=n + 1,
                domain=_sphere_box(rho, n),
                eval=_stereo_map(rho, n, sheet),
                atlas_weight=_stereo_weight(rho, n),
                orient=_outward_from_origin,
            )
        )
    return ImmersedManifold(
        name=name or f"sphere{n}",
        n=n,
        m=n + 1,
        charts=tuple(charts),
        ground_truth={
            "umbilic": True,
            "einstein": True,
            "lcf": True,
            "constant_curvature": True,
        },
        lambda_key=f"round_s{n}" if rho == 1.0 else None,
    )


def _compose_linear(base_eval, matrix: np.ndarray):
    matrix = np.asarray(matrix, float)

    def eval_map(u):
        F, J, H = base_eval(u)
        return (
            np.einsum("am,nm->na", matrix, F),
            np.einsum("am,nmi->nai", matrix, J),
            np.einsum("am,nmij->naij", matrix, H),
        )

    return eval_map


def make_ellipsoid(semi_axes, name: str | None = None) -> ImmersedManifold:
    """Ellipsoid with the given semi-axes, as a linearly stretched sphere atlas."""
    axes = np.asarray(semi_axes, float)
    m = axes.shape[0]
    n = m - 1
    if np.any(axes <= 0):
        raise ArgumentError("ellipsoid semi-axes must be positive")
    D = np.diag(axes)
    charts = []
    for sheet in (0, 1):
        charts.append(
            ImmersionChart(
                name=f"ellipsoid{tuple(axes)}#{sheet}",
                n=n,
                m=m,
                domain=_sphere_box(1.0, n),
                eval=_compose_linear(_stereo_map(1.0, n, sheet), D),
                atlas_weight=_stereo_weight(1.0, n),
                orient=_outward_from_origin,
            )
        )
    return ImmersedManifold(
        name=name or f"ellipsoid{n}",
        n=n,
        m=m,
        charts=tuple(charts),
        ground_truth={
            "umbilic": bool(np.allclose(axes, axes[0])),
            "constant_curvature": bool(np.allclose(axes, axes[0])),
        },
    )


def make_quartic_sphere(
    n: int = 3, eps: float = 0.03, seed: int = 7, name: str | None = None
) -> ImmersedManifold:
    """Convex radial graph over the unit n-sphere with a random quartic bump.

    The radius factor is ``1 + eps * sum_j c_j (v_j . x)^4`` with seeded unit
    vectors ``v_j``; for small eps the shape stays convex (checked by the
    certificate, not assumed).
    """
    rng = np.random.default_rng(seed)
    m = n + 1
    vs = rng.standard_normal((3, m))
    vs /= np.linalg.norm(vs, axis=1)[:, None]
    cs = rng.uniform(0.5, 1.0, size=3)

    def radial(x):
        # x: (N, m) unit vectors; returns value (N,), ambient grad, ambient hess
        proj = x @ vs.T
        val = 1.0 + eps * np.sum(cs * proj**4, axis=1)
        grad = 4.0 * eps * np.einsum("j,nj,jm->nm", cs, proj**3, vs)
        hess = 12.0 * eps * np.einsum("j,nj,jm,jp->nmp", cs, proj**2, vs, vs)
        return val, grad, hess

    def make_eval(sheet):
        base = _stereo_map(1.0, n, sheet)

        def eval_map(u):
            x, Jx, Hx = base(u)
            val, gr, he = radial(x)
            # F = val(x(u)) * x(u); chain rule through the unit-sphere chart
            dval = np.einsum("nm,nmi->ni", gr, Jx)
            d2val = np.einsum("nmp,nmi,npj->nij", he, Jx, Jx) + np.einsum(
                "nm,nmij->nij", gr, Hx
            )
            F = val[:, None] * x
            J = dval[:, None, :] * x[:, :, None] + val[:, None, None] * Jx
            H = (
                d2val[:, None, :, :] * x[:, :, None, None]
                + dval[:, None, None, :] * Jx[:, :, :, None]
                + dval[:, None, :, None] * Jx[:, :, None, :]
                + val[:, None, None, None] * Hx
            )
            return F, J, H

        return eval_map

    charts = []
    for sheet in (0, 1):
        charts.append(
            ImmersionChart(
                name=f"quartic_sphere{n}#{sheet}",
                n=n,
                m=m,
                domain=_sphere_box(1.0, n),
                eval=make_eval(sheet),
                atlas_weight=_stereo_weight(1.0, n),
                orient=_outward_from_origin,
            )
        )
    return ImmersedManifold(
        name=name or f"quartic_sphere{n}",
        n=n,
        m=m,
        charts=tuple(charts),
        ground_truth={"umbilic": False},
    )


def make_product_torus(a: float = 1.0, b: float = 2.0, name: str | None = None) -> ImmersedManifold:
    """Flat product torus S^1(a) x S^1(b) in R^4, single periodic chart."""

    def eval_map(u):
        u = np.atleast_2d(np.asarray(u, float))
        th, ph = u[:, 0], u[:, 1]
        batch = u.shape[0]
        F = np.stack([a * np.cos(th), a * np.sin(th), b * np.cos(ph), b * np.sin(ph)], axis=1)
        J = np.zeros((batch, 4, 2))
        J[:, 0, 0] = -a * np.sin(th)
        J[:, 1, 0] = a * np.cos(th)
        J[:, 2, 1] = -b * np.sin(ph)
        J[:, 3, 1] = b * np.cos(ph)
        H = np.zeros((batch, 4, 2, 2))
        H[:, 0, 0, 0] = -a * np.cos(th)
        H[:, 1, 0, 0] = -a * np.sin(th)
        H[:, 2, 1, 1] = -b * np.cos(ph)
        H[:, 3, 1, 1] = -b * np.sin(ph)
        return F, J, H

    def frame(u):
        u = np.atleast_2d(np.asarray(u, float))
        th, ph = u[:, 0], u[:, 1]
        batch = u.shape[0]
        nu = np.zeros((batch, 4, 2))
        nu[:, 0, 0] = -np.cos(th)
        nu[:, 1, 0] = -np.sin(th)
        nu[:, 2, 1] = -np.cos(ph)
        nu[:, 3, 1] = -np.sin(ph)
        return nu

    chart = ImmersionChart(
        name=f"product_torus({a},{b})",
        n=2,
        m=4,
        domain=Box(lo=(0.0, 0.0), hi=(2 * np.pi, 2 * np.pi), periodic=(True, True)),
        eval=eval_map,
        normal_frame=frame,
    )
    return ImmersedManifold(
        name=name or "product_torus",
        n=2,
        m=4,
        charts=(chart,),
        ground_truth={"umbilic": False, "flat": True},
        lambda_key=f"torus_{a}_{b}",
    )


def make_geodesic_sphere_s4(theta0: float = np.pi / 3, name: str | None = None) -> ImmersedManifold:
    """Geodesic 3-sphere at colatitude theta0 inside the unit S^4 in R^5.

    Totally umbilic in the spherical ambient with principal curvatures
    cot(theta0); the radial direction of the ambient sphere is excluded from
    its normal space automatically.
    """
    st, ct = np.sin(theta0), np.cos(theta0)

    def make_eval(sheet):
        base = _stereo_map(1.0, 3, sheet)

        def eval_map(u):
            x, Jx, Hx = base(u)
            batch = x.shape[0]
            F = np.concatenate([st * x, np.full((batch, 1), ct)], axis=1)
            J = np.concatenate([st * Jx, np.zeros((batch, 1, 3))], axis=1)
            H = np.concatenate([st * Hx, np.zeros((batch, 1, 3, 3))], axis=1)
            return F, J, H

        return eval_map

    def orient(F, nu):
        # normal within T(S^4); pick the sign with negative last component so
        # the principal curvatures come out +cot(theta0)
        return np.where(nu[:, -1] <= 0.0, 1.0, -1.0)

    charts = []
    for sheet in (0, 1):
        charts.append(
            ImmersionChart(
                name=f"geodesic_sphere_s4#{sheet}",
                n=3,
                m=5,
                domain=_sphere_box(1.0, 3),
                eval=make_eval(sheet),
                atlas_weight=_stereo_weight(1.0, 3),
                orient=orient,
            )
        )
    return ImmersedManifold(
        name=name or "geodesic_sphere_s4",
        n=3,
        m=5,
        charts=tuple(charts),
        ambient=AmbientSpace("sphere", 1.0),
        ground_truth={"umbilic": True, "constant_curvature": True},
    )


# ---------------------------------------------------------------------------
# metric manifolds


def _stereo_psi(rho: float) -> ScalarChartFunction:
    """Conformal factor of the stereographic round metric, 4 rho^4 / (rho^2+|u|^2)^2."""

    def value(u):
        u = np.atleast_2d(np.asarray(u, float))
        s = rho**2 + np.sum(u**2, axis=1)
        return 4 * rho**4 / s**2

    def grad(u):
        u = np.atleast_2d(np.asarray(u, float))
        s = rho**2 + np.sum(u**2, axis=1)
        return -16 * rho**4 * u / s[:, None] ** 3

    def hess(u):
        u = np.atleast_2d(np.asarray(u, float))
        s = rho**2 + np.sum(u**2, axis=1)
        eye = np.eye(u.shape[1])
        return -16 * rho**4 * (
            eye[None] / s[:, None, None] ** 3
            - 6 * u[:, :, None] * u[:, None, :] / s[:, None, None] ** 4
        )

    return ScalarChartFunction(value=value, grad=grad, hess=hess)


def _round_sphere_charts(n: int, rho: float) -> tuple:
    psi = _stereo_psi(rho)
    weight = _stereo_weight(rho, n)
    charts = []
    for sheet in (0, 1):
        charts.append(
            conformally_flat_chart(
                name=f"round_s{n}#{sheet}",
                n=n,
                domain=_sphere_box(rho, n),
                psi=psi,
                atlas_weight=weight,
            )
        )
    return tuple(charts)


def _sphere_function_table(n: int, rho: float) -> dict:
    """Per-chart coordinate restrictions: 'x0'..'xn' plus 'height' = x_n."""
    table = {}
    for alpha in range(n + 1):
        table[f"x{alpha}"] = tuple(
            sphere_coordinate_function(rho, n, sheet, alpha) for sheet in (0, 1)
        )
    table["height"] = table[f"x{n}"]
    return table


def make_round_sphere_metric(n: int, rho: float = 1.0, name: str | None = None) -> MetricManifold:
    """Round n-sphere as an intrinsic two-chart metric manifold."""
    return MetricManifold(
        name=name or f"round_s{n}",
        n=n,
        charts=_round_sphere_charts(n, rho),
        ground_truth={"einstein": True, "lcf": True, "constant_curvature": True},
        lambda_key=f"round_s{n}" if rho == 1.0 else None,
        functions=_sphere_function_table(n, rho),
    )


def make_flat_torus(radii, name: str | None = None) -> MetricManifold:
    """Flat torus with circle radii ``radii`` (periodic box, constant metric)."""
    radii = np.asarray(radii, float)
    n = radii.shape[0]
    chart = constant_metric_chart(
        name=f"flat_torus{tuple(radii)}",
        diag=radii**2,
        domain=Box(lo=(0.0,) * n, hi=(2 * np.pi,) * n, periodic=(True,) * n),
    )
    return MetricManifold(
        name=name or f"flat_torus{n}",
        n=n,
        charts=(chart,),
        ground_truth={"einstein": True, "lcf": True, "constant_curvature": True, "flat": True},
        lambda_key="torus_" + "_".join(str(r) for r in radii),
    )


def _circle_chart(radius: float) -> MetricChart:
    return constant_metric_chart(
        name=f"circle(r={radius})",
        diag=np.array([radius**2]),
        domain=Box(lo=(0.0,), hi=(2 * np.pi,), periodic=(True,)),
    )


def make_s2xs1(s1_radius: float = 1.0, name: str | None = None) -> MetricManifold:
    """Product metric on S^2(1) x S^1(a): constant scalar curvature, Ric >= 0,
    not Einstein."""
    s2 = _round_sphere_charts(2, 1.0)
    s1 = _circle_chart(s1_radius)
    charts = tuple(product_metric_chart(c, s1, name=f"{c.name}xS1") for c in s2)
    return MetricManifold(
        name=name or "s2xs1",
        n=3,
        charts=charts,
        ground_truth={"einstein": False, "constant_curvature": False},
        lambda_key=f"s2xs1_{s1_radius}",
    )


def make_s2xs2(name: str | None = None) -> MetricManifold:
    """S^2(1) x S^2(1): Einstein, not locally conformally flat."""
    a = _round_sphere_charts(2, 1.0)
    b = _round_sphere_charts(2, 1.0)
    charts = tuple(
        product_metric_chart(ca, cb, name=f"s2xs2#{i}{j}")
        for i, ca in enumerate(a)
        for j, cb in enumerate(b)
    )
    return MetricManifold(
        name=name or "s2xs2",
        n=4,
        charts=charts,
        ground_truth={"einstein": True, "lcf": False, "constant_curvature": False},
        lambda_key="s2xs2",
    )


def make_conformal_sphere(
    n: int = 4, f_name: str = "height", t: float = 0.05, name: str | None = None
) -> MetricManifold:
    """Conformally perturbed round sphere ``(1 + t f) g0`` (f a coordinate
    restriction); locally conformally flat for every admissible t."""
    base = make_round_sphere_metric(n, 1.0)
    fns = base.functions[f_name]
    charts = tuple(
        conformal_metric(ConformalFamily(base=chart, f=fn, t=t))
        for chart, fn in zip(base.charts, fns)
    )
    return MetricManifold(
        name=name or f"conformal_s{n}_{f_name}_t{t}",
        n=n,
        charts=charts,
        ground_truth={"lcf": True, "einstein": t == 0.0, "constant_curvature": t == 0.0},
        functions=base.functions,
    )


# ---------------------------------------------------------------------------
# manifest-driven access


_BUILDERS = {
    "sphere": lambda p, name: make_immersed_sphere(
        int(p["n"]), float(p.get("rho", 1.0)), name=name
    ),
    "ellipsoid": lambda p, name: make_ellipsoid(p["semi_axes"], name=name),
    "quartic_sphere": lambda p, name: make_quartic_sphere(
        int(p.get("n", 3)), float(p.get("eps", 0.03)), int(p.get("seed", 7)), name=name
    ),
    "product_torus": lambda p, name: make_product_torus(
        float(p.get("a", 1.0)), float(p.get("b", 2.0)), name=name
    ),
    "geodesic_sphere_s4": lambda p, name: make_geodesic_sphere_s4(
        float(p.get("theta0", np.pi / 3)), name=name
    ),
    "round_sphere_metric": lambda p, name: make_round_sphere_metric(
        int(p["n"]), float(p.get("rho", 1.0)), name=name
    ),
    "flat_torus": lambda p, name: make_flat_torus(p["radii"], name=name),
    "s2xs1": lambda p, name: make_s2xs1(float(p.get("s1_radius", 1.0)), name=name),
    "s2xs2": lambda p, name: make_s2xs2(name=name),
    "conformal_sphere": lambda p, name: make_conformal_sphere(
        int(p.get("n", 4)), p.get("f", "height"), float(p.get("t", 0.05)), name=name
    ),
}


def _load_json(filename: str):
    with resources.files("almost_schur.data").joinpath(filename).open() as fh:
        return json.load(fh)


@lru_cache(maxsize=1)
def _manifest() -> dict:
    entries = {}
    for e in _load_json("shape_catalog.json")["entries"]:
        entries[e["name"]] = e
    for e in _load_json("metric_catalog.json")["entries"]:
        entries[e["name"]] = e
    return entries


def list_catalog() -> list:
    """All catalog entries as dicts (name, n, m, ambient, class, builder)."""
    return sorted(_manifest().values(), key=lambda e: e["name"])


def get_manifold(name: str):
    """Resolve a catalog name to a built manifold."""
    entry = _manifest().get(name)
    if entry is None:
        known = ", ".join(sorted(_manifest()))
        raise ArgumentError(f"unknown catalog entry {name!r}; known: {known}")
    builder = _BUILDERS[entry["builder"]]
    return builder(entry.get("parameters", {}), name)


@lru_cache(maxsize=1)
def lambda_registry() -> dict:
    """Analytic first-eigenvalue registry keyed by manifold lambda_key."""
    return _load_json("lambda_registry.json")
