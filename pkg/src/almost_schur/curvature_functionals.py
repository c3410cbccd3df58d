"""Higher mean curvatures, Newton transformations and Lovelock tensors.

Two independent evaluation routes are provided everywhere:

- the defining contraction against generalized Kronecker deltas, organised as
  a sum over (subset, permutation) pairs so the cost is C(n, p) * p!^2
  instead of n^(2p);
- for hypersurfaces, elementary-symmetric-polynomial fast paths (a stable
  coefficient recurrence for sigma_r, a matrix recursion for the Newton
  transformation).

All contractions expect components in an orthonormal tangent frame, with the
second fundamental form as an ``(..., n, n, codim)`` array of normal-frame
coefficients and curvature as an ``(..., n, n, n, n)`` array.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from math import comb, factorial

import numpy as np

from .errors import ArgumentError
from .tensor_algebra import _perm_sign_inversions

__all__ = [
    "NewtonTensor",
    "LovelockData",
    "mean_curvature",
    "mean_curvature_hypersurface",
    "elementary_symmetric",
    "newton_transform",
    "newton_from_shape",
    "mean_curvatures_from_shape",
    "traceless_newton",
    "traceless_part",
    "lovelock",
    "lovelock_batch",
    "newton_field",
    "einstein_field",
    "einstein_newton_bridge",
    "normal_to_ambient",
]


# ---------------------------------------------------------------------------
# term lists for the generalized-Kronecker contractions


def _signed_orderings(universe: tuple) -> tuple:
    """All orderings of ``universe`` with their sign relative to sorted order."""
    perms = list(permutations(universe))
    base = {v: i for i, v in enumerate(sorted(universe))}
    signs = np.array(
        [_perm_sign_inversions([base[v] for v in p]) for p in perms], dtype=np.int8
    )
    return np.array(perms, dtype=np.intp), signs


@lru_cache(maxsize=None)
def _pair_terms(n: int, r: int):
    """Terms of the epsilon contraction with r paired indices.

    Returns ``(sign, iidx, jidx)`` with shapes (T,), (T, r), (T, r): the
    nonzero values of eps^{i1..ir}_{j1..jr} enumerated as (subset, ordering,
    ordering) triples.
    """
    signs, iidx, jidx = [], [], []
    for universe in combinations(range(n), r):
        perms, psigns = _signed_orderings(universe)
        p_count = perms.shape[0]
        rep_i = np.repeat(np.arange(p_count), p_count)
        rep_j = np.tile(np.arange(p_count), p_count)
        signs.append(psigns[rep_i] * psigns[rep_j])
        iidx.append(perms[rep_i])
        jidx.append(perms[rep_j])
    return (
        np.concatenate(signs).astype(float),
        np.concatenate(iidx),
        np.concatenate(jidx),
    )


@lru_cache(maxsize=None)
def _free_pair_terms(n: int, r: int):
    """Terms of eps^{i i1..ir}_{j j1..jr} grouped by the free pair (i, j).

    Returns ``(ifree, jfree, sign, iidx, jidx)`` with the free indices as
    (T,) arrays; only nonzero terms are listed (the tuples (i, i1..ir) and
    (j, j1..jr) range over the same (r+1)-subset).
    """
    ifree, jfree, signs, iidx, jidx = [], [], [], [], []
    for universe in combinations(range(n), r + 1):
        uni = set(universe)
        oriented = {}
        for x in universe:
            rest = tuple(sorted(uni - {x}))
            perms, psigns = _signed_orderings(rest)
            base = {v: i for i, v in enumerate(sorted(universe))}
            head = np.array(
                [
                    _perm_sign_inversions([base[v] for v in (x,) + tuple(p)])
                    for p in perms
                ],
                dtype=np.int8,
            )
            oriented[x] = (perms, head)
        for i in universe:
            pi, si = oriented[i]
            for j in universe:
                pj, sj = oriented[j]
                p_count = pi.shape[0]
                rep_i = np.repeat(np.arange(p_count), p_count)
                rep_j = np.tile(np.arange(p_count), p_count)
                t_count = rep_i.shape[0]
                ifree.append(np.full(t_count, i, dtype=np.intp))
                jfree.append(np.full(t_count, j, dtype=np.intp))
                signs.append(si[rep_i] * sj[rep_j])
                iidx.append(pi[rep_i])
                jidx.append(pj[rep_j])
    return (
        np.concatenate(ifree),
        np.concatenate(jfree),
        np.concatenate(signs).astype(float),
        np.concatenate(iidx),
        np.concatenate(jidx),
    )


_TERM_CHUNK = 1 << 15


def _pair_products(a_onb, sign, iidx, jidx, r, pair_count, extra_vector):
    """Evaluate sum_t sign_t * prod_s <A_{i j}, A_{i j}> (optionally times a
    trailing vector factor) for a batch of second fundamental forms."""
    batch = a_onb.shape[0]
    q = a_onb.shape[-1]
    out = (
        np.zeros(batch)
        if not extra_vector
        else np.zeros((batch, q))
    )
    t_total = sign.shape[0]
    for start in range(0, t_total, _TERM_CHUNK):
        sl = slice(start, min(start + _TERM_CHUNK, t_total))
        s = sign[sl]
        ii = iidx[sl]
        jj = jidx[sl]
        prod = np.broadcast_to(s, (batch, s.shape[0])).copy()
        for p in range(pair_count):
            a1 = a_onb[:, ii[:, 2 * p], jj[:, 2 * p], :]
            a2 = a_onb[:, ii[:, 2 * p + 1], jj[:, 2 * p + 1], :]
            prod *= np.einsum("btq,btq->bt", a1, a2)
        if extra_vector:
            last = a_onb[:, ii[:, r - 1], jj[:, r - 1], :]
            out += np.einsum("bt,btq->bq", prod, last)
        else:
            out += prod.sum(axis=1)
    return out


def mean_curvature(a_onb, r: int):
    """r-th mean curvature from the vector-valued second fundamental form.

    ``a_onb`` has shape ``(n, n, codim)`` or batched ``(N, n, n, codim)``;
    returns a scalar (array) for even r and a normal-frame vector (array) for
    odd r.  Frame invariant.
    """
    a_onb = np.asarray(a_onb, float)
    single = a_onb.ndim == 3
    if single:
        a_onb = a_onb[None]
    n = a_onb.shape[1]
    if not 1 <= r <= n:
        raise ArgumentError(f"mean curvature order r={r} outside [1, {n}]")
    sign, iidx, jidx = _pair_terms(n, r)
    out = _pair_products(
        a_onb, sign, iidx, jidx, r, pair_count=r // 2, extra_vector=bool(r % 2)
    )
    out = out / factorial(r)
    return out[0] if single else out


def newton_transform(a_onb, r: int):
    """r-th Newton transformation by the defining contraction.

    Returns ``(n, n)`` for even r, ``(n, n, codim)`` for odd r (normal-frame
    values); batched input adds a leading axis.  ``r = n`` returns the zero
    tensor (the contraction has no room for n+1 distinct indices).
    """
    a_onb = np.asarray(a_onb, float)
    single = a_onb.ndim == 3
    if single:
        a_onb = a_onb[None]
    batch, n = a_onb.shape[0], a_onb.shape[1]
    q = a_onb.shape[-1]
    if not 1 <= r <= n:
        raise ArgumentError(f"Newton transformation order r={r} outside [1, {n}]")
    odd = bool(r % 2)
    out = np.zeros((batch, n, n, q)) if odd else np.zeros((batch, n, n))
    if r < n:
        ifree, jfree, sign, iidx, jidx = _free_pair_terms(n, r)
        for i in range(n):
            for j in range(n):
                mask = (ifree == i) & (jfree == j)
                if not mask.any():
                    continue
                contrib = _pair_products(
                    a_onb,
                    sign[mask],
                    iidx[mask],
                    jidx[mask],
                    r,
                    pair_count=r // 2,
                    extra_vector=odd,
                )
                # free upper index i is the row, free lower index j the column
                out[:, i, j] = contrib
    out = out / factorial(r)
    return out[0] if single else out


# ---------------------------------------------------------------------------
# hypersurface fast paths


def elementary_symmetric(k) -> np.ndarray:
    """All elementary symmetric polynomials of the rows of ``k``.

    ``k`` is (..., n); returns (..., n+1) with ``e[..., r] = sigma_r``,
    computed by the stable incremental coefficient recurrence.
    """
    k = np.asarray(k, float)
    single = k.ndim == 1
    if single:
        k = k[None]
    batch, n = k.shape
    e = np.zeros((batch, n + 1))
    e[:, 0] = 1.0
    for j in range(n):
        e[:, 1:] = e[:, 1:] + k[:, j : j + 1] * e[:, :-1]
    return e[0] if single else e


def mean_curvature_hypersurface(k, r: int):
    """sigma_r of the principal curvatures (codimension-one fast path)."""
    k = np.asarray(k, float)
    n = k.shape[-1]
    if not 1 <= r <= n:
        raise ArgumentError(f"order r={r} outside [1, {n}]")
    e = elementary_symmetric(k)
    return e[..., r]


def mean_curvatures_from_shape(shape_op) -> np.ndarray:
    """sigma_1..sigma_n of a (batched) shape operator via Newton's identities.

    Avoids an eigendecomposition: power sums ``p_s = tr(S^s)`` feed the
    recurrence ``e_r = (1/r) sum_{s=1}^r (-1)^(s-1) e_{r-s} p_s``.
    """
    s = np.asarray(shape_op, float)
    single = s.ndim == 2
    if single:
        s = s[None]
    batch, n = s.shape[0], s.shape[1]
    power = np.broadcast_to(np.eye(n), s.shape).copy()
    p = np.zeros((batch, n + 1))
    for j in range(1, n + 1):
        power = power @ s
        p[:, j] = np.trace(power, axis1=1, axis2=2)
    e = np.zeros((batch, n + 1))
    e[:, 0] = 1.0
    for r in range(1, n + 1):
        acc = np.zeros(batch)
        for j in range(1, r + 1):
            acc += (-1.0) ** (j - 1) * e[:, r - j] * p[:, j]
        e[:, r] = acc / r
    return e[0] if single else e


def newton_from_shape(shape_op, r: int) -> np.ndarray:
    """Newton transformation of a scalar shape operator (codimension one).

    Matrix recursion ``T^0 = I``, ``T^s = sigma_s I - S T^(s-1)``; on the
    eigenbasis of S this is ``T^r e_i = sigma_r(k with k_i omitted) e_i``.
    """
    s = np.asarray(shape_op, float)
    single = s.ndim == 2
    if single:
        s = s[None]
    n = s.shape[1]
    if not 1 <= r <= n:
        raise ArgumentError(f"order r={r} outside [1, {n}]")
    e = mean_curvatures_from_shape(s)
    t = np.broadcast_to(np.eye(n), s.shape).copy()
    for step in range(1, r + 1):
        t = e[:, step, None, None] * np.eye(n) - s @ t
    return t[0] if single else t


# ---------------------------------------------------------------------------
# typed wrappers and traceless parts


@dataclass(frozen=True)
class NewtonTensor:
    """A Newton transformation with its order, parity and mean curvature.

    ``entries`` is (n, n) for scalar values and (n, n, codim) for odd-order
    vector values; ``mean`` is the matching sigma_r (scalar or vector).  The
    trace identity ``tr T^r = (n - r) sigma_r`` is validated on construction.
    """

    r: int
    parity: str
    entries: np.ndarray
    mean: np.ndarray | float

    def __post_init__(self):
        entries = np.asarray(self.entries, float)
        object.__setattr__(self, "entries", entries)
        n = entries.shape[0]
        tr = np.trace(entries, axis1=0, axis2=1)
        expected = (n - self.r) * np.asarray(self.mean, float)
        scale = max(np.abs(entries).max(), np.abs(np.asarray(self.mean)).max(), 1e-30)
        if np.abs(tr - expected).max() > 1e-10 * scale * n:
            raise ArgumentError(
                f"Newton trace identity violated: tr={tr}, (n-r)*sigma_r={expected}"
            )

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def traceless_part(entries: np.ndarray) -> np.ndarray:
    """Traceless part of a (batched, possibly vector-valued) (1,1) tensor in
    an orthonormal frame: subtract (trace / n) times the identity."""
    t = np.asarray(entries, float)
    vector_valued = t.ndim >= 3 and t.shape[-3] == t.shape[-2]
    if vector_valued and t.ndim >= 3:
        n = t.shape[-3]
        tr = np.einsum("...iiq->...q", t)
        eye = np.eye(n)
        return t - np.einsum("ij,...q->...ijq", eye, tr) / n
    n = t.shape[-1]
    tr = np.einsum("...ii->...", t)
    return t - np.asarray(tr)[..., None, None] * np.eye(n) / n


def traceless_newton(t: NewtonTensor) -> NewtonTensor:
    """Traceless part of a Newton transformation (mean set to zero)."""
    zero = (
        np.zeros(t.entries.shape[-1])
        if t.entries.ndim == 3
        else 0.0
    )
    return NewtonTensor(
        r=t.r, parity=t.parity, entries=traceless_part(t.entries), mean=zero
    )


# ---------------------------------------------------------------------------
# Lovelock curvature and the generalized Einstein tensor


@dataclass(frozen=True)
class LovelockData:
    """Lovelock scalar and its divergence-free (1,1) companion at a point."""

    k: int
    Rk: float
    Ek: np.ndarray

    def __post_init__(self):
        ek = np.asarray(self.Ek, float)
        object.__setattr__(self, "Ek", ek)
        n = ek.shape[0]
        tr = float(np.trace(ek))
        expected = 0.5 * (n - 2 * self.k) * self.Rk
        scale = max(abs(self.Rk), np.abs(ek).max(), 1e-30)
        if abs(tr - expected) > 1e-10 * scale * n:
            raise ArgumentError(
                f"Lovelock trace identity violated: tr={tr}, (n-2k)/2*Rk={expected}"
            )


def _curv_pair_products(rm, sign, iidx, jidx, pair_count):
    batch = rm.shape[0]
    out = np.zeros(batch)
    t_total = sign.shape[0]
    for start in range(0, t_total, _TERM_CHUNK):
        sl = slice(start, min(start + _TERM_CHUNK, t_total))
        s = sign[sl]
        ii = iidx[sl]
        jj = jidx[sl]
        prod = np.broadcast_to(s, (batch, s.shape[0])).copy()
        for p in range(pair_count):
            prod *= rm[
                :,
                jj[:, 2 * p],
                jj[:, 2 * p + 1],
                ii[:, 2 * p],
                ii[:, 2 * p + 1],
            ]
        out += prod.sum(axis=1)
    return out


def lovelock_batch(rm_onb, k: int):
    """Lovelock scalar and generalized Einstein tensor, batched.

    ``rm_onb`` is ``(N, n, n, n, n)`` in an orthonormal frame.  Returns
    ``(Rk, Ek)`` of shapes ``(N,)`` and ``(N, n, n)``.  Requires 2k < n.
    """
    rm = np.asarray(rm_onb, float)
    n = rm.shape[-1]
    if not 1 <= k:
        raise ArgumentError(f"Lovelock order k={k} must be >= 1")
    if 2 * k >= n:
        raise ArgumentError(f"Lovelock order k={k} needs 2k < n (n={n})")
    batch = rm.shape[0]

    sign, iidx, jidx = _pair_terms(n, 2 * k)
    rk = _curv_pair_products(rm, sign, iidx, jidx, pair_count=k) / 2.0**k

    ifree, jfree, sign, iidx, jidx = _free_pair_terms(n, 2 * k)
    ek = np.zeros((batch, n, n))
    for i in range(n):
        for j in range(n):
            mask = (ifree == i) & (jfree == j)
            if not mask.any():
                continue
            ek[:, i, j] = _curv_pair_products(
                rm, sign[mask], iidx[mask], jidx[mask], pair_count=k
            )
    ek /= 2.0 ** (k + 1)
    return rk, ek


def lovelock(rm_onb, k: int) -> LovelockData:
    """Lovelock data at a single point (orthonormal-frame curvature input).

    ``Rk`` generalizes the scalar curvature (k = 1 reproduces it exactly) and
    ``Ek`` is its trace companion with ``tr Ek = (n - 2k)/2 * Rk``; for k = 1,
    ``Ek = (R/2) I - Ric`` (the divergence-free combination matching the
    defining contraction).
    """
    rm = np.asarray(getattr(rm_onb, "entries", rm_onb), float)
    rk, ek = lovelock_batch(rm[None], k)
    return LovelockData(k=k, Rk=float(rk[0]), Ek=ek[0])


def normal_to_ambient(values: np.ndarray, normal_frame: np.ndarray) -> np.ndarray:
    """Convert normal-frame coefficient arrays to ambient components.

    ``values[..., q]`` against ``normal_frame[..., m, q]`` gives
    ``out[..., m]``; used so vector-valued quantities can be averaged across
    charts whose frames differ.
    """
    return np.einsum("...q,...mq->...m", values, normal_frame)


def newton_field(chart, r: int, ambient=None, component: int | None = None):
    """Coordinate-frame Newton transformation field ``u -> (T^r)^i_j``.

    For hypersurfaces (codimension one, possibly within a sphere ambient)
    this is the shape-operator recursion applied to ``g^-1 a``.  Higher
    codimension requires the chart to carry an analytic (smooth) normal
    frame; even orders are scalar, odd orders need ``component`` to select
    the coefficient along one frame vector.  The returned callable feeds
    :func:`almost_schur.intrinsic_geometry.covariant_divergence`.
    """
    from .extrinsic_geometry import EUCLIDEAN, point_geometry_batch

    amb = ambient if ambient is not None else EUCLIDEAN

    def field(u):
        data = point_geometry_batch(chart, np.atleast_2d(u), amb)
        a_coord = data["a_coord"]
        if a_coord.shape[-1] == 1:
            shape = np.einsum("bik,bkj->bij", data["ginv"], a_coord[..., 0])
            return newton_from_shape(shape, r)
        if chart.normal_frame is None:
            raise ArgumentError(
                "higher-codimension Newton fields need an analytic normal frame"
            )
        t_onb = newton_transform(data["a_onb"], r)
        if r % 2:
            if component is None:
                raise ArgumentError("odd-order vector field needs a component index")
            t_onb = t_onb[..., component]
        L = np.linalg.cholesky(data["g"])
        w = data["coframe"]
        return np.einsum("bai,bij,bcj->bac", w, t_onb, L)

    return field


def einstein_field(chart, ambient=None):
    """Coordinate-frame field ``u -> ((R/2) I - Ric)^i_j`` (divergence free).

    Works over metric charts (curvature from chart derivatives) and
    immersion charts (curvature via the Gauss equation on the induced
    metric); matches the order-1 generalized Einstein tensor.
    """
    from .extrinsic_geometry import EUCLIDEAN, point_geometry_batch
    from .intrinsic_geometry import MetricChart, curvature_batch

    amb = ambient if ambient is not None else EUCLIDEAN

    def field(u):
        u = np.atleast_2d(u)
        if isinstance(chart, MetricChart):
            cb = curvature_batch(chart, u)
            ginv, ric, scal = cb["ginv"], cb["ric"], cb["scal"]
        else:
            data = point_geometry_batch(chart, u, amb)
            a = data["a_coord"]
            g, ginv = data["g"], data["ginv"]
            rm = np.einsum("bikq,bjlq->bijkl", a, a) - np.einsum(
                "bilq,bjkq->bijkl", a, a
            )
            if amb.c != 0.0:
                rm = rm + amb.c * (
                    np.einsum("bik,bjl->bijkl", g, g) - np.einsum("bil,bjk->bijkl", g, g)
                )
            ric = np.einsum("bik,bijkl->bjl", ginv, rm)
            scal = np.einsum("bjl,bjl->b", ginv, ric)
        n = ginv.shape[-1]
        ric_mixed = np.einsum("bik,bkj->bij", ginv, ric)
        return 0.5 * scal[:, None, None] * np.eye(n) - ric_mixed

    return field


def einstein_newton_bridge(pg, ambient, k: int) -> float:
    """Max-entry residual between the two routes to the generalized Einstein
    tensor of a submanifold.

    Route one contracts the Gauss-equation curvature; route two evaluates
    ``(2k)!/2`` times the Newton transformation of order 2k, plus (for k = 1
    in a curved ambient) the constant-curvature offset ``C(n-1, 2) c I``.
    Requires ``2k <= n - 1``.
    """
    from .extrinsic_geometry import gauss_riemann_batch

    n = pg.n
    if 2 * k > n - 1:
        raise ArgumentError(f"bridge order k={k} needs 2k <= n-1 (n={n})")
    c = ambient.c
    if c != 0.0 and k != 1:
        raise ArgumentError("curved-ambient bridge is defined for k = 1 only")

    a_onb = pg.A.entries
    rm = gauss_riemann_batch(a_onb[None], c)
    _, ek = lovelock_batch(rm, k)
    ek = ek[0]

    if pg.codim == 1:
        t2k = newton_from_shape(a_onb[..., 0], 2 * k)
    else:
        t2k = newton_transform(a_onb, 2 * k)
    rhs = 0.5 * factorial(2 * k) * t2k
    if c != 0.0:
        rhs = rhs + comb(n - 1, 2) * c * np.eye(n)
    return float(np.abs(ek - rhs).max())
