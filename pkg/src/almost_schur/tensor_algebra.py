"""Dense multilinear algebra at a single tangent space.

Symmetric 2-tensors, algebraic curvature 4-tensors, generalized Kronecker
deltas, Kulkarni-Nomizu products, metric-aware inner products, traces and
traceless parts.  Everything is 0-based and works on plain ndarrays; the
public kernels accept leading batch axes so grids of points can be processed
in one call.

Curvature tensors are stored as ``T[i, j, k, l]`` with ``T[i, j, i, j]``
equal to the sectional curvature of the (orthonormal) plane ``(i, j)``; the
unit-curvature model tensor is ``B[i,j,k,l] = g_ik g_jl - g_il g_jk``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, NumericError, PositivityError

__all__ = [
    "SymTensor2",
    "VecValuedSym2",
    "AlgCurvTensor4",
    "GenKroneckerSpec",
    "gen_kronecker",
    "kulkarni_nomizu",
    "kn_product",
    "inner4",
    "traceless2",
    "unit_curvature_tensor",
    "raise_all4",
    "norm2_curv",
    "norm2_sym2",
    "trace2",
    "ricci_contraction",
    "scalar_contraction",
    "weyl_decompose",
    "curvature_symmetry_residuals",
]


# ---------------------------------------------------------------------------
# generalized Kronecker delta


def _perm_sign_inversions(perm) -> int:
    """Sign of a permutation given as a sequence of distinct integers."""
    inv = 0
    p = list(perm)
    for a in range(len(p)):
        for b in range(a + 1, len(p)):
            if p[a] > p[b]:
                inv += 1
    return -1 if inv % 2 else 1


def gen_kronecker(upper, lower, n: int | None = None) -> int:
    """Generalized Kronecker delta of two index tuples.

    Returns 0 if either tuple repeats an index or the tuples differ as sets,
    otherwise the sign (+1/-1) of the permutation sending ``upper`` to
    ``lower``.  Indices are 0-based; if ``n`` is given, every index must lie
    in ``[0, n)``.
    """
    upper = tuple(int(i) for i in upper)
    lower = tuple(int(j) for j in lower)
    if len(upper) != len(lower):
        raise ArgumentError(
            f"index tuples must have equal length, got {len(upper)} and {len(lower)}"
        )
    if len(upper) == 0:
        raise ArgumentError("index tuples must be non-empty")
    if n is not None:
        for idx in upper + lower:
            if not 0 <= idx < n:
                raise ArgumentError(f"index {idx} out of range [0, {n})")
    if len(set(upper)) != len(upper) or len(set(lower)) != len(lower):
        return 0
    if set(upper) != set(lower):
        return 0
    pos = {v: i for i, v in enumerate(lower)}
    return _perm_sign_inversions([pos[v] for v in upper])


@dataclass(frozen=True)
class GenKroneckerSpec:
    """An index pair for the generalized Kronecker delta, kept symbolic."""

    upper: tuple
    lower: tuple

    def evaluate(self, n: int | None = None) -> int:
        return gen_kronecker(self.upper, self.lower, n=n)


# ---------------------------------------------------------------------------
# typed wrappers


def _as_square(entries, name: str) -> np.ndarray:
    arr = np.asarray(entries, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ArgumentError(f"{name} must be a square matrix, got shape {arr.shape}")
    if arr.shape[0] < 2:
        raise ArgumentError(f"{name} needs dimension >= 2, got {arr.shape[0]}")
    return arr


@dataclass(frozen=True)
class SymTensor2:
    """A symmetric 2-tensor on an n-dimensional tangent space.

    Entries are symmetrized on construction, so ``entries[i, j] ==
    entries[j, i]`` holds exactly.
    """

    entries: np.ndarray

    def __post_init__(self):
        arr = _as_square(self.entries, "SymTensor2.entries")
        arr = 0.5 * (arr + arr.T)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class VecValuedSym2:
    """A symmetric 2-tensor whose values are normal-space vectors.

    ``entries[i, j, :]`` is the coefficient vector (length = codimension) of
    the value on the frame pair ``(i, j)``; symmetry in ``(i, j)`` is enforced
    componentwise on construction.
    """

    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=float)
        if arr.ndim != 3 or arr.shape[0] != arr.shape[1]:
            raise ArgumentError(
                f"VecValuedSym2.entries must have shape (n, n, codim), got {arr.shape}"
            )
        if arr.shape[2] < 1:
            raise ArgumentError("VecValuedSym2 needs codimension >= 1")
        arr = 0.5 * (arr + arr.transpose(1, 0, 2))
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def codim(self) -> int:
        return self.entries.shape[2]


def curvature_symmetry_residuals(entries: np.ndarray) -> dict:
    """Max-abs residuals of the three algebraic curvature symmetries.

    Returned values are absolute; callers compare against 1e-12 times the
    entry scale.
    """
    t = np.asarray(entries, dtype=float)
    anti_ij = np.abs(t + t.transpose(1, 0, 2, 3)).max()
    anti_kl = np.abs(t + t.transpose(0, 1, 3, 2)).max()
    pair = np.abs(t - t.transpose(2, 3, 0, 1)).max()
    bianchi = np.abs(
        t + t.transpose(0, 2, 3, 1) + t.transpose(0, 3, 1, 2)
    ).max()
    return {
        "antisym_first": float(anti_ij),
        "antisym_second": float(anti_kl),
        "pair": float(pair),
        "bianchi": float(bianchi),
        "scale": float(max(np.abs(t).max(), 1e-300)),
    }


@dataclass(frozen=True)
class AlgCurvTensor4:
    """An algebraic curvature 4-tensor (all Riemann symmetries).

    Construction validates antisymmetry in each index pair, pair symmetry and
    the first Bianchi identity to 1e-12 of the entry scale; pass
    ``validate=False`` to skip (hot loops use the raw-array kernels instead).
    """

    entries: np.ndarray
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=float)
        if arr.ndim != 4 or len(set(arr.shape)) != 1:
            raise ArgumentError(
                f"AlgCurvTensor4.entries must have shape (n,n,n,n), got {arr.shape}"
            )
        if self.validate:
            res = curvature_symmetry_residuals(arr)
            tol = 1e-12 * max(res["scale"], 1.0)
            bad = {
                k: v
                for k, v in res.items()
                if k != "scale" and v > tol
            }
            if bad:
                raise ArgumentError(f"curvature symmetries violated: {bad}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


# ---------------------------------------------------------------------------
# raw-array kernels (leading batch axes allowed throughout)


def kn_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kulkarni-Nomizu product of two symmetric 2-tensor arrays.

    ``out[..., i, j, k, l] = a_ik b_jl + a_jl b_ik - a_il b_jk - a_jk b_il``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ArgumentError(f"shape mismatch in KN product: {a.shape} vs {b.shape}")
    ik_jl = np.einsum("...ik,...jl->...ijkl", a, b)
    jl_ik = np.einsum("...jl,...ik->...ijkl", a, b)
    il_jk = np.einsum("...il,...jk->...ijkl", a, b)
    jk_il = np.einsum("...jk,...il->...ijkl", a, b)
    return ik_jl + jl_ik - il_jk - jk_il


def kulkarni_nomizu(alpha: SymTensor2, beta: SymTensor2) -> AlgCurvTensor4:
    """Kulkarni-Nomizu product of two symmetric 2-tensors."""
    if alpha.dim != beta.dim:
        raise ArgumentError(f"dimension mismatch: {alpha.dim} vs {beta.dim}")
    return AlgCurvTensor4(kn_product(alpha.entries, beta.entries), validate=False)


def unit_curvature_tensor(g: np.ndarray) -> np.ndarray:
    """Model tensor ``B_ijkl = g_ik g_jl - g_il g_jk`` (constant curvature 1)."""
    g = np.asarray(g, dtype=float)
    return np.einsum("...ik,...jl->...ijkl", g, g) - np.einsum(
        "...il,...jk->...ijkl", g, g
    )


def _inverse_spd(g: np.ndarray) -> np.ndarray:
    """Inverse of a symmetric positive definite matrix (batched)."""
    g = np.asarray(g, dtype=float)
    try:
        np.linalg.cholesky(g)
    except np.linalg.LinAlgError as exc:
        raise PositivityError("metric is not positive definite") from exc
    return np.linalg.inv(g)


def raise_all4(t: np.ndarray, ginv: np.ndarray) -> np.ndarray:
    """Raise all four indices of a 4-tensor with the inverse metric."""
    t = np.einsum("...ia,...ajkl->...ijkl", ginv, t)
    t = np.einsum("...jb,...ibkl->...ijkl", ginv, t)
    t = np.einsum("...kc,...ijcl->...ijkl", ginv, t)
    t = np.einsum("...ld,...ijkd->...ijkl", ginv, t)
    return t


def inner4(t, s, g) -> float | np.ndarray:
    """Metric inner product of two 4-tensors, all indices raised with g^-1.

    Accepts typed wrappers or raw arrays; with identity ``g`` this is the
    Frobenius pairing.  ``inner4(t, t, g) >= 0`` for positive definite g.
    """
    t_arr = t.entries if isinstance(t, AlgCurvTensor4) else np.asarray(t, dtype=float)
    s_arr = s.entries if isinstance(s, AlgCurvTensor4) else np.asarray(s, dtype=float)
    g_arr = g.entries if isinstance(g, SymTensor2) else np.asarray(g, dtype=float)
    if t_arr.shape != s_arr.shape:
        raise ArgumentError(f"shape mismatch: {t_arr.shape} vs {s_arr.shape}")
    if g_arr.shape[-1] != t_arr.shape[-1]:
        raise ArgumentError("metric dimension does not match tensor dimension")
    ginv = _inverse_spd(g_arr)
    out = np.einsum("...ijkl,...ijkl->...", raise_all4(t_arr, ginv), s_arr)
    return float(out) if out.ndim == 0 else out


def norm2_curv(t: np.ndarray, ginv: np.ndarray) -> np.ndarray:
    """|t|^2 for a curvature 4-tensor array, given the inverse metric."""
    return np.einsum("...ijkl,...ijkl->...", raise_all4(t, ginv), t)


def trace2(s: np.ndarray, ginv: np.ndarray) -> np.ndarray:
    """Metric trace of a symmetric 2-tensor array."""
    return np.einsum("...ij,...ij->...", s, ginv)


def norm2_sym2(s: np.ndarray, ginv: np.ndarray) -> np.ndarray:
    """|s|^2 for a symmetric 2-tensor array, indices raised with g^-1."""
    up = np.einsum("...ia,...jb,...ab->...ij", ginv, ginv, s)
    return np.einsum("...ij,...ij->...", up, s)


def traceless2(s, g):
    """Traceless part ``s - (tr_g s / n) g`` of a symmetric 2-tensor.

    Typed wrappers in, typed wrapper out; raw arrays in, raw array out (with
    leading batch axes).
    """
    typed = isinstance(s, SymTensor2)
    s_arr = s.entries if typed else np.asarray(s, dtype=float)
    g_arr = g.entries if isinstance(g, SymTensor2) else np.asarray(g, dtype=float)
    if s_arr.shape[-1] != g_arr.shape[-1]:
        raise ArgumentError("dimension mismatch between tensor and metric")
    n = s_arr.shape[-1]
    ginv = _inverse_spd(g_arr)
    tr = trace2(s_arr, ginv)
    out = s_arr - (np.asarray(tr)[..., None, None] / n) * g_arr
    return SymTensor2(out) if typed else out


def ricci_contraction(rm: np.ndarray, ginv: np.ndarray) -> np.ndarray:
    """Ricci tensor ``Ric_jl = g^ik Rm_ijkl`` from a curvature array."""
    return np.einsum("...ik,...ijkl->...jl", ginv, rm)


def scalar_contraction(rm: np.ndarray, ginv: np.ndarray) -> np.ndarray:
    """Scalar curvature (double trace of a curvature array)."""
    return trace2(ricci_contraction(rm, ginv), ginv)


def weyl_decompose(rm: np.ndarray, g: np.ndarray) -> dict:
    """Orthogonal decomposition of a curvature array into scalar, traceless
    Ricci and Weyl parts.

    Returns a dict with keys ``scalar_part``, ``ricci_part``, ``weyl``,
    ``scalar`` and ``ricci0``; the three parts sum to ``rm`` exactly and are
    mutually orthogonal in the metric inner product.  Requires n >= 3.
    """
    rm = np.asarray(rm, dtype=float)
    g = np.asarray(g, dtype=float)
    n = g.shape[-1]
    if n < 3:
        raise ArgumentError("Weyl decomposition needs dimension >= 3")
    ginv = _inverse_spd(g)
    ric = ricci_contraction(rm, ginv)
    scal = trace2(ric, ginv)
    ric0 = ric - (np.asarray(scal)[..., None, None] / n) * g
    scalar_part = (np.asarray(scal)[..., None, None, None, None] / (n * (n - 1))) * (
        unit_curvature_tensor(g)
    )
    ricci_part = kn_product(g, ric0) / (n - 2)
    weyl = rm - scalar_part - ricci_part
    return {
        "scalar_part": scalar_part,
        "ricci_part": ricci_part,
        "weyl": weyl,
        "scalar": scal,
        "ricci0": ric0,
    }


def assert_finite(arr: np.ndarray, what: str) -> np.ndarray:
    """Raise NumericError if any entry is non-finite."""
    arr = np.asarray(arr)
    if not np.all(np.isfinite(arr)):
        raise NumericError(f"non-finite values in {what}")
    return arr
