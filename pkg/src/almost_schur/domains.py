"""Rectangular chart domains with per-axis periodicity flags."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, DomainError


@dataclass(frozen=True)
class Box:
    """A rectangular parameter box ``[lo_i, hi_i)`` with periodicity flags.

    Periodic axes identify ``lo`` with ``hi``; non-periodic axes are closed
    intervals.
    """

    lo: tuple
    hi: tuple
    periodic: tuple

    def __post_init__(self):
        lo = tuple(float(x) for x in self.lo)
        hi = tuple(float(x) for x in self.hi)
        per = tuple(bool(p) for p in self.periodic)
        if not (len(lo) == len(hi) == len(per)):
            raise ArgumentError("Box lo/hi/periodic lengths differ")
        if any(h <= l for l, h in zip(lo, hi)):
            raise ArgumentError("Box needs hi > lo on every axis")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "periodic", per)

    @property
    def dim(self) -> int:
        return len(self.lo)

    def contains(self, u: np.ndarray, margin: float = 0.0) -> np.ndarray:
        """Pointwise membership test; periodic axes always pass."""
        u = np.atleast_2d(np.asarray(u, dtype=float))
        ok = np.ones(u.shape[0], dtype=bool)
        for ax in range(self.dim):
            if self.periodic[ax]:
                continue
            ok &= (u[:, ax] >= self.lo[ax] + margin) & (u[:, ax] <= self.hi[ax] - margin)
        return ok

    def require_inside(self, u: np.ndarray, margin: float = 0.0) -> None:
        ok = self.contains(u, margin=margin)
        if not np.all(ok):
            bad = np.atleast_2d(np.asarray(u, dtype=float))[~ok][0]
            raise DomainError(f"point {bad.tolist()} outside chart domain (margin {margin})")

    def wrap(self, u: np.ndarray) -> np.ndarray:
        """Wrap periodic coordinates back into the box."""
        u = np.array(np.atleast_2d(np.asarray(u, dtype=float)))
        for ax in range(self.dim):
            if self.periodic[ax]:
                width = self.hi[ax] - self.lo[ax]
                u[:, ax] = self.lo[ax] + np.mod(u[:, ax] - self.lo[ax], width)
        return u
