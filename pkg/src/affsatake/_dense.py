"""
Dense numpy kernel for series in ``e^{-a_i^v}`` with polynomial coefficients.

An element anchored at ``lam`` is an integer array ``arr[n_1, ..., n_{l+1}, j]``
holding the coefficient of ``z^{zmin + j} e^{lam - sum n_i a_i^v}``, where
``z`` is a formal variable (``t = v^2`` for Delta-type products, ``v`` for
Demazure-Lusztig coefficients).  Cells with ``sum n > D`` are scratch and
ignored on export.

Multiplication by ``N(X) / (1 - z^e X)`` with ``X = e^{-b}`` is a shift
sum along ``b``; int64 is used with a conservative overflow estimate and an
automatic switch to Python integers.
"""
from __future__ import annotations

from itertools import product
from typing import Sequence

import numpy as np

from .cartan import Coweight
from .vcoeff import VCoeff

_LIMIT = 2 ** 60


class Dense:
    __slots__ = ("ct", "anchor", "D", "zmin", "zmax", "arr")

    def __init__(self, ct, anchor, D: int, zmin: int, zmax: int, arr=None):
        self.ct = ct
        self.anchor = Coweight._raw(tuple(anchor))
        self.D = D
        self.zmin = zmin
        self.zmax = zmax
        shape = (D + 1,) * (ct.rank + 1) + (zmax - zmin + 1,)
        self.arr = np.zeros(shape, dtype=np.int64) if arr is None else arr

    # -- construction ------------------------------------------------------
    @classmethod
    def monomial(cls, ct, anchor, D, zmin, zmax, zdeg=0, coeff=1, offset=None):
        out = cls(ct, anchor, D, zmin, zmax)
        if offset is None:
            offset = (0,) * (ct.rank + 1)
        if sum(offset) <= D and zmin <= zdeg <= zmax and all(o <= D for o in offset):
            out.arr[tuple(offset) + (zdeg - zmin,)] = coeff
        return out

    def copy(self) -> "Dense":
        return Dense(self.ct, self.anchor, self.D, self.zmin, self.zmax, self.arr.copy())

    def zeros_like(self) -> "Dense":
        return Dense(self.ct, self.anchor, self.D, self.zmin, self.zmax,
                     np.zeros_like(self.arr))

    # -- helpers -----------------------------------------------------------
    def _maxabs(self) -> int:
        if self.arr.size == 0:
            return 0
        return int(np.abs(self.arr).max())

    def _promote(self):
        if self.arr.dtype != object:
            self.arr = self.arr.astype(object)

    def _guard(self, factor: int):
        if self.arr.dtype != object and self._maxabs() * factor >= _LIMIT:
            self._promote()

    def __iadd__(self, other: "Dense"):
        if other.arr.dtype == object:
            self._promote()
        self._guard(2)
        self.arr += other.arr if self.arr.dtype == other.arr.dtype else other.arr.astype(self.arr.dtype)
        return self

    def scale(self, k: int) -> "Dense":
        out = self.copy()
        out._guard(abs(k) + 1)
        out.arr *= k
        return out

    def box_shift(self, s: Sequence[int]) -> "Dense":
        """Multiply by ``e^{-sum s_i a_i^v}`` (anchor fixed)."""
        out = self.zeros_like()
        D = self.D
        if any(x > D for x in s) or sum(s) > D:
            return out
        dst = tuple(slice(x, D + 1) for x in s) + (slice(None),)
        src = tuple(slice(0, D + 1 - x) for x in s) + (slice(None),)
        out.arr[dst] = self.arr[src]
        return out

    def zshift(self, e: int, strict_low: bool = True) -> "Dense":
        """Multiply by ``z^e``; degrees above ``zmax`` are dropped."""
        out = self.zeros_like()
        n = self.arr.shape[-1]
        if e >= 0:
            if e < n:
                out.arr[..., e:] = self.arr[..., :n - e]
        else:
            k = -e
            if strict_low and np.any(self.arr[..., :min(k, n)] != 0):
                raise OverflowError("z-degree dropped below the window")
            if k < n:
                out.arr[..., :n - k] = self.arr[..., k:]
        return out

    def mul_ratio(self, b: Sequence[int], numer: Sequence[dict], den_z: int | None = 0) -> "Dense":
        """Multiply by ``N(X) / (1 - z^{den_z} X)`` with ``X = e^{-b}``.

        ``numer[k]`` is ``{z-degree: int}``, the coefficient of ``X^k``.
        ``den_z=None`` means no denominator.
        """
        D = self.D
        hb = sum(b)
        if hb <= 0:
            raise ValueError("direction must be a nonzero positive vector")
        K = D // hb
        mx = max((abs(c) for p in numer for c in p.values()), default=0)
        self._guard((len(numer) * mx + 1) * (K + 2))
        x = self.zeros_like()
        if self.arr.dtype == object:
            x._promote()
        for k, p in enumerate(numer):
            if k > K:
                break
            sh = self.box_shift([k * bi for bi in b])
            for e, c in p.items():
                if c:
                    x.arr += c * sh.zshift(e).arr
        if den_z is None:
            return x
        y = x.copy()
        cur = x
        for k in range(1, K + 1):
            cur = cur.box_shift(b)
            if den_z:
                cur = cur.zshift(den_z)
            y.arr += cur.arr
        return y

    def mul_poly_z(self, poly: Sequence[int]) -> "Dense":
        """Multiply every coefficient by the z-polynomial ``sum poly[i] z^i``."""
        out = self.zeros_like()
        mx = max((abs(c) for c in poly), default=0)
        self._guard(mx * len(poly) + 1)
        if self.arr.dtype == object:
            out._promote()
        for i, c in enumerate(poly):
            if c:
                out.arr += c * self.zshift(i).arr
        return out

    def div_poly_z(self, poly: Sequence[int], exact: bool = True) -> "Dense":
        """Divide coefficientwise by ``poly`` with ``poly[0] = 1`` (power series).

        With ``exact=True`` the quotient must be a polynomial that fits in the
        window: the top ``deg(poly)`` slices of the quotient times ``poly``
        must reproduce the input, checked by multiplying back.
        """
        if poly[0] != 1:
            raise ValueError("divisor must have constant term 1")
        q = self.copy()
        n = q.arr.shape[-1]
        for j in range(n):
            for i in range(1, min(len(poly), j + 1)):
                if poly[i]:
                    q.arr[..., j] -= poly[i] * q.arr[..., j - i]
        if exact:
            deg = len(poly) - 1
            if deg and np.any(q.arr[..., n - deg:] != 0):
                raise ArithmeticError("coefficientwise division is not exact in the window")
        return q

    # -- export ------------------------------------------------------------
    def cells(self):
        D = self.D
        for n in product(range(D + 1), repeat=self.ct.rank + 1):
            if sum(n) <= D:
                yield n

    def coweight_of(self, n) -> Coweight:
        ct = self.ct
        out = list(self.anchor)
        for i, k in enumerate(n):
            if k:
                a = ct.simple_coroots[i]
                for j in range(len(out)):
                    out[j] -= k * a[j]
        return Coweight._raw(tuple(out))

    def offset_of(self, mu) -> tuple | None:
        ok, n = self.ct.dominanceLeq(mu, self.anchor)
        if not ok or sum(n) > self.D:
            return None
        return n

    def to_terms(self, zvar_step: int = 1, vshift: int = 0) -> dict:
        """``{coweight: VCoeff}`` with ``z = v^{zvar_step}``, times ``v^{vshift}``."""
        out = {}
        for n in self.cells():
            col = self.arr[n]
            nz = np.nonzero(col)[0]
            if len(nz) == 0:
                continue
            d = {}
            for j in nz:
                d[(self.zmin + int(j)) * zvar_step + vshift] = int(col[j])
            out[self.coweight_of(n)] = VCoeff.from_dict(d)
        return out

    def min_z_by_cell(self) -> int | None:
        nzs = np.nonzero(self.arr)
        if len(nzs[0]) == 0:
            return None
        best = None
        for idx in zip(*nzs):
            if sum(idx[:-1]) <= self.D:
                z = self.zmin + int(idx[-1])
                best = z if best is None else min(best, z)
        return best

    def support_summary(self):
        """``(min depth, min z-degree)`` of the nonzero part inside the window."""
        nzs = np.nonzero(self.arr)
        md, mz = None, None
        for idx in zip(*nzs):
            d = int(sum(idx[:-1]))
            if d <= self.D:
                z = self.zmin + int(idx[-1])
                md = d if md is None else min(md, d)
                mz = z if mz is None else min(mz, z)
        return md, mz

    def restrict_cells(self):
        """Zero the scratch cells with ``sum n > D``."""
        D = self.D
        idx = np.indices(self.arr.shape[:-1]).sum(axis=0)
        self.arr[idx > D] = 0
        return self

    def truncate_z(self, zmax: int) -> "Dense":
        out = self.copy()
        j = zmax - self.zmin + 1
        if j < out.arr.shape[-1]:
            out.arr[..., max(j, 0):] = 0
        return out

    def equal(self, other: "Dense", zmax: int | None = None) -> bool:
        a = self.copy().restrict_cells()
        b = other.copy().restrict_cells()
        if zmax is not None:
            a = a.truncate_z(zmax)
            b = b.truncate_z(zmax)
        return bool(np.all(a.arr == b.arr))
