"""
Affine Cartan data for untwisted simply-laced types.

Conventions
-----------
A coweight is stored as a flat integer tuple ``(c, f_1, ..., f_l, d)``:
the coefficient of the central coweight ``c``, the finite part in the
simple-coroot basis of the finite coroot lattice, and the coefficient of
the degree coweight ``d``.

A root ``alpha + m*delta`` is stored as ``(a_1, ..., a_l, m)`` with the
finite part in simple-root coordinates.  For simply-laced types roots and
coroots share coordinates, so the finite pairing is ``alpha^T A lambda``
with ``A`` the (symmetric) finite Cartan matrix, and

    <alpha + m delta, (c, lam, k)> = alpha^T A lam + m k.

The affine simple root is ``a_{l+1} = -theta + delta`` with coroot
``-theta^v + c``.  The element rho is pinned by ``<rho, a_i^v> = 1`` for
all ``i = 1..l+1`` and ``<rho, d> = 0``, so
``<rho, (c, lam, k)> = h*c + ht(lam)`` with ``h`` the Coxeter number.
All ``q**<rho, lam>`` prefactors downstream depend on this choice.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class Coweight(tuple):
    """Element ``c*C + lam + d*D`` of the coweight lattice as a flat tuple."""

    __slots__ = ()

    def __new__(cls, c: int, finite: Iterable[int], d: int):
        return tuple.__new__(cls, (int(c), *(int(x) for x in finite), int(d)))

    @classmethod
    def _raw(cls, t) -> "Coweight":
        return tuple.__new__(cls, t)

    @property
    def c(self) -> int:
        return self[0]

    @property
    def finite(self) -> tuple:
        return tuple(self[1:-1])

    @property
    def d(self) -> int:
        return self[-1]

    @property
    def level(self) -> int:
        return self[-1]

    def __add__(self, other):
        return tuple.__new__(Coweight, [x + y for x, y in zip(self, other)])

    def __sub__(self, other):
        return tuple.__new__(Coweight, [x - y for x, y in zip(self, other)])

    def __neg__(self):
        return tuple.__new__(Coweight, [-x for x in self])

    def __mul__(self, n: int):
        return tuple.__new__(Coweight, [n * x for x in self])

    __rmul__ = __mul__

    def __repr__(self):
        return f"Coweight(c={self[0]}, finite={list(self[1:-1])}, d={self[-1]})"

    def to_json(self) -> dict:
        return {"c": self[0], "finite": list(self[1:-1]), "d": self[-1]}

    @classmethod
    def from_json(cls, obj) -> "Coweight":
        return cls(obj["c"], obj["finite"], obj["d"])


class RootAff(tuple):
    """Affine root ``alpha + m*delta`` stored as ``(alpha coords..., m)``."""

    __slots__ = ()

    def __new__(cls, finite: Iterable[int], m: int):
        return tuple.__new__(cls, (*(int(x) for x in finite), int(m)))

    @classmethod
    def _raw(cls, t) -> "RootAff":
        return tuple.__new__(cls, t)

    @property
    def finite(self) -> tuple:
        return tuple(self[:-1])

    @property
    def m(self) -> int:
        return self[-1]

    def __neg__(self):
        return tuple.__new__(RootAff, [-x for x in self])

    def __add__(self, other):
        return tuple.__new__(RootAff, [x + y for x, y in zip(self, other)])

    def __repr__(self):
        return f"RootAff({list(self[:-1])}, m={self[-1]})"

    def to_json(self) -> dict:
        return {"finite": list(self[:-1]), "m": self[-1]}

    @classmethod
    def from_json(cls, obj) -> "RootAff":
        return cls(obj["finite"], obj["m"])


class CorootAff(tuple):
    """Affine coroot ``beta^v + m*c`` stored as ``(beta coords..., m)``."""

    __slots__ = ()

    def __new__(cls, finite: Iterable[int], m: int):
        return tuple.__new__(cls, (*(int(x) for x in finite), int(m)))

    @property
    def finite(self) -> tuple:
        return tuple(self[:-1])

    @property
    def m(self) -> int:
        return self[-1]

    def is_imaginary(self) -> bool:
        return not any(self[:-1])

    def as_coweight(self) -> Coweight:
        return Coweight(self[-1], self[:-1], 0)

    def __neg__(self):
        return tuple.__new__(CorootAff, [-x for x in self])

    def __repr__(self):
        return f"CorootAff({list(self[:-1])}, m={self[-1]})"


def _finite_cartan(family: str, rank: int) -> np.ndarray:
    A = 2 * np.eye(rank, dtype=np.int64)
    if family == "A":
        edges = [(i, i + 1) for i in range(rank - 1)]
    elif family == "D":
        if rank < 4:
            raise ValueError("D_l needs l >= 4")
        edges = [(i, i + 1) for i in range(rank - 2)] + [(rank - 3, rank - 1)]
    elif family == "E":
        if rank not in (6, 7, 8):
            raise ValueError("E_l needs l in {6, 7, 8}")
        # Bourbaki labelling: 1-3-4-5-...-l with 2 attached to 4
        edges = [(0, 2), (1, 3), (2, 3)] + [(i, i + 1) for i in range(3, rank - 1)]
    else:
        raise ValueError(f"unsupported family {family!r}")
    for i, j in edges:
        A[i, j] = A[j, i] = -1
    return A


def _positive_roots(A: np.ndarray) -> list[tuple]:
    """Closure enumeration of the finite positive roots (simply-laced)."""
    l = A.shape[0]
    simple = [tuple(int(i == j) for j in range(l)) for i in range(l)]
    roots = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for r in layer:
            v = np.array(r)
            for i in range(l):
                # simply-laced: r + alpha_i is a root iff (r, alpha_i) = -1
                if r != simple[i] and int(v @ A[:, i]) == -1:
                    s = tuple(int(x) for x in v + np.eye(l, dtype=np.int64)[i])
                    if s not in roots:
                        roots.add(s)
                        nxt.append(s)
        layer = nxt
    return sorted(roots, key=lambda r: (sum(r), r))


_CACHE: dict = {}


@dataclass(frozen=True, eq=False)
class AffineCartanData:
    family: str
    rank: int
    finiteCartanMatrix: np.ndarray = field(repr=False)
    thetaCoords: tuple = ()
    positiveRoots: tuple = field(default=(), repr=False)

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def symmetricForm(self) -> np.ndarray:
        # simply-laced with (theta, theta) = 2: the form is the Cartan matrix
        return self.finiteCartanMatrix

    @cached_property
    def _A(self) -> tuple:
        return tuple(tuple(int(x) for x in row) for row in self.finiteCartanMatrix)

    @cached_property
    def affineCartanMatrix(self) -> np.ndarray:
        l = self.rank
        M = np.zeros((l + 1, l + 1), dtype=np.int64)
        for i in range(l + 1):
            for j in range(l + 1):
                M[i, j] = self.pairing(self.simple_root(i + 1), self.simple_coroot(j + 1))
        return M

    @cached_property
    def coxeter_number(self) -> int:
        return sum(self.thetaCoords) + 1

    @cached_property
    def all_finite_roots(self) -> tuple:
        pos = list(self.positiveRoots)
        return tuple(pos + [tuple(-x for x in r) for r in pos])

    @cached_property
    def _positive_set(self) -> frozenset:
        return frozenset(self.positiveRoots)

    @cached_property
    def _finite_root_set(self) -> frozenset:
        return frozenset(self.all_finite_roots)

    # -- lattice helpers -------------------------------------------------
    def finite_pair(self, alpha: Sequence[int], lam: Sequence[int]) -> int:
        """``alpha^T A lam`` for finite root and coweight coordinates."""
        A = self._A
        return sum(alpha[i] * A[i][j] * lam[j]
                   for i in range(self.rank) if alpha[i]
                   for j in range(self.rank) if lam[j])

    def form(self, x: Sequence[int], y: Sequence[int]) -> int:
        """Invariant form ``(x, y)`` on the finite coroot lattice."""
        return self.finite_pair(x, y)

    def coweight(self, c: int = 0, finite: Sequence[int] | None = None, d: int = 0) -> Coweight:
        if finite is None:
            finite = [0] * self.rank
        if len(finite) != self.rank:
            raise ValueError(f"finite part must have length {self.rank}")
        return Coweight(c, finite, d)

    def zero(self) -> Coweight:
        return Coweight(0, [0] * self.rank, 0)

    @property
    def C(self) -> Coweight:
        return Coweight(1, [0] * self.rank, 0)

    @property
    def D(self) -> Coweight:
        return Coweight(0, [0] * self.rank, 1)

    def root(self, finite: Sequence[int], m: int = 0) -> RootAff:
        return RootAff(finite, m)

    def simple_root(self, i: int) -> RootAff:
        l = self.rank
        if not 1 <= i <= l + 1:
            raise ValueError(f"simple root index {i} out of range 1..{l + 1}")
        if i <= l:
            return RootAff([int(j == i - 1) for j in range(l)], 0)
        return RootAff([-t for t in self.thetaCoords], 1)

    def simple_coroot(self, i: int) -> Coweight:
        return self.corootOf(self.simple_root(i)).as_coweight()

    @cached_property
    def simple_coroots(self) -> tuple:
        return tuple(self.simple_coroot(i) for i in range(1, self.rank + 2))

    # -- operations ------------------------------------------------------
    def pairing(self, root: Sequence[int], cw: Sequence[int]) -> int:
        """``<alpha + m delta, (c, lam, k)> = alpha^T A lam + m k``."""
        l = self.rank
        return self.finite_pair(root[:l], cw[1:l + 1]) + root[l] * cw[l + 1]

    def simple_pairings(self, cw: Sequence[int]) -> tuple:
        """``(<a_1, cw>, ..., <a_{l+1}, cw>)``."""
        l = self.rank
        A = self._A
        lam = cw[1:l + 1]
        p = [sum(A[i][j] * lam[j] for j in range(l)) for i in range(l)]
        th = sum(t * x for t, x in zip(self.thetaCoords, p))
        return tuple(p) + (cw[l + 1] - th,)

    def is_real(self, root: Sequence[int]) -> bool:
        return tuple(root[:-1]) in self._finite_root_set

    def is_positive_root(self, root: Sequence[int]) -> bool:
        f, m = tuple(root[:-1]), root[-1]
        if not any(f):
            return m > 0
        return m > 0 or (m == 0 and f in self._positive_set)

    def corootOf(self, root: Sequence[int]) -> CorootAff:
        if not self.is_real(root):
            raise ValueError(f"{root!r} is not a real root")
        return CorootAff(root[:-1], root[-1])

    def rootOf(self, coroot: Sequence[int]) -> RootAff:
        if tuple(coroot[:-1]) not in self._finite_root_set:
            raise ValueError(f"{coroot!r} is not a real coroot")
        return RootAff(coroot[:-1], coroot[-1])

    def enumeratePositiveReal(self, max_m: int | None = None,
                              heightBound: int | None = None) -> list[RootAff]:
        """Positive real roots with ``m <= max_m`` and/or affine height bound.

        Affine height is ``<rho^v-dual, a> = m*h + ht(alpha)``.  Ordered by
        ``m``, then finite height, then lexicographically.
        """
        if max_m is None and heightBound is None:
            raise ValueError("a finite bound is required")
        h = self.coxeter_number
        if max_m is None:
            max_m = heightBound // h + 1
        out = []
        for m in range(max_m + 1):
            cand = self.positiveRoots if m == 0 else self.all_finite_roots
            for f in sorted(cand, key=lambda r: (sum(r), r)):
                if heightBound is not None and m * h + sum(f) > heightBound:
                    continue
                out.append(RootAff(f, m))
        return out

    def multiplicity(self, cor: Sequence[int]) -> int:
        if not any(cor):
            raise ValueError("zero vector is not a coroot")
        if not any(cor[:-1]):
            return self.rank
        if tuple(cor[:-1]) in self._finite_root_set:
            return 1
        raise ValueError(f"{cor!r} is not a coroot")

    def rhoPairing(self, cw: Sequence[int]) -> int:
        return self.coxeter_number * cw[0] + sum(cw[1:-1])

    def isDominant(self, cw: Sequence[int]) -> bool:
        return all(x >= 0 for x in self.simple_pairings(cw))

    def inTitsCone(self, cw: Sequence[int]) -> bool:
        return cw[-1] > 0 or (cw[-1] == 0 and not any(cw[1:-1]))

    def coroot_coords(self, q: Sequence[int]) -> tuple | None:
        """Coordinates ``(n_1..n_{l+1})`` of ``q`` in the simple coroots, or None.

        ``q`` must have zero ``d`` part; the affine coordinate equals the
        ``c`` coefficient.
        """
        if q[-1] != 0:
            return None
        nc = q[0]
        return tuple(x + nc * t for x, t in zip(q[1:-1], self.thetaCoords)) + (nc,)

    def dominanceLeq(self, mu: Sequence[int], lam: Sequence[int]):
        """Return ``(True, witness)`` if ``mu <= lam`` else ``(False, None)``."""
        diff = [x - y for x, y in zip(lam, mu)]
        n = self.coroot_coords(diff)
        if n is None or any(x < 0 for x in n):
            return False, None
        return True, n

    def leq(self, mu, lam) -> bool:
        return self.dominanceLeq(mu, lam)[0]

    def height(self, q: Sequence[int]) -> int:
        n = self.coroot_coords(q)
        if n is None or any(x < 0 for x in n):
            raise ValueError(f"{q!r} is not in the positive coroot cone")
        return sum(n)

    def depth(self, mu: Sequence[int], anchor: Sequence[int]) -> int:
        """``height(anchor - mu)`` without the cone check (may be negative)."""
        return (self.coxeter_number * (anchor[0] - mu[0])
                + sum(anchor[1:-1]) - sum(mu[1:-1]))

    def __repr__(self):
        return f"AffineCartanData({self.name})"


def cartan_type(name: str) -> AffineCartanData:
    """``cartan_type("A2")`` etc.  Results are cached."""
    name = name.strip().upper()
    if name in _CACHE:
        return _CACHE[name]
    if len(name) < 2 or name[0] not in "ADE" or not name[1:].isdigit():
        raise ValueError(f"cannot parse Cartan type {name!r}")
    family, rank = name[0], int(name[1:])
    if rank < 1:
        raise ValueError("rank must be positive")
    A = _finite_cartan(family, rank)
    pos = _positive_roots(A)
    theta = max(pos, key=sum)
    data = AffineCartanData(family, rank, A, tuple(theta), tuple(pos))
    _check(data)
    _CACHE[name] = data
    return data


def _check(data: AffineCartanData) -> None:
    A = data.finiteCartanMatrix
    assert (A == A.T).all() and (np.diag(A) == 2).all()
    rs = set(data.positiveRoots)
    for i in range(data.rank):
        s = tuple(t + int(i == j) for j, t in enumerate(data.thetaCoords))
        assert s not in rs, "theta is not the highest root"
    assert data.form(data.thetaCoords, data.thetaCoords) == 2
