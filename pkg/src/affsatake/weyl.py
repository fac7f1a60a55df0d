"""
The affine Weyl group W = W_o |x Q_o^v and the extended group W |x Lambda^v.

An element is stored canonically as ``t_H u``: a finite Weyl element ``u``
(integer matrix acting on simple-(co)root coordinates) followed by the
translation ``t_H``.  Reduced words are derived and cached, never used for
equality.  On coweights

    t_H(m c + lam + r d) = (m + (lam, H) - r (H,H)/2) c + lam - r H + r d,

and on roots (dual action, ``<w a, w x> = <a, x>``)

    t_H(alpha + m delta) = alpha + (m + (alpha, H)) delta.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .cartan import AffineCartanData, Coweight, RootAff


def _matmul(A, B):
    n = len(A)
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(n) if A[i][k])
                       for j in range(n)) for i in range(n))


def _matvec(A, x):
    return [sum(a * b for a, b in zip(row, x) if a) for row in A]


class WeylElement:
    """Element ``t_H u`` of the affine Weyl group."""

    __slots__ = ("ct", "mat", "trans", "_hash", "_len", "_word", "_hh")

    def __init__(self, ct: AffineCartanData, mat, trans):
        self.ct = ct
        self.mat = tuple(tuple(int(x) for x in row) for row in mat)
        self.trans = tuple(int(x) for x in trans)
        self._hash = hash((self.mat, self.trans))
        self._len = None
        self._word = None
        self._hh = None

    # -- group structure -------------------------------------------------
    def __eq__(self, other):
        return (isinstance(other, WeylElement) and self._hash == other._hash
                and self.mat == other.mat and self.trans == other.trans)

    def __hash__(self):
        return self._hash

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        # (t_H u)(t_K v) = t_{H + uK} uv
        uK = _matvec(self.mat, other.trans)
        return WeylElement(self.ct, _matmul(self.mat, other.mat),
                           [h + k for h, k in zip(self.trans, uK)])

    def inverse(self) -> "WeylElement":
        # (t_H u)^{-1} = t_{-u^{-1} H} u^{-1}; finite Weyl matrices satisfy
        # u^{-1} = A^{-1} u^T A, computed exactly via the orthogonality of u
        # for the invariant form.
        inv = _finite_inverse(self.ct, self.mat)
        return WeylElement(self.ct, inv, [-x for x in _matvec(inv, self.trans)])

    def is_identity(self) -> bool:
        return not any(self.trans) and self.mat == _identity_mat(self.ct.rank)

    # -- actions -----------------------------------------------------------
    def _half_norm(self) -> int:
        if self._hh is None:
            self._hh = self.ct.form(self.trans, self.trans) // 2
        return self._hh

    def act(self, cw: Sequence[int]) -> Coweight:
        """Action on a coweight ``(c, lam, d)``."""
        lam = cw[1:-1]
        r = cw[-1]
        ul = _matvec(self.mat, lam)
        H = self.trans
        c = cw[0]
        if any(H):
            c += self.ct.form(ul, H) - r * self._half_norm()
            if r:
                ul = [x - r * h for x, h in zip(ul, H)]
        return tuple.__new__(Coweight, (c, *ul, r))

    def act_root(self, root: Sequence[int]) -> RootAff:
        beta = _matvec(self.mat, root[:-1])
        m = root[-1]
        if any(self.trans):
            m += self.ct.form(beta, self.trans)
        return tuple.__new__(RootAff, (*beta, m))

    def act_finite(self, vec: Sequence[int]) -> list:
        """Finite part only (no translation); used for root directions."""
        return _matvec(self.mat, vec)

    # -- length / words ----------------------------------------------------
    @property
    def length(self) -> int:
        if self._len is None:
            self._len = inversion_length(self)
        return self._len

    def has_right_descent(self, i: int) -> bool:
        return not self.ct.is_positive_root(self.act_root(self.ct.simple_root(i)))

    def has_left_descent(self, i: int) -> bool:
        return self.inverse().has_right_descent(i)

    @property
    def reduced_word(self) -> tuple:
        if self._word is None:
            word = []
            w = self
            n = self.ct.rank + 1
            while not w.is_identity():
                for i in range(1, n + 1):
                    if w.has_right_descent(i):
                        word.append(i)
                        w = w * simpleReflection(self.ct, i)
                        break
                else:  # pragma: no cover - would mean a broken root action
                    raise RuntimeError("no descent for a non-identity element")
            self._word = tuple(reversed(word))
            if self._len is None:
                self._len = len(word)
        return self._word

    def __repr__(self):
        return f"W{list(self.reduced_word)}"

    def to_json(self) -> dict:
        return {"word": list(self.reduced_word), "translation": list(self.trans),
                "matrix": [list(r) for r in self.mat]}


def _identity_mat(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _finite_inverse(ct: AffineCartanData, mat):
    key = (ct.name, mat)
    hit = _INV_CACHE.get(key)
    if hit is None:
        A = np.array(ct._A, dtype=object)
        M = np.array(mat, dtype=object)
        # invariance (u x, u y) = (x, y) gives u^T A u = A, so u^{-1} = A^{-1} u^T A;
        # the adjugate keeps this exact
        Ainv_num, det = _adjugate(ct)
        inv = Ainv_num.dot(M.T).dot(A)
        hit = tuple(tuple(int(x // det) for x in row) for row in inv)
        _INV_CACHE[key] = hit
    return hit


_INV_CACHE: dict = {}


@lru_cache(maxsize=None)
def _adjugate_cached(name: str):
    from .cartan import cartan_type
    import sympy
    ct = cartan_type(name)
    A = sympy.Matrix(ct._A)
    det = int(A.det())
    adj = A.adjugate()
    return np.array([[int(adj[i, j]) for j in range(ct.rank)] for i in range(ct.rank)],
                    dtype=object), det


def _adjugate(ct):
    return _adjugate_cached(ct.name)


def inversion_length(w: WeylElement) -> int:
    """Number of positive real roots sent to negative roots.

    For ``w = t_H u`` and a finite root ``alpha``, the positive affine roots
    ``alpha + m delta`` (``m >= 0`` if ``alpha > 0``, ``m >= 1`` otherwise)
    map to ``beta + (m + (beta, H)) delta`` with ``beta = u alpha``.
    """
    ct = w.ct
    total = 0
    pos = ct._positive_set
    for alpha in ct.all_finite_roots:
        m0 = 0 if alpha in pos else 1
        beta = tuple(_matvec(w.mat, alpha))
        p = ct.form(beta, w.trans) if any(w.trans) else 0
        total += max(0, -p - m0)
        if beta not in pos and -p >= m0:
            total += 1
    return total


def identity(ct: AffineCartanData) -> WeylElement:
    return WeylElement(ct, _identity_mat(ct.rank), [0] * ct.rank)


_GEN_CACHE: dict = {}


def simpleReflection(ct: AffineCartanData, i: int) -> WeylElement:
    """``w_{a_i}`` in canonical form, built from the reflection formula."""
    key = (ct.name, i)
    hit = _GEN_CACHE.get(key)
    if hit is not None:
        return hit
    l = ct.rank
    if not 1 <= i <= l + 1:
        raise ValueError(f"generator index {i} out of range 1..{l + 1}")
    a = ct.simple_root(i)
    av = ct.simple_coroot(i)

    def refl(cw):
        k = ct.pairing(a, cw)
        return Coweight._raw(tuple(x - k * y for x, y in zip(cw, av)))

    # finite part: image of the finite basis vectors (level 0) with c dropped
    cols = []
    for j in range(l):
        img = refl(ct.coweight(0, [int(t == j) for t in range(l)], 0))
        cols.append(img[1:-1])
    mat = tuple(tuple(cols[j][r] for j in range(l)) for r in range(l))
    # translation: r = 1 image of d is -(H,H)/2 c - H + d
    img_d = refl(ct.D)
    H = [-x for x in img_d[1:-1]]
    w = WeylElement(ct, mat, H)
    basis = [ct.C, ct.D] + [ct.coweight(0, [int(t == j) for t in range(l)], 0) for j in range(l)]
    basis.append(ct.coweight(3, [j - 1 for j in range(l)], 2))
    for b in basis:
        if w.act(b) != refl(b):
            raise AssertionError(f"canonical form of w_{i} disagrees with the reflection formula")
    _GEN_CACHE[key] = w
    return w


def generators(ct: AffineCartanData) -> list[WeylElement]:
    return [simpleReflection(ct, i) for i in range(1, ct.rank + 2)]


def fromWord(ct: AffineCartanData, word: Iterable[int]) -> WeylElement:
    w = identity(ct)
    for i in word:
        w = w * simpleReflection(ct, int(i))
    return w


def translation(ct: AffineCartanData, H: Sequence[int]) -> WeylElement:
    return WeylElement(ct, _identity_mat(ct.rank), H)


def act(w: WeylElement, cw) -> Coweight:
    return w.act(cw)


def length(w: WeylElement) -> int:
    return w.length


def bfsEnumerate(ct: AffineCartanData, L: int, gens: Sequence[int] | None = None):
    """All elements of length ``<= L`` as ``[(w, length), ...]`` grouped by shell.

    Lengths here are BFS distances in the Cayley graph; they are the oracle
    for :func:`inversion_length`.  ``gens`` restricts to a parabolic subgroup.
    """
    if gens is None:
        gens = list(range(1, ct.rank + 2))
    G = [simpleReflection(ct, i) for i in gens]
    e = identity(ct)
    seen = {e}
    out = [(e, 0)]
    shell = [e]
    for n in range(1, L + 1):
        nxt = []
        for w in shell:
            for g in G:
                x = w * g
                if x not in seen:
                    seen.add(x)
                    nxt.append(x)
        out.extend((x, n) for x in nxt)
        shell = nxt
        if not shell:
            break
    return out


def shellCounts(ct: AffineCartanData, L: int) -> list[int]:
    counts = [0] * (L + 1)
    for _, n in bfsEnumerate(ct, L):
        counts[n] += 1
    return counts


def dominantRepresentative(ct: AffineCartanData, cw: Sequence[int], budget: int = 100000):
    """``(lam_plus, w)`` with ``lam_plus`` dominant and ``w(lam_plus) = cw``."""
    if not ct.inTitsCone(cw):
        raise ValueError(f"{cw!r} is outside the Tits cone")
    cur = Coweight._raw(tuple(cw))
    word = []
    for _ in range(budget):
        p = ct.simple_pairings(cur)
        neg = [i for i, x in enumerate(p) if x < 0]
        if not neg:
            w = fromWord(ct, word)
            return cur, w
        i = neg[0] + 1
        cur = simpleReflection(ct, i).act(cur)
        word.append(i)
    raise RuntimeError("dominantRepresentative budget exceeded")


@dataclass(frozen=True)
class StabilizerData:
    generators: tuple
    finite: bool
    poincare: tuple | None  # coefficients of W_lam(t) in t = v^2
    elements: tuple | None


def _finite_type_submatrix(ct: AffineCartanData, J: Sequence[int]) -> bool | None:
    if not J:
        return True
    M = ct.affineCartanMatrix[np.ix_([j - 1 for j in J], [j - 1 for j in J])].astype(float)
    ev = np.linalg.eigvalsh(M)
    if ev.min() > 1e-9:
        return True
    if ev.min() < 1e-9:
        return False
    return None  # pragma: no cover


def stabilizerData(ct: AffineCartanData, lam: Sequence[int], cap: int = 200000) -> StabilizerData:
    if not ct.isDominant(lam):
        raise ValueError(f"{lam!r} is not dominant")
    p = ct.simple_pairings(lam)
    J = tuple(i + 1 for i, x in enumerate(p) if x == 0)
    by_matrix = _finite_type_submatrix(ct, J)
    if by_matrix is False:
        # the closure only has to confirm that the group outgrows a small cap
        cap = min(cap, 2000)
    # BFS closure of the parabolic with a cap
    G = [simpleReflection(ct, j) for j in J]
    e = identity(ct)
    seen = {e: 0}
    shell = [e]
    n = 0
    closed = True
    while shell:
        n += 1
        nxt = []
        for w in shell:
            for g in G:
                x = w * g
                if x not in seen:
                    seen[x] = n
                    nxt.append(x)
        shell = nxt
        if len(seen) > cap:
            closed = False
            break
    if closed != by_matrix and by_matrix is not None and closed is not None:
        if closed and not by_matrix:  # pragma: no cover
            raise RuntimeError("stabilizer closure disagrees with Cartan submatrix type")
    if not closed and by_matrix is None:  # pragma: no cover
        raise RuntimeError("stabilizer finiteness undecided")
    finite = bool(by_matrix) if by_matrix is not None else closed
    if not finite:
        return StabilizerData(J, False, None, None)
    top = max(seen.values())
    coeffs = [0] * (top + 1)
    for w, k in seen.items():
        coeffs[k] += 1
    return StabilizerData(J, True, tuple(coeffs), tuple(seen))


def minimalCosetReps(ct: AffineCartanData, lam: Sequence[int], L: int) -> list[WeylElement]:
    """Elements of ``W^lam`` (no right descent in ``W_lam``) with length ``<= L``."""
    out = []
    for n, shell in cosetShells(ct, lam, L):
        out.extend(shell)
    return out


def cosetShells(ct: AffineCartanData, lam: Sequence[int], L: int):
    """Yield ``(n, W^lam elements of length n)`` for ``n = 0..L``, stopping after an empty shell.

    If ``w`` is in ``W^lam`` and ``w_i w < w`` then ``w_i w`` is in ``W^lam``, so
    each shell is grown from the previous one by left multiplication.
    """
    if not ct.isDominant(lam):
        raise ValueError(f"{lam!r} is not dominant")
    p = ct.simple_pairings(lam)
    J = [i + 1 for i, x in enumerate(p) if x == 0]
    e = identity(ct)
    e._len = 0
    shell = [e]
    yield 0, shell
    for n in range(1, L + 1):
        nxt = set()
        for w in shell:
            for i in range(1, ct.rank + 2):
                if w.has_left_descent(i):
                    continue
                x = simpleReflection(ct, i) * w
                if x in nxt:
                    continue
                x._len = n
                if any(x.has_right_descent(j) for j in J):
                    continue
                nxt.add(x)
        shell = sorted(nxt, key=lambda x: x.reduced_word)
        yield n, shell
        if not shell:
            return


def cosetRepsByDepth(ct: AffineCartanData, lam: Sequence[int], D: int):
    """``[(u, u(lam), depth)]`` for ``u`` in ``W^lam`` with ``ht(lam - u lam) <= D``.

    For ``u = w_i u'`` reduced in ``W^lam`` the depth grows by
    ``<a_i, u' lam> >= 1``, so ``ht(lam - u lam) >= l(u)`` and lengths up to
    ``D`` suffice.
    """
    out = []
    for u in minimalCosetReps(ct, lam, D):
        mu = u.act(lam)
        dep = ct.depth(mu, lam)
        if dep <= D:
            out.append((u, mu, dep))
    return out


def bruhatLeq(u: WeylElement, w: WeylElement) -> bool:
    """Bruhat order via the lifting property.

    For a right descent ``s`` of ``w``: ``u <= w`` iff ``min(u, us) <= ws``.
    Equivalent to the subword criterion on a reduced word of ``w``.
    """
    if u.length > w.length:
        return False
    ct = w.ct
    word = w.reduced_word
    cur = u
    for i in reversed(word):
        s = simpleReflection(ct, i)
        if cur.has_right_descent(i):
            cur = cur * s
    return cur.is_identity()


def bruhatLeqSubword(u: WeylElement, w: WeylElement) -> bool:
    """Direct subword search with backtracking (oracle for :func:`bruhatLeq`)."""
    ct = w.ct
    word = w.reduced_word
    target_len = u.length
    gens = {i: simpleReflection(ct, i) for i in set(word)}

    def rec(pos, cur, used):
        if used == target_len:
            return cur == u
        if len(word) - pos < target_len - used:
            return False
        nxt = cur * gens[word[pos]]
        if nxt.length == used + 1 and rec(pos + 1, nxt, used + 1):
            return True
        return rec(pos + 1, cur, used)

    return rec(0, identity(ct), 0)


class ExtendedElement:
    """``x = pi^lam w`` in ``W |x Lambda^v``; product
    ``(pi^lam w)(pi^mu v) = pi^{lam + w mu} wv``."""

    __slots__ = ("weyl", "coweight")

    def __init__(self, weyl: WeylElement, coweight: Sequence[int]):
        self.weyl = weyl
        self.coweight = Coweight._raw(tuple(coweight))

    def __mul__(self, other: "ExtendedElement") -> "ExtendedElement":
        return ExtendedElement(self.weyl * other.weyl,
                               self.coweight + self.weyl.act(other.coweight))

    def inverse(self) -> "ExtendedElement":
        wi = self.weyl.inverse()
        return ExtendedElement(wi, -wi.act(self.coweight))

    def __eq__(self, other):
        return (isinstance(other, ExtendedElement) and self.weyl == other.weyl
                and self.coweight == other.coweight)

    def __hash__(self):
        return hash((self.weyl, self.coweight))

    def in_tits_part(self) -> bool:
        return self.weyl.ct.inTitsCone(self.coweight)

    def __repr__(self):
        return f"pi^{tuple(self.coweight)} {self.weyl!r}"


def pi(ct: AffineCartanData, lam: Sequence[int]) -> ExtendedElement:
    return ExtendedElement(identity(ct), lam)


def preceq(x: ExtendedElement, y: ExtendedElement) -> bool:
    """``pi^lam w <= pi^mu v`` iff ``lam < mu``, or ``lam = mu`` and ``w <= v``."""
    ct = x.weyl.ct
    if x.coweight == y.coweight:
        return bruhatLeq(x.weyl, y.weyl)
    return ct.leq(x.coweight, y.coweight)
