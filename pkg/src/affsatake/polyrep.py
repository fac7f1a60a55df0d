"""
Demazure-Lusztig operators on truncated series, the length-weighted
symmetrizer sum over W, and Poincare series data.

``T_a f = c(a) f^{w_a} + b(a) f`` with ``c(a) = (v X - v^{-1})/(X - 1)`` and
``b(a) = (v - v^{-1})/(1 - X)`` at ``X = e^{a^v}``; compositions follow a
reduced word left to right, ``T_w = T_{a_1} ... T_{a_n}``.

For the symmetrizer the operator coefficients are carried in the
normalization ``B_s(w) = v^{l(w)} A_s(w)`` where

    T_w = sum_s A_s(w) [s],    T_{w w_a} = T_w T_a  (l(w w_a) > l(w)),

so ``v c(gamma) = (1 - v^2 e^gamma)/(1 - e^gamma)`` and
``v b(gamma) = (v^2 - 1)/(1 - e^gamma)`` keep everything in ``Z[v^2]``.
Then ``C_t = sum_w B_t(w)`` over length shells.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import weyl as W
from ._dense import Dense
from .cartan import AffineCartanData, Coweight
from .series import (Series, TruncationContext, deltaW_dense, expandB, expandCT, mul,
                     wAct, invertUnit, deltaW)
from .vcoeff import V, VINV, ZERO, VCoeff

# ---------------------------------------------------------------------------
# operators on series


def dlApply(a: int, f: Series) -> Series:
    """``T_a f`` inside the window of ``f``."""
    ct = f.ct
    av = ct.simple_coroot(a)
    z = ct.zero()
    D = f.ctx.depth
    zctx = TruncationContext(z, D, f.ctx.vwindow)
    c = expandCT(ct, av, ctx=zctx)
    b = expandB(ct, av, ctx=zctx)
    s = W.simpleReflection(ct, a)
    return mul(c, wAct(f, s)) + mul(b, f)


def dlWord(word: Sequence[int] | W.WeylElement, f: Series) -> Series:
    """``T_{a_1} ... T_{a_n} f``: the last letter acts first."""
    if isinstance(word, W.WeylElement):
        word = word.reduced_word
    for a in reversed(list(word)):
        f = dlApply(a, f)
    return f


def dlMonomial(ct: AffineCartanData, a: int, mu) -> dict:
    """Closed form of ``T_a e^mu`` as ``{coweight: VCoeff}`` (finite sum).

    With ``k = <a, mu>`` and ``X = e^{a^v}``:
    ``k > 0``: ``v e^{mu - k a^v} - (v - v^{-1}) (e^{mu - a^v} + ... + e^{mu - k a^v})``;
    ``k = 0``: ``v e^mu``;
    ``k = -m < 0``: ``v e^{mu + m a^v} + (v - v^{-1}) (e^mu + ... + e^{mu + (m-1) a^v})``.
    """
    mu = Coweight._raw(tuple(mu))
    av = ct.simple_coroot(a)
    k = ct.pairing(ct.simple_root(a), mu)
    vv = V - VINV
    out: dict = {}

    def add(nu, c):
        out[nu] = out.get(nu, ZERO) + c

    if k == 0:
        add(mu, V)
    elif k > 0:
        add(mu - av * k, V)
        for j in range(1, k + 1):
            add(mu - av * j, -vv)
    else:
        m = -k
        add(mu + av * m, V)
        for j in range(m):
            add(mu + av * j, vv)
    return {nu: c for nu, c in out.items() if c}


def dlApplyFinite(ct, a: int, f: dict) -> dict:
    """``T_a`` on a finite Laurent polynomial ``{coweight: VCoeff}`` (closed form)."""
    out: dict = {}
    for mu, c in f.items():
        for nu, d in dlMonomial(ct, a, mu).items():
            out[nu] = out.get(nu, ZERO) + c * d
    return {nu: c for nu, c in out.items() if c}


# ---------------------------------------------------------------------------
# Poincare data


@dataclass(frozen=True)
class PoincareData:
    finite: tuple          # W_o(t) coefficients, t = v^2
    exponents: tuple       # m_1 <= ... <= m_l
    numerator: tuple       # W_o(t)
    denominator: tuple     # prod (1 - t^{m_i})

    def series(self, N: int) -> list:
        """Coefficients of ``W(t) = W_o(t) / prod(1 - t^{m_i})`` through ``t^N``."""
        out = [0] * (N + 1)
        for i, c in enumerate(self.numerator):
            if i <= N:
                out[i] = c
        for m in self.exponents:
            # divide by (1 - t^m): running sum with stride m
            for i in range(m, N + 1):
                out[i] += out[i - m]
        return out

    def as_vcoeff(self) -> VCoeff:
        """``W(v^2)`` as an exact rational function of ``v``."""
        num = VCoeff.from_dict({2 * i: c for i, c in enumerate(self.numerator) if c})
        den = VCoeff.from_dict({2 * i: c for i, c in enumerate(self.denominator) if c})
        return num / den


def _polymul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _divide_exact(p, q):
    p = list(p)
    out = [0] * (len(p) - len(q) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = p[i + len(q) - 1]
        if c % q[-1]:
            return None
        c //= q[-1]
        out[i] = c
        for j, y in enumerate(q):
            p[i + j] -= c * y
    if any(p):
        return None
    return out


@lru_cache(maxsize=None)
def _poincare(name: str) -> PoincareData:
    from .cartan import cartan_type
    ct = cartan_type(name)
    elems = W.bfsEnumerate(ct, 10 ** 6, gens=list(range(1, ct.rank + 1)))
    top = max(n for _, n in elems)
    fin = [0] * (top + 1)
    for _, n in elems:
        fin[n] += 1
    # W_o(t) (1 - t)^l = prod (1 - t^{m_i + 1}); peel factors smallest degree first
    cur = list(fin)
    for _ in range(ct.rank):
        cur = _polymul(cur, [1, -1])
    exps = []
    for _ in range(ct.rank):
        for d in range(2, len(cur)):
            f = [1] + [0] * (d - 1) + [-1]
            q = _divide_exact(cur, f)
            if q is not None:
                exps.append(d - 1)
                cur = q
                break
        else:
            raise ArithmeticError("Poincare polynomial does not factor into (1 - t^d)")
    while len(cur) > 1 and cur[-1] == 0:
        cur.pop()
    if cur != [1]:
        raise ArithmeticError("Poincare polynomial factorization left a remainder")
    den = [1]
    for m in exps:
        den = _polymul(den, [1] + [0] * (m - 1) + [-1])
    return PoincareData(tuple(fin), tuple(sorted(exps)), tuple(fin), tuple(den))


def poincareData(ct: AffineCartanData) -> PoincareData:
    return _poincare(ct.name)


def validatePoincare(ct: AffineCartanData, L: int) -> tuple[list, list]:
    """``(BFS shell counts, closed-form series)`` through length ``L``."""
    return W.shellCounts(ct, L), poincareData(ct).series(L)


# ---------------------------------------------------------------------------
# symmetrizer


def _vc_numer(ct, gamma):
    """``v c(gamma)`` as ``(direction coords, numerator)`` for the dense kernel."""
    n = ct.coroot_coords(gamma)
    if all(x <= 0 for x in n):
        # gamma < 0: (1 - t e^{gamma}) / (1 - e^{gamma}), Y = e^{gamma}
        return [-x for x in n], [{0: 1}, {1: -1}]
    # gamma > 0: Y = e^{-gamma}: (Y - t) / (Y - 1) = (t - Y)/(1 - Y)
    return n, [{1: 1}, {0: -1}]


def _vb_numer(ct, gamma):
    """``v b(gamma) = (t - 1)/(1 - e^gamma)``."""
    n = ct.coroot_coords(gamma)
    if all(x <= 0 for x in n):
        return [-x for x in n], [{1: 1, 0: -1}]
    # Y = e^{-gamma}: (t - 1)/(1 - 1/Y) = (1 - t) Y / (1 - Y)
    return n, [{}, {0: 1, 1: -1}]


@dataclass
class ShellExpansion:
    ct: AffineCartanData
    L: int
    depth: int
    tmax: int
    C: dict                      # WeylElement -> Dense (z = v^2, anchor 0)
    audit: list                  # per shell: {"shell", "min_depth", "min_vdeg"}
    stabilized: dict | None = None

    def coefficient(self, tau: W.WeylElement) -> Series:
        ct = self.ct
        ctx = TruncationContext(ct.zero(), self.depth, (0, 2 * self.tmax))
        d = self.C.get(tau)
        return Series(ct, ctx, d.to_terms(2) if d is not None else {}, check=False)

    def to_json(self) -> dict:
        C = []
        for tau in sorted(self.C, key=lambda x: (x.length, x.reduced_word)):
            C.append({"tau": list(tau.reduced_word), "series": self.coefficient(tau).to_json()})
        return {"L": self.L, "stabilized": self.stabilized, "C": C}


def _right_mult_generator(ct, B: dict, a: int, D: int, T: int) -> dict:
    """``sum_s B_s [s]`` times ``v T_a`` on the right."""
    s_a = W.simpleReflection(ct, a)
    av = ct.simple_coroot(a)
    out: dict = {}
    for sig, arr in B.items():
        g = sig.act(av)
        n, num = _vc_numer(ct, g)
        x = arr.mul_ratio(n, num)
        key = sig * s_a
        if key in out:
            out[key] += x
        else:
            out[key] = x
        n, num = _vb_numer(ct, g)
        y = arr.mul_ratio(n, num)
        if sig in out:
            out[sig] += y
        else:
            out[sig] = y
    return {k: v for k, v in out.items() if np.any(v.arr)}


def symmetrize(ct: AffineCartanData, L: int, D: int, tmax: int,
               keep: int | None = None) -> ShellExpansion:
    """Accumulate ``C_t = sum_{l(w) <= L} v^{l(w)} A_t(w)`` in the window
    (depth ``<= D``, ``v``-degree ``<= 2 tmax``).

    ``keep`` limits which ``t`` are stored (length cap); all are used in the
    recursion.  The audit records, per shell, the smallest depth and
    ``v``-degree of any contribution inside the window.
    """
    z = ct.zero()
    e = W.identity(ct)
    one = Dense.monomial(ct, z, D, 0, tmax)
    level = {e: {e: one}}
    C: dict = {e: one.copy()}
    audit = [{"shell": 0, "min_depth": 0, "min_vdeg": 0}]
    empty_run = 0
    stabilized = None
    for n in range(1, L + 1):
        nxt = {}
        for w, B in level.items():
            for a in range(1, ct.rank + 2):
                if w.has_right_descent(a):
                    continue
                x = w * W.simpleReflection(ct, a)
                if x in nxt:
                    continue
                x._len = n
                nxt[x] = _right_mult_generator(ct, B, a, D, tmax)
        md, mv = None, None
        for x, B in nxt.items():
            for sig, arr in B.items():
                arr.restrict_cells()
                d, zz = arr.support_summary()
                if d is None:
                    continue
                md = d if md is None else min(md, d)
                mv = 2 * zz if mv is None else min(mv, 2 * zz)
                if keep is None or sig.length <= keep:
                    if sig in C:
                        C[sig] += arr
                    else:
                        C[sig] = arr.copy()
        audit.append({"shell": n, "min_depth": md, "min_vdeg": mv})
        level = nxt
        if md is None:
            empty_run += 1
            if empty_run >= 2 and stabilized is None:
                stabilized = {"depth": D, "vmin": 0, "vmax": 2 * tmax}
                break
        else:
            empty_run = 0
    C = {k: v for k, v in C.items() if np.any(v.restrict_cells().arr)}
    return ShellExpansion(ct, L, D, tmax, C, audit, stabilized)


# ---------------------------------------------------------------------------
# proportionality


def dense_mul(a: Dense, b: Dense) -> Dense:
    """Product of two dense elements sharing ``D`` and the z-window (anchor adds)."""
    out = Dense(a.ct, a.anchor + b.anchor, a.D, a.zmin + b.zmin, a.zmax)
    if a.arr.dtype == object or b.arr.dtype == object:
        out._promote()
    b = b.copy().restrict_cells()
    for idx in zip(*np.nonzero(b.arr)):
        cell, j = idx[:-1], idx[-1]
        c = int(b.arr[idx])
        sh = a.box_shift(cell).zshift(b.zmin + int(j))
        out._guard(abs(c) + 1)
        out.arr += c * sh.arr
    return out


def dense_of_series(s: Series, tmax: int) -> Dense:
    ct = s.ct
    out = Dense(ct, s.ctx.anchor, s.ctx.depth, 0, tmax)
    for mu, c in s.terms.items():
        n = out.offset_of(mu)
        for k, x in c.laurent_terms().items():
            if k % 2 or k < 0:
                raise ValueError("expected a polynomial in v^2")
            if k // 2 <= tmax:
                out.arr[tuple(n) + (k // 2,)] += int(x)
    return out


@dataclass
class ProportionalityReport:
    ok: bool
    window: dict
    checked: list
    mismatches: list = field(default_factory=list)
    m_factor: Series | None = None
    m_invariant: bool | None = None


def checkProportionality(shells: ShellExpansion, cap: int = 4) -> ProportionalityReport:
    """Verify ``C_t Delta = C_1 Delta^t`` in the window for ``l(t) <= cap``."""
    ct = shells.ct
    D, T = shells.depth, shells.tmax
    if shells.stabilized is None:
        raise ValueError("shell expansion has not stabilized in its window")
    e = W.identity(ct)
    delta = deltaW_dense(e, D, T)
    C1 = shells.C[e]
    checked, bad = [], []
    for tau, Ct in sorted(shells.C.items(), key=lambda kv: (kv[0].length, kv[0].reduced_word)):
        if tau.length > cap:
            continue
        lhs = dense_mul(Ct, delta)
        rhs = dense_mul(C1, deltaW_dense(tau, D, T))
        if not lhs.equal(rhs, T):
            diff = (lhs.copy().restrict_cells().truncate_z(T).arr
                    - rhs.copy().restrict_cells().truncate_z(T).arr)
            where = [tuple(int(i) for i in ix[:-1]) for ix in zip(*np.nonzero(diff))][:5]
            bad.append({"tau": list(tau.reduced_word),
                        "coweights": [list(Ct.coweight_of(c)) for c in where]})
        checked.append(list(tau.reduced_word))
    # taus of length <= cap absent from C (zero in window) must have C_1 Delta^t = 0 too
    for tau, _ in W.bfsEnumerate(ct, cap):
        if tau not in shells.C:
            rhs = dense_mul(C1, deltaW_dense(tau, D, T))
            if np.any(rhs.copy().restrict_cells().truncate_z(T).arr):
                bad.append({"tau": list(tau.reduced_word), "coweights": ["C_t = 0 in window"]})
            checked.append(list(tau.reduced_word))
    gamma = shells.coefficient(e)
    dl = deltaW(e, D=D)
    m = mul(gamma, invertUnit(dl)).with_context(TruncationContext(ct.zero(), D, (0, 2 * T)))
    inv = True
    for mu in m.terms:
        if any(mu[1:-1]) or mu[-1]:
            inv = False
    for i in range(1, ct.rank + 2):
        if wAct(m, W.simpleReflection(ct, i)).terms != m.terms:
            inv = False
    return ProportionalityReport(not bad, {"depth": D, "vmin": 0, "vmax": 2 * T}, checked, bad,
                                 m, inv)


def rightEigenCheck(shells: ShellExpansion, a: int) -> bool:
    """``P T_a = v P`` coefficientwise: ``C_{s w_a} (s w_a)(v c(a)) + C_s s(v b(a)) = v^2 C_s``.

    Uses only products, so it is exact on the stabilized window.
    """
    ct = shells.ct
    s_a = W.simpleReflection(ct, a)
    av = ct.simple_coroot(a)
    D, T = shells.depth, shells.tmax
    keys = set(shells.C) | {k * s_a for k in shells.C}
    zero = Dense(ct, ct.zero(), D, 0, T)
    for sig in keys:
        x = sig * s_a
        Cx = shells.C.get(x, zero)
        Cs = shells.C.get(sig, zero)
        n, num = _vc_numer(ct, x.act(av))
        lhs = Cx.mul_ratio(n, num)
        n, num = _vb_numer(ct, sig.act(av))
        lhs += Cs.mul_ratio(n, num)
        rhs = Cs.zshift(1)
        if not lhs.equal(rhs, T):
            return False
    return True


def leftEigenCheck(f: Series, a: int) -> tuple[bool, int]:
    """``T_a P = v P`` in operator form, tested on ``f ~ P(e^lam)``.

    ``f`` is a W-invariant series anchored at ``lam`` (a Satake image). Along an
    ``a``-string the support of ``f`` runs from its top point ``t`` down to
    ``s_a t``, and ``T_a`` preserves each string, so on every string with
    ``s_a t`` inside the depth window the truncation is exact. Returns the
    verdict and the number of strings tested.
    """
    ct = f.ct
    lam = f.ctx.anchor
    D = f.ctx.depth
    av = ct.simple_coroot(a)
    alpha = ct.simple_root(a)
    g: dict = {}
    strings = set()
    for mu, c in f.terms.items():
        d = ct.depth(mu, lam)
        top = None
        for j in range(d + 1):
            nu = mu + av * j
            if ct.depth(nu, lam) < 0:
                break
            if ct.leq(nu, lam):
                top = nu
        if top is None:
            continue
        bottom = top - av * ct.pairing(alpha, top)
        if ct.depth(bottom, lam) > D:
            continue
        strings.add(top)
        g[mu] = c
    lhs = dlApplyFinite(ct, a, g)
    rhs = {mu: c * V for mu, c in g.items()}
    return lhs == rhs, len(strings)
