"""
The Bernstein-presented Hecke algebra: normal form ``sum c * Theta_lam T_w``.

Conventions (``q = v^{-2}``):

* ``(T_a + 1)(T_a - q) = 0``, so ``T_a^2 = (q - 1) T_a + q`` and
  ``T_a^{-1} = v^2 T_a + (v^2 - 1)``;
* ``T_a Theta_lam - Theta_{w_a lam} T_a = (q - 1) (Theta_lam - Theta_{w_a lam}) / (1 - Theta_{-a^v})``,
  a finite sum of ``|<a, lam>|`` thetas.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable

from . import weyl as W
from .cartan import AffineCartanData, Coweight
from .vcoeff import ONE, VCoeff

Q = VCoeff.monomial(-2)
QM1 = Q - ONE
V2 = VCoeff.monomial(2)


def _acc(out: dict, key, c):
    prev = out.get(key)
    s = c if prev is None else prev + c
    if s:
        out[key] = s
    elif prev is not None:
        del out[key]


class HeckeElement:
    """Finite sum ``sum coeff * Theta_lam T_w``; equality is equality of the maps."""

    __slots__ = ("ct", "terms")

    def __init__(self, ct: AffineCartanData, terms: dict | None = None):
        self.ct = ct
        out = {}
        for (lam, w), c in (terms or {}).items():
            if not isinstance(c, VCoeff):
                c = VCoeff.const(c)
            if c:
                out[(Coweight._raw(tuple(lam)), w)] = c
        self.terms = out

    # -- constructors ------------------------------------------------------
    @classmethod
    def theta(cls, ct, lam, coeff=ONE) -> "HeckeElement":
        return cls(ct, {(Coweight._raw(tuple(lam)), W.identity(ct)): coeff})

    @classmethod
    def T(cls, ct, w, coeff=ONE) -> "HeckeElement":
        if not isinstance(w, W.WeylElement):
            w = W.fromWord(ct, w)
        return cls(ct, {(ct.zero(), w): coeff})

    @classmethod
    def one(cls, ct) -> "HeckeElement":
        return cls.T(ct, W.identity(ct))

    @classmethod
    def Tinv(cls, ct, a: int) -> "HeckeElement":
        """``T_a^{-1} = v^2 T_a + (v^2 - 1)``."""
        s = W.simpleReflection(ct, a)
        z = ct.zero()
        return cls(ct, {(z, s): V2, (z, W.identity(ct)): V2 - ONE})

    # -- protocol ----------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, HeckeElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, c)
        return HeckeElement(self.ct, out)

    def __neg__(self):
        return HeckeElement(self.ct, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "HeckeElement":
        c = VCoeff.const(c)
        return HeckeElement(self.ct, {k: c * x for k, x in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, HeckeElement):
            return multiply(self, other)
        return self.scale(other)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (lam, w), c in self.sorted_items():
            parts.append(f"({c})*Theta{list(lam)}*T{list(w.reduced_word)}")
        return " + ".join(parts)

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: (tuple(kv[0][0]), kv[0][1].length,
                                                          kv[0][1].reduced_word))

    def to_json(self) -> list:
        return [{"theta": lam.to_json(), "t": list(w.reduced_word), "coeff": c.to_json()}
                for (lam, w), c in self.sorted_items()]

    @classmethod
    def from_json(cls, ct, obj) -> "HeckeElement":
        return cls(ct, {(Coweight.from_json(t["theta"]), W.fromWord(ct, t["t"])):
                        VCoeff.from_json(t["coeff"]) for t in obj})


# ---------------------------------------------------------------------------
# relations


def bernsteinCommute(ct: AffineCartanData, a: int, lam) -> HeckeElement:
    """``T_a Theta_lam - Theta_{w_a lam} T_a`` as a finite theta sum."""
    lam = Coweight._raw(tuple(lam))
    k = ct.pairing(ct.simple_root(a), lam)
    av = ct.simple_coroot(a)
    e = W.identity(ct)
    out: dict = {}
    if k > 0:
        for j in range(k):
            _acc(out, (lam - av * j, e), QM1)
    elif k < 0:
        for j in range(1, -k + 1):
            _acc(out, (lam + av * j, e), -QM1)
    return HeckeElement(ct, out)


def _bern_terms(ct, a, lam):
    return {l: c for (l, _), c in bernsteinCommute(ct, a, lam).terms.items()}


class _Tables:
    """Per-type memo tables for ``T_x T_a`` and ``T_w Theta_mu``."""

    def __init__(self, ct):
        self.ct = ct
        self.tt: dict = {}
        self.tth: dict = {}


_TABLES: dict = {}


def _tables(ct) -> _Tables:
    t = _TABLES.get(ct.name)
    if t is None:
        t = _TABLES[ct.name] = _Tables(ct)
    return t


def _T_times_simple(x: W.WeylElement, a: int) -> dict:
    """``T_x T_a`` as ``{w: coeff}``."""
    s = W.simpleReflection(x.ct, a)
    xs = x * s
    if not x.has_right_descent(a):
        return {xs: ONE}
    return {x: QM1, xs: Q}


def _simple_times_T(a: int, x: W.WeylElement) -> dict:
    s = W.simpleReflection(x.ct, a)
    sx = s * x
    if not x.has_left_descent(a):
        return {sx: ONE}
    return {x: QM1, sx: Q}


def _T_times_T(x: W.WeylElement, u: W.WeylElement) -> dict:
    tab = _tables(x.ct).tt
    key = (x, u)
    hit = tab.get(key)
    if hit is not None:
        return hit
    cur = {x: ONE}
    for a in u.reduced_word:
        nxt: dict = {}
        for y, c in cur.items():
            for z, d in _T_times_simple(y, a).items():
                _acc(nxt, z, c * d)
        cur = nxt
    tab[key] = cur
    return cur


def _T_times_theta(w: W.WeylElement, mu: Coweight) -> dict:
    """``T_w Theta_mu`` as ``{(lam, x): coeff}`` (peels the first letter of ``w``)."""
    ct = w.ct
    tab = _tables(ct).tth
    key = (w, mu)
    hit = tab.get(key)
    if hit is not None:
        return hit
    if w.is_identity():
        res = {(mu, w): ONE}
    else:
        a = w.reduced_word[0]
        rest = W.simpleReflection(ct, a) * w
        inner = _T_times_theta(rest, mu)
        res = {}
        s = W.simpleReflection(ct, a)
        for (nu, x), c in inner.items():
            # T_a Theta_nu T_x = Theta_{s nu} T_a T_x + sum b_xi Theta_xi T_x
            snu = s.act(nu)
            for y, d in _simple_times_T(a, x).items():
                _acc(res, (snu, y), c * d)
            for xi, b in _bern_terms(ct, a, nu).items():
                _acc(res, (xi, x), c * b)
    tab[key] = res
    return res


def multiply(x: HeckeElement, y: HeckeElement) -> HeckeElement:
    """Normal form of ``x y``."""
    ct = x.ct
    out: dict = {}
    for (lam, w), c in x.terms.items():
        for (mu, u), d in y.terms.items():
            cd = c * d
            for (nu, z), e in _T_times_theta(w, mu).items():
                ce = cd * e
                for r, f in _T_times_T(z, u).items():
                    _acc(out, (lam + nu, r), ce * f)
    return HeckeElement(ct, out)


# ---------------------------------------------------------------------------
# grading


def grade(x: HeckeElement) -> dict:
    """Split by the ``d``-coordinate of the theta part."""
    out: dict = {}
    for (lam, w), c in x.terms.items():
        out.setdefault(lam[-1], {})[(lam, w)] = c
    return {k: HeckeElement(x.ct, v) for k, v in sorted(out.items())}


def _monomial_in_hplus(lam: Coweight) -> bool:
    k = lam[-1]
    if k > 0:
        return True
    return k == 0 and not any(lam[1:-1])


def isInHPlus(x: HeckeElement) -> bool:
    return all(_monomial_in_hplus(lam) for lam, _ in x.terms)


# ---------------------------------------------------------------------------
# theta construction


class ThetaBudgetExceeded(RuntimeError):
    def __init__(self, path):
        super().__init__(f"theta construction exceeded its budget; chamber path {path}")
        self.path = path


@dataclass
class ThetaResult:
    mu: Coweight
    element: HeckeElement
    tree: dict
    verified: bool
    choices: list = field(default_factory=list)   # (mu, a) in construction order

    def path_signature(self) -> tuple:
        return tuple((tuple(m), a) for m, a in self.choices)


def _choose(cands: list, policy: str, rng: random.Random) -> int:
    if policy == "smallest":
        return cands[0]
    if policy == "largest":
        return cands[-1]
    if policy == "random":
        return rng.choice(cands)
    raise ValueError(f"unknown policy {policy!r}")


def thetaConstruct(ct: AffineCartanData, mu, policy: str = "smallest", seed: int = 0,
                   budget: int = 5000, first: int | None = None) -> ThetaResult:
    """Build ``theta_mu`` from dominant thetas by the induction
    ``theta_mu = [T_a theta_nu - (q - 1)(theta_nu + ... + theta_{nu - (d-1) a^v})] T_a^{-1}``,
    ``nu = w_a mu``, ``d = -<a, mu> > 0``; then reduce to normal form and
    compare with the primitive ``Theta_mu``.

    ``policy`` picks the simple root among those with ``<a, mu> < 0``;
    ``first`` forces the choice at ``mu`` itself.
    """
    mu = Coweight._raw(tuple(mu))
    if not ct.inTitsCone(mu):
        raise ValueError(f"{mu!r} is not in the Tits cone")
    rng = random.Random(seed)
    memo: dict = {}
    choices: list = []
    steps = [0]
    stack: list = []

    def build(m: Coweight):
        if m in memo:
            return memo[m]
        steps[0] += 1
        if steps[0] > budget:
            raise ThetaBudgetExceeded(list(stack))
        if ct.isDominant(m):
            res = (HeckeElement.theta(ct, m), {"theta": m.to_json()})
            memo[m] = res
            return res
        pairs = ct.simple_pairings(m)
        cands = [i + 1 for i, p in enumerate(pairs) if p < 0]
        if first is not None and m == mu:
            if first not in cands:
                raise ValueError(f"simple root {first} does not lower {mu!r}")
            a = first
        else:
            a = _choose(cands, policy, rng)
        choices.append((m, a))
        stack.append((list(m), a))
        s = W.simpleReflection(ct, a)
        nu = s.act(m)
        d = -pairs[a - 1]
        av = ct.simple_coroot(a)
        tnu, tree_nu = build(nu)
        corr = HeckeElement(ct, {})
        kids = []
        for j in range(d):
            el, tr = build(nu - av * j)
            corr = corr + el
            kids.append(tr)
        Ta = HeckeElement.T(ct, s)
        Tai = HeckeElement.Tinv(ct, a)
        el = (Ta * tnu - corr.scale(QM1)) * Tai
        stack.pop()
        tree = {"mu": m.to_json(), "a": a, "conj": tree_nu, "correction": kids}
        memo[m] = (el, tree)
        return memo[m]

    el, tree = build(mu)
    ok = el == HeckeElement.theta(ct, mu)
    return ThetaResult(mu, el, tree, ok, choices)


def thetaPaths(ct: AffineCartanData, mu, seeds: Iterable[int] = (0, 1)) -> list[ThetaResult]:
    """Constructions of ``theta_mu`` along every admissible first choice and
    several policies, one result per distinct choice sequence."""
    mu = Coweight._raw(tuple(mu))
    firsts = [i + 1 for i, p in enumerate(ct.simple_pairings(mu)) if p < 0] or [None]
    runs = [(p, 0) for p in ("smallest", "largest")] + [("random", s) for s in seeds]
    seen: dict = {}
    for f in firsts:
        for pol, s in runs:
            r = thetaConstruct(ct, mu, pol, seed=s, first=f)
            seen.setdefault(r.path_signature(), r)
    return list(seen.values())


def sampleMultiPath(ct: AffineCartanData, rng: random.Random, maxlen: int = 4,
                    tries: int = 500) -> Coweight:
    """A Tits-cone coweight with at least two simple roots lowering it.

    ``<a_i, w lam> < 0`` exactly when ``w_i`` is a left descent of ``w`` (for
    regular ``lam``), so regular dominant weights moved by random words hit
    the target far more often than arbitrary dominant ones.
    """
    for _ in range(tries):
        k = rng.randint(ct.rank + 1, ct.rank + 3)
        fin = [rng.randint(1, 2) for _ in range(ct.rank)]
        lam = ct.coweight(rng.randint(-1, 1), fin, k)
        if not all(p > 0 for p in ct.simple_pairings(lam)):
            continue
        mu = randomWeyl(ct, rng, maxlen).act(lam)
        if sum(p < 0 for p in ct.simple_pairings(mu)) >= 2:
            return mu
    raise ValueError(f"no coweight with two descents found in type {ct.name}")


# ---------------------------------------------------------------------------
# random elements (tests and the identities command)


def randomCoweight(ct, rng: random.Random, level: int | None = None, spread: int = 2) -> Coweight:
    fin = [rng.randint(-spread, spread) for _ in range(ct.rank)]
    c = rng.randint(-1, 1)
    d = rng.randint(0, 2) if level is None else level
    return ct.coweight(c, fin, d)


def randomWeyl(ct, rng: random.Random, maxlen: int = 3) -> W.WeylElement:
    word = [rng.randint(1, ct.rank + 1) for _ in range(rng.randint(0, maxlen))]
    return W.fromWord(ct, word)


def randomElement(ct, rng: random.Random, nterms: int = 2, hplus: bool = False,
                  spread: int = 2, maxlen: int = 2) -> HeckeElement:
    out: dict = {}
    for _ in range(nterms):
        if hplus and rng.random() < 0.3:
            lam = ct.coweight(rng.randint(-1, 1), [0] * ct.rank, 0)
        else:
            lam = randomCoweight(ct, rng, level=rng.randint(1, 2) if hplus else None,
                                 spread=spread)
        w = randomWeyl(ct, rng, maxlen)
        c = VCoeff.monomial(rng.choice([-2, 0, 2])) * rng.choice([-2, -1, 1, 2])
        _acc(out, (lam, w), c)
    return HeckeElement(ct, out)


def sampleTitsCone(ct, rng: random.Random, maxlen: int = 3, level: int | None = None) -> Coweight:
    """``w lam`` for a random dominant ``lam`` of positive level and a short ``w``."""
    k = level if level is not None else rng.randint(1, 3)
    while True:
        fin = [rng.randint(0, 2) for _ in range(ct.rank)]
        lam = ct.coweight(rng.randint(-1, 1), fin, k)
        if ct.isDominant(lam):
            break
    return randomWeyl(ct, rng, maxlen).act(lam)
