"""
Roots paired with a valuation: ``alpha = a + k pi`` with ``a`` a real affine
root and ``k`` an integer, acted on by ``W |x Lambda^v``.

Quadrants (upper index = sign of ``a``, lower index = valuation side):

    R_+^+ : a > 0, k >= 0        R_-^+ : a > 0, k < 0
    R_+^- : a < 0, k > 0         R_-^- : a < 0, k <= 0

``R_+ = R_+^+ u R_+^-`` and ``R_- = R_-^+ u R_-^-``.

Elements of the extended group are stored as ``pi^mu w``.  Written as
``w pi^lam`` one has ``lam = w^{-1} mu``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import weyl as W
from .cartan import AffineCartanData, Coweight, RootAff

QUADRANTS = ("R_+^+", "R_-^+", "R_+^-", "R_-^-")


@dataclass(frozen=True)
class AffinizedRoot:
    root: RootAff
    k: int

    def __post_init__(self):
        object.__setattr__(self, "root", RootAff._raw(tuple(int(x) for x in self.root)))
        if not any(self.root[:-1]):
            raise ValueError("the root part must be real")

    def __neg__(self):
        return AffinizedRoot(-self.root, -self.k)

    def to_json(self) -> dict:
        return {"root": self.root.to_json(), "k": self.k}

    @classmethod
    def from_json(cls, obj) -> "AffinizedRoot":
        return cls(RootAff.from_json(obj["root"]), int(obj["k"]))

    def sort_key(self):
        return (self.k, self.root[-1], tuple(self.root))


def classify(ct: AffineCartanData, alpha: AffinizedRoot) -> str:
    pos = ct.is_positive_root(alpha.root)
    k = alpha.k
    if pos:
        return "R_+^+" if k >= 0 else "R_-^+"
    return "R_+^-" if k > 0 else "R_-^-"


def isLowerPositive(ct, alpha: AffinizedRoot) -> bool:
    """Membership in ``R_+`` (valuation side)."""
    return classify(ct, alpha) in ("R_+^+", "R_+^-")


def actLeft(x: W.ExtendedElement, alpha: AffinizedRoot) -> AffinizedRoot:
    """``w pi^lam . (a + k pi) = w a + (<lam, a> + k) pi``; for ``x = pi^mu w``
    this is ``w a + (<mu, w a> + k) pi``."""
    ct = x.weyl.ct
    wa = x.weyl.act_root(alpha.root)
    return AffinizedRoot(wa, ct.pairing(wa, x.coweight) + alpha.k)


def actRight(alpha: AffinizedRoot, x: W.ExtendedElement) -> AffinizedRoot:
    """``(a + n pi) . pi^lam w = w^{-1} a + (n - <lam, a>) pi``."""
    ct = x.weyl.ct
    a = x.weyl.inverse().act_root(alpha.root)
    return AffinizedRoot(a, alpha.k - ct.pairing(alpha.root, x.coweight))


@lru_cache(maxsize=None)
def _reflection_cached(name: str, root: tuple) -> W.WeylElement:
    from .cartan import cartan_type
    ct = cartan_type(name)
    b = RootAff._raw(root)
    if not ct.is_positive_root(b):
        b = -b
    u = W.identity(ct)
    simple = {ct.simple_root(i): i for i in range(1, ct.rank + 2)}
    while b not in simple:
        for i in range(1, ct.rank + 2):
            if ct.pairing(b, ct.simple_coroot(i)) > 0:
                s = W.simpleReflection(ct, i)
                b = s.act_root(b)
                u = u * s
                break
        else:  # pragma: no cover - cannot happen for a positive real root
            raise ArithmeticError("root does not reduce to a simple root")
    return u * W.simpleReflection(ct, simple[b]) * u.inverse()


def weylReflection(ct: AffineCartanData, root) -> W.WeylElement:
    """The reflection ``w_a`` of ``W`` attached to a real affine root ``a``."""
    if not ct.is_real(root):
        raise ValueError(f"{root!r} is not a real root")
    return _reflection_cached(ct.name, tuple(root))


def reflectionElement(ct: AffineCartanData, alpha: AffinizedRoot,
                      mirror: bool = False) -> W.ExtendedElement:
    """``w_alpha = w_a pi^{n a^v}`` for ``alpha = a + n pi``, as ``pi^{-n a^v} w_a``.

    With ``mirror=True`` the translation sign is flipped, giving the element
    ``w_a pi^{-n a^v}`` that sends ``alpha`` to ``-alpha`` under both actions.
    """
    wa = weylReflection(ct, alpha.root)
    av = ct.corootOf(alpha.root).as_coweight()
    n = -alpha.k if mirror else alpha.k
    return W.ExtendedElement(wa, av * (-n))


def multSimpleRHS(ct: AffineCartanData, alpha: AffinizedRoot, lam, w: W.WeylElement):
    """``pi^{w_a lam - n a^v} w_a w``, the closed form of ``w_alpha pi^lam w``."""
    wa = weylReflection(ct, alpha.root)
    av = ct.corootOf(alpha.root).as_coweight()
    return W.ExtendedElement(wa * w, wa.act(lam) - av * alpha.k)


# ---------------------------------------------------------------------------
# inversion sets


def _split(x: W.ExtendedElement):
    """``x = pi^mu w = w pi^lam``; return ``(w, lam)``."""
    w = x.weyl
    return w, w.inverse().act(x.coweight)


def _require_tits(x: W.ExtendedElement):
    if not x.in_tits_part():
        raise ValueError("element is not in the Tits-cone part of the group")


def _roots_nonpositive_pairing(ct, lam: Coweight, w: W.WeylElement) -> list:
    """Positive real ``a`` with ``<lam, a> <= 0``, plus (level 0) those with ``w a < 0``.

    For level ``r > 0`` and ``a = beta + m delta``: ``<lam, a> = <lam_f, beta> + m r``,
    so ``m <= -<lam_f, beta> / r``.  For central ``lam`` every pairing is zero and
    only the finitely many inversions of ``w`` can contribute.
    """
    r = lam[-1]
    out = []
    if r > 0:
        l = ct.rank
        for beta in ct.all_finite_roots:
            p = ct.finite_pair(beta, lam[1:l + 1])
            mmin = 0 if beta in ct._positive_set else 1
            mmax = (-p) // r
            for m in range(mmin, mmax + 1):
                out.append(RootAff(beta, m))
        return out
    # central: collect inversions of w until the count equals l(w)
    need = w.length
    M = 0
    while True:
        cand = [a for a in ct.enumeratePositiveReal(max_m=M)
                if not ct.is_positive_root(w.act_root(a))]
        if len(cand) == need:
            return cand
        M += 1


@dataclass
class InversionReport:
    first: list          # x R_+^+ cap R_-, as images x . alpha
    second: list         # x R_-^- cap R_+, as images x . alpha
    cutoff: dict         # bounds used by the exact enumeration
    saturated: bool      # scan at doubled bounds found nothing new

    def to_json(self) -> dict:
        return {"first": [a.to_json() for a in self.first],
                "second": [a.to_json() for a in self.second],
                "sizes": [len(self.first), len(self.second)],
                "cutoff": self.cutoff, "saturated": self.saturated}


def inversionSets(x: W.ExtendedElement, check: bool = True) -> InversionReport:
    """Exact ``x R_+^+ cap R_-`` and ``x R_-^- cap R_+`` for ``x`` in the Tits part.

    ``alpha = a + k pi`` in ``R_+^+`` lands in ``R_-`` only if
    ``<lam, a> + k <= 0``, which bounds ``a`` (see
    :func:`_roots_nonpositive_pairing`) and then ``0 <= k <= -<lam, a>``.  The
    second set is the mirror image ``alpha -> -alpha``.
    """
    _require_tits(x)
    ct = x.weyl.ct
    w, lam = _split(x)
    cands = _roots_nonpositive_pairing(ct, lam, w)
    first, second = set(), set()
    kmax = 0
    mmax = 0
    for a in cands:
        p = ct.pairing(a, lam)
        mmax = max(mmax, a[-1])
        for k in range(0, -p + 1):
            kmax = max(kmax, k)
            al = AffinizedRoot(a, k)
            y = actLeft(x, al)
            if not isLowerPositive(ct, y):
                first.add(y)
            al2 = AffinizedRoot(-a, -k)
            y2 = actLeft(x, al2)
            if isLowerPositive(ct, y2):
                second.add(y2)
    cutoff = {"m": mmax, "k": kmax}
    sat = True
    if check:
        f2 = scanSet(x, "R_+^+", False, 2 * mmax + 2, 2 * kmax + 2)
        s2 = scanSet(x, "R_-^-", True, 2 * mmax + 2, 2 * kmax + 2)
        sat = f2 == first and s2 == second
    key = AffinizedRoot.sort_key
    return InversionReport(sorted(first, key=key), sorted(second, key=key), cutoff, sat)


def _all_real_roots(ct, M: int):
    for m in range(-M, M + 1):
        for beta in ct.all_finite_roots:
            yield RootAff(beta, m)


def scanSet(x: W.ExtendedElement, quadrant: str, target_positive: bool, M: int, K: int) -> set:
    """Brute force: images ``x . alpha`` of ``alpha`` in ``quadrant`` with ``|m| <= M``,
    ``|k| <= K`` landing in ``R_+`` (``target_positive``) or ``R_-``."""
    ct = x.weyl.ct
    out = set()
    for a in _all_real_roots(ct, M):
        for k in range(-K, K + 1):
            al = AffinizedRoot(a, k)
            if classify(ct, al) != quadrant:
                continue
            y = actLeft(x, al)
            if isLowerPositive(ct, y) == target_positive:
                out.add(y)
    return out


def printedSecondSetGrowth(x: W.ExtendedElement, bounds=(1, 2, 3, 4)) -> list:
    """Sizes of ``x R_-^+ cap R^+`` (``R^+``: ``a > 0``) over growing scan bounds.

    For ``x`` of positive level these grow without limit, which is why the
    finite counterpart ``x R_-^- cap R_+`` is the one enumerated.
    """
    ct = x.weyl.ct
    sizes = []
    for B in bounds:
        n = 0
        for a in _all_real_roots(ct, B):
            for k in range(-B, B + 1):
                al = AffinizedRoot(a, k)
                if classify(ct, al) != "R_-^+":
                    continue
                if ct.is_positive_root(actLeft(x, al).root):
                    n += 1
        sizes.append(n)
    return sizes


# ---------------------------------------------------------------------------
# the chain relation


def isNegativeFor(alpha: AffinizedRoot, x: W.ExtendedElement) -> bool:
    """``alpha`` is ``x``-negative when ``alpha . x`` lies in ``R_-``."""
    return not isLowerPositive(x.weyl.ct, actRight(alpha, x))


def _bounded_affinized(ct, bound: int):
    for a in _all_real_roots(ct, bound):
        for k in range(-bound, bound + 1):
            yield AffinizedRoot(a, k)


def lebSearch(x: W.ExtendedElement, maxChain: int, bound: int, mirror: bool = False) -> dict:
    """All ``y = w_{alpha_k} ... w_{alpha_1} x`` with ``k <= maxChain``, each
    ``alpha_j`` negative for the element it acts on, drawn from roots with
    ``|m| <= bound`` and ``|k| <= bound``.  Returns ``{y: chain}`` with one
    witness chain per ``y`` (shortest first)."""
    _require_tits(x)
    ct = x.weyl.ct
    pool = list(_bounded_affinized(ct, bound))
    found = {x: []}
    frontier = [x]
    for _ in range(maxChain):
        nxt = []
        for y in frontier:
            for al in pool:
                if not isNegativeFor(al, y):
                    continue
                z = reflectionElement(ct, al, mirror) * y
                if z not in found:
                    found[z] = found[y] + [al]
                    nxt.append(z)
        frontier = nxt
    return found


def replayChain(x: W.ExtendedElement, chain: list, mirror: bool = False) -> W.ExtendedElement:
    """Validate a witness chain and return its endpoint."""
    ct = x.weyl.ct
    y = x
    for al in chain:
        if not isNegativeFor(al, y):
            raise ValueError(f"{al!r} is not negative for the current element")
        y = reflectionElement(ct, al, mirror) * y
    return y


def antisymmetryProbe(found: dict, mirror: bool = False, bound: int = 1, maxChain: int = 1) -> list:
    """Pairs ``y != x`` with ``y <=_B x`` and ``x <=_B y`` (reported as data)."""
    items = list(found)
    if not items:
        return []
    x = items[0]
    out = []
    for y in items[1:]:
        back = lebSearch(y, maxChain, bound, mirror)
        if x in back:
            out.append((y, back[x]))
    return out


def randomExtended(ct: AffineCartanData, rng, maxlen: int = 3, spread: int = 2,
                   tits: bool = True) -> W.ExtendedElement:
    word = [rng.randint(1, ct.rank + 1) for _ in range(rng.randint(0, maxlen))]
    w = W.fromWord(ct, word)
    fin = [rng.randint(-spread, spread) for _ in range(ct.rank)]
    if tits:
        d = rng.randint(0, 2)
        if d == 0:
            fin = [0] * ct.rank
    else:
        d = rng.randint(-2, 2)
    mu = ct.coweight(rng.randint(-spread, spread), fin, d)
    return W.ExtendedElement(w, mu)


def randomAffinized(ct: AffineCartanData, rng, M: int = 2, K: int = 3) -> AffinizedRoot:
    beta = rng.choice(ct.all_finite_roots)
    return AffinizedRoot(RootAff(beta, rng.randint(-M, M)), rng.randint(-K, K))
