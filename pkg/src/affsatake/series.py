"""
Truncated elements of the completed coweight group algebra over Q(v).

A :class:`Series` is a finite map from coweights to :class:`VCoeff`
together with a :class:`TruncationContext`: every exponent ``mu`` satisfies
``mu <= anchor`` in dominance order and ``ht(anchor - mu) <= depth``.
Products keep exactly those terms that are determined by the factors'
windows, so truncated arithmetic is exact inside the window.

Factor conventions (``X = e^gamma`` for a real coroot ``gamma``):

* ``expandC(gamma)``  = (1 - v^2 e^{-gamma}) / (1 - e^{-gamma})   (Delta factor)
* ``expandCT(gamma)`` = (v X - v^{-1}) / (X - 1) = v^{-1} expandC(-gamma)
* ``expandB(gamma)``  = (v - v^{-1}) / (1 - X)

all expanded in nonpositive multiples of the positive coroot ``|gamma|``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cartan import AffineCartanData, Coweight, CorootAff
from .vcoeff import ONE, V, V2, VINV, ZERO, VCoeff
from . import weyl as W


@dataclass(frozen=True)
class TruncationContext:
    anchor: Coweight
    depth: int
    vwindow: tuple | None = None

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("depth must be nonnegative")
        object.__setattr__(self, "anchor", Coweight._raw(tuple(self.anchor)))

    def compose(self, other: "TruncationContext") -> "TruncationContext":
        vw = self.vwindow
        if other.vwindow is not None:
            vw = other.vwindow if vw is None else (max(vw[0], other.vwindow[0]),
                                                   min(vw[1], other.vwindow[1]))
        return TruncationContext(self.anchor + other.anchor, min(self.depth, other.depth), vw)

    def with_depth(self, D: int) -> "TruncationContext":
        return TruncationContext(self.anchor, D, self.vwindow)

    def to_json(self):
        out = {"anchor": self.anchor.to_json(), "depth": self.depth}
        if self.vwindow is not None:
            out["vwindow"] = list(self.vwindow)
        return out


def _clip(c: VCoeff, vw) -> VCoeff:
    if vw is None or not c:
        return c
    return c.truncate(vw[1], vw[0])


class Series:
    """Exact truncated series; immutable by convention."""

    __slots__ = ("ct", "ctx", "terms")

    def __init__(self, ct: AffineCartanData, ctx: TruncationContext, terms: dict | None = None,
                 check: bool = True):
        self.ct = ct
        self.ctx = ctx
        out = {}
        if terms:
            a, D, vw = ctx.anchor, ctx.depth, ctx.vwindow
            for mu, c in terms.items():
                if not isinstance(c, VCoeff):
                    c = VCoeff.const(c)
                c = _clip(c, vw)
                if not c:
                    continue
                mu = Coweight._raw(tuple(mu))
                if check:
                    ok, n = ct.dominanceLeq(mu, a)
                    if not ok:
                        raise ValueError(f"exponent {mu!r} is not below the anchor {a!r}")
                    if sum(n) > D:
                        continue
                out[mu] = c
        self.terms = out

    # -- constructors ------------------------------------------------------
    @classmethod
    def one(cls, ct, ctx: TruncationContext | None = None) -> "Series":
        if ctx is None:
            ctx = TruncationContext(ct.zero(), 0)
        return cls(ct, ctx, {ct.zero(): ONE})

    @classmethod
    def monomial(cls, ct, mu, ctx: TruncationContext | None = None, coeff=ONE) -> "Series":
        mu = Coweight._raw(tuple(mu))
        if ctx is None:
            ctx = TruncationContext(mu, 0)
        return cls(ct, ctx, {mu: coeff})

    @classmethod
    def zero(cls, ct, ctx) -> "Series":
        return cls(ct, ctx, {})

    # -- basic protocol ----------------------------------------------------
    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def coeff(self, mu) -> VCoeff:
        return self.terms.get(Coweight._raw(tuple(mu)), ZERO)

    def is_zero(self) -> bool:
        return not self.terms

    def depth_of(self, mu) -> int:
        return self.ct.depth(mu, self.ctx.anchor)

    def __eq__(self, other):
        if isinstance(other, Series):
            return self.terms == other.terms
        if isinstance(other, (int, VCoeff)):
            c = VCoeff.const(other)
            z = self.ct.zero()
            return self.terms == ({z: c} if c else {})
        return NotImplemented

    def __repr__(self):
        body = " + ".join(f"({c})e^{tuple(mu)}" for mu, c in self.sorted_items()[:12])
        more = "" if len(self.terms) <= 12 else f" + ... [{len(self.terms)} terms]"
        return f"Series[{self.ctx.depth}]({body or 0}{more})"

    def sorted_items(self):
        """Terms sorted by depth below the anchor, then lexicographically."""
        a = self.ctx.anchor
        return sorted(self.terms.items(), key=lambda kv: (self.ct.depth(kv[0], a), tuple(kv[0])))

    def equal_within(self, other: "Series", D: int) -> bool:
        return self.truncate(D).terms == other.truncate(D).terms

    def diff_within(self, other: "Series", D: int) -> list:
        a, b = self.truncate(D).terms, other.truncate(D).terms
        return sorted(mu for mu in set(a) | set(b) if a.get(mu, ZERO) != b.get(mu, ZERO))

    # -- ring operations ---------------------------------------------------
    def _same(self, other):
        if other.ctx.anchor != self.ctx.anchor:
            raise ValueError("add: incompatible anchors")

    def __add__(self, other: "Series") -> "Series":
        if not isinstance(other, Series):
            return self + Series(self.ct, self.ctx, {self.ct.zero(): VCoeff.const(other)})
        self._same(other)
        ctx = TruncationContext(self.ctx.anchor, min(self.ctx.depth, other.ctx.depth),
                                self.ctx.compose(other.ctx).vwindow)
        out = dict(self.terms)
        for mu, c in other.terms.items():
            out[mu] = out.get(mu, ZERO) + c
        return Series(self.ct, ctx, out)

    def __neg__(self):
        return Series(self.ct, self.ctx, {mu: -c for mu, c in self.terms.items()}, check=False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Series":
        c = VCoeff.const(c)
        return Series(self.ct, self.ctx, {mu: c * x for mu, x in self.terms.items()}, check=False)

    def shift(self, lam) -> "Series":
        """Multiply by ``e^lam`` (moves the anchor)."""
        lam = Coweight._raw(tuple(lam))
        ctx = TruncationContext(self.ctx.anchor + lam, self.ctx.depth, self.ctx.vwindow)
        return Series(self.ct, ctx, {mu + lam: c for mu, c in self.terms.items()}, check=False)

    def __mul__(self, other):
        if not isinstance(other, Series):
            return self.scale(other)
        return mul(self, other)

    __rmul__ = __mul__

    def truncate(self, D: int) -> "Series":
        ctx = self.ctx.with_depth(min(D, self.ctx.depth))
        a = ctx.anchor
        return Series(self.ct, ctx, {mu: c for mu, c in self.terms.items()
                                     if self.ct.depth(mu, a) <= ctx.depth}, check=False)

    def with_context(self, ctx: TruncationContext) -> "Series":
        return Series(self.ct, ctx, self.terms)

    # -- misc --------------------------------------------------------------
    def min_depth(self) -> int | None:
        if not self.terms:
            return None
        return min(self.depth_of(mu) for mu in self.terms)

    def is_v_finite(self) -> bool:
        return all(c.is_laurent() for c in self.terms.values())

    def to_json(self) -> dict:
        return {"anchor": self.ctx.anchor.to_json(), "depth": self.ctx.depth,
                "terms": [{"cw": mu.to_json(), "coeff": c.to_json()}
                          for mu, c in self.sorted_items()]}

    @classmethod
    def from_json(cls, ct, obj) -> "Series":
        ctx = TruncationContext(Coweight.from_json(obj["anchor"]), int(obj["depth"]))
        terms = {Coweight.from_json(t["cw"]): VCoeff.from_json(t["coeff"]) for t in obj["terms"]}
        return cls(ct, ctx, terms)


def mul(f: Series, g: Series) -> Series:
    ct = f.ct
    ctx = f.ctx.compose(g.ctx)
    D = ctx.depth
    fa, ga = f.ctx.anchor, g.ctx.anchor
    fl = sorted(((ct.depth(mu, fa), mu, c) for mu, c in f.terms.items()), key=lambda t: t[0])
    gl = sorted(((ct.depth(mu, ga), mu, c) for mu, c in g.terms.items()), key=lambda t: t[0])
    out: dict = {}
    for d1, m1, c1 in fl:
        if d1 > D:
            break
        for d2, m2, c2 in gl:
            if d1 + d2 > D:
                break
            k = tuple.__new__(Coweight, [x + y for x, y in zip(m1, m2)])
            p = c1 * c2
            prev = out.get(k)
            out[k] = p if prev is None else prev + p
    return Series(ct, ctx, out, check=False)._clean()


def _clean(self: Series) -> Series:
    vw = self.ctx.vwindow
    self.terms = {mu: _clip(c, vw) for mu, c in self.terms.items()}
    self.terms = {mu: c for mu, c in self.terms.items() if c}
    return self


Series._clean = _clean


def add(f: Series, g: Series) -> Series:
    return f + g


# ---------------------------------------------------------------------------
# action of W


def wAct(f: Series, w: W.WeylElement, report: bool = False):
    """Apply ``e^mu -> e^{w mu}``; terms pushed past the depth are dropped.

    With ``report=True`` also returns the depth-safe bound: the depth minus
    the largest upward shift ``depth(mu) - depth(w mu)`` over the support.
    The bound certifies the image only when ``f`` is a genuinely finite
    element fully inside its window; for a truncation of an infinite
    series terms beyond the window can move into it.
    """
    ct = f.ct
    for mu in f.terms:
        if not ct.inTitsCone(mu):
            raise ValueError(f"support coweight {mu!r} lies outside the Tits cone")
    a = f.ctx.anchor
    D = f.ctx.depth
    out = {}
    shift = 0
    for mu, c in f.terms.items():
        nu = w.act(mu)
        ok, n = ct.dominanceLeq(nu, a)
        if not ok:
            raise ValueError(f"image {nu!r} escapes the anchor {a!r}")
        dn = sum(n)
        shift = max(shift, ct.depth(mu, a) - dn)
        if dn <= D:
            out[nu] = out.get(nu, ZERO) + c
    res = Series(ct, f.ctx, out, check=False)._clean()
    if report:
        return res, max(D - shift, 0)
    return res


# ---------------------------------------------------------------------------
# factor expansions


def _positive_part(ct, gamma: Sequence[int]):
    """``(sign, beta)`` with ``gamma = sign * beta`` and ``beta`` a positive coroot."""
    g = Coweight._raw(tuple(gamma))
    n = ct.coroot_coords(g)
    if n is None or not any(n):
        raise ValueError(f"{gamma!r} is not a nonzero coroot")
    if all(x >= 0 for x in n):
        return 1, g
    if all(x <= 0 for x in n):
        return -1, -g
    raise ValueError(f"{gamma!r} is neither positive nor negative")


def _as_coweight(ct, c) -> Coweight:
    if isinstance(c, CorootAff):
        return c.as_coweight()
    c = tuple(c)
    if len(c) == ct.rank + 1:  # CorootAff-shaped tuple
        return CorootAff(c[:-1], c[-1]).as_coweight()
    return Coweight._raw(c)


def geometric_ratio(numer: Sequence[VCoeff], K: int) -> list:
    """Coefficients ``s_0..s_K`` of ``N(X)/(1-X)`` with ``N = sum numer[k] X^k``.

    Certified by checking ``(1 - X) * s == N`` through degree ``K``.
    """
    s = []
    acc = ZERO
    for k in range(K + 1):
        if k < len(numer):
            acc = acc + numer[k]
        s.append(acc)
    # certificate
    for k in range(K + 1):
        lhs = s[k] - (s[k - 1] if k else ZERO)
        rhs = numer[k] if k < len(numer) else ZERO
        if lhs != rhs:  # pragma: no cover - arithmetic failure
            raise AssertionError("geometric expansion failed its certificate")
    return s


def _string_series(ct, beta: Coweight, coeffs: Sequence[VCoeff], ctx: TruncationContext,
                   anchor_shift=None) -> Series:
    """``sum_k coeffs[k] e^{-k beta}`` placed in a context anchored at 0."""
    h = ct.height(beta)
    terms = {}
    z = ct.zero()
    for k, c in enumerate(coeffs):
        if k * h > ctx.depth:
            break
        if c:
            terms[z - beta * k] = c
    return Series(ct, TruncationContext(z, ctx.depth, ctx.vwindow), terms, check=False)._clean()


def _ctx(ct, ctx, D):
    if ctx is None:
        if D is None:
            raise ValueError("a context or depth is required")
        return TruncationContext(ct.zero(), D)
    return ctx


def expandC(ct, gamma, ctx: TruncationContext | None = None, D: int | None = None) -> Series:
    """``(1 - v^2 e^{-gamma}) / (1 - e^{-gamma})`` expanded in powers of ``e^{-|gamma|}``.

    For ``gamma > 0`` (``X = e^{-gamma}``): numerator ``1 - v^2 X``.
    For ``gamma < 0`` (``X = e^{gamma}``): the ratio is rewritten as
    ``(v^2 - X) / (1 - X)``.  Both go through :func:`geometric_ratio`.
    """
    ctx = _ctx(ct, ctx, D)
    sign, beta = _positive_part(ct, _as_coweight(ct, gamma))
    K = ctx.depth // ct.height(beta)
    numer = [ONE, -V2] if sign > 0 else [V2, -ONE]
    return _string_series(ct, beta, geometric_ratio(numer, K), ctx)


def expandCT(ct, gamma, ctx: TruncationContext | None = None, D: int | None = None) -> Series:
    """Demazure-Lusztig normalization ``(v X - v^{-1}) / (X - 1)``, ``X = e^gamma``."""
    ctx = _ctx(ct, ctx, D)
    sign, beta = _positive_part(ct, _as_coweight(ct, gamma))
    K = ctx.depth // ct.height(beta)
    # gamma > 0: Y = e^{-gamma} = X^{-1}: (v - v^{-1} Y)/(1 - Y)
    # gamma < 0: Y = e^{gamma} = X:       (v^{-1} - v Y)/(1 - Y)
    numer = [V, -VINV] if sign > 0 else [VINV, -V]
    return _string_series(ct, beta, geometric_ratio(numer, K), ctx)


def expandB(ct, gamma, ctx: TruncationContext | None = None, D: int | None = None) -> Series:
    """``(v - v^{-1}) / (1 - e^gamma)`` expanded in powers of ``e^{-|gamma|}``."""
    ctx = _ctx(ct, ctx, D)
    sign, beta = _positive_part(ct, _as_coweight(ct, gamma))
    K = ctx.depth // ct.height(beta)
    vv = V - VINV
    # gamma > 0: Y = e^{-gamma}: (v - v^{-1}) / (1 - 1/Y) = -(v - v^{-1}) Y / (1 - Y)
    numer = [ZERO, -vv] if sign > 0 else [vv]
    return _string_series(ct, beta, geometric_ratio(numer, K), ctx)


def certify_expandC(ct, gamma, f: Series) -> bool:
    """Mul-oracle: ``(1 - e^{-gamma}) f == 1 - v^2 e^{-gamma}`` inside the window.

    For negative ``gamma`` both sides are multiplied by ``-e^{gamma}`` so
    everything stays below the anchor: ``(1 - e^{gamma}) f = v^2 - e^{gamma}``.
    """
    sign, beta = _positive_part(ct, _as_coweight(ct, gamma))
    z = ct.zero()
    D = f.ctx.depth
    ctx = TruncationContext(z, D)
    lhs = mul(Series(ct, ctx, {z: ONE, z - beta: -ONE}), f)
    if sign > 0:
        rhs = Series(ct, ctx, {z: ONE, z - beta: -V2})
    else:
        rhs = Series(ct, ctx, {z: V2, z - beta: -ONE})
    return lhs.terms == rhs.terms


# ---------------------------------------------------------------------------
# Delta^w


_PRC_CACHE: dict = {}


def positive_real_coroots(ct, D: int) -> list[Coweight]:
    """Positive real coroots of height ``<= D`` in the fixed enumeration order."""
    key = (ct.name, D)
    hit = _PRC_CACHE.get(key)
    if hit is None:
        hit = [ct.corootOf(r).as_coweight() for r in ct.enumeratePositiveReal(heightBound=D)]
        _PRC_CACHE[key] = hit
    return hit


def delta_factors(w: W.WeylElement, D: int):
    """Real factors of ``Delta^w`` that matter at depth ``<= D``.

    Returns ``(coroots, deep_inverted)``: each entry is ``b`` or ``-b`` for a
    positive coroot ``b`` of height ``<= D``, according to the sign of
    ``w^{-1} b``; ``deep_inverted`` counts inverted factors of larger height,
    each contributing its constant term ``v^2``.
    """
    ct = w.ct
    winv = w.inverse()
    out = []
    inverted = 0
    for b in positive_real_coroots(ct, D):
        root = ct.rootOf((*b[1:-1], b[0]))
        if ct.is_positive_root(winv.act_root(root)):
            out.append(b)
        else:
            out.append(-b)
            inverted += 1
    return out, w.length - inverted


def deltaW(w: W.WeylElement, ctx: TruncationContext | None = None, D: int | None = None,
           log: list | None = None) -> Series:
    """``prod_{a in R+} c(w a^v)`` times the imaginary factors, truncated.

    Real factors are indexed by ``b = |w a^v|``: the factor is ``c(b)`` when
    ``w^{-1} b > 0`` and ``c(-b)`` otherwise.  A factor with ``ht(b) > D``
    only contributes its constant term, ``1`` or ``v^2``; the inverted ones
    among them are counted from ``l(w)``.  Imaginary factors
    ``c(n c)^l`` enter for ``n * ht(c) <= D``.
    """
    ct = w.ct
    ctx = _ctx(ct, ctx, D)
    D = ctx.depth
    z = ct.zero()
    zctx = TruncationContext(z, D, ctx.vwindow)
    factors, deep_inverted = delta_factors(w, D)
    acc = Series(ct, zctx, {z: V2 ** deep_inverted})
    for g in factors:
        acc = mul(acc, expandC(ct, g, ctx=zctx))
    n = 1
    while n * ct.coxeter_number <= D:
        f = imaginary_factor(ct, n, zctx)
        for _ in range(ct.rank):
            acc = mul(acc, f)
        n += 1
    if log is not None:
        log.append({"w": list(w.reduced_word), "depth": D, "shallow_factors": len(factors),
                    "deep_inverted": deep_inverted})
    return acc


def deltaW_dense(w: W.WeylElement, D: int, T: int, anchor=None):
    """Same product as :func:`deltaW` in the dense kernel (``z = v^2``, degrees ``<= T``)."""
    from ._dense import Dense
    ct = w.ct
    anchor = ct.zero() if anchor is None else anchor
    factors, deep = delta_factors(w, D)
    out = Dense.monomial(ct, anchor, D, 0, T, zdeg=deep)
    if deep > T:
        return out
    for g in factors:
        n = ct.coroot_coords(g)
        if all(x >= 0 for x in n):
            out = out.mul_ratio(n, [{0: 1}, {1: -1}])
        else:
            out = out.mul_ratio([-x for x in n], [{1: 1}, {0: -1}])
    return imaginary_dense(out)


def imaginary_dense(out):
    """Multiply a dense element by the imaginary factors ``c(n c)^l``."""
    ct = out.ct
    cc = ct.coroot_coords(ct.C)
    n = 1
    while n * ct.coxeter_number <= out.D:
        for _ in range(ct.rank):
            out = out.mul_ratio([n * x for x in cc], [{0: 1}, {1: -1}])
        n += 1
    return out


def imaginary_factor(ct, n: int, ctx: TruncationContext) -> Series:
    """``(1 - v^2 e^{-n c}) / (1 - e^{-n c})``."""
    beta = ct.C * n
    K = ctx.depth // ct.height(beta)
    return _string_series(ct, beta, geometric_ratio([ONE, -V2], K), ctx)


def delta(ct, D: int) -> Series:
    return deltaW(W.identity(ct), D=D)


# ---------------------------------------------------------------------------


def invertUnit(f: Series) -> Series:
    """Inverse of ``f`` within its window (anchor ``-anchor``).

    Solved depth by depth: ``g_top = 1/f_top`` and
    ``g_mu = -f_top^{-1} sum_{nu below top} f_nu g_{mu - (nu - top)}``.
    """
    ct = f.ct
    a = f.ctx.anchor
    top = f.coeff(a)
    if not top:
        raise ValueError("leading coefficient is zero; not a unit")
    inv_top = top.inverse()
    na = -a
    D = f.ctx.depth
    ctx = TruncationContext(na, D, f.ctx.vwindow)
    # work in offsets q = anchor - mu (positive cone)
    fq = {}
    for mu, c in f.terms.items():
        q = a - mu
        if any(q):
            fq[q] = (ct.height(q), c)
    g: dict = {ct.zero(): inv_top}
    by_depth: dict = {0: [ct.zero()]}
    seen = {ct.zero()}
    for d in range(1, D + 1):
        by_depth[d] = []
    # generate offsets reachable as sums of f offsets up to depth D
    stack = [ct.zero()]
    while stack:
        x = stack.pop()
        hx = ct.height(x) if any(x) else 0
        for q, (hq, _) in fq.items():
            if hx + hq <= D:
                y = x + q
                if y not in seen:
                    seen.add(y)
                    by_depth[hx + hq].append(y)
                    stack.append(y)
    for d in range(1, D + 1):
        for y in sorted(by_depth[d]):
            acc = ZERO
            for q, (hq, c) in fq.items():
                r = y - q
                gr = g.get(r)
                if gr is not None:
                    acc = acc + c * gr
            if acc:
                g[y] = -(inv_top * acc)
    terms = {na - q: c for q, c in g.items()}
    return Series(ct, ctx, terms, check=False)._clean()


def specialize(f: Series, q) -> dict:
    """Evaluate every coefficient at ``v^2 = 1/q``."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("q must be positive")
    out = {}
    for mu, c in f.sorted_items():
        if not c.is_laurent():
            raise ValueError(f"coefficient at {mu!r} is not v-finite: {c!r}")
        out[mu] = c.at_v2(1 / q)
    return out
