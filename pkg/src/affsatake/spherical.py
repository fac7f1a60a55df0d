"""
The spherical function attached to a dominant coweight ``lam``, by two
independent routes:

* disassembly: ``S(lam) = sum_{w in W^lam} J_w(lam)`` where ``J_w`` is built
  either from the recursion
  ``J_{w_a w'} = [(1 - v^2 X) J_{w'}^{w_a} + (v^2 - 1) J_{w'}] / (1 - X)``,
  ``X = e^{a^v}``, ``J_1 = v^{-2<rho,lam>} e^lam``, or from Demazure-Lusztig
  operators ``v^{-2<rho,lam>} v^{l(w)} T_w(e^lam)``;
* Macdonald: ``H_lam / H_0`` with
  ``H_lam = v^{-2<rho,lam>} / W_lam(v^2) * sum_w Delta^w e^{w lam}`` and
  ``H_0`` from its product formula.

Here ``v^{-2} = q`` so ``v^{-2<rho,lam>} = q^{<rho,lam>}``.  Everything is exact;
the Macdonald route runs in the dense kernel with ``t = v^2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import numpy as np

from . import weyl as W
from ._dense import Dense
from .cartan import AffineCartanData, Coweight
from .polyrep import dlWord, poincareData
from .series import Series, TruncationContext, deltaW_dense, positive_real_coroots
from .vcoeff import ONE, ZERO, VCoeff, format_laurent

T = VCoeff.monomial(2)


class VFinitenessError(ArithmeticError):
    pass


class ShellBudgetExceeded(RuntimeError):
    def __init__(self, msg, audit):
        super().__init__(msg)
        self.audit = audit


def _check_dominant(ct, lam):
    if not ct.isDominant(lam):
        raise ValueError(f"{tuple(lam)!r} is not dominant")


def _unit_position(av: Coweight) -> int:
    for p, x in enumerate(av):
        if abs(x) == 1:
            return p
    raise ValueError("coroot has no unit coordinate")  # pragma: no cover


def _acc(out, k, c):
    prev = out.get(k)
    s = c if prev is None else prev + c
    if s:
        out[k] = s
    elif prev is not None:
        del out[k]


def divide_one_minus_X(N: dict, av: Coweight) -> dict:
    """Exact quotient ``N / (1 - e^{av})`` for a finite ``N``.

    With ``Q (1 - X) = N`` one has ``Q_mu = sum_{j >= 0} N_{mu - j av}``; along each
    ``av``-string the total of ``N`` must vanish for ``Q`` to be finite.
    """
    p = _unit_position(av)
    sgn = av[p]
    strings: dict = {}
    for mu, c in N.items():
        t = mu[p] * sgn
        base = mu - av * t
        strings.setdefault(base, []).append((t, c))
    out: dict = {}
    for base, items in strings.items():
        items.sort(key=lambda x: x[0])
        run = ZERO
        prev_t = None
        for t, c in items:
            if prev_t is not None and run:
                for s in range(prev_t, t):
                    out[base + av * s] = run
            run = run + c
            prev_t = t
        if run:
            raise ArithmeticError("division by (1 - X) is not exact")
    return out


# ---------------------------------------------------------------------------
# J_w


_J_CACHE: dict = {}


def jRecursion(ct: AffineCartanData, lam, w: W.WeylElement) -> dict:
    """``J_w(lam)`` as a finite ``{coweight: VCoeff}`` (peels a left descent)."""
    lam = Coweight._raw(tuple(lam))
    key = (ct.name, lam, w)
    hit = _J_CACHE.get(key)
    if hit is not None:
        return hit
    if w.is_identity():
        res = {lam: VCoeff.monomial(-2 * ct.rhoPairing(lam))}
    else:
        a = w.reduced_word[0]
        s = W.simpleReflection(ct, a)
        prev = jRecursion(ct, lam, s * w)
        av = ct.simple_coroot(a)
        N: dict = {}
        for mu, c in prev.items():
            smu = s.act(mu)
            _acc(N, smu, c)
            _acc(N, smu + av, -(T * c))
            _acc(N, mu, (T - ONE) * c)
        res = divide_one_minus_X(N, av)
    _J_CACHE[key] = res
    return res


def jDL(ct: AffineCartanData, lam, w: W.WeylElement, extra: int = 0) -> dict:
    """``v^{-2<rho,lam>} v^{l(w)} T_w(e^lam)`` through the series operators.

    The window is ``depth(lam - w lam) + extra``; the supports of the partial
    products stay above ``w lam``, so nothing is lost to truncation.
    """
    lam = Coweight._raw(tuple(lam))
    D = ct.depth(w.act(lam), lam) + extra
    f = Series.monomial(ct, lam, TruncationContext(lam, D))
    g = dlWord(w, f)
    pre = VCoeff.monomial(w.length - 2 * ct.rhoPairing(lam))
    return {mu: pre * c for mu, c in g.terms.items()}


def jFunction(ct: AffineCartanData, w: W.WeylElement, lam, route: str = "recursion",
              depth: int | None = None) -> Series:
    """``J_w(lam)`` as a series anchored at ``lam``; ``route`` is ``recursion`` or ``dl``."""
    _check_dominant(ct, lam)
    lam = Coweight._raw(tuple(lam))
    if route == "recursion":
        terms = jRecursion(ct, lam, w)
    elif route == "dl":
        terms = jDL(ct, lam, w)
    else:
        raise ValueError(f"unknown route {route!r}")
    D = ct.depth(w.act(lam), lam) if depth is None else depth
    pre = VCoeff.monomial(2 * ct.rhoPairing(lam))
    for c in terms.values():
        x = pre * c
        if not x.is_laurent() or x.min_degree() < 0 or any(k % 2 for k in x.laurent_terms()):
            raise VFinitenessError("J_w is not a polynomial in v^2 after the prefactor")
    return Series(ct, TruncationContext(lam, D), terms)


def jFlat(ct, w: W.WeylElement, lam, route: str = "recursion") -> Series:
    """The normalization ``q^{l(w)} J_w = v^{-2 l(w)} J_w``."""
    return jFunction(ct, w, lam, route).scale(VCoeff.monomial(-2 * w.length))


def jFromFlat(flat: Series, w: W.WeylElement) -> Series:
    return flat.scale(VCoeff.monomial(2 * w.length))


# ---------------------------------------------------------------------------
# results


@dataclass
class SatakeResult:
    lam: Coweight
    q: object                    # "sym" or a Fraction
    series: Series
    route: str
    window: dict
    shellsUsed: int
    audit: list = field(default_factory=list)

    def __post_init__(self):
        self.check_invariants()

    def check_invariants(self):
        ct = self.series.ct
        lead = self.series.coeff(self.lam)
        if lead != VCoeff.monomial(-2 * ct.rhoPairing(self.lam)):
            raise AssertionError(f"leading coefficient {lead!r} is not q^<rho,lam>")
        for q in ([self.q] if self.q != "sym" else [2, 3, 4]):
            for mu, c in self.series.terms.items():
                if c.at_v2(Fraction(1, 1) / Fraction(q)) < 0:
                    raise AssertionError(f"negative coefficient at {mu!r} for q={q}")

    def values(self) -> dict:
        """Coefficients: VCoeff when symbolic, exact rationals otherwise."""
        if self.q == "sym":
            return dict(self.series.terms)
        q = Fraction(self.q)
        return {mu: c.at_v2(1 / q) for mu, c in self.series.terms.items()}

    def to_json(self) -> dict:
        vals = self.values()
        terms = []
        for mu, _ in self.series.sorted_items():
            c = vals[mu]
            if isinstance(c, VCoeff):
                lt = c.laurent_terms()
                lo = min(lt)
                s = format_laurent(lo, [lt.get(k, 0) for k in range(lo, max(lt) + 1)])
            else:
                s = str(c)
            terms.append({"cw": mu.to_json(), "coeff": s})
        return {"lambda": self.lam.to_json(), "q": "sym" if self.q == "sym" else str(self.q),
                "route": self.route, "window": self.window, "terms": terms}


def _qval(q):
    if q is None or q == "sym":
        return "sym"
    q = Fraction(q)
    if q <= 0:
        raise ValueError("q must be positive")
    return q


# ---------------------------------------------------------------------------
# disassembly


def satakeByDisassembly(ct: AffineCartanData, lam, depth: int, q=None, budget: int = 40,
                        route: str = "recursion") -> SatakeResult:
    """``sum_{w in W^lam} J_w(lam)`` truncated at ``depth``.

    Shells are added until two consecutive shells have no term inside the
    window.  The audit records each shell's minimum depth.
    """
    _check_dominant(ct, lam)
    lam = Coweight._raw(tuple(lam))
    ctx = TruncationContext(lam, depth)
    acc: dict = {}
    audit = []
    empty = 0
    used = 0
    stable = False
    for n, shell in W.cosetShells(ct, lam, budget):
        md = None
        for u in shell:
            terms = jRecursion(ct, lam, u) if route == "recursion" else jDL(ct, lam, u)
            for mu, c in terms.items():
                d = ct.depth(mu, lam)
                md = d if md is None else min(md, d)
                if d <= depth:
                    _acc(acc, mu, c)
        audit.append({"shell": n, "size": len(shell), "min_depth": md})
        used = n
        if md is None or md > depth:
            empty += 1
            if empty >= 2:
                stable = True
                break
        else:
            empty = 0
        if not shell:
            stable = True
            break
    if not stable:
        raise ShellBudgetExceeded(f"disassembly did not stabilize within {budget} shells", audit)
    s = Series(ct, ctx, acc)
    return SatakeResult(lam, _qval(q), s, "J-" + route, {"depth": depth}, used, audit)


# ---------------------------------------------------------------------------
# H_0 and the Macdonald route


def productFormula_dense(ct: AffineCartanData, D: int, T: int, reciprocal: bool = False) -> Dense:
    """``M = prod_j prod_{i >= 1} (1 - t^{m_j} e^{-ic}) / (1 - t^{m_j + 1} e^{-ic})``
    over the exponents ``m_j``, or ``1/M`` with ``reciprocal=True``."""
    return apply_product(Dense.monomial(ct, ct.zero(), D, 0, T), reciprocal)


def apply_product(out: Dense, reciprocal: bool = False) -> Dense:
    """Multiply a dense element by ``M`` (or ``1/M``)."""
    ct = out.ct
    pd = poincareData(ct)
    cc = ct.coroot_coords(ct.C)
    i = 1
    while i * ct.coxeter_number <= out.D:
        b = [i * x for x in cc]
        for m in pd.exponents:
            if reciprocal:
                out = out.mul_ratio(b, [{0: 1}, {m + 1: -1}], den_z=m)
            else:
                out = out.mul_ratio(b, [{0: 1}, {m: -1}], den_z=m + 1)
        i += 1
    return out


def _tdeg_top(d: Dense) -> int:
    top = 0
    for n in d.cells():
        nz = np.nonzero(d.arr[n])[0]
        if len(nz):
            top = max(top, int(nz[-1]))
    return top


def hZeroProduct(ct: AffineCartanData, D: int, reciprocal: bool = False) -> Series:
    """The product ``M`` (or ``1/M``) through depth ``D``; coefficients in ``v^2``.

    Every coefficient at depth ``d`` has ``t``-degree at most ``d``, so a
    ``t``-window of ``D + 1`` holds it exactly.
    """
    d = productFormula_dense(ct, D, D + 1, reciprocal).restrict_cells()
    if np.any(d.arr[..., D + 1]):  # pragma: no cover - degree bound violated
        raise ArithmeticError("t-window too small for the product formula")
    return Series(ct, TruncationContext(ct.zero(), D), d.to_terms(2), check=False)


def shallow_root_bound(ct: AffineCartanData, D: int) -> int:
    """Most distinct positive real coroots whose heights sum to at most ``D``."""
    tot, n = 0, 0
    for b in sorted(ct.height(x) for x in positive_real_coroots(ct, D)):
        if tot + b > D:
            break
        tot += b
        n += 1
    return n


def hZeroSymmetrizer(ct: AffineCartanData, D: int, L: int):
    """``(sum_{l(w) <= L} Delta^w) / W(v^2)`` in the dense kernel.

    A shell-``n`` term has ``t``-degree ``>= n - N_D`` at depth ``<= D``, so the
    result is certified through ``t``-degree ``L - N_D``.  Returns
    ``(Dense, certified t-degree)``.
    """
    N = shallow_root_bound(ct, D)
    Tc = L - N
    if Tc < 0:
        raise ValueError("shell bound too small to certify any t-degree")
    Tw = L + 1
    acc = Dense(ct, ct.zero(), D, 0, Tw)
    for w, _ in W.bfsEnumerate(ct, L):
        acc += deltaW_dense(w, D, Tw)
    pd = poincareData(ct)
    acc = acc.mul_poly_z(pd.denominator)
    acc = acc.div_poly_z(list(pd.numerator), exact=False)
    return acc.restrict_cells().truncate_z(Tc), Tc


def hZero(ct: AffineCartanData, D: int, route: str = "symmetrizer",
          L: int | None = None) -> Series:
    """``H_0`` through depth ``D``.

    ``symmetrizer`` sums ``Delta^w`` over length shells (v-window = the
    certified ``t``-degree); ``product`` is ``M``, ``product-reciprocal`` is
    ``1/M``.  On every window tested the symmetrizer agrees with ``1/M``.
    """
    if route == "product":
        return hZeroProduct(ct, D)
    if route == "product-reciprocal":
        return hZeroProduct(ct, D, reciprocal=True)
    if route == "symmetrizer":
        if L is None:
            L = shallow_root_bound(ct, D) + D + 2
        d, Tc = hZeroSymmetrizer(ct, D, L)
        return Series(ct, TruncationContext(ct.zero(), D, (0, 2 * Tc)), d.to_terms(2),
                      check=False)
    raise ValueError(f"unknown route {route!r}")


@dataclass
class HZeroComparison:
    depth: int
    certified_tdeg: int
    shells: int
    matches_product: bool        # symmetrizer == M
    matches_reciprocal: bool     # symmetrizer == 1/M
    central: bool                # symmetrizer vanishes away from Z c
    first_difference: list       # (coweight, symmetrizer, M) where they differ
    symmetrizer: Series
    product: Series


def compareHZero(ct: AffineCartanData, D: int, margin: int = 2) -> HZeroComparison:
    """Symmetrizer route against ``M`` and ``1/M`` through depth ``D``.

    The shell bound is chosen so the certified ``t``-degree exceeds the top
    degree of both products by ``margin``.
    """
    prod = productFormula_dense(ct, D, D + 1).restrict_cells()
    recip = productFormula_dense(ct, D, D + 1, reciprocal=True).restrict_cells()
    Tc = max(_tdeg_top(prod), _tdeg_top(recip)) + margin
    L = Tc + shallow_root_bound(ct, D)
    sym, Tc = hZeroSymmetrizer(ct, D, L)

    def same(x: Dense) -> bool:
        y = Dense(ct, ct.zero(), D, 0, Tc)
        k = min(x.arr.shape[-1], Tc + 1)
        y.arr[..., :k] = x.arr[..., :k]
        return bool(np.all(y.arr == sym.arr[..., :Tc + 1]))

    cc = ct.coroot_coords(ct.C)
    central = True
    for n in sym.cells():
        if np.any(sym.arr[n]):
            k = n[0] // cc[0]
            if tuple(k * x for x in cc) != tuple(n):
                central = False
    ctx = TruncationContext(ct.zero(), D, (0, 2 * Tc))
    ssym = Series(ct, ctx, sym.to_terms(2), check=False)
    sprod = Series(ct, TruncationContext(ct.zero(), D), prod.to_terms(2), check=False)
    diff = [(mu, ssym.coeff(mu), sprod.coeff(mu)) for mu in ssym.diff_within(sprod, D)][:3]
    return HZeroComparison(D, Tc, L, same(prod), same(recip), central, diff, ssym, sprod)


def satakeByMacdonald(ct: AffineCartanData, lam, depth: int, q=None) -> SatakeResult:
    """``H_lam / H_0`` through ``depth``, exact in ``v``.

    ``H_0`` is the symmetrizer sum, whose closed form on certified windows is
    ``1/M`` (see :func:`compareHZero`), so dividing by it is multiplication
    by ``M``.  The ``t``-window is ``max l(uv) + 2 D + 1``: each ``Delta^w``
    has degree at most ``l(w) + D`` at depth ``<= D`` and ``M`` at most its
    depth, so no coefficient is clipped.
    """
    _check_dominant(ct, lam)
    lam = Coweight._raw(tuple(lam))
    D = depth
    if lam[-1] == 0:
        # dominant of level 0 means lam in Z c: W^lam = {1}, H_lam = v^{-2<rho,lam>} e^lam H_0
        s = Series(ct, TruncationContext(lam, D), {lam: VCoeff.monomial(-2 * ct.rhoPairing(lam))})
        return SatakeResult(lam, _qval(q), s, "Macdonald", {"depth": D}, 0, [])
    stab = W.stabilizerData(ct, lam)
    if not stab.finite:  # pragma: no cover - positive level has finite stabilizers
        raise ValueError("stabilizer is infinite")
    reps = W.cosetRepsByDepth(ct, lam, D)
    maxlen = max(u.length for u, _, _ in reps) + (len(stab.poincare) - 1)
    Tw = maxlen + 2 * D + 1
    acc = Dense(ct, lam, D, 0, Tw)
    for u, mu, dep in reps:
        off = ct.coroot_coords(lam - mu)
        part = Dense(ct, lam, D, 0, Tw)
        for v in stab.elements:
            part += deltaW_dense(u * v, D, Tw, anchor=lam)
        acc += part.box_shift(off)
    acc.restrict_cells()
    acc = acc.div_poly_z(list(stab.poincare), exact=True)
    acc = apply_product(acc).restrict_cells()
    if np.any(acc.arr[..., Tw]):  # pragma: no cover - degree bound violated
        raise VFinitenessError("t-window exhausted in the Macdonald route")
    pre = -2 * ct.rhoPairing(lam)
    s = Series(ct, TruncationContext(lam, D), acc.to_terms(2, pre), check=False)
    return SatakeResult(lam, _qval(q), s, "Macdonald", {"depth": D}, maxlen, [])


def satake(ct: AffineCartanData, lam, depth: int, q=None):
    """Both routes; returns ``(disassembly, macdonald, differing coweights)``."""
    a = satakeByDisassembly(ct, lam, depth, q)
    b = satakeByMacdonald(ct, lam, depth, q)
    diff = a.series.diff_within(b.series, depth)
    return a, b, diff


def rankOneClosedForm(ct: AffineCartanData, lam, a: int) -> dict:
    """``J_1(lam) + J_{w_a}(lam)`` for a simple ``a`` with ``k = <a, lam> > 0``:

    ``q^{<rho,lam>} (e^lam + e^{w_a lam} + (1 - q^{-1}) sum_{0<j<k} e^{lam - j a^v})``.
    """
    _check_dominant(ct, lam)
    lam = Coweight._raw(tuple(lam))
    k = ct.simple_pairings(lam)[a - 1]
    if k <= 0:
        raise ValueError(f"w_{a} fixes {lam!r}")
    pre = VCoeff.monomial(-2 * ct.rhoPairing(lam))
    av = ct.simple_coroot(a)
    out = {lam: pre, lam - av * k: pre}
    for j in range(1, k):
        out[lam - av * j] = pre * (ONE - T)
    return out


def rankOneCheck(ct: AffineCartanData, lam, a: int) -> bool:
    lam = Coweight._raw(tuple(lam))
    got: dict = {}
    for w in (W.identity(ct), W.simpleReflection(ct, a)):
        for mu, c in jRecursion(ct, lam, w).items():
            _acc(got, mu, c)
    return got == rankOneClosedForm(ct, lam, a)


def phiTable(ct: AffineCartanData, lam, depth: int) -> dict:
    """``Phi_mu(v^2)``: the spherical coefficients with ``q^{<rho,lam>}`` split off."""
    r = satakeByDisassembly(ct, lam, depth)
    pre = VCoeff.monomial(2 * ct.rhoPairing(lam))
    return {mu: pre * c for mu, c in r.series.sorted_items()}


def wInvarianceDefects(res: SatakeResult) -> list:
    """Pairs ``(mu, w_i mu)`` inside the window whose coefficients differ."""
    s = res.series
    ct = s.ct
    D = s.ctx.depth
    bad = []
    for mu in list(s.terms):
        for i in range(1, ct.rank + 2):
            nu = W.simpleReflection(ct, i).act(mu)
            if ct.depth(nu, res.lam) <= D and s.coeff(nu) != s.coeff(mu):
                bad.append((mu, nu))
    return bad
