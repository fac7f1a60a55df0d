import itertools
from fractions import Fraction

import pytest

from affsatake import spherical as S
from affsatake import weyl as W
from affsatake.cartan import Coweight
from affsatake.series import Series, TruncationContext
from affsatake.vcoeff import ONE, VCoeff


def dominant(ct, level, fmax=3):
    out = []
    for f in itertools.product(range(fmax + 1), repeat=ct.rank):
        lam = Coweight._raw((0, *f, level))
        if ct.isDominant(lam):
            out.append(lam)
    return out


def t_of(k):
    return VCoeff.monomial(2 * k)


def test_j_identity_and_stabilizer(ct):
    for lam in dominant(ct, 3)[:4]:
        e = W.identity(ct)
        assert S.jRecursion(ct, lam, e) == {lam: VCoeff.monomial(-2 * ct.rhoPairing(lam))}
        stab = W.stabilizerData(ct, lam)
        for w in stab.elements[1:]:
            want = {lam: VCoeff.monomial(-2 * ct.rhoPairing(lam) + 2 * w.length)}
            assert S.jRecursion(ct, lam, w) == want
            assert S.jDL(ct, lam, w) == want


def test_j_rank_one_pattern(A1):
    lam = Coweight._raw((0, 2, 5))          # <a1, lam> = 4
    s1 = W.simpleReflection(A1, 1)
    J = S.jRecursion(A1, lam, s1)
    pre = VCoeff.monomial(-2 * A1.rhoPairing(lam))
    av = A1.simple_coroot(1)
    assert J[lam - av * 4] == pre
    for j in range(1, 4):
        assert J[lam - av * j] == pre * (ONE - t_of(1))
    assert lam not in J and len(J) == 4


def test_rank_one_closed_form(ct):
    n = 0
    for lam in dominant(ct, 4):
        for a, k in enumerate(ct.simple_pairings(lam), start=1):
            if k > 0:
                assert S.rankOneCheck(ct, lam, a)
                n += 1
            else:
                with pytest.raises(ValueError):
                    S.rankOneClosedForm(ct, lam, a)
    assert n >= 4


def test_j_routes_and_flat(ct):
    lam = dominant(ct, 3)[-1]
    for w, _ in W.bfsEnumerate(ct, 4):
        a = S.jFunction(ct, w, lam, "recursion")
        b = S.jFunction(ct, w, lam, "dl")
        assert a.terms == b.terms
        flat = S.jFlat(ct, w, lam)
        assert S.jFromFlat(flat, w).terms == a.terms
    with pytest.raises(ValueError):
        S.jFunction(ct, W.identity(ct), lam, "nope")


def test_non_dominant_rejected(A1):
    with pytest.raises(ValueError):
        S.jFunction(A1, W.identity(A1), Coweight._raw((0, 2, 1)))
    with pytest.raises(ValueError):
        S.satakeByDisassembly(A1, Coweight._raw((0, -1, 2)), 3)


def test_satake_zero(ct):
    for route in (S.satakeByDisassembly, S.satakeByMacdonald):
        r = route(ct, ct.zero(), 5)
        assert r.series.terms == {ct.zero(): ONE}


def test_routes_agree(ct):
    lams = dominant(ct, 2) + dominant(ct, 3)[:3]
    for lam in lams[:6]:
        a, b, diff = S.satake(ct, lam, 4)
        assert diff == []
        assert a.series.coeff(lam) == VCoeff.monomial(-2 * ct.rhoPairing(lam))
        assert S.wInvarianceDefects(a) == []


@pytest.mark.parametrize("lam", [(0, 1, 3), (0, 2, 5), (0, 3, 7)])
def test_sl2_slice(A1, lam):
    # the e^{0 c} slice is the SL(2) spherical function J_1 + J_{w_1}
    lam = Coweight._raw(lam)
    r = S.satakeByDisassembly(A1, lam, 8)
    sl = {mu: c for mu, c in r.series.terms.items() if mu[0] == 0}
    assert sl == S.rankOneClosedForm(A1, lam, 1)


def test_phi_table(A1):
    lam = Coweight._raw((0, 2, 5))
    phi = S.phiTable(A1, lam, 5)
    assert phi[lam] == ONE
    av = A1.simple_coroot(1)
    for j in range(1, 4):
        assert phi[lam - av * j] == ONE - t_of(1)
    for q in (2, 3, 4):
        assert all(c.at_v2(Fraction(1, q)) >= 0 for c in phi.values())


def test_specialized_json(A1):
    r = S.satakeByDisassembly(A1, Coweight._raw((0, 1, 3)), 3, q=3)
    js = r.to_json()
    assert js["q"] == "3" and js["route"] == "J-recursion"
    assert js["terms"][0]["cw"] == Coweight._raw((0, 1, 3)).to_json()
    assert Fraction(js["terms"][0]["coeff"]) == Fraction(1, 3) ** (-A1.rhoPairing((0, 1, 3)))


def test_invariants_enforced(A1):
    lam = Coweight._raw((0, 1, 3))
    r = S.satakeByDisassembly(A1, lam, 3)
    bad = Series(A1, TruncationContext(lam, 3), {lam: ONE})
    with pytest.raises(AssertionError):
        S.SatakeResult(lam, "sym", bad, "test", {}, 0)
    r.check_invariants()


def test_budget(A1):
    with pytest.raises(S.ShellBudgetExceeded):
        S.satakeByDisassembly(A1, Coweight._raw((0, 1, 3)), 8, budget=2)


def test_hzero_product_A1(A1):
    # A1: prod_i (1 - v^2 e^{-ic}) / (1 - v^4 e^{-ic})
    M = S.hZero(A1, 4, "product")
    c = A1.C
    assert M.coeff(A1.zero()) == ONE
    assert M.coeff(-c) == t_of(2) - t_of(1)
    assert all(mu[1:-1] == (0,) and mu[-1] == 0 for mu in M.terms)


def test_hzero_symmetrizer_is_reciprocal(ct):
    D = 4 if ct.rank == 1 else 3
    cmp = S.compareHZero(ct, D)
    assert cmp.central
    assert cmp.matches_reciprocal
    assert not cmp.matches_product
    c = -ct.C
    assert cmp.symmetrizer.coeff(c) == -cmp.product.coeff(c) != VCoeff.from_dict({})
    assert cmp.first_difference
    assert cmp.symmetrizer.coeff(ct.zero()) == ONE
