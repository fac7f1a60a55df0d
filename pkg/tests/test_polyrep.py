import random

import pytest
from hypothesis import given, strategies as st

from affsatake import polyrep as P
from affsatake import weyl as W
from affsatake import spherical as S
from affsatake.cartan import Coweight, cartan_type
from affsatake.series import Series, TruncationContext
from affsatake.vcoeff import ONE, V, VINV, VCoeff


def _mono(ct, lam, D):
    return Series.monomial(ct, lam, TruncationContext(lam, D))


def _window_for(ct, lam, word):
    """Depth that keeps ``T_word e^lam`` exact (support stays above ``w lam``)."""
    return max(ct.depth(W.fromWord(ct, word[i:]).act(lam), lam) for i in range(len(word) + 1))


def test_fixed_direction_scales_by_v(A2):
    lam = A2.coweight(0, [1, 2], 4)  # <a_1, lam> = 0
    assert P.dlApply(1, _mono(A2, lam, 3)).terms == {lam: V}


def test_matches_closed_form(ct):
    rng = random.Random(4)
    for _ in range(20):
        lam = ct.coweight(rng.randint(-1, 1), [rng.randint(-3, 3) for _ in range(ct.rank)], 2)
        anchor = W.dominantRepresentative(ct, lam)[0]
        a = rng.randint(1, ct.rank + 1)
        D = max(ct.depth(lam, anchor), ct.depth(W.simpleReflection(ct, a).act(lam), anchor))
        f = Series.monomial(ct, lam, TruncationContext(anchor, D))
        assert P.dlApply(a, f).terms == P.dlMonomial(ct, a, lam)


@given(st.integers(0, 10_000))
def test_hecke_relation_on_random_series(seed):
    rng = random.Random(seed)
    ct = cartan_type(rng.choice(["A1", "A2"]))
    lam = ct.coweight(0, [1] * ct.rank, 3)
    orbit = [W.fromWord(ct, [rng.randint(1, ct.rank + 1) for _ in range(2)]).act(lam)
             for _ in range(3)]
    D = max(ct.depth(W.simpleReflection(ct, a).act(mu), lam)
            for mu in orbit + [lam] for a in range(1, ct.rank + 2))
    f = Series(ct, TruncationContext(lam, D), {mu: VCoeff.monomial(rng.choice([0, 2]), rng.randint(1, 3))
                                              for mu in orbit})
    a = rng.randint(1, ct.rank + 1)
    tf = P.dlApply(a, f)
    assert (P.dlApply(a, tf) + tf.scale(VINV - V) + f.scale(-ONE)).terms == {}


def test_stabilizer_acts_by_powers_of_v(A2):
    lam = A2.coweight(0, [0, 0], 2)  # stabilizer <w_1, w_2>
    for word in ([1], [2, 1], [1, 2, 1]):
        w = W.fromWord(A2, word)
        assert P.dlWord(w, _mono(A2, lam, 2)).terms == {lam: VCoeff.monomial(w.length)}
    f = _mono(A2, lam, 2)
    assert P.dlWord([], f).terms == f.terms


def test_braid_words_agree(A2):
    lam = A2.coweight(0, [1, 1], 3)
    D = _window_for(A2, lam, [1, 2, 1])
    f = _mono(A2, lam, D)
    assert P.dlWord([1, 2, 1], f).terms == P.dlWord([2, 1, 2], f).terms
    D = _window_for(A2, lam, [1, 3, 1])
    f = _mono(A2, lam, D)
    assert P.dlWord([1, 3, 1], f).terms == P.dlWord([3, 1, 3], f).terms


def test_poincare_data(A1, A2):
    p1, p2 = P.poincareData(A1), P.poincareData(A2)
    assert p1.finite == (1, 1) and p1.exponents == (1,)
    assert p2.finite == (1, 2, 2, 1) and p2.exponents == (1, 2)
    assert p1.series(10) == [1] + [2] * 10
    for ct in (A1, A2):
        bfs, closed = P.validatePoincare(ct, 10)
        assert bfs == closed


def test_symmetrize_trivial_and_leading(A1):
    s = P.symmetrize(A1, 0, 2, 4)
    assert set(s.C) == {W.identity(A1)}
    assert s.coefficient(W.identity(A1)).terms == {A1.zero(): ONE}
    # depth-0 part of sum_tau C_tau over L shells: partial sums of W(v^2)
    for L in (1, 2, 3):
        s = P.symmetrize(A1, L, 0, 8)
        c = sum((s.coefficient(t).coeff(A1.zero()) for t in s.C), VCoeff.from_dict({}))
        want = P.poincareData(A1).series(L)
        assert c == VCoeff.from_dict({2 * i: x for i, x in enumerate(want) if x})


@pytest.fixture(scope="module")
def shells_A1():
    return P.symmetrize(cartan_type("A1"), 30, 3, 4)


@pytest.fixture(scope="module")
def shells_A2():
    return P.symmetrize(cartan_type("A2"), 30, 3, 4)


def test_stabilization_and_audit(shells_A1, shells_A2):
    for s in (shells_A1, shells_A2):
        assert s.stabilized == {"depth": 3, "vmin": 0, "vmax": 8}
        ks = [a["min_depth"] + a["min_vdeg"] for a in s.audit if a["min_depth"] is not None]
        assert ks[-1] >= ks[0]
        for tau in s.C:
            assert s.coefficient(tau).is_v_finite()
        j = s.to_json()
        assert j["stabilized"] and j["C"][0]["tau"] == []


def test_proportionality(shells_A1, shells_A2):
    for s in (shells_A1, shells_A2):
        rep = P.checkProportionality(s)
        assert rep.ok and rep.m_invariant
        assert all(len(word) <= 4 for word in rep.checked) and len(rep.checked) > 1
    # A1: m = 1 + (v^4 - v^2) e^{-c} through depth 3
    m = P.checkProportionality(shells_A1).m_factor
    A1 = cartan_type("A1")
    assert m.coeff(A1.zero()) == ONE
    assert m.coeff(-A1.C) == VCoeff.from_dict({4: 1, 2: -1})


def test_eigen_properties(shells_A1, shells_A2):
    for s in (shells_A1, shells_A2):
        for a in range(1, s.ct.rank + 2):
            assert P.rightEigenCheck(s, a)


@pytest.mark.parametrize("name,lam", [("A1", (0, 1, 2)), ("A1", (0, 0, 1)),
                                      ("A2", (0, 1, 1, 3)), ("A2", (0, 0, 0, 1))])
def test_left_eigen_operator_form(name, lam):
    ct = cartan_type(name)
    f = S.satakeByDisassembly(ct, Coweight._raw(lam), 5).series
    for a in range(1, ct.rank + 2):
        ok, n = P.leftEigenCheck(f, a)
        assert ok and n >= 2
    # a non-invariant perturbation is detected
    g = Series(ct, f.ctx, dict(f.terms))
    g.terms[f.ctx.anchor] = g.terms[f.ctx.anchor] + ONE
    assert not all(P.leftEigenCheck(g, a)[0] for a in range(1, ct.rank + 2))
