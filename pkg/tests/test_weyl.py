import random

import pytest
from hypothesis import given, strategies as st

from affsatake import weyl as W
from affsatake.cartan import cartan_type
from affsatake.polyrep import poincareData


def _bfs_lengths(ct, L):
    return dict(W.bfsEnumerate(ct, L))


def test_act_examples(A1):
    t = W.translation(A1, [1])
    assert t.act(A1.coweight(0, [0], 1)) == A1.coweight(-1, [-1], 1)
    assert t.length == 2
    e = W.identity(A1)
    assert e.act(A1.coweight(2, [3], 1)) == A1.coweight(2, [3], 1)
    w2 = W.simpleReflection(A1, 2)
    assert w2.act(A1.coweight(0, [0], 1)) == A1.coweight(-1, [1], 1)


def test_simple_reflections(ct):
    for i in range(1, ct.rank + 2):
        s = W.simpleReflection(ct, i)
        assert s.act(ct.simple_coroot(i)) == -ct.simple_coroot(i)
        assert (s * s).is_identity() and s.length == 1
        for j in range(1, ct.rank + 2):
            lam = ct.simple_coroot(j) + ct.coweight(0, [0] * ct.rank, 1)
            a = ct.simple_root(i)
            assert s.act(lam) == lam - ct.simple_coroot(i) * ct.pairing(a, lam)
    with pytest.raises(ValueError):
        W.simpleReflection(ct, ct.rank + 2)


def test_shell_sizes(A1, A2):
    assert W.shellCounts(A1, 4) == [1, 2, 2, 2, 2]
    assert W.shellCounts(A2, 1) == [1, 3]
    assert [w for w, _ in W.bfsEnumerate(A1, 0)] == [W.identity(A1)]


@pytest.mark.parametrize("name", ["A1", "A2"])
def test_closed_length_matches_bfs(name):
    ct = cartan_type(name)
    for w, n in W.bfsEnumerate(ct, 8):
        assert W.inversion_length(w) == n == w.length
        assert w.inverse().length == n
        assert len(w.reduced_word) == n
        assert W.fromWord(ct, w.reduced_word) == w


@pytest.mark.parametrize("name", ["A1", "A2"])
def test_poincare_series_through_v20(name):
    ct = cartan_type(name)
    counts, series = poincareData(ct).series(10), W.shellCounts(ct, 10)
    assert counts == series


@given(st.lists(st.integers(1, 3), max_size=6), st.lists(st.integers(1, 3), max_size=6),
       st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(-2, 3)))
def test_group_action_and_length(u, v, x):
    ct = cartan_type("A2")
    U, V = W.fromWord(ct, u), W.fromWord(ct, v)
    lam = ct.coweight(x[0], x[1:3], x[3])
    assert (U * V).act(lam) == U.act(V.act(lam))
    assert (U * V).length <= U.length + V.length
    assert U.length == U.inverse().length


def test_dominant_representative(A1, A2):
    lam = A1.coweight(0, [1], 3)
    assert W.dominantRepresentative(A1, lam) == (lam, W.identity(A1))
    mu = A1.coweight(0, [-1], 1)
    dom, w = W.dominantRepresentative(A1, mu)
    assert A1.isDominant(dom) and w.act(dom) == mu
    assert W.dominantRepresentative(A1, A1.C * 4)[0] == A1.C * 4
    rng = random.Random(3)
    for _ in range(30):
        lam = A2.coweight(0, [rng.randint(0, 2), rng.randint(0, 2)], 4)
        if not A2.isDominant(lam):
            continue
        w = W.fromWord(A2, [rng.randint(1, 3) for _ in range(6)])
        dom, u = W.dominantRepresentative(A2, w.act(lam))
        assert dom == lam and u.act(dom) == w.act(lam)
    with pytest.raises(ValueError):
        W.dominantRepresentative(A1, A1.coweight(0, [1], 0))


def test_stabilizer_data(A1, A2):
    reg = A2.coweight(0, [1, 1], 3)
    s = W.stabilizerData(A2, reg)
    assert s.generators == () and s.finite and s.poincare == (1,)
    z = W.stabilizerData(A2, A2.zero())
    assert z.generators == (1, 2, 3) and not z.finite
    one = W.stabilizerData(A2, A2.coweight(0, [1, 2], 4))
    assert one.generators == (1,) and one.poincare == (1, 1)
    with pytest.raises(ValueError):
        W.stabilizerData(A1, A1.coweight(0, [1], 0))


def _brute_coset_reps(ct, lam, L):
    stab = W.stabilizerData(ct, lam)
    best = {}
    for w, n in W.bfsEnumerate(ct, L + len(stab.poincare)):
        key = w.act(lam)
        if key not in best or n < best[key].length:
            best[key] = w
    return {w for w in best.values() if w.length <= L}


@pytest.mark.parametrize("name,lam", [("A1", (0, [0], 1)), ("A1", (0, [1], 3)),
                                      ("A2", (0, [1, 2], 3)), ("A2", (0, [0, 0], 1)),
                                      ("A2", (0, [1, 1], 2))])
def test_minimal_coset_reps(name, lam):
    ct = cartan_type(name)
    lam = ct.coweight(*lam)
    L = 5
    reps = W.minimalCosetReps(ct, lam, L)
    assert len(set(reps)) == len(reps)
    assert set(reps) == _brute_coset_reps(ct, lam, L)
    stab = W.stabilizerData(ct, lam)
    for w in reps:
        for i in stab.generators:
            assert (w * W.simpleReflection(ct, i)).length == w.length + 1
    assert len({w.act(lam) for w in reps}) == len(reps)
    assert W.minimalCosetReps(ct, ct.zero(), L) == [W.identity(ct)]


def test_coset_reps_depth_bound(A2):
    lam = A2.coweight(0, [1, 1], 3)
    for u in W.minimalCosetReps(A2, lam, 6):
        assert A2.depth(u.act(lam), lam) >= u.length


def test_window_closure(A2):
    lam = A2.coweight(0, [1, 1], 2)
    rng = random.Random(5)
    orbit = {w.act(lam) for w, _ in W.bfsEnumerate(A2, 4)}
    for mu in orbit:
        for _ in range(5):
            w = W.fromWord(A2, [rng.randint(1, 3) for _ in range(rng.randint(0, 6))])
            assert A2.leq(w.act(mu), lam)


def test_bruhat_routes_agree(A2):
    els = [w for w, _ in W.bfsEnumerate(A2, 4)]
    rng = random.Random(11)
    for _ in range(300):
        u, w = rng.choice(els), rng.choice(els)
        assert W.bruhatLeq(u, w) == W.bruhatLeqSubword(u, w)
    e = W.identity(A2)
    assert all(W.bruhatLeq(e, w) for w in els)


def test_preceq(A1):
    x = W.ExtendedElement(W.fromWord(A1, [1, 2]), A1.coweight(0, [1], 1))
    assert W.preceq(x, x)
    y = W.ExtendedElement(W.identity(A1), x.coweight)
    assert W.preceq(y, x)
    lo = W.ExtendedElement(W.fromWord(A1, [2, 1, 2]), x.coweight - A1.simple_coroot(1))
    assert W.preceq(lo, x) and not W.preceq(x, lo)


def test_extended_group_laws(A2):
    rng = random.Random(2)
    def rand():
        w = W.fromWord(A2, [rng.randint(1, 3) for _ in range(rng.randint(0, 3))])
        return W.ExtendedElement(w, A2.coweight(rng.randint(-2, 2), [rng.randint(-2, 2) for _ in range(2)],
                                                 rng.randint(-1, 2)))
    for _ in range(50):
        x, y, z = rand(), rand(), rand()
        assert (x * y) * z == x * (y * z)
        e = x * x.inverse()
        assert e.weyl.is_identity() and e.coweight == A2.zero()


def test_weyl_json(A1):
    w = W.fromWord(A1, [1, 2, 1])
    j = w.to_json()
    assert j["word"] == list(w.reduced_word) and len(j["word"]) == 3
