import pytest

import corpus
import oracles
from moritakit.abelian import FinAbGroup, subgroup_generated
from moritakit.algebra import LEFT, RIGHT, matrix_ring, module_over_quotient, regular_left, zn
from moritakit.catlab import (FAIL, PASS, PREDICATES, SKIP, Profile, copurity,
                              endo_bimodule, enumerate_left_modules, enumerate_modules,
                              enumerate_right_modules, equivalence_witness, find_isomorphism,
                              membership, star_module_bounded, submodules, theorem_regression,
                              wide_morita_maps)
from moritakit.morita import BalancedMap, MoritaDatum, MoritaSemiContext, tensor_annihilator
from moritakit.tensor_hom import counit_map, unit_map

Z4 = zn(4)
M2 = matrix_ring(2, 2)


# enumeration

def test_enumeration_examples():
    assert [M.group.moduli for M in enumerate_left_modules(Z4, 16)] == [
        (), (2,), (2, 2), (4,), (4, 2), (4, 4)]
    assert [M.group.moduli for M in enumerate_left_modules(zn(2), 4)] == [(), (2,), (2, 2)]
    m2 = [M.group.moduli for M in enumerate_left_modules(M2, 16)]
    assert m2 == [(), (2, 2), (2, 2, 2, 2)]
    simple = enumerate_left_modules(M2, 16)[1]
    assert [s.order for s in submodules(simple)] == [1, 4]


@pytest.mark.parametrize("ring", corpus.library16(), ids=lambda r: r.name)
def test_enumeration_pairwise_non_isomorphic(ring):
    for side in (LEFT, RIGHT):
        mods = enumerate_modules(ring, side, 16)
        assert all(M.order <= 16 and M.side == side for M in mods)
        for i, A in enumerate(mods):
            for B in mods[i + 1:]:
                assert find_isomorphism(A, B) is None
    assert enumerate_right_modules(ring, 8) == list(enumerate_modules(ring, RIGHT, 8))


# membership

def test_membership_identity_context():
    d = corpus.identity_data()[2]
    for K in enumerate_left_modules(d.T, 16):
        for name in ("Gen", "Static", "D", "X", "U", "V", "W"):
            assert membership(K, name, d).flag


def test_membership_ideal_examples():
    z2 = module_over_quotient(Z4, FinAbGroup((2,)))
    two = subgroup_generated(Z4.group, [(2,)])
    assert not membership(z2, "Divisible", ideal=two).flag
    m = membership(z2, "StronglyFaithful", ideal=two)
    assert not m.flag and m.witness[0]["kernel_order"] == 2


def test_membership_corner_regular():
    c = corpus.corner_m2z2()
    T = regular_left(c.T)
    m = membership(T, "X", c)
    assert m.flag and {w["map"] for w in m.witness} == {"omega", "eta", "alpha"}
    assert all(w["injective"] and w["surjective"] for w in m.witness)


def test_membership_errors():
    d = corpus.identity_data()[2]
    K = regular_left(d.T)
    with pytest.raises(KeyError):
        membership(K, "Nope", d)
    with pytest.raises(ValueError):
        membership(K, "X")
    with pytest.raises(ValueError):
        membership(K, "PresBounded")
    with pytest.raises(ValueError):
        membership(regular_left(M2), "X", d)


def test_membership_right_modules():
    c = corpus.corner_m2z2()
    for K in enumerate_right_modules(c.T, 16):
        m = membership(K, "Gen", c)
        assert m.side == RIGHT and isinstance(m.flag, bool)


def test_every_predicate_runs():
    d = corpus.corner_m2z2()
    K = regular_left(d.T)
    for name in PREDICATES:
        kw = {"generator": K} if name.endswith("Bounded") else {}
        m = membership(K, name, d, **kw)
        assert m.bounded == name.endswith("Bounded")


def test_pres_copres_bounded():
    z2 = module_over_quotient(Z4, FinAbGroup((2,)))
    T = regular_left(Z4)
    assert membership(z2, "PresBounded", generator=z2).flag
    # Z4 -> Z2 has kernel 2Z4, itself an image of Z4
    m = membership(z2, "PresBounded", generator=T)
    assert m.flag and m.witness[0] == {"n": 1, "kernel_order": 2}
    # Z2 does not even generate Z4
    assert not membership(T, "PresBounded", generator=z2).flag
    assert membership(T, "CopresBounded", generator=T).flag


# oracles and invariants

def _gen_instances():
    for d in corpus.identity_data()[:8] + (corpus.corner_m2z2(),) + corpus.corner_data()[:10]:
        for K in enumerate_left_modules(d.T, 8):
            if len(oracles.brute_homs(d.P.left, K)) <= 512:
                yield d, K


def test_gen_against_surjection_oracle():
    n = 0
    for d, K in _gen_instances():
        surj = counit_map(d.P, K).bijectivity()[1]
        assert surj == oracles.surjection_from_power(d.P.left, K, 3)
        assert membership(K, "Gen", d).flag == surj
        n += 1
    assert n >= 40


def test_faithful_matches_cogen_sharp():
    # ker eta_L = tensor annihilator of L, elementwise
    for d in corpus.identity_data()[:6] + corpus.corner_data()[:10] + corpus.context_data()[:10]:
        m = d.mT
        for L in enumerate_left_modules(m.T, 8):
            eta = unit_map(m.Q, L)
            ker = {x for x in L.group.elements() if not any(eta(x))}
            ann = tensor_annihilator(m.T, m.Q, L, "L").elements()
            assert ker == ann
            p = Profile(m, L)
            assert p.member("Faithful") == p.member("CogenSharp")


def test_localized_matches_strongly_faithful_and_copure():
    n = 0
    for ring in corpus.library16():
        ideals = [s for s in submodules(regular_left(ring))
                  if all(ring.mul(x, t) in s for t in ring.group.gens() for x in s.generators())]
        for ideal in ideals:
            for U in enumerate_left_modules(ring, 8):
                loc = membership(U, "Localized", ideal=ideal).flag
                sf = membership(U, "StronglyFaithful", ideal=ideal).flag
                assert loc == (sf and copurity(ring, ideal, U)["copure"])
                n += 1
    assert n > 100


# witnesses

def test_equivalence_witness_identity():
    d = corpus.identity_data()[2]
    r = equivalence_witness(d, regular_left(d.T))
    assert r.ok and r.images["Hom_T(P,V)"] == d.T.order


def test_equivalence_witness_corner():
    c = corpus.corner_m2z2()
    r = equivalence_witness(c, regular_left(c.T))
    assert r.ok and r.images["Hom_T(P,V)"] == 4
    simple = enumerate_left_modules(c.T, 16)[1]
    r = equivalence_witness(c, simple)
    assert r.hypothesis and r.ok
    for mode in ("CC", "LL"):
        assert equivalence_witness(c, regular_left(c.T), mode).ok
    with pytest.raises(ValueError):
        equivalence_witness(c, simple, "ZZ")


def test_equivalence_witness_hypothesis_failed():
    c = corpus.corner_m2z2()
    z = MoritaDatum(MoritaSemiContext(c.T, c.S, c.P, c.Q, BalancedMap.zero(c.P, c.Q, c.T)), c.mS)
    r = equivalence_witness(z, regular_left(c.T), "CC")
    assert not r.hypothesis and not r.ok and "hypothesis failed" in r.notes[0]


def test_theorem_regression_identity():
    r = theorem_regression(corpus.identity_data()[2], 8)
    assert r.ok and r.counts()[FAIL] == 0 and r.counts()[PASS] > 0
    with pytest.raises(ValueError):
        theorem_regression(corpus.identity_data()[2], 8, theorems=["nope"])


def test_theorem_regression_corner_vv():
    r = theorem_regression(corpus.corner_m2z2(), 16, theorems=["V=V"])
    assert r.ok and all(x.status == PASS for x in r.results)


def test_theorem_regression_gates_non_injective():
    c = corpus.corner_m2z2()
    z = MoritaDatum(MoritaSemiContext(c.T, c.S, c.P, c.Q, BalancedMap.zero(c.P, c.Q, c.T)), c.mS)
    r = theorem_regression(z, 8, sides=(LEFT,), theorems=["V=V"])
    t_side = [x for x in r.results if x.perspective == "M_T left"]
    assert t_side and all(x.status == SKIP for x in t_side)
    assert "not injective" in t_side[0].detail


def test_star_module_examples():
    assert star_module_bounded(Z4, regular_left(Z4), 16).star
    c = corpus.corner_m2z2()
    v = star_module_bounded(c.T, c.P, 16)
    assert v.star and v.end_order == 2
    z2 = module_over_quotient(Z4, FinAbGroup((2,)))
    v = star_module_bounded(Z4, z2, 16)
    assert v.as_dict()["bounded"] and v.modules_T == 6
    E, B = endo_bimodule(z2)
    assert E.order == 2 and B.right.ring == E


def test_wide_morita_maps():
    d = corpus.identity_data()[2]
    r = wide_morita_maps(d, regular_left(d.T), regular_left(d.S))
    assert r["eta_V"]["injective"] and r["eta_V"]["surjective"] and r["rho_W"]["surjective"]
    c = corpus.corner_m2z2()
    r = wide_morita_maps(c, regular_left(c.T), regular_left(c.S))
    assert r["eta_V"]["injective"] and r["rho_W"]["injective"] and r["ok"]
    zc = MoritaDatum(MoritaSemiContext(c.T, c.S, c.P, c.Q, BalancedMap.zero(c.P, c.Q, c.T)),
                     MoritaSemiContext(c.S, c.T, c.Q, c.P, BalancedMap.zero(c.Q, c.P, c.S)))
    r = wide_morita_maps(zc, regular_left(c.T), regular_left(c.S))
    assert r["eta_V"]["kernel_order"] == r["eta_V"]["source_order"] > 1
    assert not r["asserted"] and r["ok"]
