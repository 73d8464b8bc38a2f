import itertools

import pytest

import corpus
import oracles
from moritakit.abelian import FinAbGroup, subgroup_generated
from moritakit.algebra import (LEFT, RIGHT, Bimodule, ModuleStructure, matrix_ring,
                               module_over_quotient, regular_bimodule, regular_left,
                               regular_right, zn)
from moritakit.catlab import enumerate_left_modules, enumerate_right_modules
from moritakit.morita import BalancedMap, MoritaSemiContext
from moritakit.pairing import DualPairing, canonical_pairing, zero_pairing
from moritakit.tensor_hom import (adjunction_maps, alpha_map, bracket_map, counit_map,
                                  hom_module, localization_maps, pairing_maps, tensor_over,
                                  unit_map)

SMALL_RINGS = [r for r in corpus.library16() if r.order <= 8] + [matrix_ring(2, 2)]


def test_tensor_examples():
    z4 = zn(4)
    z2 = module_over_quotient(z4, FinAbGroup((2,)), LEFT)
    assert tensor_over(z4, regular_right(z4), z2).group.order == 2
    d = corpus.corner_m2z2()
    assert tensor_over(d.S, d.P, d.Q).group.order == 16
    z6 = zn(6)
    a = module_over_quotient(z6, FinAbGroup((2,)), RIGHT)
    b = module_over_quotient(z6, FinAbGroup((3,)), LEFT)
    assert tensor_over(z6, a, b).group.order == 1


@pytest.mark.parametrize("ring", SMALL_RINGS, ids=lambda r: r.name)
def test_tensor_order_against_balanced_maps(ring):
    rights = [M for M in enumerate_right_modules(ring, 8)]
    lefts = [N for N in enumerate_left_modules(ring, 8)]
    for M, N in itertools.product(rights, lefts):
        ten = tensor_over(ring, M, N)
        assert ten.group.order == oracles.balanced_count(M, N)
        # pure tensors are balanced
        for m in M.group.gens():
            for t in ring.group.gens():
                for n in N.group.gens():
                    assert ten.pure(M.act(t, m), n) == ten.pure(m, N.act(t, n))


def test_hom_examples():
    z4 = zn(4)
    assert hom_module(z4, regular_left(z4), regular_left(z4)).group.order == 4
    z2 = module_over_quotient(z4, FinAbGroup((2,)), LEFT)
    h = hom_module(z4, z2, regular_left(z4))
    assert h.group.order == 2
    assert {h.to_hom(x)((1,)) for x in h.group.elements()} == {(0,), (2,)}
    d = corpus.corner_m2z2()
    assert hom_module(d.T, d.P, d.P, LEFT).group.order == 2


@pytest.mark.parametrize("ring", SMALL_RINGS, ids=lambda r: r.name)
def test_hom_against_enumeration(ring):
    for side, mods in ((LEFT, enumerate_left_modules(ring, 8)),
                       (RIGHT, enumerate_right_modules(ring, 8))):
        for M, N in itertools.product(mods, repeat=2):
            h = hom_module(ring, M, N, side)
            brute = oracles.brute_homs(M, N)
            assert h.group.order == len(brute)
            got = {tuple(h.to_hom(x)(g) for g in M.group.gens()) for x in h.group.elements()}
            assert got == set(brute)


@pytest.mark.parametrize("ring", list(corpus.library16()), ids=lambda r: r.name)
def test_unital_identities(ring):
    T = subgroup_generated(ring.group, ring.group.gens())
    for N in enumerate_left_modules(ring, 16):
        zeta, xi = localization_maps(ring, T, N)
        # ζ: N -> Hom_T(T, N) and ξ: T ⊗ N -> N are the natural isomorphisms
        assert zeta.bijectivity() == (True, True)
        assert xi.bijectivity() == (True, True)


def test_alpha_examples():
    for ring in SMALL_RINGS:
        can = canonical_pairing(ring, regular_left(ring), LEFT)
        for U in enumerate_right_modules(ring, 8):
            assert alpha_map(can, U).bijectivity() == (True, True)
    d = corpus.corner_m2z2()
    assert alpha_map(d.mT.p_l(), regular_right(d.T)).bijectivity()[0]
    z = zero_pairing(zn(4), regular_right(zn(4)), regular_left(zn(4)), LEFT)
    a = alpha_map(z, regular_right(zn(4)))
    assert a.hom.is_zero() and not a.bijectivity()[0]


def test_alpha_formula_pointwise():
    d = corpus.corner_m2z2()
    P = d.mT.p_l()
    U = regular_right(d.T)
    a = alpha_map(P, U)
    ten, hom = a.context["tensor"], a.context["hom"]
    for u in U.group.elements():
        for w in P.W.group.elements():
            f = a(ten.pure(u, w))
            for v in P.V.group.elements():
                assert hom.eval(f, v) == U.act(P.pair(v, w), u)


def test_bracket_examples():
    for ring in SMALL_RINGS:
        assert bracket_map(ring, regular_left(ring)).bijectivity()[1]
    z2 = module_over_quotient(zn(4), FinAbGroup((2,)), LEFT)
    assert not bracket_map(zn(4), z2).bijectivity()[1]
    d = corpus.corner_m2z2()
    assert bracket_map(d.T, d.P, LEFT).bijectivity()[1]


def test_adjunction_examples():
    for ring in SMALL_RINGS:
        P = regular_bimodule(ring)
        for K in enumerate_left_modules(ring, 8):
            omega, eta = adjunction_maps(P, K, K)
            assert omega.bijectivity() == (True, True) == eta.bijectivity()
    d = corpus.corner_m2z2()
    assert counit_map(d.P, regular_left(d.T)).bijectivity() == (True, True)


def test_adjunction_rejects_invalid_bimodule():
    z4 = zn(4)
    g = FinAbGroup((4,))
    left = regular_left(z4)
    zero_right = ModuleStructure(z4, g, RIGHT, (((0,),),))
    with pytest.raises(ValueError):
        adjunction_maps(Bimodule(left, zero_right), left, left)


def _adjunction_instances():
    for d in corpus.identity_data()[:6] + (corpus.corner_m2z2(),) + corpus.corner_data()[:8]:
        for M in enumerate_left_modules(d.S, 8)[:3]:
            for N in enumerate_left_modules(d.T, 8)[:3]:
                yield d, M, N


def test_adjunction_bijection_orders():
    n = 0
    for d, M, N in _adjunction_instances():
        pm = tensor_over(d.S, d.P, M).module
        hpn = hom_module(d.T, d.P, N, LEFT).module
        assert (hom_module(d.T, pm, N, LEFT).group.order
                == hom_module(d.S, M, hpn, LEFT).group.order)
        n += 1
    assert n >= 20


def test_triangle_identities():
    for d, L, K in _adjunction_instances():
        P = d.P
        # ω_{P⊗L} ∘ (P ⊗ η_L) = id on pure tensors
        eta = unit_map(P, L)
        tl = eta.context["tensor"]
        om = counit_map(P, tl.module)
        ten = om.context["tensor"]
        for p in P.group.gens():
            for l in L.group.gens():
                assert om(ten.pure(p, eta(l))) == tl.pure(p, l)
        # Hom(P, ω_K) ∘ η_{Hom(P,K)} = id, evaluated pointwise
        omk = counit_map(P, K)
        hk = omk.context["hom"]
        eta2 = unit_map(P, hk.module)
        h2 = eta2.context["hom"]
        for f in hk.group.gens():
            g = eta2(f)
            for p in P.group.gens():
                assert omk(h2.eval(g, p)) == hk.eval(f, p)


def test_localization_examples():
    z4 = zn(4)
    z2 = module_over_quotient(z4, FinAbGroup((2,)), LEFT)
    two = subgroup_generated(z4.group, [(2,)])
    zeta, xi = localization_maps(z4, two, z2)
    assert zeta.hom.is_zero() and not zeta.bijectivity()[0]
    assert not xi.bijectivity()[1]
    zero = subgroup_generated(z4.group, [])
    for U in enumerate_left_modules(z4, 16):
        zeta, xi = localization_maps(z4, zero, U)
        assert xi.source.order == 1 and zeta.target.order == 1
        assert (zeta.bijectivity() == (True, True)) == (U.group.order == 1)
    m2 = matrix_ring(2, 2)
    with pytest.raises(ValueError):
        localization_maps(m2, subgroup_generated(m2.group, [(1, 0, 0, 0)]), regular_left(m2))


def test_pairing_maps_examples():
    d = corpus.identity_data()[0]          # Z2
    assert all(k.bijectivity() == (True, True) for k in pairing_maps(d.mT))
    c = corpus.corner_m2z2()
    assert all(k.bijectivity()[0] for k in pairing_maps(c.mT))
    m = c.mT
    zm = MoritaSemiContext(m.T, m.S, m.P, m.Q, BalancedMap.zero(m.P, m.Q, m.T))
    for k in pairing_maps(zm):
        assert k.hom.is_zero() and not k.bijectivity()[0]


def test_pairing_construction_shape():
    with pytest.raises(ValueError):
        DualPairing(zn(2), regular_right(zn(2)), regular_left(zn(2)), LEFT, ())
