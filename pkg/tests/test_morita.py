import random

import pytest

import corpus
from moritakit.abelian import FinAbGroup, is_bijective, subgroup_generated
from moritakit.algebra import is_ideal, regular_left, zn
from moritakit.catlab import enumerate_left_modules
from moritakit.morita import (BalancedMap, MoritaDatum, MoritaSemiContext, build_datum,
                              build_semi_context, butterfly_check, classify_datum,
                              classify_semi_context, compatible_partner, elementary_rngs,
                              find_unity, flip_datum, matrix_datum, proposition_TT_check,
                              scalar_bimodule, strongly_faithful_check, unity_analysis)
from moritakit.pairing import CERTIFIED, alpha_sufficient

CORNER_WITNESS = (1, 1, 1, 0)


def _zero_bracket(m):
    return MoritaSemiContext(m.T, m.S, m.P, m.Q, BalancedMap.zero(m.P, m.Q, m.T))


def flip_z4():
    z4 = zn(4)
    P = scalar_bimodule(z4, FinAbGroup((2,)))
    beta = BalancedMap.from_function(P, P, z4, lambda p, q: (2 * p[0] * q[0],))
    return flip_datum(z4, P, beta)


def coprime_zero():
    """T = S = Z6, P = Z3, Q = Z2, both brackets zero; Q (x) P = 0."""
    z6 = zn(6)
    P, Q = scalar_bimodule(z6, FinAbGroup((3,))), scalar_bimodule(z6, FinAbGroup((2,)))
    return MoritaDatum(MoritaSemiContext(z6, z6, P, Q, BalancedMap.zero(P, Q, z6)),
                       MoritaSemiContext(z6, z6, Q, P, BalancedMap.zero(Q, P, z6)))


def incompatible_corner():
    c = corpus.corner_m2z2()
    return MoritaDatum(c.mT, _zero_bracket(c.mS))


# construction and classification

def test_build_semi_context_traces():
    ident = corpus.identity_data()[0].mT
    assert build_semi_context(ident.T, ident.S, ident.P, ident.Q, ident.beta).trace.is_everything()
    c = corpus.corner_m2z2().mT
    assert build_semi_context(c.T, c.S, c.P, c.Q, c.beta).trace.is_everything()
    z = _zero_bracket(c)
    assert build_semi_context(z.T, z.S, z.P, z.Q, z.beta).trace.order == 1


def test_build_semi_context_rejects_unbalanced():
    c = corpus.corner_m2z2().mT
    # a constant table is never T-linear on the corner bimodules
    const = BalancedMap(c.P, c.Q, c.T, tuple(tuple(c.T.one for _ in c.Q.group.gens())
                                             for _ in c.P.group.gens()))
    with pytest.raises(ValueError, match="linear|balanced"):
        build_semi_context(c.T, c.S, c.P, c.Q, const)


def test_classify_corner():
    c = corpus.corner_m2z2()
    r = classify_semi_context(c.mT)
    assert r["tensor_order"] == r["target_order"] == 16
    assert r["injective"] and r["semi_strict"] and r["kernel_order"] == 1
    assert r["decomposable_count"] == 10
    assert list(CORNER_WITNESS) not in r["decomposable_values"]
    assert r["trace_is_T"] and not r["decomposable_is_trace"] and r["notes"]
    s = classify_semi_context(c.mS)
    assert s["injective"] and s["semi_strict"]


def test_classify_identity():
    for d in corpus.identity_data():
        r = classify_datum(d)
        assert r["is_context"] and r["strict"] and r["non_degenerate"]
        assert r["left_alpha"] == r["right_alpha"] == CERTIFIED


def test_build_datum_examples():
    c = corpus.corner_m2z2()
    assert build_datum(c.mT, c.mS).is_context
    assert flip_z4().is_context
    bad = incompatible_corner()
    w = bad.compatibility_witness()
    assert not bad.is_context and w is not None
    # the witness really breaks compatibility
    kind, i, j, k = w
    P, Q = bad.P, bad.Q
    q, p, q2 = Q.group.gens()[i], P.group.gens()[j], Q.group.gens()[k]
    assert kind.startswith("<q,p>q'")
    assert Q.left.act(bad.beta_S(q, p), q2) != Q.right.act(bad.beta_T(p, q2), q)
    with pytest.raises(ValueError):
        MoritaDatum(c.mT, c.mT)


def test_matrix_datum_is_context():
    d = matrix_datum(2, 2)
    assert d.is_context and classify_datum(d)["strict"]


# elementary rngs and unity

def test_elementary_rngs_identity():
    for d in corpus.identity_data()[:6]:
        tt = elementary_rngs(d.mT)[0]
        assert tt.ok and is_bijective(tt.connecting.hom) == (True, True)
        a = unity_analysis(tt, d.mT)
        assert a["unity_found"] and a["respects_unities"] and a["conclusion_verified"]


def test_elementary_rngs_corner():
    c = corpus.corner_m2z2()
    rngs = elementary_rngs(c)
    assert [e.which for e in rngs] == ["TT", "Sb", "SS", "Tb"] and all(e.ok for e in rngs)
    tt = rngs[0]
    assert tt.ring.order == 16 and find_unity(tt.ring) is not None
    a = unity_analysis(tt, c.mT)
    assert a["bijective"] and a["conclusion_verified"]


def test_elementary_rngs_zero_bracket():
    z = _zero_bracket(corpus.corner_m2z2().mT)
    tt = elementary_rngs(z)[0]
    assert tt.ok and all(not any(x) for row in tt.ring.mult for x in row)
    a = unity_analysis(tt, z)
    assert not a["unity_found"] and a["conclusion_verified"] is None


def test_elementary_rngs_random_semi_contexts():
    data = corpus.free_data()
    assert len(data) == 100
    for d in data:
        for e in elementary_rngs(d.mT):
            assert e.ok, (e.which, e.report.lines()[:3])


# Prop T=T and the butterfly

def test_proposition_TT_examples():
    r = proposition_TT_check(corpus.corner_m2z2())
    assert r["S_agree"] and r["T_agree"] and r["is_context"] and r["ok"]
    r = proposition_TT_check(incompatible_corner())
    assert not r["is_context"] and not (r["S_agree"] and r["T_agree"])
    assert r["S_witness"] or r["T_witness"]
    r = proposition_TT_check(coprime_zero())
    assert r["S_agree"] and r["T_agree"] and r["is_context"]
    assert not r["direction2_applicable"] and r["ok"]


def test_proposition_TT_corpus():
    for d in corpus.corpus() + corpus.free_data():
        r = proposition_TT_check(d)
        assert r["direction1"] and r["ok"]


def test_butterfly_examples():
    c = butterfly_check(corpus.corner_m2z2())
    assert all(c["identities"].values()) and c["ok"]
    assert c["Q_r"]["semi_strict"] and c["rho_P"]["injective"] and c["M_S"] == {
        "injective": True, "surjective": True}
    assert all(butterfly_check(d)["ok"] for d in corpus.identity_data())
    assert butterfly_check(flip_z4())["ok"]
    with pytest.raises(ValueError):
        butterfly_check(incompatible_corner())


def test_strongly_faithful_examples():
    d = corpus.identity_data()[2]            # Z4
    for U in enumerate_left_modules(d.T, 16):
        r = strongly_faithful_check(d, U)
        assert r["commutes"] and r["zeta_injective"] and r["alpha_injective"]
    c = corpus.corner_m2z2()
    r = strongly_faithful_check(c, regular_left(c.T))
    assert r["commutes"] and r["alpha_injective"] and r["ok"]
    z = coprime_zero()
    U = scalar_bimodule(zn(6), FinAbGroup((2,))).left
    r = strongly_faithful_check(z, U)
    assert r["commutes"] and not r["zeta_injective"] and r["hypothesis"] == "hypothesis failed"
    with pytest.raises(ValueError):
        strongly_faithful_check(incompatible_corner(), regular_left(c.T))


# invariants

def test_trace_is_two_sided_ideal():
    for d in corpus.corpus() + corpus.free_data():
        for m in (d.mT, d.mS):
            assert is_ideal(m.T, m.trace)


def test_decomposable_values_span_trace():
    for d in corpus.corpus():
        for m in (d.mT, d.mS):
            dec = m.decomposable_values()
            assert dec <= m.trace.elements()
            assert subgroup_generated(m.T.group, sorted(dec)).elements() == m.trace.elements()


def test_certified_sides_are_injective_on_contexts():
    n = 0
    for d in corpus.contexts():
        for m in (d.mT, d.mS):
            if (alpha_sufficient(m.p_l()).status == CERTIFIED
                    and alpha_sufficient(m.q_r()).status == CERTIFIED):
                assert is_bijective(m.connecting_map)[0]
                n += 1
    assert n > 50


def test_certified_semi_context_need_not_be_injective():
    # T = S = Z2, P = Q = Z2^2, <p, q> = p . q: both pairings are certified, yet
    # P (x) Q has order 16 and maps onto Z2
    z2 = zn(2)
    V = scalar_bimodule(z2, FinAbGroup((2, 2)))
    beta = BalancedMap.from_function(V, V, z2, lambda p, q: ((p[0] * q[0] + p[1] * q[1]) % 2,))
    m = build_semi_context(z2, z2, V, V, beta)
    assert alpha_sufficient(m.p_l()).status == CERTIFIED
    assert alpha_sufficient(m.q_r()).status == CERTIFIED
    assert is_bijective(m.connecting_map) == (False, True)
    # pairing it with its flip does not give a context, so contexts are unaffected
    d = flip_datum(z2, V, beta)
    assert d.compatibility_witness() == ("<q,p>q' = q<p,q'>", 0, 0, 1)


def test_compatible_partner():
    rng = random.Random(3)
    n = 0
    for d in corpus.corner_data()[:20]:
        mS = compatible_partner(rng, d.mT)
        assert mS is not None          # the corner bracket always has one
        assert MoritaDatum(d.mT, mS).is_context
        n += 1
    # zero <,>_T with a nonzero partner search still succeeds (zero is compatible)
    z = _zero_bracket(corpus.corner_m2z2().mT)
    assert compatible_partner(rng, z) is not None
    assert n == 20
