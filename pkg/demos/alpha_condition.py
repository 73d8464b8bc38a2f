"""Dual pairings, local projectivity and the alpha verdicts.

Run: python demos/alpha_condition.py
"""
from moritakit.abelian import FinAbGroup, is_bijective
from moritakit.algebra import module_over_quotient, regular_left, regular_right, zn
from moritakit.morita import BalancedMap, build_semi_context, scalar_bimodule
from moritakit.pairing import (alpha_bounded, alpha_sufficient, canonical_pairing,
                               classify_pairing, is_locally_projective, zero_pairing)

Z4 = zn(4)
Z2 = module_over_quotient(Z4, FinAbGroup((2,)))

for label, W in (("Z4 over Z4", regular_left(Z4)), ("Z2 over Z4", Z2)):
    lp = is_locally_projective(Z4, W)
    P = canonical_pairing(Z4, W)
    v = classify_pairing(P, alpha_bound=16)
    print(f"{label}: locally projective {lp.flag}, certificate terms "
          f"{len(lp.certificate) if lp.certificate else 0}; (*W, W) strict {v.strict}, "
          f"alpha {v.alpha}")

z = zero_pairing(Z4, regular_right(Z4), regular_left(Z4))
print(f"zero pairing: sufficient test {alpha_sufficient(z)}; bounded search {alpha_bounded(z, 16)}")

# both pairings of this semi-context are certified, yet <,>_T is not injective
z2 = zn(2)
V = scalar_bimodule(z2, FinAbGroup((2, 2)))
m = build_semi_context(z2, z2, V, V, BalancedMap.from_function(
    V, V, z2, lambda p, q: ((p[0] * q[0] + p[1] * q[1]) % 2,)))
print(f"dot product on Z2^2: P_l {alpha_sufficient(m.p_l()).status}, "
      f"Q_r {alpha_sufficient(m.q_r()).status}, "
      f"<,>_T (injective, surjective) = {is_bijective(m.connecting_map)}")
