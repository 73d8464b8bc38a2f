"""The corner datum of M2(Z2) at e = E11, end to end.

Run: python demos/corner_m2z2.py
"""
from moritakit.algebra import corner_context, matrix_ring, regular_left
from moritakit.catlab import enumerate_left_modules, equivalence_witness, membership
from moritakit.morita import butterfly_check, classify_semi_context, elementary_rngs, unity_analysis

T = matrix_ring(2, 2)
d = corner_context(T, (1, 0, 0, 0))
print(f"T = M2(Z2), |S| = {d.S.order}, |P| = {d.P.order}, |Q| = {d.Q.order}, context: {d.is_context}")

# two readings of the image of <,>_T
r = classify_semi_context(d.mT)
print(f"P (x)_S Q -> T: orders {r['tensor_order']} -> {r['target_order']}, kernel {r['kernel_order']}")
print(f"  injective {r['injective']}, surjective {r['semi_strict']}")
print(f"  values <p,q> on pairs: {r['decomposable_count']} of {r['trace_order']}")
print(f"  [[1,1],[1,0]] is a value: {[1, 1, 1, 0] in r['decomposable_values']}")
print(f"<,>_S bijective: {classify_semi_context(d.mS)['strict']}")

tt = elementary_rngs(d.mT)[0]
u = unity_analysis(tt, d.mT)
print(f"elementary rng on P (x) Q: order {tt.ring.order}, unity at tensor coordinates {u['unity']}, "
      f"bracket bijective {u['bijective']}")

b = butterfly_check(d)
print(f"butterfly identities: {sum(b['identities'].values())}/{len(b['identities'])} hold")

TT = regular_left(T)
m = membership(TT, "X", d)
print(f"T in X_l: {m.flag} (maps {', '.join(w['map'] for w in m.witness)})")
w = equivalence_witness(d, TT)
print(f"X=X witness at T: Hom_T(P,T) of order {w.images['Hom_T(P,V)']}, ok {w.ok}")
simple = enumerate_left_modules(T, 16)[1]
w = equivalence_witness(d, simple)
print(f"X=X witness at the simple module (order {simple.order}): ok {w.ok}")
