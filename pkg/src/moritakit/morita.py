"""Morita semi-contexts, data and contexts.

A semi-context ``(T, S, P, Q, <,>_T)`` has ``_T P_S``, ``_S Q_T`` and an
S-balanced (T,T)-bilinear map ``P x Q -> T``.  A datum is two of them sharing
``T, S, P, Q``; it is a context when the two brackets are compatible.

The elementary rngs live on the tensor carriers:

  ``TT``  P ⊗_S Q, (p⊗q)(p'⊗q') = <p,q>_T p' ⊗ q'
  ``Sb``  Q ⊗_T P, (q⊗p)(q'⊗p') = q <p,q'>_T ⊗ p'
  ``SS``  Q ⊗_T P, (q⊗p)(q'⊗p') = <q,p>_S q' ⊗ p'
  ``Tb``  P ⊗_S Q, (p⊗q)(p'⊗q') = p <q,p'>_S ⊗ q'

``SS`` and ``Tb`` are ``TT`` and ``Sb`` of the S-side semi-context.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterator

from .abelian import (AbHom, Elem, FinAbGroup, SubgroupEmbedding, is_bijective, kernel,
                      preimage, subgroup_generated)
from .algebra import (LEFT, RIGHT, AnyModule, Bimodule, FinRing, ModuleStructure, Report,
                      RngMorphism, coordinates, endo_ring, is_ideal, matrix_ring,
                      product_ring, regular_bimodule, sub_action, sub_ring,
                      upper_triangular, validate_module, validate_morphism, validate_ring, zn)
from .pairing import (CERTIFIED, INCONCLUSIVE, REFUTED, DualPairing,
                      alpha_verdict)
from .tensor_hom import (TensorResult, alpha_map, bracket_map, hom_module, localization_maps,
                         pairing_maps, structure_map, tensor_over)


@dataclass(frozen=True, eq=False)
class BalancedMap:
    X: AnyModule        # right module over the middle ring
    Y: AnyModule        # left module over the middle ring
    ring: FinRing       # where the values live
    table: tuple[tuple[Elem, ...], ...]

    def __post_init__(self):
        g = self.ring.group
        t = tuple(tuple(g.reduce(x) for x in row) for row in self.table)
        if len(t) != self.X.group.rank or any(len(r) != self.Y.group.rank for r in t):
            raise ValueError("balanced map table must be (X generators) x (Y generators)")
        object.__setattr__(self, "table", t)

    @classmethod
    def from_function(cls, X: AnyModule, Y: AnyModule, ring: FinRing,
                      f: Callable[[Elem, Elem], Elem]) -> "BalancedMap":
        return cls(X, Y, ring, tuple(tuple(f(x, y) for y in Y.group.gens())
                                     for x in X.group.gens()))

    @classmethod
    def zero(cls, X: AnyModule, Y: AnyModule, ring: FinRing) -> "BalancedMap":
        z = ring.zero()
        return cls.from_function(X, Y, ring, lambda x, y: z)

    def __call__(self, x: Elem, y: Elem) -> Elem:
        g = self.ring.group
        out = [0] * g.rank
        for a, u in enumerate(x):
            if u:
                for b, v in enumerate(y):
                    if v:
                        for k, z in enumerate(self.table[a][b]):
                            out[k] += u * v * z
        return g.reduce(out)

    def __eq__(self, other):
        return (isinstance(other, BalancedMap) and self.X == other.X and self.Y == other.Y
                and self.ring == other.ring and self.table == other.table)

    def __hash__(self):
        return hash((self.X, self.Y, self.ring, self.table))


@dataclass(frozen=True, eq=False)
class MoritaSemiContext:
    T: FinRing
    S: FinRing
    P: Bimodule     # _T P_S
    Q: Bimodule     # _S Q_T
    beta: BalancedMap

    def _cached(self, key, make):
        v = self.__dict__.get(key)
        if v is None:
            v = make()
            object.__setattr__(self, key, v)
        return v

    @property
    def tensor(self) -> TensorResult:
        return tensor_over(self.S, self.P, self.Q)

    @property
    def connecting_map(self) -> AbHom:
        """``<,>_T`` on ``P ⊗_S Q``."""
        return self._cached("_conn", lambda: self.tensor.from_bilinear(self.beta, self.T.group))

    @property
    def trace(self) -> SubgroupEmbedding:
        return self._cached("_trace", lambda: subgroup_generated(
            self.T.group, [self.beta(p, q) for p in self.P.group.gens() for q in self.Q.group.gens()]))

    def decomposable_values(self) -> frozenset[Elem]:
        return self._cached("_dec", lambda: frozenset(
            self.beta(p, q) for p in self.P.group.elements() for q in self.Q.group.elements()))

    def p_l(self) -> DualPairing:
        """``(Q, _T P)`` with ``<q, p> = <p, q>_T``."""
        return self._cached("_pl", lambda: DualPairing.from_function(
            self.T, self.Q, self.P, LEFT, lambda q, p: self.beta(p, q), name="P_l"))

    def q_r(self) -> DualPairing:
        """``(P, Q_T)`` with ``<p, q> = <p, q>_T``."""
        return self._cached("_qr", lambda: DualPairing.from_function(
            self.T, self.P, self.Q, RIGHT, lambda p, q: self.beta(p, q), name="Q_r"))


def validate_semi_context(m: MoritaSemiContext) -> Report:
    rep = Report()
    for name, r in (("T", m.T), ("S", m.S)):
        rep.extend(validate_ring(r), f"{name}: ")
    for name, b in (("P", m.P), ("Q", m.Q)):
        rep.extend(validate_module(b), f"{name}: ")
    if m.P.left.ring != m.T or m.P.right.ring != m.S:
        rep.fail("P is not a (T,S)-bimodule", ())
    if m.Q.left.ring != m.S or m.Q.right.ring != m.T:
        rep.fail("Q is not an (S,T)-bimodule", ())
    b = m.beta
    if b.X != m.P or b.Y != m.Q or b.ring != m.T:
        rep.fail("bracket is not defined on P x Q with values in T", ())
    if not rep.ok:
        return rep
    T, g = m.T, m.T.group
    pg, qg = m.P.group.gens(), m.Q.group.gens()
    for a, d in enumerate(m.P.group.moduli):
        for c, e in enumerate(m.Q.group.moduli):
            x = b.table[a][c]
            if g.scale(d, x) != g.zero() or g.scale(e, x) != g.zero():
                rep.fail("bracket well-defined", (a, c))
    for u, s in enumerate(m.S.group.gens()):
        for a, p in enumerate(pg):
            for c, q in enumerate(qg):
                if b(m.P.right.act(s, p), q) != b(p, m.Q.left.act(s, q)):
                    rep.fail("S-balanced", (u, a, c))
    for u, t in enumerate(T.group.gens()):
        for a, p in enumerate(pg):
            for c, q in enumerate(qg):
                if b(m.P.left.act(t, p), q) != T.mul(t, b(p, q)):
                    rep.fail("left T-linear", (u, a, c))
                if b(p, m.Q.right.act(t, q)) != T.mul(b(p, q), t):
                    rep.fail("right T-linear", (u, a, c))
    if rep.ok and not is_ideal(T, m.trace):
        rep.fail("trace is not a two-sided ideal", ())
    return rep


def build_semi_context(T: FinRing, S: FinRing, P: Bimodule, Q: Bimodule,
                       beta: BalancedMap) -> MoritaSemiContext:
    m = MoritaSemiContext(T, S, P, Q, beta)
    rep = validate_semi_context(m)
    if not rep.ok:
        raise ValueError("invalid semi-context: " + "; ".join(rep.lines()))
    return m


@dataclass(frozen=True, eq=False)
class MoritaDatum:
    mT: MoritaSemiContext
    mS: MoritaSemiContext   # (S, T, Q, P, <,>_S)

    def __post_init__(self):
        a, b = self.mT, self.mS
        if a.T != b.S or a.S != b.T or a.P != b.Q or a.Q != b.P:
            raise ValueError("semi-contexts of a datum must share T, S, P, Q")

    T = property(lambda self: self.mT.T)
    S = property(lambda self: self.mT.S)
    P = property(lambda self: self.mT.P)
    Q = property(lambda self: self.mT.Q)
    beta_T = property(lambda self: self.mT.beta)
    beta_S = property(lambda self: self.mS.beta)

    def compatibility_witness(self) -> tuple | None:
        """First generator triple breaking compatibility, or None for a context."""
        c = self.__dict__.get("_compat", False)
        if c is not False:
            return c
        P, Q, bt, bs = self.P, self.Q, self.beta_T, self.beta_S
        pg, qg = P.group.gens(), Q.group.gens()
        w = None
        for i, q in enumerate(qg):
            for j, p in enumerate(pg):
                for k, q2 in enumerate(qg):
                    if Q.left.act(bs(q, p), q2) != Q.right.act(bt(p, q2), q):
                        w = ("<q,p>q' = q<p,q'>", i, j, k)
                        break
                if w:
                    break
            if w:
                break
        if w is None:
            for i, p in enumerate(pg):
                for j, q in enumerate(qg):
                    for k, p2 in enumerate(pg):
                        if P.right.act(bs(q, p2), p) != P.left.act(bt(p, q), p2):
                            w = ("p<q,p'> = <p,q>p'", i, j, k)
                            break
                    if w:
                        break
                if w:
                    break
        object.__setattr__(self, "_compat", w)
        return w

    @property
    def is_context(self) -> bool:
        return self.compatibility_witness() is None

    # the four pairings
    def pairings(self) -> dict[str, DualPairing]:
        return {"P_l": self.mT.p_l(), "Q_r": self.mT.q_r(),
                "Q_l": self.mS.p_l(), "P_r": self.mS.q_r()}


def build_datum(mT: MoritaSemiContext, mS: MoritaSemiContext) -> MoritaDatum:
    for m in (mT, mS):
        rep = validate_semi_context(m)
        if not rep.ok:
            raise ValueError("invalid semi-context: " + "; ".join(rep.lines()))
    return MoritaDatum(mT, mS)


# ---------------------------------------------------------------------------
# classification

def _fmt(x: Elem) -> list[int]:
    return list(x)


def classify_semi_context(m: MoritaSemiContext, alpha_bound: int = 0) -> dict:
    inj, surj = is_bijective(m.connecting_map)
    k_pl, k_qr = pairing_maps(m)
    nondeg = k_pl.bijectivity()[0] and k_qr.bijectivity()[0]
    a_pl = alpha_verdict(m.p_l(), alpha_bound)
    a_qr = alpha_verdict(m.q_r(), alpha_bound)
    if a_pl.status == CERTIFIED and a_qr.status == CERTIFIED:
        alpha = CERTIFIED
    elif REFUTED in (a_pl.status, a_qr.status):
        alpha = REFUTED
    else:
        alpha = INCONCLUSIVE
    trace = m.trace
    dec = m.decomposable_values()
    trace_elems = trace.elements()
    notes = []
    if dec != trace_elems:
        missing = sorted(trace_elems - dec)
        notes.append(
            f"image discrepancy: the additive image (trace ideal) has {trace.order} elements, "
            f"the set of values on pairs <p,q> has {len(dec)}; {len(missing)} trace elements "
            f"are sums but not single values, e.g. {_fmt(missing[0])}. Injectivity and "
            f"surjectivity above refer to the tensor-level additive map")
    return {
        "ring": m.T.name or repr(m.T.group),
        "tensor_order": m.tensor.group.order,
        "target_order": m.T.order,
        "kernel_order": kernel(m.connecting_map).order,
        "injective": inj, "semi_strict": surj, "strict": inj and surj,
        "non_degenerate": nondeg,
        "alpha_P_l": a_pl.status, "alpha_P_l_reason": a_pl.reason,
        "alpha_Q_r": a_qr.status, "alpha_Q_r_reason": a_qr.reason,
        "alpha": alpha,
        "trace_order": trace.order,
        "trace_is_T": trace.is_everything(),
        "trace_generators": [_fmt(x) for x in trace.generators()],
        "decomposable_count": len(dec),
        "decomposable_values": [_fmt(x) for x in sorted(dec)],
        "decomposable_is_trace": dec == trace_elems,
        "notes": notes,
    }


def classify_datum(d: MoritaDatum, alpha_bound: int = 0) -> dict:
    ct = classify_semi_context(d.mT, alpha_bound)
    cs = classify_semi_context(d.mS, alpha_bound)
    w = d.compatibility_witness()
    left = _both(ct["alpha_P_l"], cs["alpha_P_l"])    # P_l over T, Q_l over S
    right = _both(ct["alpha_Q_r"], cs["alpha_Q_r"])   # Q_r over T, P_r over S
    return {"is_context": w is None, "compatibility_witness": list(w) if w else None,
            "injective": ct["injective"] and cs["injective"],
            "semi_strict": ct["semi_strict"] and cs["semi_strict"],
            "strict": ct["strict"] and cs["strict"],
            "non_degenerate": ct["non_degenerate"] and cs["non_degenerate"],
            "left_alpha": left, "right_alpha": right,
            "T_side": ct, "S_side": cs}


def _both(a: str, b: str) -> str:
    if a == CERTIFIED and b == CERTIFIED:
        return CERTIFIED
    if REFUTED in (a, b):
        return REFUTED
    return INCONCLUSIVE


# ---------------------------------------------------------------------------
# elementary rngs

@dataclass
class ElementaryRng:
    which: str                  # TT, Sb, SS, Tb
    carrier: TensorResult
    ring: FinRing
    morphisms: dict[str, RngMorphism]
    connecting: RngMorphism | None
    report: Report

    @property
    def ok(self) -> bool:
        return self.report.ok


def _terms(ten: TensorResult, x: Elem) -> Iterator[tuple[Elem, Elem, int]]:
    for k, c in enumerate(x):
        if c:
            for m, n, cc in ten.generator_terms(k):
                yield m, n, c * cc


def _carrier_ring(ten: TensorResult, pure_mul, name: str) -> FinRing:
    g = ten.group

    def mul(x, y):
        acc = g.zero()
        for m, n, c in _terms(ten, x):
            for m2, n2, c2 in _terms(ten, y):
                acc = g.add(acc, g.scale(c * c2, pure_mul(m, n, m2, n2)))
        return acc
    return FinRing.from_function(g, mul, None, name=name)


def _into_end(carrier: FinRing, ten: TensorResult, M: Bimodule, side: str,
              f: Callable[[Elem, Elem], Callable[[Elem], Elem]]) -> RngMorphism:
    """Rng map from a tensor carrier into End(M) on ``side`` (``^op`` for left)."""
    ring = M.left.ring if side == LEFT else M.right.ring
    E, _ = endo_ring(M, side)
    h = hom_module(ring, M, M, side)
    hom = ten.from_bilinear(lambda a, b: h.from_function(f(a, b)), h.group)
    return RngMorphism(carrier, E, hom)


def _semi_rngs(m: MoritaSemiContext, compatible: bool, names=("TT", "Sb")) -> list[ElementaryRng]:
    T, P, Q, b = m.T, m.P, m.Q, m.beta
    out = []

    # blackboard: P ⊗_S Q
    ten = m.tensor
    tt = _carrier_ring(ten, lambda p, q, p2, q2: ten.pure(P.left.act(b(p, q), p2), q2),
                       names[0])
    rep = validate_ring(tt)
    conn = RngMorphism(tt, T, m.connecting_map)
    rep.extend(validate_morphism(conn), "connecting: ")
    psi = _into_end(tt, ten, P, RIGHT, lambda p, q: lambda pt: P.left.act(b(p, q), pt))
    phi = _into_end(tt, ten, Q, LEFT, lambda p, q: lambda qt: Q.right.act(b(p, q), qt))
    for nm, f in (("psi", psi), ("phi", phi)):
        rep.extend(validate_morphism(f), nm + ": ")
    # P is a left and Q a right module over the carrier through the bracket
    conn_h = m.connecting_map
    p_mod = ModuleStructure.from_function(tt, P.group, LEFT, lambda x, pt: P.left.act(conn_h(x), pt))
    q_mod = ModuleStructure.from_function(tt, Q.group, RIGHT, lambda x, qt: Q.right.act(conn_h(x), qt))
    rep.extend(validate_module(p_mod), "P over carrier: ")
    rep.extend(validate_module(q_mod), "Q over carrier: ")
    out.append(ElementaryRng(names[0], ten, tt, {"psi": psi, "phi": phi}, conn, rep))

    # bold: Q ⊗_T P
    ten2 = tensor_over(T, Q, P)
    sb = _carrier_ring(ten2, lambda q, p, q2, p2: ten2.pure(Q.right.act(b(p, q2), q), p2),
                       names[1])
    rep2 = validate_ring(sb)
    Psi = _into_end(sb, ten2, P, LEFT, lambda q, p: lambda pt: P.left.act(b(pt, q), p))
    Phi = _into_end(sb, ten2, Q, RIGHT, lambda q, p: lambda qt: Q.right.act(b(p, qt), q))
    for nm, f in (("Psi", Psi), ("Phi", Phi)):
        rep2.extend(validate_morphism(f), nm + ": ")
    out.append(ElementaryRng(names[1], ten2, sb, {"Psi": Psi, "Phi": Phi}, None, rep2))
    return out


def elementary_rngs(obj: MoritaSemiContext | MoritaDatum) -> list[ElementaryRng]:
    """``TT`` and ``Sb`` of a semi-context; all four for a datum.

    For a datum the bracket ``<,>_S`` (resp. ``<,>_T``) out of ``Sb`` (resp.
    ``Tb``) is attached and validated only when the datum is a context.
    """
    if isinstance(obj, MoritaSemiContext):
        return _semi_rngs(obj, False)
    ctx = obj.is_context
    tt, sb = _semi_rngs(obj.mT, ctx, ("TT", "Sb"))
    ss, tb = _semi_rngs(obj.mS, ctx, ("SS", "Tb"))
    if ctx:
        sb.connecting = RngMorphism(sb.ring, obj.S, obj.mS.connecting_map)
        sb.report.extend(validate_morphism(sb.connecting), "connecting: ")
        tb.connecting = RngMorphism(tb.ring, obj.T, obj.mT.connecting_map)
        tb.report.extend(validate_morphism(tb.connecting), "connecting: ")
    return [tt, sb, ss, tb]


def find_unity(r: FinRing) -> Elem | None:
    """Solve ``u g = g u = g`` on generators."""
    g = r.group
    gens = g.gens()
    target = FinAbGroup(g.moduli * (2 * len(gens)))
    images = []
    for e in gens:
        v: list[int] = []
        for x in gens:
            v.extend(r.mul(e, x))
        for x in gens:
            v.extend(r.mul(x, e))
        images.append(v)
    h = AbHom.from_images(g, target, images)
    want: list[int] = []
    for x in gens:
        want.extend(x)
    want = want * 2
    return preimage(h, want)


def unity_analysis(e: ElementaryRng, m: MoritaSemiContext) -> dict:
    """Unity of a carrier rng and what it forces on the connecting map."""
    u = find_unity(e.ring)
    out = {"rng": e.which, "unity_found": u is not None, "unity": _fmt(u) if u else None,
           "respects_unities": False, "surjective": None, "bijective": None,
           "conclusion_verified": None}
    if u is None or e.connecting is None or m.T.one is None:
        return out
    inj, surj = is_bijective(e.connecting.hom)
    respects = e.connecting(u) == m.T.one
    out.update(respects_unities=respects, surjective=surj, bijective=inj and surj)
    if respects:
        m_inj = is_bijective(m.connecting_map)[0]
        out["conclusion_verified"] = surj and (not m_inj or inj)
    return out


# ---------------------------------------------------------------------------
# faithfulness, Prop T=T, butterfly

def tensor_annihilator(ring: FinRing, V: AnyModule, L: AnyModule, of: str = "L") -> SubgroupEmbedding:
    """``{l : V ⊗ l = 0}`` (``of="L"``) or ``{v : v ⊗ L = 0}`` (``of="V"``).

    ``V`` is a right and ``L`` a left module over ``ring``.
    """
    ten = tensor_over(ring, V, L)
    if of == "L":
        others, src = V.group.gens(), L.group
        parts = lambda x: [ten.pure(v, x) for v in others]
    else:
        others, src = L.group.gens(), V.group
        parts = lambda x: [ten.pure(x, l) for l in others]
    target = FinAbGroup(ten.group.moduli * len(others))
    h = AbHom.from_images(src, target, [sum(parts(x), ()) for x in src.gens()])
    return kernel(h)


def proposition_TT_check(d: MoritaDatum) -> dict:
    tt, sb, ss, tb = _semi_rngs(d.mT, False) + _semi_rngs(d.mS, False, ("SS", "Tb"))

    def differ(a: FinRing, b: FinRing):
        for i, row in enumerate(a.mult):
            for j, x in enumerate(row):
                if x != b.mult[i][j]:
                    return (i, j)
        return None
    w_s = differ(sb.ring, ss.ring)
    w_t = differ(tb.ring, tt.ring)
    ctx = d.is_context
    # _T P is Q-faithful: no nonzero q with q ⊗_T P = 0; Q_T is P-faithful: no p with Q ⊗_T p = 0
    f_p = tensor_annihilator(d.T, d.Q, d.P, of="V").is_trivial()
    f_q = tensor_annihilator(d.T, d.Q, d.P, of="L").is_trivial()
    agree = w_s is None and w_t is None
    dir1 = (not ctx) or agree
    applicable = f_p and f_q
    dir2 = (not applicable) or (agree == ctx)
    return {"S_agree": w_s is None, "S_witness": list(w_s) if w_s else None,
            "T_agree": w_t is None, "T_witness": list(w_t) if w_t else None,
            "is_context": ctx, "P_Q_faithful": f_p, "Q_P_faithful": f_q,
            "direction1": dir1, "direction2_applicable": applicable, "direction2": dir2,
            "ok": dir1 and dir2}


def precompose(h_from, h_to, k: AbHom) -> AbHom:
    """``F -> F ∘ k`` between two Hom results."""
    return AbHom.from_images(h_from.group, h_to.group,
                             [h_to.element(h_from.to_hom(x) @ k) for x in h_from.group.gens()])


def butterfly_check(d: MoritaDatum) -> dict:
    """Composite identities around ``<,>_S`` and the consequences for ``ρ_P``, ``λ_Q``."""
    if not d.is_context:
        raise ValueError("butterfly diagram needs a Morita context")
    from .pairing import canonical_pairing

    T, P, Q = d.T, d.P, d.Q
    ten = tensor_over(T, Q, P)
    bs = d.mS.connecting_map
    pl, qr = d.mT.p_l(), d.mT.q_r()
    k_pl, k_qr = pairing_maps(d.mT)
    ident: dict[str, bool] = {}

    a_p = alpha_map(qr, P)
    rho = structure_map(P, LEFT).hom
    rho_bs = rho @ bs
    ident["alpha_P^Qr = rho o <,>_S"] = a_p.hom == rho_bs
    br_p = bracket_map(T, P, LEFT)
    kk = ten.tensor_maps(br_p.context["tensor"], k_pl.hom, AbHom.identity(P.group))
    ident["[,]_P o (kappa_Pl x id) = rho o <,>_S"] = br_p.hom @ kk == rho_bs
    can_q = canonical_pairing(T, Q, RIGHT)
    a_pq = alpha_map(can_q, P)
    ident["(kappa_Qr, P) o alpha_P^Q = rho o <,>_S"] = (
        precompose(a_pq.context["hom"], a_p.context["hom"], k_qr.hom) @ a_pq.hom == rho_bs)

    a_q = alpha_map(pl, Q)
    lam = structure_map(Q, RIGHT).hom
    lam_bs = lam @ bs
    ident["alpha_Q^Pl = lambda o <,>_S"] = a_q.hom == lam_bs
    br_q = bracket_map(T, Q, RIGHT)
    kk2 = ten.tensor_maps(br_q.context["tensor"], AbHom.identity(Q.group), k_qr.hom)
    ident["[,]_Q o (id x kappa_Qr) = lambda o <,>_S"] = br_q.hom @ kk2 == lam_bs
    can_p = canonical_pairing(T, P, LEFT)
    a_qp = alpha_map(can_p, Q)
    ident["(kappa_Pl, Q) o alpha_Q^P = lambda o <,>_S"] = (
        precompose(a_qp.context["hom"], a_q.context["hom"], k_pl.hom) @ a_qp.hom == lam_bs)

    qr_inj, qr_surj = a_p.bijectivity()
    pl_inj, pl_surj = a_q.bijectivity()
    bs_inj, bs_surj = is_bijective(bs)
    rho_inj, rho_surj = is_bijective(rho)
    lam_inj, lam_surj = is_bijective(lam)
    parts = []

    def part(label, hyp, concl):
        parts.append({"part": label, "hypothesis": hyp, "conclusion": concl,
                      "ok": (not hyp) or concl})
    part("1a: Q_r injective => M_S injective", qr_inj, bs_inj)
    part("1b: Q_r semi-strict => rho_P surjective", qr_surj, rho_surj)
    part("2: P_S faithful, Q_r semi-strict => rho_P bijective, M_S strict",
         rho_inj and qr_surj, rho_inj and rho_surj and bs_inj and bs_surj)
    part("3a: P_l injective => M_S injective", pl_inj, bs_inj)
    part("3b: P_l semi-strict => lambda_Q surjective", pl_surj, lam_surj)
    part("4: _S Q faithful, P_l semi-strict => lambda_Q bijective, M_S strict",
         lam_inj and pl_surj, lam_inj and lam_surj and bs_inj and bs_surj)
    ok = all(ident.values()) and all(p["ok"] for p in parts)
    return {"identities": ident, "parts": parts, "ok": ok,
            "Q_r": {"injective": qr_inj, "semi_strict": qr_surj},
            "P_l": {"injective": pl_inj, "semi_strict": pl_surj},
            "rho_P": {"injective": rho_inj, "surjective": rho_surj},
            "lambda_Q": {"injective": lam_inj, "surjective": lam_surj},
            "M_S": {"injective": bs_inj, "surjective": bs_surj}}


def strongly_faithful_check(d: MoritaDatum, U: AnyModule) -> dict:
    """``ψ ∘ α_U^{Q_r} = ζ_{J, Q ⊗_T U}`` and the injectivity it transports."""
    T, S, P, Q = d.T, d.S, d.P, d.Q
    bs = d.mS.connecting_map
    if not is_bijective(bs)[0]:
        raise ValueError("the S-side semi-context is not injective")
    J = d.mS.trace
    ten_qu = tensor_over(T, Q, U)
    ten_qp = tensor_over(T, Q, P)
    zeta, _ = localization_maps(S, J, ten_qu.module, LEFT)
    hz = zeta.context["hom"]
    alpha = alpha_map(d.mT.q_r(), U)
    ha = alpha.context["hom"]
    lifts = [preimage(bs, J.embedding(j)) for j in J.subgroup.gens()]
    images = []
    for x in ha.group.gens():
        f = ha.to_hom(x)
        idf = ten_qp.tensor_maps(ten_qu, AbHom.identity(Q.group), f)
        images.append(hz.element(AbHom.from_images(J.subgroup, ten_qu.group,
                                                   [idf(y) for y in lifts])))
    psi = AbHom.from_images(ha.group, hz.group, images)
    commutes = psi @ alpha.hom == zeta.hom
    z_inj = zeta.bijectivity()[0]
    a_inj = alpha.bijectivity()[0]
    return {"commutes": commutes, "zeta_injective": z_inj, "alpha_injective": a_inj,
            "hypothesis": "J strongly faithful" if z_inj else "hypothesis failed",
            "ok": commutes and ((not z_inj) or a_inj)}


# ---------------------------------------------------------------------------
# constructions

def identity_datum(r: FinRing) -> MoritaDatum:
    """``(R, R, R, R)`` with both brackets the multiplication."""
    b = regular_bimodule(r)
    beta = BalancedMap.from_function(b, b, r, r.mul)
    m = MoritaSemiContext(r, r, b, b, beta)
    return MoritaDatum(m, m)


def flip_datum(r: FinRing, P: Bimodule, beta: BalancedMap) -> MoritaDatum:
    """Commutative ``R`` with ``P = Q`` and ``<q, p>_S := <p, q>_T``."""
    if not r.is_commutative():
        raise ValueError("flip datum needs a commutative ring")
    flip = BalancedMap.from_function(P, P, r, lambda q, p: beta(p, q))
    return MoritaDatum(MoritaSemiContext(r, r, P, P, beta), MoritaSemiContext(r, r, P, P, flip))


def scalar_bimodule(r: FinRing, group: FinAbGroup) -> Bimodule:
    """``group`` with both actions through the integer scalars of a cyclic ring."""
    from .algebra import module_over_quotient
    return Bimodule(module_over_quotient(r, group, LEFT), module_over_quotient(r, group, RIGHT))


def matrix_datum(n: int, m: int) -> MoritaDatum:
    """``(M_n(Z_m), Z_m, columns, rows)`` with outer and inner products."""
    T, S = matrix_ring(n, m), zn(m)
    g = FinAbGroup((m,) * n)

    def mat(t, i, j):
        return t[i * n + j]
    col_l = ModuleStructure.from_function(
        T, g, LEFT, lambda t, p: tuple(sum(mat(t, i, j) * p[j] for j in range(n)) for i in range(n)))
    col_r = ModuleStructure.from_function(S, g, RIGHT, lambda s, p: tuple(s[0] * x for x in p))
    row_l = ModuleStructure.from_function(S, g, LEFT, lambda s, q: tuple(s[0] * x for x in q))
    row_r = ModuleStructure.from_function(
        T, g, RIGHT, lambda t, q: tuple(sum(q[i] * mat(t, i, j) for i in range(n)) for j in range(n)))
    P, Q = Bimodule(col_l, col_r, name="columns"), Bimodule(row_l, row_r, name="rows")
    bt = BalancedMap.from_function(P, Q, T, lambda p, q: tuple(p[a // n] * q[a % n] for a in range(n * n)))
    bs = BalancedMap.from_function(Q, P, S, lambda q, p: (sum(x * y for x, y in zip(q, p)),))
    return MoritaDatum(MoritaSemiContext(T, S, P, Q, bt), MoritaSemiContext(S, T, Q, P, bs))


def two_corner_datum(R: FinRing, e: Elem, f: Elem) -> MoritaDatum:
    """``(eRe, fRf, eRf, fRe)`` with both brackets given by multiplication in ``R``."""
    for x in (e, f):
        if R.mul(x, x) != tuple(x):
            raise ValueError(f"{x} is not idempotent")
    gens = R.group.gens()

    def corner(a, b):
        return subgroup_generated(R.group, [R.mul(R.mul(a, x), b) for x in gens])
    t_sub, s_sub, p_sub, q_sub = corner(e, e), corner(f, f), corner(e, f), corner(f, e)
    T = sub_ring(R, t_sub, e)
    T = FinRing(T.group, T.mult, T.one, name="eRe")
    S = sub_ring(R, s_sub, f)
    S = FinRing(S.group, S.mult, S.one, name="fRf")
    te, se, pe, qe = t_sub.embedding, s_sub.embedding, p_sub.embedding, q_sub.embedding
    P = Bimodule(sub_action(T, p_sub, LEFT, lambda a, x: R.mul(te(a), x)),
                 sub_action(S, p_sub, RIGHT, lambda a, x: R.mul(x, se(a))), name="eRf")
    Q = Bimodule(sub_action(S, q_sub, LEFT, lambda a, x: R.mul(se(a), x)),
                 sub_action(T, q_sub, RIGHT, lambda a, x: R.mul(x, te(a))), name="fRe")
    bt = BalancedMap.from_function(P, Q, T, lambda x, y: coordinates(t_sub, R.mul(pe(x), qe(y))))
    bs = BalancedMap.from_function(Q, P, S, lambda y, x: coordinates(s_sub, R.mul(qe(y), pe(x))))
    return MoritaDatum(MoritaSemiContext(T, S, P, Q, bt), MoritaSemiContext(S, T, Q, P, bs))


def balanced_map_space(T: FinRing, S: FinRing, P: Bimodule, Q: Bimodule):
    """All S-balanced (T,T)-bilinear maps ``P x Q -> T`` as a subgroup of Hom.

    Returns ``(sub, hom, tensor)``: ``sub`` sits inside ``hom.group`` where
    ``hom = Hom_T(P ⊗_S Q, T)`` (left linear); ``sub`` is the right linear part.
    """
    ten = tensor_over(S, P, Q)
    tb = regular_bimodule(T)
    h = hom_module(T, ten.module, tb, LEFT)
    rs = ten.module.right
    tg = T.group.gens()
    xs = ten.group.gens()
    target = FinAbGroup(T.group.moduli * (len(tg) * len(xs)))
    images = []
    for y in h.group.gens():
        f = h.to_hom(y)
        v: list[int] = []
        for x in xs:
            for t in tg:
                v.extend(T.group.sub(f(rs.act(t, x)), T.mul(f(x), t)))
        images.append(v)
    sub = kernel(AbHom.from_images(h.group, target, images))
    return sub, h, ten


def _random_elem(rng: random.Random, sub: SubgroupEmbedding) -> Elem:
    return sub.embedding(tuple(rng.randrange(d) for d in sub.subgroup.moduli))


def _beta_from(h, ten: TensorResult, y: Elem, X: AnyModule, Y: AnyModule, ring: FinRing) -> BalancedMap:
    f = h.to_hom(y)
    return BalancedMap.from_function(X, Y, ring, lambda a, b: f(ten.pure(a, b)))


def random_semi_context(rng: random.Random, T, S, P, Q) -> MoritaSemiContext:
    sub, h, ten = balanced_map_space(T, S, P, Q)
    return MoritaSemiContext(T, S, P, Q, _beta_from(h, ten, _random_elem(rng, sub), P, Q, T))


def compatible_partner(rng: random.Random, mT: MoritaSemiContext) -> MoritaSemiContext | None:
    """A random ``<,>_S`` compatible with ``mT``'s bracket, or None if there is none.

    Compatibility is linear in ``<,>_S`` once ``<,>_T`` is fixed, so the
    solutions form a coset of a subgroup and are sampled exactly.
    """
    T, S, P, Q, bt = mT.T, mT.S, mT.P, mT.Q, mT.beta
    sub, h, ten = balanced_map_space(S, T, Q, P)
    pg, qg = P.group.gens(), Q.group.gens()
    triples_q = [(q, p, q2) for q in qg for p in pg for q2 in qg]
    triples_p = [(p, q, p2) for p in pg for q in qg for p2 in pg]
    target = FinAbGroup(Q.group.moduli * len(triples_q) + P.group.moduli * len(triples_p))
    images = []
    for y in sub.subgroup.gens():
        f = h.to_hom(sub.embedding(y))
        v: list[int] = []
        for q, p, q2 in triples_q:
            v.extend(Q.left.act(f(ten.pure(q, p)), q2))
        for p, q, p2 in triples_p:
            v.extend(P.right.act(f(ten.pure(q, p2)), p))
        images.append(v)
    want: list[int] = []
    for q, p, q2 in triples_q:
        want.extend(Q.right.act(bt(p, q2), q))
    for p, q, p2 in triples_p:
        want.extend(P.left.act(bt(p, q), p2))
    lin = AbHom.from_images(sub.subgroup, target, images)
    x0 = preimage(lin, want)
    if x0 is None:
        return None
    kz = kernel(lin)
    x = sub.subgroup.add(x0, _random_elem(rng, kz))
    return MoritaSemiContext(S, T, Q, P, _beta_from(h, ten, sub.embedding(x), Q, P, S))


def dual_numbers(m: int = 2) -> FinRing:
    g = FinAbGroup((m, m))
    return FinRing.from_function(g, lambda x, y: g.reduce((x[0] * y[0], x[0] * y[1] + x[1] * y[0])),
                                 (1, 0), name=f"Z{m}[x]/x^2")


def field4() -> FinRing:
    g = FinAbGroup((2, 2))   # basis 1, w with w^2 = w + 1
    return FinRing.from_function(
        g, lambda x, y: g.reduce((x[0] * y[0] + x[1] * y[1], x[0] * y[1] + x[1] * y[0] + x[1] * y[1])),
        (1, 0), name="F4")


def upper_triangular3(m: int = 2) -> FinRing:
    idx = [(i, j) for i in range(3) for j in range(i, 3)]
    pos = {ij: k for k, ij in enumerate(idx)}
    g = FinAbGroup((m,) * len(idx))

    def mul(x, y):
        out = [0] * len(idx)
        for (i, j), a in zip(idx, x):
            for (k, l), b in zip(idx, y):
                if j == k and a and b:
                    out[pos[(i, l)]] += a * b
        return g.reduce(out)
    return FinRing.from_function(g, mul, g.reduce([int(i == j) for i, j in idx]), name=f"UT3(Z{m})")


def ring_library() -> list[FinRing]:
    """Small unital rings used to generate corner data."""
    m2 = matrix_ring(2, 2)
    return [zn(2), zn(3), zn(4), zn(6), zn(8), product_ring(zn(2), zn(2)),
            product_ring(zn(2), zn(4)), dual_numbers(2), field4(), upper_triangular(2),
            upper_triangular(3), m2, product_ring(m2, zn(2)), upper_triangular3(2)]


def random_data(seed: int, count: int, kind: str = "context", max_order: int = 16) -> list[MoritaDatum]:
    """Seeded corpus of data built on corners ``eRe, fRf, eRf, fRe``.

    ``kind``: ``context`` (random <,>_T, then a random compatible <,>_S),
    ``datum`` (two independent random brackets) or ``corner`` (the
    multiplication brackets).  Rings and bimodules have order <= max_order.
    """
    rng = random.Random(seed)
    from .algebra import idempotents

    candidates = []
    for R in ring_library():
        idem = [x for x in idempotents(R) if any(x)]
        for e in idem:
            for f in idem:
                candidates.append((R, e, f))
    shapes: dict[tuple, MoritaDatum] = {}
    out: list[MoritaDatum] = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 50 * count:
            raise RuntimeError("could not generate enough data within the size bound")
        R, e, f = rng.choice(candidates)
        key = (R, e, f)
        base = shapes.get(key)
        if base is None:
            base = two_corner_datum(R, e, f)
            shapes[key] = base
        if max(base.T.order, base.S.order, base.P.order, base.Q.order) > max_order:
            continue
        if kind == "corner":
            out.append(base)
            continue
        T, S, P, Q = base.T, base.S, base.P, base.Q
        mT = random_semi_context(rng, T, S, P, Q)
        if kind == "datum":
            out.append(MoritaDatum(mT, random_semi_context(rng, S, T, Q, P)))
            continue
        mS = compatible_partner(rng, mT)
        if mS is None:
            continue
        out.append(MoritaDatum(mT, mS))
    return out
