"""Module categories attached to a Morita datum.

Predicates on finite modules (generation, static/adstatic, localization,
the 𝒟 family and its intersections), a bounded enumeration of modules over a
finite ring, witness-level checks of the equivalences, and a regression suite
that evaluates the subcategory identities on every enumerated module.

Right-module statements are obtained from the opposite datum
``(T^op, S^op, Q, P)``: right T-modules are left T^op-modules.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Iterable

from .abelian import (AbHom, CapacityError, Elem, FinAbGroup, SubgroupEmbedding, canonicalize, check_order,
                      coordinates, enumerate_subgroups, image_order, is_bijective, kernel,
                      preimage, quotient, subgroup_generated, subquotients)
from .algebra import (LEFT, RIGHT, AnyModule, Bimodule, FinRing, ModuleStructure, endo_ring,
                      left_ideals, opposite, right_ideals, side_of, sub_action)
from .morita import BalancedMap, MoritaDatum, MoritaSemiContext, tensor_annihilator
from .pairing import CERTIFIED, alpha_sufficient
from .tensor_hom import (CanonicalMap, alpha_map, counit_map, hom_module, ideal_bimodule,
                         localization_maps, tensor_over, unit_map)

PASS, FAIL, SKIP = "pass", "fail", "skip"
THEOREMS = ("V=V", "CHECK", "X=X", "C=C", "Gen=reflex", "Cog=ref", "Stat-I-I", "gen=stat")

PREDICATES = ("Gen", "CogenSharp", "PresBounded", "CopresBounded", "Divisible", "Localized",
              "Colocalized", "Faithful", "StronglyFaithful", "Static", "Adstatic", "D", "U",
              "V", "Vbb", "Vhat", "W", "Wbb", "What", "X", "Xbb")


# ---------------------------------------------------------------------------
# module constructions

def quotient_module(M: ModuleStructure, sub: SubgroupEmbedding) -> tuple[ModuleStructure, AbHom]:
    """``M / sub`` for a submodule, with the projection."""
    proj = quotient(sub)
    lifts = [preimage(proj, y) for y in proj.target.gens()]

    def act(t, y):
        x = M.group.combo(list(y), lifts) if y else M.group.zero()
        return proj(M.act(t, x))
    return ModuleStructure.from_function(M.ring, proj.target, M.side, act), proj


def submodule(M: ModuleStructure, sub: SubgroupEmbedding) -> ModuleStructure:
    return sub_action(M.ring, sub, M.side, M.act)


def is_submodule(M: ModuleStructure, sub: SubgroupEmbedding) -> bool:
    return all(M.act(t, x) in sub for t in M.ring.group.gens() for x in sub.generators())


def submodules(M: ModuleStructure) -> list[SubgroupEmbedding]:
    return [s for s in enumerate_subgroups(M.group) if is_submodule(M, s)]


def direct_sum_modules(*mods: ModuleStructure) -> ModuleStructure:
    """External direct sum of modules over one ring on one side."""
    if not mods:
        raise ValueError("need at least one summand")
    ring, side = mods[0].ring, mods[0].side
    if any(m.ring != ring or m.side != side for m in mods):
        raise ValueError("summands must share ring and side")
    g = FinAbGroup(sum((m.group.moduli for m in mods), ()))
    cuts = list(itertools.accumulate([0] + [m.group.rank for m in mods]))

    def act(t, x):
        return sum((m.act(t, x[a:b]) for m, a, b in zip(mods, cuts, cuts[1:])), ())
    return ModuleStructure.from_function(ring, g, side, act)


def power_module(M: ModuleStructure, n: int) -> ModuleStructure:
    if n == 0:
        return ModuleStructure.from_function(M.ring, FinAbGroup(()), M.side, lambda t, m: ())
    return direct_sum_modules(*([M] * n))


def cyclic_module(T: FinRing, ideal: SubgroupEmbedding, side: str = LEFT) -> ModuleStructure:
    """``T / L`` for a left (side left) or right ideal ``L``."""
    reg = ModuleStructure.from_function(
        T, T.group, side, T.mul if side == LEFT else (lambda s, x: T.mul(x, s)))
    return quotient_module(reg, ideal)[0]


def opposite_module(M: ModuleStructure) -> ModuleStructure:
    return ModuleStructure(opposite(M.ring), M.group, RIGHT if M.side == LEFT else LEFT,
                           M.action, M.name)


def opposite_bimodule(B: Bimodule) -> Bimodule:
    """``_A B_C`` read as a ``(C^op, A^op)``-bimodule."""
    return Bimodule(opposite_module(B.right), opposite_module(B.left), B.name)


def opposite_datum(d: MoritaDatum) -> MoritaDatum:
    """``(T^op, S^op, Q, P)`` with ``<q, p>' = <p, q>_T`` and ``<p, q>' = <q, p>_S``."""
    To, So = opposite(d.T), opposite(d.S)
    Pp, Qp = opposite_bimodule(d.Q), opposite_bimodule(d.P)
    bt = BalancedMap.from_function(Pp, Qp, To, lambda q, p: d.beta_T(p, q))
    bs = BalancedMap.from_function(Qp, Pp, So, lambda p, q: d.beta_S(q, p))
    return MoritaDatum(MoritaSemiContext(To, So, Pp, Qp, bt), MoritaSemiContext(So, To, Qp, Pp, bs))


def swap_datum(d: MoritaDatum) -> MoritaDatum:
    """The same datum seen from S: ``(S, T, Q, P, <,>_S, <,>_T)``."""
    return MoritaDatum(d.mS, d.mT)


# ---------------------------------------------------------------------------
# enumeration

def _fingerprint(M: ModuleStructure) -> tuple:
    ring_elems = list(M.ring.elements())
    orbits = sorted(len({M.act(t, m) for t in ring_elems}) for m in M.group.elements())
    return canonicalize(M.group)[0].moduli, tuple(orbits)


def find_isomorphism(A: ModuleStructure, B: ModuleStructure) -> AbHom | None:
    """An explicit module isomorphism ``A -> B``, or None."""
    if A.order != B.order or A.ring != B.ring or A.side != B.side:
        return None
    if A.order == 1:
        return AbHom.zero(A.group, B.group)
    h = hom_module(A.ring, A, B, A.side)
    for x in h.group.elements():
        f = h.to_hom(x)
        if len({f(a) for a in A.group.elements()}) == B.order:
            return f
    return None


def _sort_key(M: ModuleStructure):
    return (M.order, M.group.moduli, M.action)


def enumerate_modules(T: FinRing, side: str, bound: int) -> tuple[ModuleStructure, ...]:
    """Cyclic modules ``T/L`` and sums of two of them, of order <= bound, up to isomorphism."""
    check_order(T.order)
    return _enumerate_modules(T, side, bound)


@lru_cache(maxsize=256)
def _enumerate_modules(T: FinRing, side: str, bound: int) -> tuple[ModuleStructure, ...]:
    ideals = left_ideals(T) if side == LEFT else right_ideals(T)
    cyclic = [cyclic_module(T, L, side) for L in ideals if T.order // L.order <= bound]
    cands = list(cyclic)
    for a, b in itertools.combinations_with_replacement(range(len(cyclic)), 2):
        A, B = cyclic[a], cyclic[b]
        if A.order * B.order <= bound and A.order > 1 and B.order > 1:
            cands.append(direct_sum_modules(A, B))
    classes: dict[tuple, list[ModuleStructure]] = {}
    for M in sorted(cands, key=_sort_key):
        bucket = classes.setdefault(_fingerprint(M), [])
        if not any(find_isomorphism(M, N) is not None for N in bucket):
            bucket.append(M)
    return tuple(sorted((m for b in classes.values() for m in b), key=_sort_key))


def enumerate_left_modules(T: FinRing, bound: int) -> list[ModuleStructure]:
    return list(enumerate_modules(T, LEFT, bound))


def enumerate_right_modules(T: FinRing, bound: int) -> list[ModuleStructure]:
    return list(enumerate_modules(T, RIGHT, bound))


# ---------------------------------------------------------------------------
# predicates

def map_witness(c: CanonicalMap | AbHom, name: str | None = None) -> dict:
    h = c.hom if isinstance(c, CanonicalMap) else c
    im = image_order(h)
    return {"map": name or (c.name if isinstance(c, CanonicalMap) else "map"),
            "source_order": h.source.order, "target_order": h.target.order,
            "kernel_order": h.source.order // im, "cokernel_order": h.target.order // im,
            "injective": im == h.source.order, "surjective": im == h.target.order}


class Profile:
    """Canonical maps of a semi-context ``(R, O, P, Q, <,>)`` at a left R-module ``U``.

    ``omega``: P ⊗_O Hom_R(P, U) -> U, ``eta``: U -> Hom_O(Q, Q ⊗_R U),
    ``alpha``: Q ⊗_R U -> Hom_R(P, U), ``zeta``/``xi`` for the trace ideal.
    """

    def __init__(self, m: MoritaSemiContext, U: ModuleStructure):
        if U.side != LEFT or U.ring != m.T:
            raise ValueError("profile needs a left module over the semi-context's ring")
        self.m, self.U = m, U
        self._maps: dict[str, CanonicalMap] = {}
        self._bij: dict[str, tuple[bool, bool]] = {}

    def map(self, name: str) -> CanonicalMap:
        if name not in self._maps:
            m, U = self.m, self.U
            if name == "omega":
                self._maps[name] = counit_map(m.P, U, LEFT)
            elif name == "eta":
                self._maps[name] = unit_map(m.Q, U, LEFT)
            elif name == "alpha":
                self._maps[name] = alpha_map(m.q_r(), U)
            elif name in ("zeta", "xi"):
                z, x = localization_maps(m.T, m.trace, U, LEFT)
                self._maps.update(zeta=z, xi=x)
            else:
                raise KeyError(name)
        return self._maps[name]

    def bij(self, name: str) -> tuple[bool, bool]:
        if name not in self._bij:
            self._bij[name] = self.map(name).bijectivity()
        return self._bij[name]

    def inj(self, name):
        return self.bij(name)[0]

    def surj(self, name):
        return self.bij(name)[1]

    def iso(self, name):
        return all(self.bij(name))

    def faithful(self) -> bool:
        return tensor_annihilator(self.m.T, self.m.Q, self.U, "L").is_trivial()

    def member(self, name: str) -> bool:
        f = _RULES.get(name)
        if f is None:
            raise KeyError(f"unknown predicate {name!r}")
        return f(self)

    def witness(self, name: str) -> list[dict]:
        return [map_witness(self.map(k)) for k in _MAPS_OF.get(name, ())]


_RULES = {
    "Gen": lambda p: p.surj("omega"),
    "Static": lambda p: p.iso("omega"),
    "CogenSharp": lambda p: p.inj("eta"),
    "Adstatic": lambda p: p.iso("eta"),
    "D": lambda p: p.iso("alpha"),
    "Divisible": lambda p: p.surj("xi"),
    "Colocalized": lambda p: p.iso("xi"),
    "StronglyFaithful": lambda p: p.inj("zeta"),
    "Localized": lambda p: p.iso("zeta"),
    "Faithful": lambda p: p.faithful(),
    "U": lambda p: p.iso("omega") and p.iso("eta"),
    "V": lambda p: p.iso("omega") and p.iso("alpha"),
    "Vbb": lambda p: p.iso("xi") and p.iso("alpha"),
    "Vhat": lambda p: p.iso("omega") and p.iso("alpha") and p.iso("zeta"),
    "W": lambda p: p.iso("eta") and p.iso("alpha"),
    "Wbb": lambda p: p.iso("zeta") and p.iso("alpha"),
    "What": lambda p: p.iso("eta") and p.iso("alpha") and p.iso("xi"),
    "X": lambda p: p.iso("omega") and p.iso("eta") and p.iso("alpha"),
    "Xbb": lambda p: p.iso("xi") and p.iso("zeta") and p.iso("alpha"),
}

_MAPS_OF = {
    "Gen": ("omega",), "Static": ("omega",), "CogenSharp": ("eta",), "Adstatic": ("eta",),
    "D": ("alpha",), "Divisible": ("xi",), "Colocalized": ("xi",),
    "StronglyFaithful": ("zeta",), "Localized": ("zeta",), "U": ("omega", "eta"),
    "V": ("omega", "alpha"), "Vbb": ("xi", "alpha"), "Vhat": ("omega", "alpha", "zeta"),
    "W": ("eta", "alpha"), "Wbb": ("zeta", "alpha"), "What": ("eta", "alpha", "xi"),
    "X": ("omega", "eta", "alpha"), "Xbb": ("xi", "zeta", "alpha"),
}


@dataclass
class Membership:
    name: str
    side: str
    flag: bool
    witness: list = field(default_factory=list)
    bounded: bool = False

    def __bool__(self):
        return self.flag


def _as_semi(obj) -> MoritaSemiContext:
    return obj.mT if isinstance(obj, MoritaDatum) else obj


def _opposite_semi(m: MoritaSemiContext) -> MoritaSemiContext:
    To, So = opposite(m.T), opposite(m.S)
    Pp, Qp = opposite_bimodule(m.Q), opposite_bimodule(m.P)
    bt = BalancedMap.from_function(Pp, Qp, To, lambda q, p: m.beta(p, q))
    return MoritaSemiContext(To, So, Pp, Qp, bt)


def membership(M: ModuleStructure, name: str, context=None, ideal: SubgroupEmbedding | None = None,
               generator: ModuleStructure | None = None, bound: int = 3) -> Membership:
    """Decide ``M ∈ name``.

    Context predicates take a semi-context (or datum, meaning its T side) whose
    ring acts on ``M``; a right module is handled through the opposite.
    ``Divisible``/``Localized``/``Colocalized``/``StronglyFaithful`` accept an
    ``ideal`` instead.  ``PresBounded``/``CopresBounded`` need ``generator``.
    """
    if name not in PREDICATES:
        raise KeyError(f"unknown predicate {name!r}")
    side = M.side
    if name in ("PresBounded", "CopresBounded"):
        if generator is None:
            raise ValueError(f"{name} needs a generator module")
        f = pres_bounded if name == "PresBounded" else copres_bounded
        flag, wit = f(generator, M, bound)
        return Membership(name, side, flag, [wit], bounded=True)
    if ideal is not None and context is None:
        if name not in ("Divisible", "Localized", "Colocalized", "StronglyFaithful"):
            raise ValueError(f"{name} needs a context")
        z, x = localization_maps(M.ring, ideal, M, side)
        c = x if name in ("Divisible", "Colocalized") else z
        inj, surj = c.bijectivity()
        flag = {"Divisible": surj, "StronglyFaithful": inj}.get(name, inj and surj)
        return Membership(name, side, flag, [map_witness(c)])
    if context is None:
        raise ValueError(f"{name} needs a context")
    m = _as_semi(context)
    U = M
    if side == RIGHT:
        m, U = _opposite_semi(m), opposite_module(M)
    if U.ring != m.T:
        raise ValueError("module is not over the context's ring")
    p = Profile(m, U)
    return Membership(name, side, p.member(name), p.witness(name))


# Gen / Cogen / Pres / Copres relative to a module G

def trace_in(G: ModuleStructure, K: ModuleStructure) -> SubgroupEmbedding:
    """Sum of the images of all maps ``G -> K``."""
    h = hom_module(G.ring, G, K, G.side)
    return subgroup_generated(K.group, [f(x) for f in h.basis for x in G.group.gens()])


def reject_in(K: ModuleStructure, G: ModuleStructure) -> SubgroupEmbedding:
    """Intersection of the kernels of all maps ``K -> G``."""
    h = hom_module(K.ring, K, G, K.side)
    basis = h.basis
    if not basis:
        return subgroup_generated(K.group, K.group.gens())
    target = FinAbGroup(G.group.moduli * len(basis))
    big = AbHom.from_images(K.group, target, [sum((f(x) for f in basis), ()) for x in K.group.gens()])
    return kernel(big)


def generated_by(G: ModuleStructure, K: ModuleStructure) -> bool:
    return trace_in(G, K).is_everything()


def cogenerated_by(G: ModuleStructure, K: ModuleStructure) -> bool:
    return reject_in(K, G).is_trivial()


def _hom_candidates(h, limit: int = 16) -> list[Elem]:
    if h.group.order <= limit:
        return [x for x in h.group.elements() if any(x)]
    return h.group.gens()


def pres_bounded(G: ModuleStructure, K: ModuleStructure, bound: int = 3) -> tuple[bool, dict]:
    """Search ``G^n -> K -> 0`` (n <= bound) whose kernel is G-generated."""
    if K.order == 1:
        return True, {"n": 0}
    h = hom_module(G.ring, G, K, G.side)
    cands = _hom_candidates(h)
    for n in range(1, bound + 1):
        Gn = power_module(G, n)
        for combo in itertools.combinations_with_replacement(cands, n):
            fs = [h.to_hom(x) for x in combo]
            pi = AbHom.from_images(Gn.group, K.group,
                                   [f(g) for f in fs for g in G.group.gens()])
            ker, im, _ = subquotients(pi)
            if im.order != K.order:
                continue
            if generated_by(G, submodule(Gn, ker)):
                return True, {"n": n, "kernel_order": ker.order}
    return False, {"searched_up_to": bound}


def copres_bounded(G: ModuleStructure, K: ModuleStructure, bound: int = 3) -> tuple[bool, dict]:
    """Search ``0 -> K -> G^n`` (n <= bound) whose cokernel is G-cogenerated."""
    if K.order == 1:
        return True, {"n": 0}
    h = hom_module(K.ring, K, G, K.side)
    cands = _hom_candidates(h)
    for n in range(1, bound + 1):
        Gn = power_module(G, n)
        for combo in itertools.combinations_with_replacement(cands, n):
            fs = [h.to_hom(x) for x in combo]
            iota = AbHom.from_images(K.group, Gn.group,
                                     [sum((f(x) for f in fs), ()) for x in K.group.gens()])
            ker, im, _ = subquotients(iota)
            if not ker.is_trivial():
                continue
            cok, _ = quotient_module(Gn, im)
            if cogenerated_by(G, cok):
                return True, {"n": n, "cokernel_order": cok.order}
    return False, {"searched_up_to": bound}


# Kato–Ohtake purity and copurity of an ideal

def purity(T: FinRing, ideal: SubgroupEmbedding, U: ModuleStructure) -> dict:
    """``0 -> I ⊗ U -> T ⊗ U -> T/I ⊗ U -> 0`` for a left module ``U``."""
    ib = ideal_bimodule(T, ideal)
    regr = ModuleStructure.from_function(T, T.group, RIGHT, lambda s, x: T.mul(x, s))
    quo, proj = quotient_module(regr, ideal)
    ti, tt, tq = tensor_over(T, ib.right, U), tensor_over(T, regr, U), tensor_over(T, quo, U)
    ident = AbHom.identity(U.group)
    f = ti.tensor_maps(tt, ideal.embedding, ident)
    g = tt.tensor_maps(tq, proj, ident)
    kf, imf, _ = subquotients(f)
    kg, img, _ = subquotients(g)
    middle = kg.elements() == imf.elements()
    return {"pure": kf.is_trivial(), "middle_exact": middle,
            "right_exact": img.order == tq.group.order,
            "kernel_order": kf.order}


def copurity(T: FinRing, ideal: SubgroupEmbedding, U: ModuleStructure) -> dict:
    """``0 -> Hom(T/I, U) -> Hom(T, U) -> Hom(I, U) -> 0`` for a left module ``U``."""
    ib = ideal_bimodule(T, ideal)
    regl = ModuleStructure.from_function(T, T.group, LEFT, T.mul)
    quo, proj = quotient_module(regl, ideal)
    hq, ht, hi = (hom_module(T, quo, U, LEFT), hom_module(T, regl, U, LEFT),
                  hom_module(T, ib.left, U, LEFT))
    res = AbHom.from_images(ht.group, hi.group,
                            [hi.element(ht.to_hom(x) @ ideal.embedding) for x in ht.group.gens()])
    inf = AbHom.from_images(hq.group, ht.group,
                            [ht.element(hq.to_hom(x) @ proj) for x in hq.group.gens()])
    ki, imi, _ = subquotients(inf)
    kr, imr, _ = subquotients(res)
    return {"copure": imr.order == hi.group.order, "left_exact": ki.is_trivial(),
            "middle_exact": kr.elements() == imi.elements(),
            "cokernel_order": hi.group.order // imr.order}


# ---------------------------------------------------------------------------
# witnesses

@dataclass
class WitnessReport:
    mode: str
    module_order: int
    hypothesis: bool
    images: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)     # (name, ok, detail)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.hypothesis and all(c[1] for c in self.checks)

    def as_dict(self) -> dict:
        return {"mode": self.mode, "module_order": self.module_order,
                "hypothesis": self.hypothesis, "images": self.images,
                "checks": [{"name": n, "ok": ok, "detail": d} for n, ok, d in self.checks],
                "notes": self.notes, "ok": self.ok}


def postcompose(h_from, h_to, f: AbHom) -> AbHom:
    """``G -> f ∘ G`` between two Hom results."""
    return AbHom.from_images(h_from.group, h_to.group,
                             [h_to.element(f @ h_from.to_hom(x)) for x in h_from.group.gens()])


def hom_d_map(d: MoritaDatum, V: ModuleStructure) -> tuple[AbHom, Any, Any]:
    """``(Q, α_V) ∘ η_{Q,V}: V -> Hom_S(Q, Hom_T(P, V))`` with the Hom results."""
    m = d.mT
    eta = unit_map(m.Q, V, LEFT)
    alpha = alpha_map(m.q_r(), V)
    hk = alpha.context["hom"]
    hq = hom_module(m.S, m.Q, hk.module, LEFT)
    comp = postcompose(eta.context["hom"], hq, alpha.hom) @ eta.hom
    return comp, hk, hq


def wide_eta(d: MoritaDatum, V: ModuleStructure) -> AbHom:
    """``P ⊗_S (Q ⊗_T V) -> V``, ``p ⊗ q ⊗ v -> <p, q>_T v``."""
    m = d.mT
    qv = tensor_over(m.T, m.Q, V)
    inner = {}

    def g(p):
        if p not in inner:
            inner[p] = qv.from_bilinear(lambda q, v: V.act(m.beta(p, q), v), V.group)
        return inner[p]
    outer = tensor_over(m.S, m.P, qv.module)
    return outer.from_bilinear(lambda p, x: g(p)(x), V.group)


def equivalence_witness(d: MoritaDatum, V: ModuleStructure, mode: str = "XX") -> WitnessReport:
    """Witness-level check of an equivalence at one module.

    ``XX``: ``V ∈ 𝒳_l(𝓜_T)`` goes to ``W = Hom_T(P, V) ∈ 𝒳_l(𝓜_S)`` and
    ``V ≅ Hom_S(Q, W)``.  ``CC``: ``V ∈ _I𝓒`` goes to ``Q ⊗_T V ∈ _J𝓒`` and
    ``P ⊗_S (Q ⊗_T V) ≅ V``.  ``LL``: ``V ∈ _I𝓛`` goes to ``Hom_T(P, V)``,
    checked for ``_J𝓛`` with ``V -> Hom_S(Q, Hom_T(P, V))`` (this functor
    choice is ours).  Right modules go through the opposite datum.
    """
    if V.side == RIGHT:
        d, V = opposite_datum(d), opposite_module(V)
    p = Profile(d.mT, V)
    if mode == "XX":
        rep = WitnessReport(mode, V.order, p.member("X"))
        if not rep.hypothesis:
            rep.notes.append("hypothesis failed: module not in X_l(M_T)")
            return rep
        comp, hk, hq = hom_d_map(d, V)
        W = hk.module
        rep.images = {"Hom_T(P,V)": W.order, "Hom_S(Q,W)": hq.group.order}
        pw = Profile(d.mS, W)
        for k in ("omega", "eta", "alpha"):
            rep.checks.append((f"W: {k} bijective", pw.iso(k), map_witness(pw.map(k))))
        rep.checks.append(("V -> Hom_S(Q, W) bijective", all(is_bijective(comp)), map_witness(comp)))
        rep.checks.append(("omega_V bijective", p.iso("omega"), map_witness(p.map("omega"))))
        return rep
    if mode == "CC":
        rep = WitnessReport(mode, V.order, p.iso("xi"))
        if not rep.hypothesis:
            rep.notes.append("hypothesis failed: module not in _I C")
            return rep
        qv = tensor_over(d.T, d.Q, V).module
        rep.images = {"Q(x)V": qv.order}
        _, xj = localization_maps(d.S, d.mS.trace, qv, LEFT)
        rep.checks.append(("Q(x)V in _J C", all(xj.bijectivity()), map_witness(xj)))
        eta = wide_eta(d, V)
        rep.checks.append(("P(x)(Q(x)V) -> V bijective", all(is_bijective(eta)), map_witness(eta)))
        return rep
    if mode == "LL":
        rep = WitnessReport(mode, V.order, p.iso("zeta"))
        rep.notes.append("Hom_T(P,-) is the functor chosen for the _I L side")
        if not rep.hypothesis:
            rep.notes.append("hypothesis failed: module not in _I L")
            return rep
        W = hom_module(d.T, d.P, V, LEFT).module
        rep.images = {"Hom_T(P,V)": W.order}
        zj, _ = localization_maps(d.S, d.mS.trace, W, LEFT)
        rep.checks.append(("Hom_T(P,V) in _J L", all(zj.bijectivity()), map_witness(zj)))
        comp, _, _ = hom_d_map(d, V)
        rep.checks.append(("V -> Hom_S(Q, Hom_T(P,V)) bijective", all(is_bijective(comp)),
                           map_witness(comp)))
        return rep
    raise ValueError(f"unknown mode {mode!r}")


def stat_adstat_witness(T: FinRing, B: Bimodule, K: ModuleStructure) -> dict:
    """For ``_T B_T`` and ``K ∈ Stat``: ``Hom_T(B, K) ∈ Adstat`` and the round trip."""
    om = counit_map(B, K, LEFT)
    static = all(om.bijectivity())
    out = {"static": static}
    if not static:
        return out
    H = om.context["hom"].module
    eta = unit_map(B, H, LEFT)
    out.update(hom_order=H.order, adstatic=all(eta.bijectivity()))
    return out


def wide_morita_maps(d: MoritaDatum, V: ModuleStructure, W: ModuleStructure) -> dict:
    """``η_V: P ⊗_S Q ⊗_T V -> V`` and ``ρ_W: Q ⊗_T P ⊗_S W -> W`` of the right wide context."""
    if not d.is_context:
        raise ValueError("wide Morita maps need a Morita context")
    eta = wide_eta(d, V)
    rho = wide_eta(swap_datum(d), W)
    a_q = alpha_sufficient(d.mT.q_r()).status
    a_p = alpha_sufficient(d.mS.q_r()).status
    hyp = a_q == CERTIFIED and a_p == CERTIFIED
    e_inj, r_inj = is_bijective(eta)[0], is_bijective(rho)[0]
    conn_inj = is_bijective(d.mT.connecting_map)[0]
    return {"eta_V": map_witness(eta, "eta_V"), "rho_W": map_witness(rho, "rho_W"),
            "right_alpha_certified": hyp, "alpha_Q_r": a_q, "alpha_P_r": a_p,
            "asserted": hyp, "bracket_T_injective": conn_inj,
            "ok": (not hyp) or (e_inj and r_inj)}


# ---------------------------------------------------------------------------
# ∗-modules

@dataclass
class StarVerdict:
    star: bool
    bound: int
    modules_T: int
    modules_S: int
    stat_ne_gen: list
    adstat_ne_cogen: list
    end_order: int
    notes: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"star_up_to_bound": self.star, "bound": self.bound, "bounded": True,
                "modules_T": self.modules_T, "modules_S": self.modules_S,
                "stat_ne_gen": self.stat_ne_gen, "adstat_ne_cogen": self.adstat_ne_cogen,
                "end_order": self.end_order, "notes": self.notes}


def endo_bimodule(P: ModuleStructure) -> tuple[FinRing, Bimodule]:
    """``S = End(_T P)^op`` and ``P`` as a (T, S)-bimodule."""
    E, _ = endo_ring(P, LEFT)
    h = hom_module(P.ring, P, P, LEFT)
    right = ModuleStructure.from_function(E, P.group, RIGHT, lambda a, p: h.eval(a, p))
    return E, Bimodule(P, right, name=P.name)


def star_module_bounded(T: FinRing, P: AnyModule, bound: int) -> StarVerdict:
    """Compare Stat with Gen and Adstat with Cogen# up to ``bound``."""
    Pl = side_of(P, LEFT, T)
    E, B = endo_bimodule(Pl)
    sg, ac = [], []
    mt = enumerate_modules(T, LEFT, bound)
    for i, K in enumerate(mt):
        inj, surj = counit_map(B, K, LEFT).bijectivity()
        if surj and not inj:
            sg.append(i)
    ms = enumerate_modules(E, LEFT, bound)
    for i, L in enumerate(ms):
        inj, surj = unit_map(B, L, LEFT).bijectivity()
        if inj and not surj:
            ac.append(i)
    return StarVerdict(not sg and not ac, bound, len(mt), len(ms), sg, ac, E.order,
                       ["self-small holds for every finite module"])


# ---------------------------------------------------------------------------
# regression suite

@dataclass
class TheoremResult:
    theorem: str
    perspective: str
    status: str
    detail: str = ""
    witnesses: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"theorem": self.theorem, "perspective": self.perspective,
                "status": self.status, "detail": self.detail, "witnesses": self.witnesses}


@dataclass
class SuiteReport:
    bound: int
    results: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.status != FAIL for r in self.results)

    def counts(self) -> dict:
        out = {PASS: 0, FAIL: 0, SKIP: 0}
        for r in self.results:
            out[r.status] += 1
        return out

    def as_dict(self) -> dict:
        return {"bound": self.bound, "ok": self.ok, "counts": self.counts(),
                "results": [r.as_dict() for r in self.results]}


def _injective(m: MoritaSemiContext) -> bool:
    return is_bijective(m.connecting_map)[0]


def _unital(d: MoritaDatum) -> bool:
    return d.T.one is not None and d.S.one is not None


def diagram_s(m: MoritaSemiContext, V: ModuleStructure) -> bool:
    """``ω ∘ (P ⊗ α) = ξ ∘ (<,> ⊗ V) ∘ can`` on ``P ⊗_S (Q ⊗_T V)``."""
    T, S = m.T, m.S
    qv = tensor_over(T, m.Q, V)
    src = tensor_over(S, m.P, qv.module)
    om = counit_map(m.P, V, LEFT)
    al = alpha_map(m.q_r(), V)
    left = om.hom @ src.tensor_maps(om.context["tensor"], AbHom.identity(m.P.group), al.hom)
    pq = m.tensor
    pqv = tensor_over(T, pq.module, V)
    inner = {}

    def can(p, x):
        if p not in inner:
            inner[p] = qv.from_bilinear(lambda q, v: pqv.pure(pq.pure(p, q), v), pqv.group)
        return inner[p](x)
    can_h = src.from_bilinear(can, pqv.group)
    I = m.trace
    _, xi = localization_maps(T, I, V, LEFT)
    iv = xi.context["tensor"]
    conn = m.connecting_map
    to_i = AbHom.from_images(pq.group, I.subgroup, [coordinates(I, conn(x)) for x in pq.group.gens()])
    bra = pqv.tensor_maps(iv, to_i, AbHom.identity(V.group))
    right = xi.hom @ bra @ can_h
    return left == right and all(is_bijective(can_h))


def diagram_ad(m: MoritaSemiContext, V: ModuleStructure) -> bool:
    """``(<,>_T, V) ∘ ζ = can ∘ (Q, α) ∘ η`` from ``V`` to ``Hom_T(P ⊗_S Q, V)``."""
    T, S = m.T, m.S
    pq = m.tensor
    hpq = hom_module(T, pq.module, V, LEFT)
    zeta, _ = localization_maps(T, m.trace, V, LEFT)
    hz = zeta.context["hom"]
    conn = m.connecting_map
    I = m.trace
    to_i = AbHom.from_images(pq.group, I.subgroup, [coordinates(I, conn(x)) for x in pq.group.gens()])
    restrict = AbHom.from_images(hz.group, hpq.group,
                                 [hpq.element(hz.to_hom(x) @ to_i) for x in hz.group.gens()])
    left = restrict @ zeta.hom
    eta = unit_map(m.Q, V, LEFT)
    al = alpha_map(m.q_r(), V)
    hk = al.context["hom"]
    hq = hom_module(S, m.Q, hk.module, LEFT)
    qa = postcompose(eta.context["hom"], hq, al.hom)
    imgs = []
    for x in hq.group.gens():
        G = hq.to_hom(x)
        imgs.append(hpq.element(pq.from_bilinear(lambda p, q: hk.eval(G(q), p), V.group)))
    can = AbHom.from_images(hq.group, hpq.group, imgs)
    right = can @ qa @ eta.hom
    return left == right and all(is_bijective(can))


class _Side:
    """Profiles of one semi-context over an enumerated module list."""

    def __init__(self, m: MoritaSemiContext, mods):
        self.m = m
        self.mods = list(mods)
        self.prof = [Profile(m, U) for U in self.mods]

    def flags(self, name: str) -> list[bool]:
        return [p.member(name) for p in self.prof]

    def equal(self, names: Iterable[str]) -> int | None:
        names = list(names)
        for i, p in enumerate(self.prof):
            vals = {p.member(n) for n in names}
            if len(vals) > 1:
                return i
        return None

    def subset(self, a, b) -> int | None:
        fa = a if callable(a) else (lambda p, a=a: p.member(a))
        fb = b if callable(b) else (lambda p, b=b: p.member(b))
        for i, p in enumerate(self.prof):
            if fa(p) and not fb(p):
                return i
        return None

    def describe(self, i: int) -> dict:
        U = self.mods[i]
        return {"index": i, "order": U.order, "moduli": list(U.group.moduli)}


def _result(name, persp, bad: dict, detail_ok="") -> TheoremResult:
    bad = {k: v for k, v in bad.items() if v is not None}
    if bad:
        return TheoremResult(name, persp, FAIL, "; ".join(sorted(bad)), [bad])
    return TheoremResult(name, persp, PASS, detail_ok)


def _suite_left(d: MoritaDatum, bound: int, persp: str, theorems=None) -> list[TheoremResult]:
    out = []

    def want(name):
        return theorems is None or name in theorems

    memo: dict[int, WitnessReport] = {}

    def xx(i):
        if i not in memo:
            memo[i] = equivalence_witness(d, A.mods[i], "XX")
        return memo[i]
    mT, mS = d.mT, d.mS
    A = _Side(mT, enumerate_modules(d.T, LEFT, bound))
    B = _Side(mS, enumerate_modules(d.S, LEFT, bound))
    inj_t, inj_s = _injective(mT), _injective(mS)
    unital = _unital(d)
    umc = unital and d.is_context
    aq = alpha_sufficient(mT.q_r()).status == CERTIFIED
    ap = alpha_sufficient(mS.q_r()).status == CERTIFIED

    # V=V
    if not want("V=V"):
        pass
    elif not inj_t:
        out.append(TheoremResult("V=V", persp, SKIP, "hypothesis failed (not injective)"))
    else:
        bad = {"V != Vbb": A.equal(["V", "Vbb"]), "W != Wbb": A.equal(["W", "Wbb"]),
               "Vhat/What/X/Xbb differ": A.equal(["Vhat", "What", "X", "Xbb"])}
        for i, U in enumerate(A.mods):
            if not diagram_s(mT, U):
                bad.setdefault("diagram S", i)
            if not diagram_ad(mT, U):
                bad.setdefault("diagram Ad", i)
        out.append(_result("V=V", persp, bad, f"{len(A.mods)} modules"))

    # CHECK: eight-term chain on both sides plus cross witnesses
    if not want("CHECK"):
        pass
    elif not (inj_t and inj_s):
        out.append(TheoremResult("CHECK", persp, SKIP, "hypothesis failed (datum not injective)"))
    else:
        chain = ["Vhat", "What", "Xbb", "X"]
        bad = {"chain on T": A.equal(chain), "chain on S": B.equal(chain)}
        for i, U in enumerate(A.mods):
            if A.prof[i].member("X") and not xx(i).ok:
                bad.setdefault("cross witness T->S", i)
        sd = swap_datum(d)
        for i, U in enumerate(B.mods):
            if B.prof[i].member("X") and not equivalence_witness(sd, U, "XX").ok:
                bad.setdefault("cross witness S->T", i)
        out.append(_result("CHECK", persp, bad))

    # X=X (any unital datum)
    if not want("X=X"):
        pass
    elif not unital:
        out.append(TheoremResult("X=X", persp, SKIP, "hypothesis failed (not unital)"))
    else:
        bad = {}
        n = 0
        for i, U in enumerate(A.mods):
            if A.prof[i].member("X"):
                n += 1
                for name, ok, _ in xx(i).checks:
                    if not ok:
                        bad.setdefault(f"X=X witness: {name}", i)
        out.append(_result("X=X", persp, bad, f"{n} modules in X"))

    # C=C witnesses (unital context)
    if not want("C=C"):
        pass
    elif not umc:
        out.append(TheoremResult("C=C", persp, SKIP, "hypothesis failed (not a unital context)"))
    else:
        bad = {}
        for i, U in enumerate(A.mods):
            if A.prof[i].iso("xi") and not equivalence_witness(d, U, "CC").ok:
                bad.setdefault("C=C witness", i)
        out.append(_result("C=C", persp, bad))

    # Gen=reflex
    if not want("Gen=reflex"):
        pass
    elif not umc:
        out.append(TheoremResult("Gen=reflex", persp, SKIP, "hypothesis failed (not a unital context)"))
    else:
        bad = {"IC in ID": A.subset("Colocalized", "Divisible"),
               "ID in Gen": A.subset("Divisible", "Gen")}
        notes = ["inclusions"]
        if ap:
            bad["Gen = Stat"] = A.equal(["Gen", "Static"])
            bad["Stat in IF"] = A.subset("Static", "StronglyFaithful")
            bad["bracket_T injective"] = None if inj_t else -1
            if A.subset("Gen", "Colocalized") is None:
                bad["IC = ID = Gen = Stat"] = A.equal(["Colocalized", "Divisible", "Gen", "Static"])
            notes.append("P_r alpha")
        if ap and aq:
            bad["I pure"] = A.subset(lambda p: True, lambda p: p.inj("xi"))
            bad["IC = ID"] = A.equal(["Colocalized", "Divisible"])
            notes.append("Q_r alpha")
        out.append(_result("Gen=reflex", persp, bad, ", ".join(notes)))

    # Cog=ref (left S-modules)
    if not want("Cog=ref"):
        pass
    elif not umc:
        out.append(TheoremResult("Cog=ref", persp, SKIP, "hypothesis failed (not a unital context)"))
    else:
        # B.prof: S-side profiles; eta = η_{P,L}, zeta/xi for J
        bad = {"JL in JF": B.subset("Localized", "StronglyFaithful"),
               "JF in Cogen#": B.subset("StronglyFaithful", "CogenSharp"),
               "Adstat in Cogen#": B.subset("Adstatic", "CogenSharp")}
        notes = ["inclusions"]
        for i, p in enumerate(B.prof):
            if p.inj("eta") != p.faithful():
                bad.setdefault("Ker eta = annihilator", i)
        if aq:
            bad["J pure"] = B.subset(lambda p: True, lambda p: p.inj("xi"))
            bad["JC in Cogen#"] = B.subset("Colocalized", "CogenSharp")
            notes.append("Q_r alpha")
            if ap:
                bad["JL in Adstat"] = B.subset("Localized", "Adstatic")
                bad["Cogen# in JF"] = B.subset("CogenSharp", "StronglyFaithful")
                if B.subset("CogenSharp", "Localized") is None:
                    bad["JL = Cogen# = Adstat"] = B.equal(["Localized", "CogenSharp", "Adstatic"])
                notes.append("P_r alpha")
        out.append(_result("Cog=ref", persp, bad, ", ".join(notes)))

    # Stat-I-I (unital injective datum)
    if not want("Stat-I-I"):
        pass
    elif not (unital and inj_t and inj_s):
        out.append(TheoremResult("Stat-I-I", persp, SKIP, "hypothesis failed (not unital injective)"))
    else:
        bad = {}
        for side, ring, ideal, mods in (("T", d.T, mT.trace, A.mods), ("S", d.S, mS.trace, B.mods)):
            ib = ideal_bimodule(ring, ideal)
            for i, K in enumerate(mods):
                w = stat_adstat_witness(ring, ib, K)
                if w["static"] and not w["adstatic"]:
                    bad.setdefault(f"Stat -> Adstat on {side}", i)
                if all(unit_map(ib, K, LEFT).bijectivity()):
                    ten = tensor_over(ring, ib, K)
                    if not all(counit_map(ib, ten.module, LEFT).bijectivity()):
                        bad.setdefault(f"Adstat -> Stat on {side}", i)
        out.append(_result("Stat-I-I", persp, bad))

    # gen=stat (1) and (2)
    if not want("gen=stat"):
        pass
    elif not umc:
        out.append(TheoremResult("gen=stat", persp, SKIP, "hypothesis failed (not a unital context)"))
    elif not ap:
        out.append(TheoremResult("gen=stat", persp, SKIP, "hypothesis failed (P_r alpha not certified)"))
    else:
        bad = {"Gen = Stat": A.equal(["Gen", "Static"])}
        Pl = d.P.left
        for i, (U, p) in enumerate(zip(A.mods, A.prof)):
            if p.member("Gen") and not pres_bounded(Pl, U, 3)[0]:
                bad.setdefault("Gen = Pres (bounded)", i)
            if p.member("Static") and U.order <= 8:
                for N in submodules(U):
                    quo, _ = quotient_module(U, N)
                    if not all(counit_map(d.P, quo, LEFT).bijectivity()):
                        bad.setdefault("Stat closed under quotients", i)
                        break
        reached = 0
        for n in (1, 2, 3):
            try:
                static = all(counit_map(d.P, power_module(Pl, n), LEFT).bijectivity())
            except CapacityError:
                break
            reached = n
            if not static:
                bad.setdefault("sum-self-static", n)
        notes = ["P_r alpha", f"sum-self-static up to P^{reached}"]
        if aq and B.subset("CogenSharp", "Localized") is None:
            bad["Cogen# = Adstat"] = B.equal(["CogenSharp", "Adstatic"])
            notes.append("UMC_r alpha and Cogen# in JL")
        out.append(_result("gen=stat", persp, bad, ", ".join(notes)))
    return out


def theorem_regression(d: MoritaDatum, bound: int = 8, sides=(LEFT, RIGHT),
                       strict: bool = False, theorems: Iterable[str] | None = None) -> SuiteReport:
    """Run every theorem check over modules of order <= bound.

    Perspectives: the datum from T, from S, and both again on right modules.
    With ``strict`` the first failure raises AssertionError with diagnostics;
    ``theorems`` restricts the run to the named checks (see THEOREMS).
    """
    theorems = None if theorems is None else set(theorems)
    unknown = (theorems or set()) - set(THEOREMS)
    if unknown:
        raise ValueError(f"unknown theorems {sorted(unknown)}")
    rep = SuiteReport(bound)
    views = []
    if LEFT in sides:
        views += [("M_T left", d), ("M_S left", swap_datum(d))]
    if RIGHT in sides:
        op = opposite_datum(d)
        views += [("M_T right", op), ("M_S right", swap_datum(op))]
    for name, dd in views:
        for r in _suite_left(dd, bound, name, theorems):
            rep.results.append(r)
            if strict and r.status == FAIL:
                raise AssertionError(f"{r.theorem} ({name}) failed: {r.detail} {r.witnesses}")
    return rep
