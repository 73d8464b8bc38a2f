"""Tensor products, Hom modules and the canonical maps between them.

``M ⊗_T N`` is the free group on generator pairs modulo order and balancing
relations.  ``Hom_T(M, N)`` is the solution group of the linearity
congruences inside ``Hom_Z(M, N)``.  Both remember enough to move between
group coordinates and actual elements or homomorphisms.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Any, Callable

from .abelian import (AbHom, CapacityError, Elem, FinAbGroup, Presentation,
                      SubgroupEmbedding, capacity, check_order, coordinates, is_bijective, kernel,
                      present)
from .algebra import (LEFT, RIGHT, AnyModule, Bimodule, FinRing, ModuleStructure,
                      is_ideal, other_side, regular_bimodule, require_valid, side_of,
                      sub_action)


def _module_of(left: ModuleStructure | None, right: ModuleStructure | None, group: FinAbGroup):
    if left is not None and right is not None:
        return Bimodule(left, right)
    return left or right


@dataclass(frozen=True, eq=False)
class TensorResult:
    ring: FinRing
    M: AnyModule  # right module over ring
    N: AnyModule  # left module over ring
    pres: Presentation

    @property
    def group(self) -> FinAbGroup:
        return self.pres.group

    @property
    def _kn(self) -> int:
        return self.N.group.rank

    def pure(self, m: Elem, n: Elem) -> Elem:
        """The class of ``m ⊗ n``."""
        kn = self._kn
        v = [0] * self.pres.n
        for a, x in enumerate(m):
            if x:
                for b, y in enumerate(n):
                    if y:
                        v[a * kn + b] += x * y
        return self.pres.project(v)

    @property
    def projection(self) -> AbHom:
        """From the free generator-pair group onto the tensor group."""
        mods = tuple(gcd(d, e) for d in self.M.group.moduli for e in self.N.group.moduli)
        free = FinAbGroup(tuple(max(x, 1) for x in mods if x > 1))
        # only pairs with nontrivial gcd survive; keep the free group honest
        keep = [i for i, x in enumerate(mods) if x > 1]
        return AbHom.from_images(free, self.group,
                                 [self.pres.project([int(j == i) for j in range(self.pres.n)])
                                  for i in keep])

    def generator_terms(self, k: int) -> list[tuple[Elem, Elem, int]]:
        """Generator ``k`` of the tensor group as a sum of ``c * (m_a ⊗ n_b)``."""
        kn = self._kn
        mg, ng = self.M.group.gens(), self.N.group.gens()
        return [(mg[i // kn], ng[i % kn], c) for i, c in enumerate(self.pres.lift[k]) if c]

    def from_bilinear(self, f: Callable[[Elem, Elem], Elem], target: FinAbGroup,
                      check: bool = True) -> AbHom:
        """The additive map ``m ⊗ n -> f(m, n)``.

        With ``check`` the result is verified on every generator pair, which
        fails exactly when ``f`` is not balanced (or not bilinear).
        """
        kn = self._kn
        mg, ng = self.M.group.gens(), self.N.group.gens()
        cache: dict[int, Elem] = {}

        def fpair(i):
            if i not in cache:
                cache[i] = target.reduce(f(mg[i // kn], ng[i % kn]))
            return cache[i]
        images = []
        for lift in self.pres.lift:
            images.append(target.combo([c for c in lift if c],
                                       [fpair(i) for i, c in enumerate(lift) if c]))
        h = AbHom.from_images(self.group, target, images)
        if check:
            for a, m in enumerate(mg):
                for b, n in enumerate(ng):
                    if h(self.pure(m, n)) != fpair(a * kn + b):
                        raise ValueError("map is not balanced over the ring")
        return h

    def tensor_maps(self, other: "TensorResult", f: AbHom, g: AbHom) -> AbHom:
        """``f ⊗ g`` from this tensor to ``other``."""
        return self.from_bilinear(lambda m, n: other.pure(f(m), g(n)), other.group)

    def left_structure(self) -> ModuleStructure | None:
        outer = other_side(self.M, RIGHT)
        if outer is None:
            return None
        return ModuleStructure.from_function(
            outer.ring, self.group, LEFT,
            lambda s, x: self._apply(x, lambda m, n: self.pure(outer.act(s, m), n)))

    def right_structure(self) -> ModuleStructure | None:
        outer = other_side(self.N, LEFT)
        if outer is None:
            return None
        return ModuleStructure.from_function(
            outer.ring, self.group, RIGHT,
            lambda s, x: self._apply(x, lambda m, n: self.pure(m, outer.act(s, n))))

    def _apply(self, x: Elem, f: Callable[[Elem, Elem], Elem]) -> Elem:
        out = self.group.zero()
        for k, coeff in enumerate(x):
            if coeff:
                for m, n, c in self.generator_terms(k):
                    out = self.group.add(out, self.group.scale(coeff * c, f(m, n)))
        return out

    @property
    def module(self):
        c = self.__dict__.get("_module")
        if c is None:
            c = _module_of(self.left_structure(), self.right_structure(), self.group)
            object.__setattr__(self, "_module", c)
        return c

    def elements_decomposable(self) -> set[Elem]:
        """All classes of pure tensors ``m ⊗ n``."""
        return {self.pure(m, n) for m in self.M.group.elements() for n in self.N.group.elements()}


def tensor_over(ring: FinRing, M: AnyModule, N: AnyModule) -> TensorResult:
    """``M ⊗_ring N`` for a right module ``M`` and a left module ``N``."""
    # capacity is checked on every call, outside the cache
    for x in (ring, M, N):
        check_order(x.group.order)
    pairs = M.group.rank * N.group.rank
    if pairs > capacity()[1]:
        raise CapacityError(f"{pairs} generator pairs exceed cap {capacity()[1]}")
    return _tensor_over(ring, M, N)


@lru_cache(maxsize=4096)
def _tensor_over(ring: FinRing, M: AnyModule, N: AnyModule) -> TensorResult:
    ms = side_of(M, RIGHT, ring)
    ns = side_of(N, LEFT, ring)
    kn = N.group.rank
    pairs = M.group.rank * kn
    rels: list[list[int]] = []
    for a, d in enumerate(M.group.moduli):
        for b, e in enumerate(N.group.moduli):
            v = [0] * pairs
            v[a * kn + b] = gcd(d, e)
            rels.append(v)
    mg, ng = M.group.gens(), N.group.gens()
    for t in ring.group.gens():
        nt = [ns.act(t, n) for n in ng]
        for a, m in enumerate(mg):
            mt = ms.act(t, m)
            for b in range(kn):
                v = [0] * pairs
                for a2, x in enumerate(mt):
                    v[a2 * kn + b] += x
                for b2, y in enumerate(nt[b]):
                    v[a * kn + b2] -= y
                if any(v):
                    rels.append(v)
    return TensorResult(ring, M, N, present(rels, pairs))


@dataclass(frozen=True, eq=False)
class HomResult:
    ring: FinRing
    M: AnyModule
    N: AnyModule
    side: str
    free: FinAbGroup                        # Hom_Z(M, N) in variable coordinates
    variables: tuple[tuple[int, int, int], ...]  # (row i, column j, step c_ij)
    sub: SubgroupEmbedding                  # ring-linear maps inside ``free``

    @property
    def group(self) -> FinAbGroup:
        return self.sub.subgroup

    def to_hom(self, x: Elem) -> AbHom:
        h0 = self.sub.embedding(x)
        rows = [[0] * self.M.group.rank for _ in range(self.N.group.rank)]
        for v, (i, j, c) in zip(h0, self.variables):
            rows[i][j] = v * c
        return AbHom(self.M.group, self.N.group, tuple(tuple(r) for r in rows))

    def element(self, f: AbHom) -> Elem:
        """Group coordinates of a ring-linear map; raises if ``f`` is not linear."""
        h0 = []
        for i, j, c in self.variables:
            a = f.matrix[i][j]
            if a % c:
                raise ValueError("not a homomorphism of the underlying groups")
            h0.append(a // c)
        return coordinates(self.sub, self.free.reduce(h0))

    def eval(self, x: Elem, m: Elem) -> Elem:
        return self.to_hom(x)(m)

    @property
    def basis(self) -> list[AbHom]:
        return [self.to_hom(g) for g in self.group.gens()]

    def from_function(self, f: Callable[[Elem], Elem]) -> Elem:
        return self.element(AbHom.from_images(self.M.group, self.N.group,
                                              [f(m) for m in self.M.group.gens()]))

    def _induced(self, new_side: str, outer: ModuleStructure,
                 build: Callable[[Elem, AbHom], Callable[[Elem], Elem]]) -> ModuleStructure:
        return ModuleStructure.from_function(
            outer.ring, self.group, new_side,
            lambda s, x: self.from_function(build(s, self.to_hom(x))))

    def source_structure(self) -> ModuleStructure | None:
        """Structure induced from the outer action on ``M``."""
        outer = other_side(self.M, self.side)
        if outer is None:
            return None
        if self.side == LEFT:   # (s f)(m) = f(m s)
            return self._induced(LEFT, outer, lambda s, f: lambda m: f(outer.act(s, m)))
        return self._induced(RIGHT, outer, lambda s, f: lambda m: f(outer.act(s, m)))

    def target_structure(self) -> ModuleStructure | None:
        """Structure induced from the outer action on ``N``."""
        outer = other_side(self.N, self.side)
        if outer is None:
            return None
        if self.side == LEFT:   # (f r)(m) = f(m) r
            return self._induced(RIGHT, outer, lambda s, f: lambda m: outer.act(s, f(m)))
        return self._induced(LEFT, outer, lambda s, f: lambda m: outer.act(s, f(m)))

    @property
    def module(self):
        c = self.__dict__.get("_module")
        if c is None:
            a, b = self.source_structure(), self.target_structure()
            left = a if a is not None and a.side == LEFT else b if b is not None and b.side == LEFT else None
            right = a if a is not None and a.side == RIGHT else b if b is not None and b.side == RIGHT else None
            c = _module_of(left, right, self.group)
            object.__setattr__(self, "_module", c)
        return c


def hom_module(ring: FinRing, M: AnyModule, N: AnyModule, side: str = LEFT) -> HomResult:
    """``Hom_ring(M, N)`` for two modules on the same side."""
    G, H = M.group, N.group
    for x in (ring.group, G, H):
        check_order(x.order)
    nvars = sum(gcd(d, e) > 1 for e in H.moduli for d in G.moduli)
    if nvars > capacity()[1]:
        raise CapacityError(f"{nvars} Hom variables exceed cap {capacity()[1]}")
    return _hom_module(ring, M, N, side)


@lru_cache(maxsize=4096)
def _hom_module(ring: FinRing, M: AnyModule, N: AnyModule, side: str) -> HomResult:
    ms = side_of(M, side, ring)
    ns = side_of(N, side, ring)
    G, H = M.group, N.group
    variables = []
    mods = []
    for i, e in enumerate(H.moduli):
        for j, d in enumerate(G.moduli):
            g = gcd(d, e)
            if g > 1:
                variables.append((i, j, e // g))
                mods.append(g)
    free = FinAbGroup(tuple(mods))
    rgens, mgens = ring.group.gens(), G.gens()
    # constraint components: f(t m_j) - t f(m_j) for every ring and module generator
    comp = [(t, m) for t in rgens for m in mgens]
    target = FinAbGroup(H.moduli * len(comp))
    images = []
    for i, j, c in variables:
        rows = [[0] * G.rank for _ in range(H.rank)]
        rows[i][j] = c
        f = AbHom(G, H, tuple(tuple(r) for r in rows))
        img: list[int] = []
        for t, m in comp:
            img.extend(H.sub(f(ms.act(t, m)), ns.act(t, f(m))))
        images.append(img)
    constraint = AbHom.from_images(free, target, images)
    ker = kernel(constraint)
    return HomResult(ring, M, N, side, free, tuple(variables), ker)


def dual_module(ring: FinRing, W: AnyModule, side: str = LEFT) -> HomResult:
    """``*W = Hom_{T-}(W, T)`` (side left, carries a right T-action) or ``W* = Hom_{-T}(W, T)``."""
    return hom_module(ring, W, regular_bimodule(ring), side)


@dataclass(frozen=True, eq=False)
class CanonicalMap:
    name: str
    hom: AbHom
    context: dict = field(default_factory=dict)

    def __call__(self, x):
        return self.hom(x)

    @property
    def source(self) -> FinAbGroup:
        return self.hom.source

    @property
    def target(self) -> FinAbGroup:
        return self.hom.target

    def bijectivity(self) -> tuple[bool, bool]:
        return is_bijective(self.hom)


def alpha_map(P: Any, U: AnyModule) -> CanonicalMap:
    """``α_U`` for a dual pairing.

    Left pairing ``(V, _T W)``, right ``U``: ``u ⊗ w -> [v -> u <v, w>]``
    from ``U ⊗_T W`` to ``Hom_{-T}(V, U)``.
    Right pairing ``(V, W_T)``, left ``U``: ``w ⊗ u -> [v -> <v, w> u]``
    from ``W ⊗_T U`` to ``Hom_{T-}(V, U)``.
    """
    T = P.ring
    if P.side == LEFT:
        us = side_of(U, RIGHT, T)
        ten = tensor_over(T, U, P.W)
        hom = hom_module(T, P.V, U, RIGHT)
        f = ten.from_bilinear(lambda u, w: hom.from_function(lambda v: us.act(P.pair(v, w), u)),
                              hom.group)
    else:
        us = side_of(U, LEFT, T)
        ten = tensor_over(T, P.W, U)
        hom = hom_module(T, P.V, U, LEFT)
        f = ten.from_bilinear(lambda w, u: hom.from_function(lambda v: us.act(P.pair(v, w), u)),
                              hom.group)
    return CanonicalMap("alpha", f, {"pairing": P, "U": U, "tensor": ten, "hom": hom})


def kappa_chi(P: Any) -> tuple[CanonicalMap, CanonicalMap]:
    """Adjuncts of a pairing: ``κ: V -> *W`` (or ``W*``) and ``χ: W -> V*`` (or ``*V``)."""
    T = P.ring
    wside = LEFT if P.side == LEFT else RIGHT
    vside = RIGHT if P.side == LEFT else LEFT
    dw = dual_module(T, P.W, wside)
    dv = dual_module(T, P.V, vside)
    k = AbHom.from_images(P.V.group, dw.group,
                          [dw.from_function(lambda w, v=v: P.pair(v, w)) for v in P.V.group.gens()])
    c = AbHom.from_images(P.W.group, dv.group,
                          [dv.from_function(lambda v, w=w: P.pair(v, w)) for w in P.W.group.gens()])
    return (CanonicalMap("kappa", k, {"pairing": P, "dual": dw}),
            CanonicalMap("chi", c, {"pairing": P, "dual": dv}))


def bracket_map(ring: FinRing, W: AnyModule, side: str = LEFT) -> CanonicalMap:
    """``[,]_W``.

    Left: ``*W ⊗_T W -> End(_T W)``, ``f ⊗ w -> [w~ -> f(w~) w]``.
    Right: ``W ⊗_T W* -> End(W_T)``, ``w ⊗ g -> [w~ -> w g(w~)]``.
    """
    ws = side_of(W, side, ring)
    d = dual_module(ring, W, side)
    dmod = d.target_structure()
    end = hom_module(ring, W, W, side)
    if side == LEFT:
        ten = tensor_over(ring, dmod, W)
        f = ten.from_bilinear(
            lambda x, w: end.from_function(lambda wt: ws.act(d.eval(x, wt), w)), end.group)
    else:
        ten = tensor_over(ring, W, dmod)
        f = ten.from_bilinear(
            lambda w, x: end.from_function(lambda wt: ws.act(d.eval(x, wt), w)), end.group)
    return CanonicalMap("bracket", f, {"dual": d, "end": end, "tensor": ten, "side": side})


def counit_map(P: Bimodule, K: AnyModule, side: str = LEFT) -> CanonicalMap:
    """``ω: P ⊗_S Hom_T(P, K) -> K``, ``p ⊗ f -> f(p)`` (side left, ``_T P_S``).

    Side right (``_S P_T``, ``K`` right T): ``Hom_T(P, K) ⊗_S P -> K``.
    """
    if side == LEFT:
        S = P.right.ring
        hk = hom_module(P.left.ring, P, K, LEFT)
        ten = tensor_over(S, P, hk.module)
        omega = ten.from_bilinear(lambda p, f: hk.eval(f, p), K.group)
    else:
        S = P.left.ring
        hk = hom_module(P.right.ring, P, K, RIGHT)
        ten = tensor_over(S, hk.module, P)
        omega = ten.from_bilinear(lambda f, p: hk.eval(f, p), K.group)
    return CanonicalMap("omega", omega, {"P": P, "K": K, "side": side, "tensor": ten, "hom": hk})


def unit_map(P: Bimodule, L: AnyModule, side: str = LEFT) -> CanonicalMap:
    """``η: L -> Hom_T(P, P ⊗_S L)``, ``l -> [p -> p ⊗ l]`` (side left, ``_T P_S``).

    Side right (``_S P_T``, ``L`` right S): ``L -> Hom_T(P, L ⊗_S P)``.
    """
    if side == LEFT:
        T, S = P.left.ring, P.right.ring
        tl = tensor_over(S, P, L)
        hl = hom_module(T, P, tl.module, LEFT)
        eta = AbHom.from_images(L.group, hl.group,
                                [hl.from_function(lambda p, l=l: tl.pure(p, l)) for l in L.group.gens()])
    else:
        T, S = P.right.ring, P.left.ring
        tl = tensor_over(S, L, P)
        hl = hom_module(T, P, tl.module, RIGHT)
        eta = AbHom.from_images(L.group, hl.group,
                                [hl.from_function(lambda p, l=l: tl.pure(l, p)) for l in L.group.gens()])
    return CanonicalMap("eta", eta, {"P": P, "L": L, "side": side, "tensor": tl, "hom": hl})


def adjunction_maps(P: Bimodule, K: AnyModule, L: AnyModule,
                    side: str = LEFT) -> tuple[CanonicalMap, CanonicalMap]:
    """Counit ``ω`` at ``K`` and unit ``η`` at ``L`` of the tensor-Hom adjunction for ``P``.

    Inputs are validated first; an invalid bimodule raises ValueError.
    """
    for x in (P, K, L):
        require_valid(x)
    return counit_map(P, K, side), unit_map(P, L, side)


@lru_cache(maxsize=512)
def ideal_bimodule(ring: FinRing, ideal: SubgroupEmbedding) -> Bimodule:
    if not is_ideal(ring, ideal):
        raise ValueError("subgroup is not a two-sided ideal")
    return Bimodule(sub_action(ring, ideal, LEFT, ring.mul),
                    sub_action(ring, ideal, RIGHT, lambda a, x: ring.mul(x, a)), name="I")


def localization_maps(ring: FinRing, ideal: SubgroupEmbedding, U: AnyModule,
                      side: str = LEFT) -> tuple[CanonicalMap, CanonicalMap]:
    """``ζ: U -> Hom_T(I, U)`` and ``ξ: I ⊗_T U -> U`` (mirrored for right modules)."""
    ib = ideal_bimodule(ring, ideal)
    us = side_of(U, side, ring)
    emb = ideal.embedding
    hom = hom_module(ring, ib, U, side)
    zeta = AbHom.from_images(U.group, hom.group,
                             [hom.from_function(lambda i, u=u: us.act(emb(i), u)) for u in U.group.gens()])
    if side == LEFT:
        ten = tensor_over(ring, ib, U)
        xi = ten.from_bilinear(lambda i, u: us.act(emb(i), u), U.group)
    else:
        ten = tensor_over(ring, U, ib)
        xi = ten.from_bilinear(lambda u, i: us.act(emb(i), u), U.group)
    ctx = {"ideal": ideal, "U": U, "side": side}
    return (CanonicalMap("zeta", zeta, dict(ctx, hom=hom)),
            CanonicalMap("xi", xi, dict(ctx, tensor=ten)))


def pairing_maps(m: Any) -> tuple[CanonicalMap, CanonicalMap]:
    """``κ_{P_l}: Q -> *P`` and ``κ_{Q_r}: P -> Q*`` of a semi-context."""
    T = m.T
    dp = dual_module(T, m.P, LEFT)
    dq = dual_module(T, m.Q, RIGHT)
    b = m.beta
    k_pl = AbHom.from_images(m.Q.group, dp.group,
                             [dp.from_function(lambda p, q=q: b(p, q)) for q in m.Q.group.gens()])
    k_qr = AbHom.from_images(m.P.group, dq.group,
                             [dq.from_function(lambda q, p=p: b(p, q)) for p in m.P.group.gens()])
    return (CanonicalMap("kappa", k_pl, {"dual": dp, "which": "P_l"}),
            CanonicalMap("kappa", k_qr, {"dual": dq, "which": "Q_r"}))


def structure_map(B: Bimodule, side: str) -> CanonicalMap:
    """``ρ`` (side left: ``S -> End(_T P)^op``) or ``λ`` (side right: ``S -> End(Q_T)``)."""
    from .algebra import endo_ring

    _, canon = endo_ring(B, side)
    return CanonicalMap("rho" if side == LEFT else "lambda", canon.hom, {"ring_map": canon})
