"""Finite rings, modules and bimodules given by structure constants.

Every ring here is a Z-algebra: its additive group is a FinAbGroup and its
multiplication is the bilinear extension of a table on generators.  Axioms
are only checked on generators, which is enough by bilinearity.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Union

from .abelian import (AbHom, Elem, FinAbGroup, SubgroupEmbedding, check_order,
                      coordinates, enumerate_subgroups, subgroup_generated)

LEFT, RIGHT = "left", "right"


class _CachedHash:
    """Frozen dataclasses hash their (large) tables on every call; cache it."""

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(self._key())
            object.__setattr__(self, "_hash", h)
        return h


@dataclass(frozen=True, eq=False)
class FinRing(_CachedHash):
    group: FinAbGroup
    mult: tuple[tuple[Elem, ...], ...]
    one: Elem | None = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        k = self.group.rank
        table = tuple(tuple(self.group.reduce(x) for x in row) for row in self.mult)
        if len(table) != k or any(len(r) != k for r in table):
            raise ValueError("multiplication table must be k x k")
        object.__setattr__(self, "mult", table)
        if self.one is not None:
            object.__setattr__(self, "one", self.group.reduce(self.one))

    __hash__ = _CachedHash.__hash__

    def _key(self):
        return (self.group, self.mult, self.one)

    def __eq__(self, other):
        return isinstance(other, FinRing) and self._key() == other._key()

    @classmethod
    def from_function(cls, group: FinAbGroup, mul: Callable[[Elem, Elem], Elem],
                      one: Elem | None = None, name: str = "") -> "FinRing":
        gens = group.gens()
        return cls(group, tuple(tuple(mul(a, b) for b in gens) for a in gens), one, name)

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def is_unital(self) -> bool:
        return self.one is not None

    def zero(self) -> Elem:
        return self.group.zero()

    def elements(self):
        return self.group.elements()

    def add(self, x, y):
        return self.group.add(x, y)

    def mul(self, x: Elem, y: Elem) -> Elem:
        g = self.group
        out = [0] * g.rank
        for i, a in enumerate(x):
            if not a:
                continue
            row = self.mult[i]
            for j, b in enumerate(y):
                if b:
                    c = a * b
                    for k, z in enumerate(row[j]):
                        out[k] += c * z
        return g.reduce(out)

    def left_mult(self, x: Elem) -> AbHom:
        """``r -> x r`` as an additive map."""
        return AbHom.from_images(self.group, self.group, [self.mul(x, g) for g in self.group.gens()])

    def right_mult(self, x: Elem) -> AbHom:
        return AbHom.from_images(self.group, self.group, [self.mul(g, x) for g in self.group.gens()])

    def is_commutative(self) -> bool:
        return all(self.mult[i][j] == self.mult[j][i]
                   for i in range(self.group.rank) for j in range(i))

    def __repr__(self):
        label = self.name or f"ring on {self.group!r}"
        return f"FinRing({label})"


@dataclass(frozen=True, eq=False)
class ModuleStructure(_CachedHash):
    """One-sided module: ``action[u][j]`` is ``t_u . m_j`` (left) or ``m_j . t_u`` (right)."""
    ring: FinRing
    group: FinAbGroup
    side: str
    action: tuple[tuple[Elem, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.side not in (LEFT, RIGHT):
            raise ValueError(f"side must be left or right, got {self.side!r}")
        table = tuple(tuple(self.group.reduce(x) for x in row) for row in self.action)
        if len(table) != self.ring.group.rank or any(len(r) != self.group.rank for r in table):
            raise ValueError("action table must be (ring generators) x (module generators)")
        object.__setattr__(self, "action", table)

    __hash__ = _CachedHash.__hash__

    def _key(self):
        return (self.ring, self.group, self.side, self.action)

    def __eq__(self, other):
        return isinstance(other, ModuleStructure) and self._key() == other._key()

    @classmethod
    def from_function(cls, ring: FinRing, group: FinAbGroup, side: str,
                      act: Callable[[Elem, Elem], Elem], name: str = "") -> "ModuleStructure":
        """``act(t, m)`` is the scalar action of ``t`` on ``m`` whatever the side."""
        return cls(ring, group, side,
                   tuple(tuple(act(t, m) for m in group.gens()) for t in ring.group.gens()), name)

    def act(self, t: Elem, m: Elem) -> Elem:
        """Action of the ring element ``t`` on ``m`` (``t m`` or ``m t`` by side)."""
        g = self.group
        out = [0] * g.rank
        for u, a in enumerate(t):
            if not a:
                continue
            row = self.action[u]
            for j, b in enumerate(m):
                if b:
                    c = a * b
                    for k, z in enumerate(row[j]):
                        out[k] += c * z
        return g.reduce(out)

    def scalar_map(self, t: Elem) -> AbHom:
        return AbHom.from_images(self.group, self.group, [self.act(t, m) for m in self.group.gens()])

    @property
    def order(self) -> int:
        return self.group.order

    def __repr__(self):
        return f"ModuleStructure({self.name or self.group!r}, {self.side} over {self.ring!r})"


@dataclass(frozen=True, eq=False)
class Bimodule(_CachedHash):
    """A group with a left action of one ring and a right action of another."""
    left: ModuleStructure
    right: ModuleStructure
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.left.group != self.right.group:
            raise ValueError("bimodule sides live on different groups")
        if self.left.side != LEFT or self.right.side != RIGHT:
            raise ValueError("bimodule needs a left and a right structure")

    __hash__ = _CachedHash.__hash__

    def _key(self):
        return (self.left, self.right)

    def __eq__(self, other):
        return isinstance(other, Bimodule) and self._key() == other._key()

    @property
    def group(self) -> FinAbGroup:
        return self.left.group

    @property
    def order(self) -> int:
        return self.group.order

    def __repr__(self):
        return f"Bimodule({self.name or self.group!r})"


AnyModule = Union[ModuleStructure, Bimodule]


def side_of(m: AnyModule, side: str, ring: FinRing | None = None) -> ModuleStructure:
    """Pick the ``side`` structure of a module or bimodule, optionally checking the ring."""
    if isinstance(m, Bimodule):
        s = m.left if side == LEFT else m.right
    elif m.side == side:
        s = m
    else:
        raise ValueError(f"module is {m.side}, {side} structure requested")
    if ring is not None and s.ring != ring:
        raise ValueError(f"{side} structure is over a different ring")
    return s


def other_side(m: AnyModule, side: str) -> ModuleStructure | None:
    """The structure opposite to ``side`` on a bimodule (None for one-sided modules)."""
    if isinstance(m, Bimodule):
        return m.right if side == LEFT else m.left
    return None


# ---------------------------------------------------------------------------
# validation

@dataclass
class Report:
    failures: list[tuple[str, tuple]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, axiom: str, witness: tuple):
        self.failures.append((axiom, witness))

    def extend(self, other: "Report", prefix: str = ""):
        self.failures.extend((prefix + a, w) for a, w in other.failures)
        self.notes.extend(other.notes)

    def __bool__(self):
        return self.ok

    def lines(self) -> list[str]:
        return [f"{a}: witness {w}" for a, w in self.failures]


def _order_divides(g: FinAbGroup, x: Elem, n: int) -> bool:
    return all(a * n % d == 0 for a, d in zip(x, g.moduli))


def validate_ring(r: FinRing) -> Report:
    rep = Report()
    g = r.group
    k = g.rank
    for i in range(k):
        for j in range(k):
            if not _order_divides(g, r.mult[i][j], gcd(g.moduli[i], g.moduli[j])):
                rep.fail("well-definedness", (i, j))
    if not rep.ok:
        return rep
    gens = g.gens()
    for i, j, l in itertools.product(range(k), repeat=3):
        a, b, c = gens[i], gens[j], gens[l]
        if r.mul(r.mul(a, b), c) != r.mul(a, r.mul(b, c)):
            rep.fail("associativity", (i, j, l))
    if r.one is None:
        rep.notes.append("non-unital")
    else:
        for i, x in enumerate(gens):
            if r.mul(r.one, x) != x or r.mul(x, r.one) != x:
                rep.fail("unity", (i,))
    return rep


def _validate_side(m: ModuleStructure) -> Report:
    rep = Report()
    R, G = m.ring, m.group
    for u, d in enumerate(R.group.moduli):
        for j, e in enumerate(G.moduli):
            if not _order_divides(G, m.action[u][j], gcd(d, e)):
                rep.fail("well-definedness", (u, j))
    if not rep.ok:
        return rep
    rg, mg = R.group.gens(), G.gens()
    for u, v, j in itertools.product(range(len(rg)), range(len(rg)), range(len(mg))):
        t, s, x = rg[u], rg[v], mg[j]
        if m.side == LEFT:
            ok = m.act(R.mul(t, s), x) == m.act(t, m.act(s, x))
        else:
            ok = m.act(R.mul(t, s), x) == m.act(s, m.act(t, x))
        if not ok:
            rep.fail("associativity", (u, v, j))
    if R.one is not None:
        for j, x in enumerate(mg):
            if m.act(R.one, x) != x:
                rep.fail("unity", (j,))
    return rep


def validate_module(m: AnyModule) -> Report:
    if isinstance(m, ModuleStructure):
        return _validate_side(m)
    rep = Report()
    rep.extend(_validate_side(m.left), "left ")
    rep.extend(_validate_side(m.right), "right ")
    if not rep.ok:
        return rep
    L, Rs = m.left, m.right
    for u, t in enumerate(L.ring.group.gens()):
        for v, s in enumerate(Rs.ring.group.gens()):
            for j, x in enumerate(m.group.gens()):
                if Rs.act(s, L.act(t, x)) != L.act(t, Rs.act(s, x)):
                    rep.fail("commuting actions", (u, j, v))
    return rep


def require_valid(obj) -> None:
    rep = validate_ring(obj) if isinstance(obj, FinRing) else validate_module(obj)
    if not rep.ok:
        raise ValueError("axiom failure: " + "; ".join(rep.lines()))


@dataclass(frozen=True)
class RngMorphism:
    source: FinRing
    target: FinRing
    hom: AbHom
    unital: bool = False

    def __call__(self, x: Elem) -> Elem:
        return self.hom(x)


def validate_morphism(f: RngMorphism) -> Report:
    rep = Report()
    if f.hom.source != f.source.group or f.hom.target != f.target.group:
        rep.fail("shape", ())
        return rep
    gens = f.source.group.gens()
    for i, a in enumerate(gens):
        for j, b in enumerate(gens):
            if f(f.source.mul(a, b)) != f.target.mul(f(a), f(b)):
                rep.fail("multiplicativity", (i, j))
    if f.unital and f.source.one is not None and f.target.one is not None:
        if f(f.source.one) != f.target.one:
            rep.fail("unity", ())
    return rep


# ---------------------------------------------------------------------------
# constructors

def zn(m: int) -> FinRing:
    if m == 1:
        return FinRing(FinAbGroup(()), (), (), name="0")
    g = FinAbGroup((m,))
    return FinRing(g, (((1,),),), (1,), name=f"Z{m}")


def matrix_ring(n: int, m: int) -> FinRing:
    """``M_n(Z_m)`` on the basis ``E_ij`` (index ``i*n + j``)."""
    if n < 1 or m < 2:
        raise ValueError("need n >= 1 and m >= 2")
    check_order(m ** (n * n), what="matrix ring")
    k = n * n
    g = FinAbGroup((m,) * k)

    def e(i, j):
        return tuple(int(x == i * n + j) for x in range(k))
    zero = (0,) * k
    mult = tuple(tuple(e(a // n, b % n) if a % n == b // n else zero
                       for b in range(k)) for a in range(k))
    one = tuple(int(x // n == x % n) for x in range(k))
    return FinRing(g, mult, one, name=f"M{n}(Z{m})")


def upper_triangular(m: int) -> FinRing:
    """Upper-triangular 2x2 matrices over ``Z_m`` on the basis ``E11, E12, E22``."""
    g = FinAbGroup((m, m, m))
    idx = {(0, 0): 0, (0, 1): 1, (1, 1): 2}

    def mul(x, y):
        a = {k: x[v] for k, v in idx.items()}
        b = {k: y[v] for k, v in idx.items()}
        out = [0, 0, 0]
        for (i, j), p in a.items():
            for (k, l), q in b.items():
                if j == k:
                    out[idx[(i, l)]] += p * q
        return g.reduce(out)
    return FinRing.from_function(g, mul, (1, 0, 1), name=f"UT2(Z{m})")


def product_ring(a: FinRing, b: FinRing) -> FinRing:
    g = a.group.direct_sum(b.group)
    ka = a.group.rank

    def mul(x, y):
        return a.mul(x[:ka], y[:ka]) + b.mul(x[ka:], y[ka:])
    one = a.one + b.one if a.one is not None and b.one is not None else None
    return FinRing.from_function(g, mul, one, name=f"{a.name or 'A'}x{b.name or 'B'}")


def zero_rng(group: FinAbGroup) -> FinRing:
    """The rng with zero multiplication on ``group``."""
    z = group.zero()
    return FinRing(group, tuple((z,) * group.rank for _ in range(group.rank)), None,
                   name=f"zero rng on {group!r}")


def opposite(r: FinRing) -> FinRing:
    k = r.group.rank
    return FinRing(r.group, tuple(tuple(r.mult[j][i] for j in range(k)) for i in range(k)),
                   r.one, name=(r.name + "^op") if r.name else "")


def regular_left(t: FinRing) -> ModuleStructure:
    return ModuleStructure.from_function(t, t.group, LEFT, t.mul, name="T")


def regular_right(t: FinRing) -> ModuleStructure:
    return ModuleStructure.from_function(t, t.group, RIGHT, lambda s, x: t.mul(x, s), name="T")


def regular_bimodule(t: FinRing) -> Bimodule:
    return Bimodule(regular_left(t), regular_right(t), name="T")


def module_over_quotient(t: FinRing, group: FinAbGroup, side: str = LEFT) -> ModuleStructure:
    """``group`` as a module over ``t = Z_m`` (or any ring) through the integer scalars.

    Only sensible when the ring's additive generator 1 acts as the identity,
    i.e. ``t`` is cyclic with unity 1.
    """
    if t.group.rank != 1 or t.one != (1,):
        raise ValueError("integer-scalar modules need a cyclic ring with unity 1")
    return ModuleStructure.from_function(t, group, side, lambda s, m: group.scale(s[0], m))


def idempotents(r: FinRing) -> list[Elem]:
    check_order(r.order)
    return [x for x in r.elements() if r.mul(x, x) == x]


# ---------------------------------------------------------------------------
# substructures

def sub_ring(t: FinRing, sub: SubgroupEmbedding, one: Elem | None) -> FinRing:
    """Structure constants of a multiplicatively closed subgroup."""
    emb = sub.embedding

    def mul(a, b):
        return coordinates(sub, t.mul(emb(a), emb(b)))
    return FinRing.from_function(sub.subgroup, mul,
                                 None if one is None else coordinates(sub, one))


def sub_action(ring: FinRing, sub: SubgroupEmbedding, side: str,
               act: Callable[[Elem, Elem], Elem]) -> ModuleStructure:
    """Restrict an ambient action ``act(t, ambient_elem)`` to a stable subgroup."""
    emb = sub.embedding
    return ModuleStructure.from_function(ring, sub.subgroup, side,
                                         lambda t, m: coordinates(sub, act(t, emb(m))))


def is_left_ideal(t: FinRing, sub: SubgroupEmbedding) -> bool:
    return all(t.mul(g, x) in sub for g in t.group.gens() for x in sub.generators())


def is_right_ideal(t: FinRing, sub: SubgroupEmbedding) -> bool:
    return all(t.mul(x, g) in sub for g in t.group.gens() for x in sub.generators())


def is_ideal(t: FinRing, sub: SubgroupEmbedding) -> bool:
    return is_left_ideal(t, sub) and is_right_ideal(t, sub)


def right_ideals(t: FinRing) -> list[SubgroupEmbedding]:
    return [s for s in enumerate_subgroups(t.group) if is_right_ideal(t, s)]


def left_ideals(t: FinRing) -> list[SubgroupEmbedding]:
    return [s for s in enumerate_subgroups(t.group) if is_left_ideal(t, s)]


def corner_context(t: FinRing, e: Elem):
    """Morita datum ``(T, eTe, Te, eT)`` with both pairings given by multiplication."""
    from .morita import BalancedMap, MoritaDatum, MoritaSemiContext

    e = t.group.check(tuple(e))
    if t.mul(e, e) != e:
        raise ValueError(f"{e} is not idempotent")
    gens = t.group.gens()
    s_sub = subgroup_generated(t.group, [t.mul(t.mul(e, x), e) for x in gens])
    p_sub = subgroup_generated(t.group, [t.mul(x, e) for x in gens])
    q_sub = subgroup_generated(t.group, [t.mul(e, x) for x in gens])
    s = sub_ring(t, s_sub, e)
    s = FinRing(s.group, s.mult, s.one, name="eTe")
    se = s_sub.embedding
    pe, qe = p_sub.embedding, q_sub.embedding
    p = Bimodule(sub_action(t, p_sub, LEFT, t.mul),
                 sub_action(s, p_sub, RIGHT, lambda a, x: t.mul(x, se(a))), name="Te")
    q = Bimodule(sub_action(s, q_sub, LEFT, lambda a, x: t.mul(se(a), x)),
                 sub_action(t, q_sub, RIGHT, lambda a, x: t.mul(x, a)), name="eT")
    beta_t = BalancedMap.from_function(p, q, t, lambda x, y: t.mul(pe(x), qe(y)))
    beta_s = BalancedMap.from_function(q, p, s,
                                       lambda y, x: coordinates(s_sub, t.mul(qe(y), pe(x))))
    m_t = MoritaSemiContext(t, s, p, q, beta_t)
    m_s = MoritaSemiContext(s, t, q, p, beta_s)
    return MoritaDatum(m_t, m_s)


def endo_ring(m: AnyModule, side: str | None = None):
    """Endomorphism ring over the acting ring on ``side``.

    Left modules use ``End(_T M)^op`` (composition written left to right),
    right modules use ``End(M_T)``.  If ``m`` is a bimodule the structure map
    from the other ring (``rho`` or ``lambda``) is returned too, else None.
    """
    from .tensor_hom import hom_module

    if side is None:
        if isinstance(m, Bimodule):
            raise ValueError("side required for a bimodule")
        side = m.side
    act = side_of(m, side)
    h = hom_module(act.ring, m, m, side)
    g = h.group

    if side == LEFT:
        def mul(a, b):  # a then b
            return h.element(h.to_hom(b) @ h.to_hom(a))
    else:
        def mul(a, b):
            return h.element(h.to_hom(a) @ h.to_hom(b))
    ident = h.element(AbHom.identity(act.group))
    e_ring = FinRing.from_function(g, mul, ident,
                                   name=("End(_T M)^op" if side == LEFT else "End(M_T)"))
    canon = None
    other = other_side(m, side)
    if other is not None:
        images = [h.element(other.scalar_map(s)) for s in other.ring.group.gens()]
        canon = RngMorphism(other.ring, e_ring, AbHom.from_images(other.ring.group, g, images),
                            unital=True)
    return e_ring, canon


def is_self_injective(r: FinRing) -> bool:
    """Baer criterion for ``R_R``: every right-linear ``I -> R`` is left multiplication."""
    from .tensor_hom import hom_module

    if r.one is None:
        raise ValueError("self-injectivity test needs a unital ring")
    check_order(r.order)
    rr = regular_right(r)
    for ideal in right_ideals(r):
        if ideal.is_trivial() or ideal.is_everything():
            continue
        i_mod = sub_action(r, ideal, RIGHT, lambda a, x: r.mul(x, a))
        h = hom_module(r, i_mod, rr, RIGHT)
        emb = ideal.embedding
        restrict = AbHom.from_images(
            r.group, h.group,
            [h.element(AbHom.from_images(ideal.subgroup, r.group,
                                         [r.mul(x, emb(y)) for y in ideal.subgroup.gens()]))
             for x in r.group.gens()])
        from .abelian import is_bijective
        if not is_bijective(restrict)[1]:
            return False
    return True
