"""Dual pairings over a finite ring and their classification.

A left pairing ``(V, _T W)`` has ``V`` a right and ``W`` a left T-module with
``<v t, w> = <v, w> t`` and ``<v, t w> = t <v, w>``.  A right pairing
``(V, W_T)`` swaps the sides.  Everything is finite, so density in the
finite topology is the same as equality, and local projectivity is the same
as being finitely generated projective.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

from .abelian import AbHom, Elem, preimage
from .algebra import LEFT, RIGHT, AnyModule, FinRing, Report, side_of
from .tensor_hom import (CanonicalMap, alpha_map, bracket_map, dual_module,
                         kappa_chi)

CERTIFIED, REFUTED, INCONCLUSIVE, UNKNOWN = "certified", "refuted", "inconclusive", "unknown"


@dataclass(frozen=True, eq=False)
class DualPairing:
    ring: FinRing
    V: AnyModule
    W: AnyModule
    side: str
    table: tuple[tuple[Elem, ...], ...]   # <v_a, w_b> on group generators
    name: str = ""

    def __post_init__(self):
        if self.side not in (LEFT, RIGHT):
            raise ValueError(f"side must be left or right, got {self.side!r}")
        g = self.ring.group
        t = tuple(tuple(g.reduce(x) for x in row) for row in self.table)
        if len(t) != self.V.group.rank or any(len(r) != self.W.group.rank for r in t):
            raise ValueError("pairing table must be (V generators) x (W generators)")
        object.__setattr__(self, "table", t)

    @classmethod
    def from_function(cls, ring: FinRing, V: AnyModule, W: AnyModule, side: str,
                      f: Callable[[Elem, Elem], Elem], name: str = "") -> "DualPairing":
        return cls(ring, V, W, side,
                   tuple(tuple(f(v, w) for w in W.group.gens()) for v in V.group.gens()), name)

    @property
    def v_side(self) -> str:
        return RIGHT if self.side == LEFT else LEFT

    def pair(self, v: Elem, w: Elem) -> Elem:
        g = self.ring.group
        out = [0] * g.rank
        for a, x in enumerate(v):
            if x:
                for b, y in enumerate(w):
                    if y:
                        for k, z in enumerate(self.table[a][b]):
                            out[k] += x * y * z
        return g.reduce(out)


def validate_pairing(P: DualPairing) -> Report:
    """Order conditions and T-linearity of ``<,>`` on generators."""
    rep = Report()
    T = P.ring
    vs = side_of(P.V, P.v_side, T)
    ws = side_of(P.W, P.side, T)
    g = T.group
    for a, d in enumerate(P.V.group.moduli):
        for b, e in enumerate(P.W.group.moduli):
            x = P.table[a][b]
            if g.scale(d, x) != g.zero() or g.scale(e, x) != g.zero():
                rep.fail("pairing well-defined", (a, b))
    vg, wg = P.V.group.gens(), P.W.group.gens()
    for u, t in enumerate(g.gens()):
        for a, v in enumerate(vg):
            for b, w in enumerate(wg):
                base = P.pair(v, w)
                if P.side == LEFT:
                    ok_v = P.pair(vs.act(t, v), w) == T.mul(base, t)
                    ok_w = P.pair(v, ws.act(t, w)) == T.mul(t, base)
                else:
                    ok_v = P.pair(vs.act(t, v), w) == T.mul(t, base)
                    ok_w = P.pair(v, ws.act(t, w)) == T.mul(base, t)
                if not ok_v:
                    rep.fail("pairing linear in V", (u, a, b))
                if not ok_w:
                    rep.fail("pairing linear in W", (u, a, b))
    return rep


def canonical_pairing(ring: FinRing, W: AnyModule, side: str = LEFT) -> DualPairing:
    """``(*W, W)`` for a left module (``(W*, W)`` for a right one), ``<f, w> = f(w)``."""
    d = dual_module(ring, W, side)
    dmod = d.target_structure()
    return DualPairing.from_function(ring, dmod, W, side, lambda f, w: d.eval(f, w),
                                     name="*W" if side == LEFT else "W*")


def zero_pairing(ring: FinRing, V: AnyModule, W: AnyModule, side: str = LEFT) -> DualPairing:
    z = ring.zero()
    return DualPairing.from_function(ring, V, W, side, lambda v, w: z, name="zero")


@dataclass
class LocalProjectivity:
    flag: bool
    certificate: list[tuple[Elem, Elem, int]] | None   # terms c * (f_i ⊗ w_i)
    bracket: CanonicalMap
    fg_projective: bool    # surjectivity of the bracket, computed separately


def is_locally_projective(ring: FinRing, W: AnyModule, side: str = LEFT) -> LocalProjectivity:
    """Dual basis test with the finite subset taken to be all of ``W``.

    Then the criterion asks for ``id_W`` in the image of ``[,]_W``; the
    preimage is the certificate.  For finite ``W`` this flag also equals
    finitely generated projectivity, which is surjectivity of ``[,]_W``; both
    are computed and compared.
    """
    br = bracket_map(ring, W, side)
    end = br.context["end"]
    ident = end.element(AbHom.identity(W.group))
    x = preimage(br.hom, ident)
    cert = None
    if x is not None:
        ten = br.context["tensor"]
        cert = []
        for k, c in enumerate(x):
            if c:
                for m, n, cc in ten.generator_terms(k):
                    cert.append((m, n, c * cc))
    surj = br.bijectivity()[1]
    if surj != (x is not None):
        raise AssertionError("identity in bracket image disagrees with bracket surjectivity")
    return LocalProjectivity(x is not None, cert, br, surj)


def check_dual_basis(ring: FinRing, W: AnyModule, lp: LocalProjectivity, side: str = LEFT) -> bool:
    """Re-verify ``w = Σ f_i(w) w_i`` for every ``w`` from the certificate terms."""
    if lp.certificate is None:
        return False
    ws = side_of(W, side, ring)
    d = lp.bracket.context["dual"]
    g = W.group
    for w in g.elements():
        acc = g.zero()
        for a, b, c in lp.certificate:
            f, wi = (a, b) if side == LEFT else (b, a)
            acc = g.add(acc, g.scale(c, ws.act(d.eval(f, w), wi)))
        if acc != w:
            return False
    return True


@dataclass
class AlphaVerdict:
    status: str                      # certified / refuted / inconclusive
    reason: str
    counterexample: Any = None

    def __str__(self):
        return f"{self.status} ({self.reason})"


def alpha_sufficient(P: DualPairing) -> AlphaVerdict:
    """Sufficient and necessary local criteria for the α-condition.

    Locally projective ``W`` with dense (here: surjective) ``κ`` certifies;
    ``W`` not locally projective refutes; anything else is inconclusive.
    """
    lp = is_locally_projective(P.ring, P.W, P.side)
    if not lp.flag:
        return AlphaVerdict(REFUTED, "W is not locally projective")
    kappa, _ = kappa_chi(P)
    if kappa.bijectivity()[1]:
        return AlphaVerdict(CERTIFIED, "W locally projective and kappa(V) dense")
    return AlphaVerdict(INCONCLUSIVE, "W locally projective but kappa(V) not dense")


def alpha_bounded(P: DualPairing, bound: int, modules: list[AnyModule] | None = None) -> AlphaVerdict:
    """Search for a module ``U`` with ``α_U`` not injective.

    ``U`` runs over right T-modules for a left pairing, left ones for a right
    pairing.  Never certifies: an empty search only clears the bound.
    """
    if modules is None:
        from .catlab import enumerate_modules
        modules = enumerate_modules(P.ring, P.v_side, bound)
    for U in modules:
        if not alpha_map(P, U).bijectivity()[0]:
            return AlphaVerdict(REFUTED, f"alpha_U not injective for |U| = {U.group.order}", U)
    return AlphaVerdict(INCONCLUSIVE, f"no counterexample among modules of order <= {bound}")


def alpha_verdict(P: DualPairing, bound: int = 0) -> AlphaVerdict:
    """``alpha_sufficient`` first, then the bounded search if still open."""
    v = alpha_sufficient(P)
    if v.status != INCONCLUSIVE or bound <= 0:
        return v
    b = alpha_bounded(P, bound)
    if b.status == REFUTED:
        return b
    return AlphaVerdict(INCONCLUSIVE, f"{v.reason}; {b.reason}")


@dataclass
class PairingVerdict:
    dense: bool
    injective: bool
    semi_strict: bool
    strict: bool
    non_degenerate: bool
    locally_projective_W: bool
    lp_certificate: list | None
    alpha: AlphaVerdict
    notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"dense": self.dense, "injective": self.injective,
                "semi_strict": self.semi_strict, "strict": self.strict,
                "non_degenerate": self.non_degenerate,
                "locally_projective_W": self.locally_projective_W,
                "alpha": self.alpha.status, "alpha_reason": self.alpha.reason,
                "notes": list(self.notes)}


def classify_pairing(P: DualPairing, alpha_bound: int = 0) -> PairingVerdict:
    inj, surj = alpha_map(P, P.V).bijectivity()
    kappa, chi = kappa_chi(P)
    k_inj, k_surj = kappa.bijectivity()
    c_inj = chi.bijectivity()[0]
    lp = is_locally_projective(P.ring, P.W, P.side)
    alpha = alpha_verdict(P, alpha_bound)
    if alpha.status == CERTIFIED and not inj:
        raise AssertionError("certified alpha-pairing with non-injective alpha_V")
    notes = ["density is surjectivity of kappa (finite topology is discrete)",
             "local projectivity of W coincides with finitely generated projectivity"]
    if alpha.status == INCONCLUSIVE:
        notes.append("converse criterion needs T_T an injective cogenerator; "
                     "only the cogenerator-free direction is decided")
    return PairingVerdict(dense=k_surj, injective=inj, semi_strict=surj, strict=inj and surj,
                          non_degenerate=k_inj and c_inj, locally_projective_W=lp.flag,
                          lp_certificate=lp.certificate, alpha=alpha, notes=notes)
