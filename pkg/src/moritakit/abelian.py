"""Finite abelian groups and their homomorphisms.

A group is a tuple of moduli ``(d_1, ..., d_k)``; its elements are integer
tuples reduced coordinatewise.  A homomorphism is an integer matrix with one
column per source generator.  Everything below (kernels, images, quotients,
presentations) goes through a Smith normal form with a deterministic pivot
rule, so repeated runs give identical coordinates.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from math import gcd, prod
from typing import Iterable, Sequence

Matrix = list[list[int]]
Elem = tuple[int, ...]

# Entries beyond this bound during SNF are treated as a capacity failure.
INT_BOUND = 2**256
DEFAULT_GROUP_CAP = 256
DEFAULT_PAIR_CAP = 1024


class CapacityError(RuntimeError):
    """A computation exceeded its configured size bound."""


def capacity() -> tuple[int, int]:
    """Return ``(group_cap, pair_cap)``.

    ``MORITA_KIT_CAP`` may hold ``N`` (group cap; pair cap scales by 4) or ``N,M``.
    """
    raw = os.environ.get("MORITA_KIT_CAP", "").strip()
    if not raw:
        return DEFAULT_GROUP_CAP, DEFAULT_PAIR_CAP
    parts = [p.strip() for p in raw.split(",")]
    try:
        g = int(parts[0])
        p = int(parts[1]) if len(parts) > 1 else 4 * g
    except ValueError as exc:
        raise CapacityError(f"bad MORITA_KIT_CAP value {raw!r}") from exc
    return g, p


def check_order(n: int, cap: int | None = None, what: str = "group") -> None:
    if cap is None:
        cap = capacity()[0]
    if n > cap:
        raise CapacityError(f"{what} of order {n} exceeds cap {cap}")


# ---------------------------------------------------------------------------
# integer matrices

def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def eye(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix, inner: int | None = None) -> Matrix:
    """Product of integer matrices; ``inner`` is needed when ``a`` has no rows."""
    n = len(b) if inner is None else inner
    cols = len(b[0]) if b else 0
    return [[sum(row[k] * b[k][j] for k in range(n)) for j in range(cols)] for row in a]


def matvec(a: Matrix, v: Sequence[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose(a: Matrix, ncols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def det(a: Matrix) -> int:
    """Exact determinant by fraction-free elimination (Bareiss)."""
    n = len(a)
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _guard(x: int) -> int:
    if abs(x) > INT_BOUND:
        raise CapacityError("integer growth during Smith normal form exceeds bound")
    return x


def _nearest(x: int, p: int) -> int:
    """Quotient leaving the remainder of least absolute value."""
    q, rem = divmod(x, p)
    return q + 1 if 2 * abs(rem) > abs(p) else q


def _snf(m: Matrix, ncols: int | None = None):
    """Return ``(U, D, V, Uinv, Vinv)`` with ``U M V = D``.

    The pivot is re-chosen as the entry of least absolute value after every
    sweep, which keeps the working matrix small; any intermediate value above
    ``INT_BOUND`` raises :class:`CapacityError`.
    """
    r = len(m)
    c = len(m[0]) if r else (ncols or 0)
    a = [[_guard(int(x)) for x in row] for row in m]
    u, ui = eye(r), eye(r)
    v, vi = eye(c), eye(c)

    def row_add(i, j, q):  # row_i += q * row_j
        if q == 0:
            return
        a[i] = [_guard(x + q * y) for x, y in zip(a[i], a[j])]
        u[i] = [_guard(x + q * y) for x, y in zip(u[i], u[j])]
        for row in ui:  # inverse picks up column_j -= q * column_i
            row[j] = _guard(row[j] - q * row[i])

    def col_add(i, j, q):  # col_i += q * col_j
        if q == 0:
            return
        for row in a:
            row[i] = _guard(row[i] + q * row[j])
        for row in v:
            row[i] = _guard(row[i] + q * row[j])
        vi[j] = [_guard(x - q * y) for x, y in zip(vi[j], vi[i])]

    def row_swap(i, j):
        if i != j:
            a[i], a[j] = a[j], a[i]
            u[i], u[j] = u[j], u[i]
            for row in ui:
                row[i], row[j] = row[j], row[i]

    def col_swap(i, j):
        if i != j:
            for row in a:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]
            vi[i], vi[j] = vi[j], vi[i]

    for t in range(min(r, c)):
        while True:
            best = None
            for i in range(t, r):
                for j in range(t, c):
                    x = abs(a[i][j])
                    if x and (best is None or x < best[0]):
                        best = (x, i, j)
            if best is None:
                break
            _, i, j = best
            row_swap(t, i)
            col_swap(t, j)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, r):
                if a[i][t]:
                    row_add(i, t, -_nearest(a[i][t], p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, c):
                if a[t][j]:
                    col_add(j, t, -_nearest(a[t][j], p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, r) for j in range(t + 1, c)
                        if a[i][j] % p), None)
            if bad is None:
                break
            row_add(t, bad[0], 1)
        if t < r and t < c and a[t][t] < 0:
            for row in a:
                row[t] = -row[t]
            for row in v:
                row[t] = -row[t]
            vi[t] = [-x for x in vi[t]]
    return u, a, v, ui, vi


def smith_normal_form(m: Matrix, ncols: int | None = None) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form ``U M V = D`` with unimodular ``U``, ``V``.

    Pivot: smallest nonzero absolute value, ties by lowest row then column.
    ``ncols`` gives the width of a matrix with zero rows.
    """
    u, d, v, _, _ = _snf(m, ncols)
    return u, d, v


def diagonal(d: Matrix) -> list[int]:
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


def integer_kernel(m: Matrix, ncols: int) -> Matrix:
    """Basis of ``{x in Z^ncols : M x = 0}`` as the columns of the result."""
    _, d, v, _, _ = _snf(m, ncols)
    rank = sum(1 for x in diagonal(d) if x)
    return [row[rank:] for row in v]


# ---------------------------------------------------------------------------
# groups and homomorphisms

@dataclass(frozen=True)
class FinAbGroup:
    moduli: tuple[int, ...] = ()

    def __post_init__(self):
        mods = tuple(int(d) for d in self.moduli)
        if any(d < 2 for d in mods):
            raise ValueError(f"moduli must be >= 2, got {mods}")
        object.__setattr__(self, "moduli", mods)

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @property
    def order(self) -> int:
        return prod(self.moduli)

    @property
    def exponent(self) -> int:
        e = 1
        for d in self.moduli:
            e = e * d // gcd(e, d)
        return e

    def is_canonical(self) -> bool:
        return all(b % a == 0 for a, b in zip(self.moduli, self.moduli[1:]))

    def zero(self) -> Elem:
        return (0,) * self.rank

    def gen(self, i: int) -> Elem:
        return tuple(int(j == i) for j in range(self.rank))

    def gens(self) -> list[Elem]:
        return [self.gen(i) for i in range(self.rank)]

    def reduce(self, x: Iterable[int]) -> Elem:
        x = tuple(x)
        if len(x) != self.rank:
            raise ValueError(f"element {x} has wrong length for {self.moduli}")
        return tuple(int(a) % d for a, d in zip(x, self.moduli))

    def contains(self, x: Sequence[int]) -> bool:
        return len(x) == self.rank and all(0 <= a < d for a, d in zip(x, self.moduli))

    def check(self, x: Sequence[int]) -> Elem:
        if not self.contains(x):
            raise ValueError(f"element {tuple(x)} out of range for {self.moduli}")
        return tuple(x)

    def add(self, x: Elem, y: Elem) -> Elem:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.moduli))

    def sub(self, x: Elem, y: Elem) -> Elem:
        return tuple((a - b) % d for a, b, d in zip(x, y, self.moduli))

    def neg(self, x: Elem) -> Elem:
        return tuple(-a % d for a, d in zip(x, self.moduli))

    def scale(self, n: int, x: Elem) -> Elem:
        return tuple(n * a % d for a, d in zip(x, self.moduli))

    def combo(self, coeffs: Sequence[int], elems: Sequence[Elem]) -> Elem:
        out = [0] * self.rank
        for c, e in zip(coeffs, elems):
            if c:
                for i, a in enumerate(e):
                    out[i] += c * a
        return self.reduce(out)

    def elem_order(self, x: Elem) -> int:
        n = 1
        for a, d in zip(x, self.moduli):
            o = d // gcd(a, d)
            n = n * o // gcd(n, o)
        return n

    def elements(self) -> Iterable[Elem]:
        return itertools.product(*(range(d) for d in self.moduli))

    def direct_sum(self, other: "FinAbGroup") -> "FinAbGroup":
        return FinAbGroup(self.moduli + other.moduli)

    def power(self, n: int) -> "FinAbGroup":
        return FinAbGroup(self.moduli * n)

    def __repr__(self):
        if not self.moduli:
            return "0"
        return " x ".join(f"Z{d}" for d in self.moduli)


TRIVIAL = FinAbGroup(())


@dataclass(frozen=True)
class AbHom:
    source: FinAbGroup
    target: FinAbGroup
    matrix: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        s, t = self.source, self.target
        rows = [list(r) for r in self.matrix]
        if len(rows) != t.rank or any(len(r) != s.rank for r in rows):
            raise ValueError(f"matrix shape mismatch for {s} -> {t}")
        for i, e in enumerate(t.moduli):
            for j, d in enumerate(s.moduli):
                rows[i][j] %= e
                if rows[i][j] * d % e:
                    raise ValueError(
                        f"ill-defined homomorphism {s} -> {t}: entry ({i},{j}) "
                        f"= {rows[i][j]} is not killed by {d} modulo {e}")
        object.__setattr__(self, "matrix", tuple(tuple(r) for r in rows))

    @classmethod
    def from_images(cls, source: FinAbGroup, target: FinAbGroup,
                    images: Sequence[Sequence[int]]) -> "AbHom":
        """Build from the images of the source generators."""
        cols = [target.reduce(x) for x in images]
        if len(cols) != source.rank:
            raise ValueError("need one image per source generator")
        return cls(source, target, tuple(tuple(c[i] for c in cols) for i in range(target.rank)))

    @classmethod
    def identity(cls, g: FinAbGroup) -> "AbHom":
        return cls(g, g, tuple(tuple(r) for r in eye(g.rank)))

    @classmethod
    def zero(cls, s: FinAbGroup, t: FinAbGroup) -> "AbHom":
        return cls(s, t, tuple((0,) * s.rank for _ in range(t.rank)))

    @classmethod
    def scalar(cls, g: FinAbGroup, n: int) -> "AbHom":
        return cls.from_images(g, g, [g.scale(n, x) for x in g.gens()])

    def __call__(self, x: Sequence[int]) -> Elem:
        return self.target.reduce(matvec(self.matrix, x))

    def column(self, j: int) -> Elem:
        return tuple(r[j] for r in self.matrix)

    def images(self) -> list[Elem]:
        return [self.column(j) for j in range(self.source.rank)]

    def compose(self, first: "AbHom") -> "AbHom":
        """``self ∘ first``."""
        if first.target != self.source:
            raise ValueError(f"cannot compose {first.source}->{first.target} "
                             f"with {self.source}->{self.target}")
        return AbHom.from_images(first.source, self.target,
                                 [self(c) for c in first.images()])

    def __matmul__(self, first: "AbHom") -> "AbHom":
        return self.compose(first)

    def __add__(self, other: "AbHom") -> "AbHom":
        self._same(other)
        return AbHom.from_images(self.source, self.target,
                                 [self.target.add(a, b) for a, b in zip(self.images(), other.images())])

    def __sub__(self, other: "AbHom") -> "AbHom":
        self._same(other)
        return AbHom.from_images(self.source, self.target,
                                 [self.target.sub(a, b) for a, b in zip(self.images(), other.images())])

    def __neg__(self) -> "AbHom":
        return AbHom.from_images(self.source, self.target, [self.target.neg(a) for a in self.images()])

    def _same(self, other):
        if (self.source, self.target) != (other.source, other.target):
            raise ValueError("homomorphisms have different source or target")

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.matrix for a in r)

    def __eq__(self, other):
        if not isinstance(other, AbHom):
            return NotImplemented
        return (self.source, self.target, self.matrix) == (other.source, other.target, other.matrix)

    def __hash__(self):
        return hash((self.source, self.target, self.matrix))


def direct_sum_hom(*homs: AbHom) -> AbHom:
    src = FinAbGroup(sum((h.source.moduli for h in homs), ()))
    tgt = FinAbGroup(sum((h.target.moduli for h in homs), ()))
    cols = []
    off = 0
    for h in homs:
        for c in h.images():
            col = [0] * tgt.rank
            col[off:off + len(c)] = c
            cols.append(col)
        off += h.target.rank
    return AbHom.from_images(src, tgt, cols)


# ---------------------------------------------------------------------------
# presentations and subgroups

@dataclass(frozen=True)
class Presentation:
    """``Z^n / (relations)`` in canonical form.

    ``project`` sends an integer vector in ``Z^n`` to coordinates of
    ``group``; ``lift[i]`` is a vector in ``Z^n`` mapping to the i-th
    canonical generator.
    """
    n: int
    group: FinAbGroup
    project_rows: tuple[tuple[int, ...], ...]
    lift: tuple[tuple[int, ...], ...]

    def project(self, v: Sequence[int]) -> Elem:
        return self.group.reduce(matvec(self.project_rows, v)) if self.group.rank else ()


def present(relations: Sequence[Sequence[int]], n: int) -> Presentation:
    """Present ``Z^n`` modulo the span of the given relation vectors."""
    rel_cols = [list(r) for r in relations]
    if any(len(r) != n for r in rel_cols):
        raise ValueError("relation of wrong length")
    m = transpose(rel_cols, n) if rel_cols else [[] for _ in range(n)]
    u, d, _, ui, _ = _snf(m, len(rel_cols))
    diag = diagonal(d) + [0] * max(0, n - min(n, len(rel_cols)))
    diag = diag[:n]
    if any(x == 0 for x in diag):
        raise ValueError("relations do not define a finite group")
    keep = [i for i, x in enumerate(diag) if x != 1]
    group = FinAbGroup(tuple(diag[i] for i in keep))
    proj = tuple(tuple(u[i]) for i in keep)
    lift = tuple(tuple(ui[r][i] for r in range(n)) for i in keep)
    return Presentation(n, group, proj, lift)


@dataclass(frozen=True)
class SubgroupEmbedding:
    ambient: FinAbGroup
    subgroup: FinAbGroup
    embedding: AbHom

    @property
    def order(self) -> int:
        return self.subgroup.order

    def elements(self) -> frozenset[Elem]:
        cached = self.__dict__.get("_elems")
        if cached is None:
            cached = frozenset(self.embedding(x) for x in self.subgroup.elements())
            object.__setattr__(self, "_elems", cached)
        return cached

    def __contains__(self, x) -> bool:
        return tuple(x) in self.elements()

    def is_trivial(self) -> bool:
        return self.subgroup.order == 1

    def is_everything(self) -> bool:
        return self.subgroup.order == self.ambient.order

    def generators(self) -> list[Elem]:
        return self.embedding.images()


def _relation_kernel(cols: Sequence[Sequence[int]], g: FinAbGroup) -> Matrix:
    """Basis (as columns, length len(cols)) of ``{x : sum x_j cols_j = 0 in g}``."""
    r = len(cols)
    # [C | E] y = 0, keep first r coordinates
    m = [[c[i] for c in cols] + [g.moduli[i] * (i == k) for k in range(g.rank)]
         for i in range(g.rank)]
    ker = integer_kernel(m, r + g.rank)
    return [row for row in ker[:r]]


def subgroup_generated(g: FinAbGroup, elems: Iterable[Sequence[int]]) -> SubgroupEmbedding:
    """Smallest subgroup containing ``elems``, presented canonically."""
    cols = [g.check(tuple(e)) for e in elems]
    r = len(cols)
    if r == 0:
        return SubgroupEmbedding(g, TRIVIAL, AbHom.zero(TRIVIAL, g))
    ker = _relation_kernel(cols, g)
    relations = transpose(ker, 0) if ker and ker[0] else []
    pres = present(relations, r)
    images = [g.combo(l, cols) for l in pres.lift]
    return SubgroupEmbedding(g, pres.group, AbHom.from_images(pres.group, g, images))


def _kernel(h: AbHom) -> SubgroupEmbedding:
    s, t = h.source, h.target
    # x with M x in E Z^m (source relations included automatically)
    m = [list(h.matrix[i]) + [t.moduli[i] * (i == k) for k in range(t.rank)]
         for i in range(t.rank)]
    kb = integer_kernel(m, s.rank + t.rank)
    kernel_gens = [s.reduce(row[j] for row in kb[:s.rank]) for j in range(len(kb[0]) if kb else 0)]
    return subgroup_generated(s, [k for k in kernel_gens if any(k)])


def subquotients(h: AbHom) -> tuple[SubgroupEmbedding, SubgroupEmbedding, AbHom]:
    """Kernel, image and cokernel projection of ``h``."""
    t = h.target
    image = subgroup_generated(t, [c for c in h.images() if any(c)])
    rels = [list(c) for c in h.images()] + [[t.moduli[i] * (i == k) for i in range(t.rank)]
                                            for k in range(t.rank)]
    pres = present(rels, t.rank)
    coker = AbHom.from_images(t, pres.group, [pres.project(x) for x in t.gens()])
    return _kernel(h), image, coker


def kernel(h: AbHom) -> SubgroupEmbedding:
    return _kernel(h)


def image(h: AbHom) -> SubgroupEmbedding:
    return subgroup_generated(h.target, [c for c in h.images() if any(c)])


def image_order(h: AbHom) -> int:
    """``|h(source)|``: the lattice spanned by ``[M | E]`` has index ``|target| / |image|``."""
    c = h.__dict__.get("_image_order")
    if c is None:
        t = h.target
        if t.rank == 0:
            c = 1
        else:
            m = [list(h.matrix[i]) + [t.moduli[i] * (i == k) for k in range(t.rank)]
                 for i in range(t.rank)]
            _, d, _, _, _ = _snf(m, h.source.rank + t.rank)
            index = 1
            for x in diagonal(d):
                index *= abs(x)
            c = t.order // index
        object.__setattr__(h, "_image_order", c)
    return c


def is_bijective(h: AbHom) -> tuple[bool, bool]:
    im = image_order(h)
    return im == h.source.order, im == h.target.order


def quotient(sub: SubgroupEmbedding) -> AbHom:
    """Projection ``ambient -> ambient / sub``."""
    return subquotients(sub.embedding)[2]


def canonicalize(g) -> tuple[FinAbGroup, AbHom, AbHom]:
    """Invariant-factor form of ``g`` plus isomorphisms ``to`` and ``back``.

    ``g`` may be a FinAbGroup or a list of moduli (entries 1 are dropped).
    Returns ``(canonical, to, back)`` with ``to: g -> canonical``.
    """
    mods = tuple(int(d) for d in (g.moduli if isinstance(g, FinAbGroup) else g))
    if any(d < 1 for d in mods):
        raise ValueError("moduli must be positive")
    src = FinAbGroup(tuple(d for d in mods if d != 1))
    pres = present([[src.moduli[i] * (i == k) for i in range(src.rank)] for k in range(src.rank)],
                   src.rank)
    to = AbHom.from_images(src, pres.group, [pres.project(x) for x in src.gens()])
    back = AbHom.from_images(pres.group, src, [src.reduce(l) for l in pres.lift])
    return pres.group, to, back


def cyclic_subgroups(g: FinAbGroup) -> dict[frozenset, Elem]:
    out: dict[frozenset, Elem] = {}
    for x in g.elements():
        s = frozenset(g.scale(k, x) for k in range(g.elem_order(x)))
        out.setdefault(s, x)
    return out


def enumerate_subgroups(g: FinAbGroup, cap: int | None = None) -> list[SubgroupEmbedding]:
    """All subgroups of ``g``, each once, ordered by size then content."""
    check_order(g.order, cap)
    cyc = cyclic_subgroups(g)
    seen: dict[frozenset, tuple[Elem, ...]] = {frozenset([g.zero()]): ()}
    frontier = list(seen.items())
    while frontier:
        nxt = []
        for s, gens in frontier:
            for c, x in cyc.items():
                if c <= s:
                    continue
                joined = frozenset(g.add(a, b) for a in s for b in c)
                if joined not in seen:
                    seen[joined] = gens + (x,)
                    nxt.append((joined, seen[joined]))
        frontier = nxt
    order = sorted(seen, key=lambda s: (len(s), sorted(s)))
    return [subgroup_generated(g, seen[s]) for s in order]


def iso_exists(a: FinAbGroup, b: FinAbGroup) -> bool:
    return canonicalize(a)[0] == canonicalize(b)[0]


def _solver(h: AbHom):
    """SNF data for solving ``h(x) = y``, cached on ``h``."""
    data = h.__dict__.get("_solver")
    if data is None:
        s, t = h.source, h.target
        m = [list(h.matrix[i]) + [t.moduli[i] * (i == k) for k in range(t.rank)]
             for i in range(t.rank)]
        n = s.rank + t.rank
        u, d, v, _, _ = _snf(m, n)
        data = (u, [d[i][i] if i < n else 0 for i in range(t.rank)], v, n)
        object.__setattr__(h, "_solver", data)
    return data


def preimage(h: AbHom, y: Sequence[int]) -> Elem | None:
    """Some ``x`` with ``h(x) = y``, or None when ``y`` is not in the image."""
    s, t = h.source, h.target
    y = t.check(tuple(y))
    u, diag, v, n = _solver(h)
    rhs = matvec(u, y)
    z = [0] * n
    for i, b in enumerate(rhs):
        p = diag[i] if i < len(diag) else 0
        if p == 0:
            if b != 0:
                return None
        elif b % p:
            return None
        else:
            z[i] = b // p
    x = matvec(v, z)[:s.rank]
    return s.reduce(x)


def coordinates(sub: SubgroupEmbedding, x: Sequence[int]) -> Elem:
    """Coordinates of an ambient element inside ``sub``; raises if absent."""
    y = preimage(sub.embedding, x)
    if y is None:
        raise ValueError(f"{tuple(x)} is not in the subgroup")
    return y
