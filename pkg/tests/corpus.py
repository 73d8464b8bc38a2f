"""Seeded test corpus shared by the acceptance and module tests."""
from __future__ import annotations

from functools import lru_cache

from moritakit.abelian import is_bijective
from moritakit.algebra import corner_context, matrix_ring
from moritakit.morita import identity_datum, random_data, ring_library

M2_CORNER = (1, 0, 0, 0)


@lru_cache(maxsize=None)
def library16():
    return tuple(r for r in ring_library() if r.order <= 16)


@lru_cache(maxsize=None)
def corner_m2z2():
    return corner_context(matrix_ring(2, 2), M2_CORNER)


@lru_cache(maxsize=None)
def identity_data():
    return tuple(identity_datum(r) for r in library16())


@lru_cache(maxsize=None)
def corner_data():
    return tuple(random_data(0, 60, "corner"))


@lru_cache(maxsize=None)
def context_data():
    """Random ``<,>_T`` with a random compatible ``<,>_S``."""
    return tuple(random_data(7, 100, "context"))


@lru_cache(maxsize=None)
def free_data():
    """Two independent random brackets; mostly not contexts."""
    return tuple(random_data(11, 100, "datum"))


@lru_cache(maxsize=None)
def corpus():
    return identity_data() + corner_data() + context_data() + (corner_m2z2(),)


@lru_cache(maxsize=None)
def contexts():
    return tuple(d for d in corpus() + free_data() if d.is_context)


@lru_cache(maxsize=None)
def injective_corpus():
    return tuple(d for d in corpus()
                 if is_bijective(d.mT.connecting_map)[0] and is_bijective(d.mS.connecting_map)[0])
