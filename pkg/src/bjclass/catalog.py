"""The built-in list of algebras the verification suites run over."""

from __future__ import annotations

from functools import lru_cache

from .blockalg import Algebra, Block
from .scalars import Kind

MAX_REAL_DIM = 12

# blocks allowed in the real catalog, in canonical order
REAL_BLOCKS = (Block(1, Kind.R), Block(1, Kind.C), Block(1, Kind.H),
               Block(2, Kind.R), Block(2, Kind.C), Block(3, Kind.R))

EXTRA = ("field=R; M2(H)", "field=R; R + M2(H)", "field=R; H + M2(H)",
         "field=C; M3(C)", "field=C; C + M3(C)")


def _multisets(blocks, budget: int):
    """All multisets of `blocks` (non-decreasing index) with total real dimension ≤ budget."""
    out = []

    def rec(start, chosen, left):
        if chosen:
            out.append(tuple(chosen))
        for i in range(start, len(blocks)):
            if blocks[i].real_dim <= left:
                rec(i, chosen + [blocks[i]], left - blocks[i].real_dim)

    rec(0, [], budget)
    return out


@lru_cache(maxsize=None)
def real_algebras(max_dim: int = MAX_REAL_DIM) -> tuple:
    algs = [Algebra(Kind.R, m).canonical() for m in _multisets(REAL_BLOCKS, max_dim)]
    return tuple(sorted(algs, key=lambda a: (a.real_dim, str(a))))


@lru_cache(maxsize=None)
def complex_algebras(max_dim: int = MAX_REAL_DIM) -> tuple:
    blocks = (Block(1, Kind.C), Block(2, Kind.C), Block(3, Kind.C))
    algs = [Algebra(Kind.C, m).canonical() for m in _multisets(blocks, max_dim)]
    return tuple(sorted(algs, key=lambda a: (a.real_dim, str(a))))


@lru_cache(maxsize=None)
def extra_algebras() -> tuple:
    return tuple(Algebra.parse(s) for s in EXTRA)


@lru_cache(maxsize=None)
def catalog(max_dim: int = MAX_REAL_DIM, extras: bool = True) -> tuple:
    """Every algebra over R or C of real dimension ≤ max_dim, plus a few larger composites."""
    out = real_algebras(max_dim) + complex_algebras(max_dim)
    if extras:
        out = out + extra_algebras()
    return out


def pseudo_abelian(algebras=None) -> tuple:
    return tuple(a for a in (algebras or catalog()) if a.is_pseudo_abelian)
