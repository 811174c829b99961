"""Bit-packed linear algebra over Z_2^m for desk-scale exhaustive searches.

Vectors are ints with bit i = coordinate i (coordinate 2i is q of system i,
coordinate 2i+1 its p, matching the package-wide convention).  Sets of
vectors are masks: bit v of the mask marks membership of vector v.  Only used
for d = 2; the generic exact layer handles everything else.
"""

from __future__ import annotations

import functools


def dot2(a: int, b: int) -> int:
    return (a & b).bit_count() & 1


def pairswap(v: int, m: int) -> int:
    """Swap q/p bits within each coordinate pair; [f,g] = dot2(f, pairswap(g))."""
    even = v & _even_mask(m)
    odd = v & _odd_mask(m)
    return (even << 1) | (odd >> 1)


@functools.lru_cache(maxsize=None)
def _even_mask(m: int) -> int:
    mask = 0
    for i in range(0, m, 2):
        mask |= 1 << i
    return mask


@functools.lru_cache(maxsize=None)
def _odd_mask(m: int) -> int:
    return _even_mask(m) << 1


def bracket2(f: int, g: int, m: int) -> int:
    return dot2(f, pairswap(g, m))


def rref_ints(vecs) -> tuple[int, ...]:
    """Canonical fully reduced basis; pivot = lowest set bit, rows sorted."""
    basis: list[int] = []
    for v in vecs:
        for b in basis:
            low = b & -b
            if v & low:
                v ^= b
        if v:
            basis.append(v)
            # keep fully reduced
            low = v & -v
            basis = [b ^ v if (b != v and b & low) else b for b in basis]
    return tuple(sorted(basis, key=lambda b: b & -b))


def span_elements(basis) -> list[int]:
    elems = [0]
    for b in basis:
        elems += [e ^ b for e in elems]
    return elems


def span_mask(basis) -> int:
    mask = 1
    for b in basis:
        low = 0
        for e in _mask_bits(mask):
            low |= 1 << (e ^ b)
        mask |= low
    return mask


def _mask_bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_elements(mask: int) -> list[int]:
    return _mask_bits(mask)


@functools.lru_cache(maxsize=None)
def ortho_table(m: int) -> tuple[int, ...]:
    """ORTHO[v] = mask of all x in Z_2^m with dot2(x, v) = 0."""
    size = 1 << m
    table = []
    for v in range(size):
        mask = 0
        for x in range(size):
            if not dot2(x, v):
                mask |= 1 << x
        table.append(mask)
    return tuple(table)


def complement_mask(basis, m: int) -> int:
    """Mask of the standard orthogonal complement of span(basis)."""
    table = ortho_table(m)
    mask = (1 << (1 << m)) - 1
    for b in basis:
        mask &= table[b]
    return mask


def coset_mask(elems: list[int], shift: int) -> int:
    mask = 0
    for e in elems:
        mask |= 1 << (e ^ shift)
    return mask


@functools.lru_cache(maxsize=None)
def isotropic_bases(m: int, max_dim: int | None = None) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """All isotropic subspaces of Z_2^m grouped by dimension.

    Returns a tuple indexed by dimension; entry k is a tuple of canonical
    bases (each a tuple of ints).  BFS with dedup on the span mask.
    """
    if max_dim is None:
        max_dim = m // 2
    by_dim: list[tuple[tuple[int, ...], ...]] = [((),)]
    frontier = {1: ()}  # span mask -> basis
    for _ in range(max_dim):
        nxt: dict[int, tuple[int, ...]] = {}
        for mask, basis in frontier.items():
            # candidate extensions: commute with the basis, outside the span
            comm = (1 << (1 << m)) - 1
            table = ortho_table(m)
            for b in basis:
                comm &= table[pairswap(b, m)]
            for v in _mask_bits(comm):
                if v == 0 or (mask >> v) & 1:
                    continue
                grown_basis = rref_ints(basis + (v,))
                grown_mask = span_mask(grown_basis)
                if grown_mask not in nxt:
                    nxt[grown_mask] = grown_basis
        frontier = nxt
        by_dim.append(tuple(sorted(frontier.values())))
    return tuple(by_dim)


def int_to_vector(v: int, m: int) -> tuple[int, ...]:
    return tuple((v >> i) & 1 for i in range(m))


def vector_to_int(vec) -> int:
    out = 0
    for i, x in enumerate(vec):
        if int(x) % 2:
            out |= 1 << i
    return out
