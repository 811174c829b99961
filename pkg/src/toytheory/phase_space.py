"""Symplectic phase space: coordinate conventions, Poisson bracket, isotropy.

Coordinates interleave position and momentum: for system i (0-indexed),
coordinate 2i is q_i and coordinate 2i+1 is p_i.  Composition of systems is
concatenation of coordinate pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from . import algebra
from .algebra import (
    FieldT, GF, PrimeField, QQ, Subspace, VectorT,
    dot, rref, subspace_intersection, vector,
)
from .config import enumeration_cap
from .errors import DimensionMismatch, EnumerationCapExceeded


@dataclass(frozen=True)
class PhaseSpace:
    field: FieldT
    n_systems: int

    def __post_init__(self):
        if self.n_systems < 1:
            raise DimensionMismatch("need at least one system")

    @property
    def ambient_dim(self) -> int:
        return 2 * self.n_systems

    @property
    def d(self) -> Optional[int]:
        return self.field.p if isinstance(self.field, PrimeField) else None

    def q_index(self, system: int) -> int:
        return 2 * system

    def p_index(self, system: int) -> int:
        return 2 * system + 1

    def system_coords(self, system: int) -> tuple[int, int]:
        return (2 * system, 2 * system + 1)

    def __repr__(self):
        return f"PhaseSpace({self.field}, n={self.n_systems})"


def discrete_space(d: int, n_systems: int) -> PhaseSpace:
    return PhaseSpace(GF(d), n_systems)


def rational_space(n_systems: int) -> PhaseSpace:
    return PhaseSpace(QQ, n_systems)


def compose(s1: PhaseSpace, s2: PhaseSpace) -> PhaseSpace:
    if s1.field != s2.field:
        raise DimensionMismatch("cannot compose spaces over different fields")
    return PhaseSpace(s1.field, s1.n_systems + s2.n_systems)


@dataclass(frozen=True)
class Observable:
    """A quadrature observable: a coefficient vector over phase space."""

    space: PhaseSpace
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.space.ambient_dim:
            raise DimensionMismatch(
                f"observable has {len(self.coeffs)} coefficients in a "
                f"{self.space.ambient_dim}-dimensional phase space")

    @property
    def is_zero(self) -> bool:
        return all(c == self.space.field.zero for c in self.coeffs)

    def value_on(self, ontic: VectorT):
        return dot(self.space.field, self.coeffs, ontic)


def observable(space: PhaseSpace, coeffs: Iterable) -> Observable:
    return Observable(space, vector(space.field, coeffs))


def q_observable(space: PhaseSpace, system: int) -> Observable:
    c = [space.field.zero] * space.ambient_dim
    c[space.q_index(system)] = space.field.one
    return Observable(space, tuple(c))


def p_observable(space: PhaseSpace, system: int) -> Observable:
    c = [space.field.zero] * space.ambient_dim
    c[space.p_index(system)] = space.field.one
    return Observable(space, tuple(c))


def bracket_vectors(field: FieldT, f: VectorT, g: VectorT):
    """[f,g] = sum_i f_{2i} g_{2i+1} - f_{2i+1} g_{2i} (0-indexed coords)."""
    if len(f) != len(g) or len(f) % 2 != 0:
        raise DimensionMismatch("Poisson bracket needs equal even-length vectors")
    acc = field.zero
    for i in range(0, len(f), 2):
        acc = field.add(acc, field.sub(field.mul(f[i], g[i + 1]),
                                       field.mul(f[i + 1], g[i])))
    return acc


def poisson_bracket(f: Observable, g: Observable):
    if f.space != g.space:
        raise DimensionMismatch("observables live on different phase spaces")
    return bracket_vectors(f.space.field, f.coeffs, g.coeffs)


def j_matrix(space: PhaseSpace) -> tuple:
    """The block matrix J with [f,g] = f^T J g: blocks [[0,1],[-1,0]]."""
    field = space.field
    n = space.ambient_dim
    rows = []
    for i in range(n):
        row = [field.zero] * n
        if i % 2 == 0:
            row[i + 1] = field.one
        else:
            row[i - 1] = field.neg(field.one)
        rows.append(tuple(row))
    return tuple(rows)


def symplectic_dual(field: FieldT, f: VectorT) -> VectorT:
    """J^T f, so that [f,g] = (J^T f) . g = f^T J g."""
    out = list(f)
    for i in range(0, len(f), 2):
        out[i] = field.neg(f[i + 1])
        out[i + 1] = f[i]
    return tuple(out)


def is_isotropic(s: Subspace) -> bool:
    """True iff the bracket vanishes on all basis pairs (bilinearity)."""
    if s.ambient_dim % 2 != 0:
        raise DimensionMismatch("isotropy needs an even-dimensional space")
    field = s.field
    basis = s.basis
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if bracket_vectors(field, basis[i], basis[j]) != field.zero:
                return False
    return True


def commutant_within(v: Subspace, v_pi: Subspace) -> Subspace:
    """{f in V : [f, g] = 0 for all g in V_pi}, computed as V ∩ (J V_pi)^⊥."""
    if v.ambient_dim != v_pi.ambient_dim or v.field != v_pi.field:
        raise DimensionMismatch("subspaces live in different phase spaces")
    field = v.field
    dual_rows = [symplectic_dual(field, g) for g in v_pi.basis]
    dual = rref(field, v.ambient_dim, dual_rows)
    return subspace_intersection(v, algebra.orthogonal_complement(dual))


def embed_vector(space: PhaseSpace, system_offset: int, v: VectorT) -> VectorT:
    """Place a vector of a smaller space at the given system offset."""
    out = [space.field.zero] * space.ambient_dim
    base = 2 * system_offset
    if base + len(v) > space.ambient_dim:
        raise DimensionMismatch("embedded vector does not fit")
    for i, x in enumerate(v):
        out[base + i] = x
    return tuple(out)


def restrict_vector(v: VectorT, keep_systems: Iterable[int]) -> VectorT:
    out = []
    for s in keep_systems:
        out.extend(v[2 * s:2 * s + 2])
    return tuple(out)


def supported_systems(space: PhaseSpace, v: VectorT) -> set[int]:
    zero = space.field.zero
    return {i for i in range(space.n_systems)
            if v[2 * i] != zero or v[2 * i + 1] != zero}


def all_isotropic_subspaces(space: PhaseSpace, max_dim: int | None = None,
                            cap: int | None = None) -> list[Subspace]:
    """Every isotropic subspace, grouped breadth-first by dimension.

    Desk-scale: intended for d^(2n) within the enumeration cap.
    """
    field = space.field
    if not isinstance(field, PrimeField):
        raise EnumerationCapExceeded("cannot enumerate rational subspaces")
    n = space.ambient_dim
    if field.p ** n > enumeration_cap(cap):
        raise EnumerationCapExceeded(
            f"{field.p}^{n} ontic states exceed the enumeration cap")
    if max_dim is None:
        max_dim = space.n_systems
    if field.p == 2:
        from . import _gf2
        result = []
        for per_dim in _gf2.isotropic_bases(n, max_dim):
            subs = [rref(field, n, [_gf2.int_to_vector(b, n) for b in basis])
                    for basis in per_dim]
            result.extend(sorted(subs, key=lambda s: s.basis))
        return result
    all_vectors = _all_vectors(field, n)
    result = [algebra.zero_subspace(field, n)]
    frontier = {(): algebra.zero_subspace(field, n)}
    for _ in range(max_dim):
        next_frontier = {}
        for sub in frontier.values():
            for v in all_vectors:
                if all(x == field.zero for x in v):
                    continue
                if sub.contains(v):
                    continue
                if any(bracket_vectors(field, v, b) != field.zero for b in sub.basis):
                    continue
                grown = rref(field, n, list(sub.basis) + [v])
                next_frontier.setdefault(grown.basis, grown)
        frontier = next_frontier
        result.extend(sorted(frontier.values(), key=lambda s: s.basis))
    return result


def _all_vectors(field: PrimeField, n: int) -> list[VectorT]:
    vecs = [()]
    for _ in range(n):
        vecs = [v + (c,) for v in vecs for c in field.elements()]
    return vecs
