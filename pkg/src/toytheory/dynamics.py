"""Reversible dynamics: symplectic transformations and what they can't do.

Covers the affine symplectic transforms (U, a) with U^T J U = J acting as
o -> U(o + a) on ontic states and (V, v) -> ((U^T)^-1 V, U(v + a)) on
epistemic states, a small gate library, the coherent-copy constructions that
realize measurements as physical interactions, symplectic completion of an
arbitrary first column, and the classification + exhaustive search showing
which outcome-conditioned preparations are realizable.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Optional

from .algebra import (
    FieldT, PrimeField, Subspace, VectorT,
    identity_matrix, mat_inverse, mat_mul, mat_transpose, mat_vec, matrix,
    vec_add, vector, zero_vector,
)
from .config import DEFAULT_GROUP_CAP
from .errors import (
    DimensionMismatch, NotSymplectic, SearchSpaceExceeded,
)
from .phase_space import (
    Observable, PhaseSpace, bracket_vectors, compose as compose_spaces,
    symplectic_dual,
)
from .states import EpistemicState, make_state, marginal, states_equal, tensor


def is_symplectic_matrix(field: FieldT, m: tuple, ambient_dim: int) -> bool:
    if len(m) != ambient_dim or any(len(r) != ambient_dim for r in m):
        return False
    cols = mat_transpose(m)
    for i in range(ambient_dim):
        for j in range(i + 1, ambient_dim):
            want = field.one if (j == i + 1 and i % 2 == 0) else field.zero
            if bracket_vectors(field, cols[i], cols[j]) != want:
                return False
    return True


@dataclass(frozen=True)
class SymplecticTransform:
    space: PhaseSpace
    matrix: tuple
    shift: tuple
    _ut_inv: tuple = dc_field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.space.ambient_dim
        if len(self.shift) != n:
            raise DimensionMismatch("shift does not match the phase space")
        if not is_symplectic_matrix(self.space.field, self.matrix, n):
            raise NotSymplectic("matrix fails U^T J U = J")
        object.__setattr__(
            self, "_ut_inv",
            mat_inverse(self.space.field, mat_transpose(self.matrix)))

    def __repr__(self):
        return f"SymplecticTransform(n={self.space.n_systems}, U={[list(r) for r in self.matrix]}, a={list(self.shift)})"


def make_transform(space: PhaseSpace, m: Iterable, shift: Iterable | None = None) -> SymplecticTransform:
    mat = matrix(space.field, m)
    if shift is None:
        sh = zero_vector(space.field, space.ambient_dim)
    else:
        sh = vector(space.field, shift)
    return SymplecticTransform(space, mat, sh)


def identity_transform(space: PhaseSpace) -> SymplecticTransform:
    return make_transform(space, identity_matrix(space.field, space.ambient_dim))


def compose_transforms(t1: SymplecticTransform, t2: SymplecticTransform) -> SymplecticTransform:
    """t1 after t2: o -> t1(t2(o))."""
    if t1.space != t2.space:
        raise DimensionMismatch("transforms act on different spaces")
    field = t1.space.field
    u = mat_mul(field, t1.matrix, t2.matrix)
    u2_inv = mat_inverse(field, t2.matrix)
    a = vec_add(field, t2.shift, mat_vec(field, u2_inv, t1.shift))
    return SymplecticTransform(t1.space, u, a)


def invert_transform(t: SymplecticTransform) -> SymplecticTransform:
    field = t.space.field
    u_inv = mat_inverse(field, t.matrix)
    a_inv = tuple(field.neg(x) for x in mat_vec(field, t.matrix, t.shift))
    return SymplecticTransform(t.space, u_inv, a_inv)


def apply_to_ontic(t: SymplecticTransform, o: Iterable) -> VectorT:
    field = t.space.field
    ov = vector(field, o)
    return mat_vec(field, t.matrix, vec_add(field, ov, t.shift))


def apply_to_state(t: SymplecticTransform, s: EpistemicState) -> EpistemicState:
    if t.space != s.space:
        raise DimensionMismatch("transform and state live on different spaces")
    field = t.space.field
    gens = [mat_vec(field, t._ut_inv, g) for g in s.known.basis]
    val = mat_vec(field, t.matrix, vec_add(field, s.valuation, t.shift))
    return make_state(s.space, gens, val)


# ---------------------------------------------------------------------------
# gate library
# ---------------------------------------------------------------------------

def qp_swap_gate(space: PhaseSpace, system: int = 0) -> SymplecticTransform:
    """Exchange q and p of one system; the toy analogue of Hadamard.

    Only symplectic when -1 = 1, i.e. at d = 2 (the matrix [[0,1],[1,0]] has
    U^T J U = -J otherwise); construction rejects other fields.
    """
    field = space.field
    n = space.ambient_dim
    rows = [list(r) for r in identity_matrix(field, n)]
    q, p = space.system_coords(system)
    rows[q], rows[p] = rows[p], rows[q]
    return make_transform(space, rows)


def cnot_gate(space: PhaseSpace, control: int, target: int) -> SymplecticTransform:
    """q_target += q_control, p_control -= p_target; others fixed."""
    if control == target:
        raise DimensionMismatch("control and target must differ")
    field = space.field
    n = space.ambient_dim
    rows = [list(r) for r in identity_matrix(field, n)]
    qc, pc = space.system_coords(control)
    qt, pt = space.system_coords(target)
    rows[qt][qc] = field.one
    rows[pc][pt] = field.neg(field.one)
    return make_transform(space, rows)


def swap_gate(space: PhaseSpace, i: int, j: int) -> SymplecticTransform:
    field = space.field
    n = space.ambient_dim
    rows = [list(r) for r in identity_matrix(field, n)]
    qi, pi = space.system_coords(i)
    qj, pj = space.system_coords(j)
    rows[qi], rows[qj] = rows[qj], rows[qi]
    rows[pi], rows[pj] = rows[pj], rows[pi]
    return make_transform(space, rows)


def shift_gate(space: PhaseSpace, shift: Iterable) -> SymplecticTransform:
    return make_transform(space, identity_matrix(space.field, space.ambient_dim), shift)


def gate_library(space: PhaseSpace, name: str) -> SymplecticTransform:
    """Build a gate from a compact spec string (0-indexed systems).

    Accepted: ``identity``, ``qp_swap[:system]``, ``cnot:control,target``,
    ``swap:i,j``, ``shift:c1,...,c2n``.
    """
    head, _, args = name.partition(":")
    head = head.strip()
    if head == "identity":
        return identity_transform(space)
    if head == "qp_swap":
        system = int(args) if args else 0
        return qp_swap_gate(space, system)
    if head == "cnot":
        c, t = (int(x) for x in args.split(","))
        return cnot_gate(space, c, t)
    if head == "swap":
        i, j = (int(x) for x in args.split(","))
        return swap_gate(space, i, j)
    if head == "shift":
        return shift_gate(space, [x.strip() for x in args.split(",")])
    raise ValueError(f"unknown gate {name!r}")


# ---------------------------------------------------------------------------
# coherent copies (measurement as a physical interaction)
# ---------------------------------------------------------------------------

#: Position copy on (q_S, p_S, q_M, p_M): correlates the memory position
#: with the information position; equals cnot(control=0, target=1).
_POSITION_COPY_ROWS = ((1, 0, 0, 0), (0, 1, 0, -1), (1, 0, 1, 0), (0, 0, 0, 1))


def position_copy_transform(space: PhaseSpace) -> SymplecticTransform:
    """The 2-system copy of position: information system 0, memory system 1.

    After application, q_S - q_M is known with value minus the initial
    memory offset (0 for a memory prepared at q_M = 0).
    """
    if space.n_systems != 2:
        raise DimensionMismatch("position copy needs exactly 2 systems")
    return make_transform(space, _POSITION_COPY_ROWS)


def complete_symplectic(field: FieldT, w: Iterable) -> tuple:
    """A symplectic matrix whose first column is w (w nonzero).

    Construction: truncated copies of w starting at each nonzero coordinate
    pair all commute; each is paired with a conjugate vector of symplectic
    product 1 built from one entry of the pair below and one of its own,
    preferring the momentum entry when it is nonzero.  Zero pairs keep their
    standard basis vectors.  Deterministic.
    """
    w = tuple(field.coerce(x) for x in w)
    n = len(w)
    if n % 2 != 0:
        raise DimensionMismatch("phase-space vectors have even length")
    if all(x == field.zero for x in w):
        raise DimensionMismatch("cannot complete the zero vector")
    pairs = [i for i in range(n // 2)
             if w[2 * i] != field.zero or w[2 * i + 1] != field.zero]
    cols: list[VectorT] = []
    for k, i in enumerate(pairs):
        trunc = [field.zero] * (2 * i) + list(w[2 * i:])
        d = [field.zero] * n
        if w[2 * i + 1] != field.zero:
            d[2 * i] = field.neg(field.inv(w[2 * i + 1]))
        else:
            d[2 * i + 1] = field.inv(w[2 * i])
        if k > 0:
            j = pairs[k - 1]
            if w[2 * j + 1] != field.zero:
                d[2 * j] = field.inv(w[2 * j + 1])
            else:
                d[2 * j + 1] = field.neg(field.inv(w[2 * j]))
        cols.append(tuple(trunc))
        cols.append(tuple(d))
    nonzero = set(pairs)
    for i in range(n // 2):
        if i not in nonzero:
            e_q = [field.zero] * n
            e_q[2 * i] = field.one
            e_p = [field.zero] * n
            e_p[2 * i + 1] = field.one
            cols.append(tuple(e_q))
            cols.append(tuple(e_p))
    return mat_transpose(tuple(cols))


def _block_diag(field: FieldT, a: tuple, b: tuple) -> tuple:
    na, nb = len(a), len(b)
    rows = []
    for r in a:
        rows.append(tuple(r) + zero_vector(field, nb))
    for r in b:
        rows.append(zero_vector(field, na) + tuple(r))
    return tuple(rows)


def observable_copy_transform(f: Observable, v: Observable) -> SymplecticTransform:
    """Correlate observable v of a one-system memory with observable f of the
    information systems.  Acts on memory ⊕ information (memory first).

    Built as the position copy conjugated by basis changes that carry f to
    the first information position and v to the memory position; applied to
    (memory with v-value 0) ⊗ (any information state), the observable
    (v on memory, -f on information) is known with value 0 afterwards.
    """
    if f.is_zero or v.is_zero:
        raise DimensionMismatch("copy needs nonzero observables")
    if v.space.n_systems != 1:
        raise DimensionMismatch("memory must be a single system")
    field = f.space.field
    if field != v.space.field:
        raise DimensionMismatch("memory and information fields differ")
    info_dim = f.space.ambient_dim
    total = compose_spaces(v.space, f.space)

    m_f = complete_symplectic(field, f.coeffs)
    s_m = mat_inverse(field, mat_transpose(m_f))        # (S^M)^T f = q_1
    m_v = complete_symplectic(field, v.coeffs)
    t_mem = mat_inverse(field, mat_transpose(m_v))      # T^T v = q_mem

    ident_mem = identity_matrix(field, 2)
    ident_info = identity_matrix(field, info_dim)

    # position copy on (memory, info system 1), identity on the rest
    n = total.ambient_dim
    pos = [list(r) for r in identity_matrix(field, n)]
    pos[0][2] = field.one                # q_M += q_1
    pos[3][1] = field.neg(field.one)     # p_1 -= p_M
    pos = tuple(tuple(r) for r in pos)

    first = _block_diag(field, mat_inverse(field, t_mem), ident_info)
    second = _block_diag(field, ident_mem, mat_inverse(field, s_m))
    fourth = _block_diag(field, ident_mem, s_m)
    fifth = _block_diag(field, t_mem, ident_info)

    u = mat_mul(field, fourth, mat_mul(field, pos, mat_mul(field, second, first)))
    u = mat_mul(field, fifth, u)
    return SymplecticTransform(total, u, zero_vector(field, n))


# ---------------------------------------------------------------------------
# symplectic group enumeration and sampling
# ---------------------------------------------------------------------------

def transvection(field: FieldT, v: VectorT, c=None) -> tuple:
    """T(x) = x + c[x,v]v, symplectic for any nonzero v and scalar c."""
    if c is None:
        c = field.one
    n = len(v)
    dual = symplectic_dual(field, v)
    rows = []
    for i in range(n):
        row = list(zero_vector(field, n))
        row[i] = field.one
        for j in range(n):
            row[j] = field.add(row[j], field.mul(field.mul(c, v[i]), dual[j]))
        rows.append(tuple(row))
    return tuple(rows)


def sp_order(n_systems: int, p: int) -> int:
    order = p ** (n_systems * n_systems)
    for i in range(1, n_systems + 1):
        order *= p ** (2 * i) - 1
    return order


@functools.lru_cache(maxsize=8)
def symplectic_group(field: FieldT, n_systems: int,
                     cap: int = DEFAULT_GROUP_CAP) -> tuple:
    """All of Sp(2n, p) by transvection closure (desk-scale orders only)."""
    if not isinstance(field, PrimeField):
        raise SearchSpaceExceeded("cannot enumerate the rational symplectic group")
    order = sp_order(n_systems, field.p)
    if order > cap:
        raise SearchSpaceExceeded(
            f"|Sp({2*n_systems},{field.p})| = {order} exceeds the cap {cap}; "
            "pass a larger cap to opt in to a long enumeration")
    n = 2 * n_systems
    from .phase_space import _all_vectors
    gens = []
    for v in _all_vectors(field, n):
        if all(x == field.zero for x in v):
            continue
        for c in range(1, field.p):
            gens.append(transvection(field, v, field.coerce(c)))
    ident = identity_matrix(field, n)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                prod = mat_mul(field, g, m)
                if prod not in seen:
                    seen.add(prod)
                    nxt.append(prod)
        frontier = nxt
    assert len(seen) == order, f"group closure found {len(seen)} != {order}"
    return tuple(sorted(seen))


def random_symplectic(space: PhaseSpace, rng, n_factors: int = 12,
                      with_shift: bool = True) -> SymplecticTransform:
    """Random product of symplectic transvections, optionally with a shift."""
    field = space.field
    n = space.ambient_dim
    u = identity_matrix(field, n)
    if not isinstance(field, PrimeField):
        raise SearchSpaceExceeded("random sampling is for discrete fields")
    for _ in range(n_factors):
        v = tuple(field.coerce(rng.randrange(field.p)) for _ in range(n))
        if all(x == field.zero for x in v):
            continue
        c = field.coerce(rng.randrange(1, field.p))
        u = mat_mul(field, transvection(field, v, c), u)
    shift = tuple(field.coerce(rng.randrange(field.p)) for _ in range(n)) \
        if with_shift else zero_vector(field, n)
    return SymplecticTransform(space, u, shift)


# ---------------------------------------------------------------------------
# conditional preparation: classification and search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConditionalPrepSpec:
    """A measure-then-prepare scenario: a family of source states sharing the
    known set V_S whose valuations partition the source ontic space, the
    target's initial state, and (optionally) the marginals one wishes to
    prepare conditioned on each source outcome."""

    source_space: PhaseSpace
    source_known: Subspace
    source_valuations: tuple
    target_initial: EpistemicState
    desired_targets: tuple = ()

    def __post_init__(self):
        field = self.source_space.field
        if not isinstance(field, PrimeField):
            raise DimensionMismatch("conditional-prep scenarios are discrete")
        k = field.p ** self.source_known.dim
        shifts = set()
        from .algebra import orthogonal_complement, reduce_mod_subspace
        comp = orthogonal_complement(self.source_known)
        for val in self.source_valuations:
            shifts.add(reduce_mod_subspace(comp, val))
        if len(self.source_valuations) != k or len(shifts) != k:
            raise ValueError(
                "source valuations must partition the source ontic space "
                f"({k} distinct outcomes required)")

    def source_states(self) -> list[EpistemicState]:
        return [make_state(self.source_space, self.source_known.basis, v)
                for v in self.source_valuations]


@dataclass(frozen=True)
class MarginalClassification:
    classes: tuple          # tuple of tuples of source indices
    class_sizes: tuple
    pairwise_orthogonal: bool
    marginals: tuple        # one representative marginal per class


def _supports_disjoint(s1: EpistemicState, s2: EpistemicState) -> bool:
    from .algebra import coset_intersection
    return coset_intersection(s1.support_coset(), s2.support_coset()) is None


def classify_conditional_marginals(spec: ConditionalPrepSpec,
                                   t: SymplecticTransform,
                                   traced: Iterable[int]) -> MarginalClassification:
    """Group the post-transform marginals by source outcome.

    For each source valuation, the joint (source ⊗ target [⊗ ancilla]) state
    is pushed through t, the ``traced`` systems are discarded, and identical
    marginals are grouped.  Ancilla systems implied by t's space are
    initialized with known position 0.
    """
    total_systems = t.space.n_systems
    base_systems = spec.source_space.n_systems + spec.target_initial.space.n_systems
    if total_systems < base_systems:
        raise DimensionMismatch("transform too small for source plus target")
    traced = sorted(set(traced))
    keep = [i for i in range(total_systems) if i not in traced]
    if not keep or any(i < 0 or i >= total_systems for i in traced):
        raise ValueError("invalid traced-system set")
    ancilla = total_systems - base_systems
    marginals = []
    for src in spec.source_states():
        joint = tensor(src, spec.target_initial)
        for _ in range(ancilla):
            joint = tensor(joint, _pointer_state(t.space.field))
        final = apply_to_state(t, joint)
        marginals.append(marginal(final, keep))
    groups: dict = {}
    for idx, m in enumerate(marginals):
        groups.setdefault(m, []).append(idx)
    classes = tuple(tuple(v) for v in groups.values())
    reps = tuple(groups.keys())
    orthogonal = True
    for a, b in itertools.combinations(reps, 2):
        if not _supports_disjoint(a, b):
            orthogonal = False
    return MarginalClassification(
        classes=classes,
        class_sizes=tuple(len(c) for c in classes),
        pairwise_orthogonal=orthogonal,
        marginals=reps,
    )


def _pointer_state(field: FieldT) -> EpistemicState:
    space = PhaseSpace(field, 1)
    return make_state(space, [(field.one, field.zero)],
                      zero_vector(field, 2))


@dataclass(frozen=True)
class ConditionalSearchResult:
    transform: Optional[SymplecticTransform]
    searched: int
    exhaustive: bool


def find_conditional_transform(spec: ConditionalPrepSpec,
                               ancilla_systems: int = 0,
                               exhaustive: bool = False,
                               group_cap: int = DEFAULT_GROUP_CAP,
                               rng=None,
                               samples: int = 20000) -> ConditionalSearchResult:
    """Search all (U, a) for a transform realizing every desired marginal.

    Exhaustive mode enumerates the full affine symplectic group on
    source ⊕ target ⊕ ancilla (cap-guarded: Sp(4,2)x16 is instant, Sp(6,2)
    needs an explicit larger ``group_cap``); otherwise draws ``samples``
    random transforms.  The expected outcome for non-orthogonal desired
    targets is exhaustion without a hit.
    """
    field = spec.source_space.field
    if not spec.desired_targets:
        raise ValueError("spec has no desired targets to realize")
    n_total = (spec.source_space.n_systems
               + spec.target_initial.space.n_systems + ancilla_systems)
    space = PhaseSpace(field, n_total)
    target_systems = [spec.source_space.n_systems + i
                      for i in range(spec.target_initial.space.n_systems)]
    traced = [i for i in range(n_total) if i not in target_systems]

    source_states = spec.source_states()
    desired = spec.desired_targets
    if len(desired) != len(source_states):
        raise ValueError("need one desired target per source outcome")

    from .phase_space import _all_vectors

    def matches(t: SymplecticTransform) -> bool:
        cls = classify_conditional_marginals(spec, t, traced)
        got = {}
        for c, rep in zip(cls.classes, cls.marginals):
            for idx in c:
                got[idx] = rep
        return all(states_equal(got[i], d) for i, d in enumerate(desired))

    searched = 0
    if exhaustive:
        group = symplectic_group(field, n_total, cap=group_cap)
        shifts = _all_vectors(field, space.ambient_dim)
        for u in group:
            for a in shifts:
                t = SymplecticTransform(space, u, a)
                searched += 1
                if matches(t):
                    return ConditionalSearchResult(t, searched, True)
        return ConditionalSearchResult(None, searched, True)
    if rng is None:
        raise ValueError("sampled search needs an rng")
    for _ in range(samples):
        t = random_symplectic(space, rng)
        searched += 1
        if matches(t):
            return ConditionalSearchResult(t, searched, False)
    return ConditionalSearchResult(None, searched, False)
