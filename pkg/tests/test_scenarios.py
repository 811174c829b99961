import pytest

from toytheory.algebra import GF, rref
from toytheory.errors import DimensionMismatch, SearchSpaceExceeded
from toytheory.phase_space import discrete_space
from toytheory.scenarios import (
    FRCandidate, check_fr_conditions, fr_chain_initial,
    fr_chain_sequential, run_bell, run_forgetting, run_wigner_friend,
    search_fr_paradox, _fr_candidate_from_ints, _fr_conditions_single,
    _fr_scan_range, _fr_tables, _merge_fr_stats,
)
from toytheory.states import make_state, state_from_values

F2 = GF(2)


@pytest.mark.parametrize("d", [2, 3])
def test_run_bell(d):
    r = run_bell(d)
    assert r.passed
    checked = [e for e in r.events if e["kind"] == "inference"]
    assert len(checked) == d
    assert all(e["infers"] for e in checked)


def test_run_bell_tampered_control():
    r = run_bell(2, tampered=True)
    assert r.passed  # the control's claim is that inference fails
    assert r.verdict["control_fails_as_expected"]


def test_run_wigner_friend():
    assert run_wigner_friend().passed


def test_run_forgetting():
    assert run_forgetting().passed


def test_report_replay_determinism():
    a = search_fr_paradox(d=2, exhaustive=False, seed=7, samples=40,
                          sequential_checks=4)
    b = search_fr_paradox(d=2, exhaustive=False, seed=7, samples=40,
                          sequential_checks=4)
    assert a.to_jsonable() == b.to_jsonable()


def _all_positions_candidate(equal_w=False):
    """Everything in position eigenstates; all seven conditions hold and the
    only consistent Wigner labeling is ok = fail."""
    space = discrete_space(2, 4)
    state = state_from_values(
        space, [(tuple(1 if j == 2 * i else 0 for j in range(8)), 0)
                for i in range(4)])
    qr = rref(F2, 8, [(1, 0, 0, 0, 0, 0, 0, 0)])
    qs = rref(F2, 8, [(0, 0, 0, 0, 1, 0, 0, 0)])
    zero = (0,) * 8
    ps_vec = (0, 0, 0, 0, 0, 1, 0, 0)
    return FRCandidate(
        initial=state, blocks=(1, 1, 1, 1),
        v_a=qr, v_b=qs, v_u=qr, v_w=qs,
        a1=zero, b1=zero,
        u_ok=zero, u_fail=(1, 0, 0, 0, 0, 0, 0, 0),
        w_ok=zero, w_fail=zero if equal_w else (0, 0, 0, 0, 1, 0, 0, 0),
        allow_equal_outcomes=equal_w)


def test_candidate_distinctness_enforced():
    # ok and fail labeling the same outcome is rejected at construction
    space = discrete_space(2, 4)
    state = state_from_values(
        space, [(tuple(1 if j == 2 * i else 0 for j in range(8)), 0)
                for i in range(4)])
    qr = rref(F2, 8, [(1, 0, 0, 0, 0, 0, 0, 0)])
    qs = rref(F2, 8, [(0, 0, 0, 0, 1, 0, 0, 0)])
    with pytest.raises(DimensionMismatch):
        FRCandidate(
            initial=state, blocks=(1, 1, 1, 1),
            v_a=qr, v_b=qs, v_u=qr, v_w=qs,
            a1=(0,) * 8, b1=(0,) * 8,
            u_ok=(0,) * 8, u_fail=(1, 0, 0, 0, 0, 0, 0, 0),
            w_ok=(0,) * 8,
            w_fail=(0, 0, 0, 0, 0, 0, 0, 1))  # p_B shift: same q_S outcome


def test_distinct_w_candidate_fails_condition_seven():
    cand = _all_positions_candidate(equal_w=False)
    rep = check_fr_conditions(cand)
    assert not rep.conditions[6]
    assert not rep.all_hold
    assert rep.forced_equality_consistent


def test_candidate_block_support_enforced():
    space = discrete_space(2, 4)
    state = state_from_values(
        space, [(tuple(1 if j == 2 * i else 0 for j in range(8)), 0)
                for i in range(4)])
    with pytest.raises(DimensionMismatch):
        FRCandidate(
            initial=state, blocks=(1, 1, 1, 1),
            v_a=rref(F2, 8, [(0, 0, 1, 0, 0, 0, 0, 0)]),  # on A, not R
            v_b=rref(F2, 8, [(0, 0, 0, 0, 1, 0, 0, 0)]),
            v_u=rref(F2, 8, [(1, 0, 0, 0, 0, 0, 0, 0)]),
            v_w=rref(F2, 8, [(0, 0, 0, 0, 1, 0, 0, 0)]),
            a1=(0,) * 8, b1=(0,) * 8,
            u_ok=(0,) * 8, u_fail=(1, 0, 0, 0, 0, 0, 0, 0),
            w_ok=(0,) * 8, w_fail=(0, 0, 0, 0, 1, 0, 0, 0))


def test_all_seven_conditions_force_equal_w_outcomes():
    cand = _all_positions_candidate(equal_w=True)
    rep = check_fr_conditions(cand)
    assert rep.all_hold
    assert rep.p_ok_ok > 0
    assert rep.w_outcomes_equal          # derivation confirmed
    assert rep.forced_equality_consistent
    chain = fr_chain_initial(cand)
    assert chain["holds"]                # benign: ok and fail coincide


def test_correlated_pairs_candidate_fails_a_subset_condition():
    # R-A and S-B momentum-correlated pairs with local position measurements:
    # nothing about S is reachable from Ursula's R+A knowledge
    space = discrete_space(2, 4)
    state = make_state(
        space,
        [(1, 0, 1, 0, 0, 0, 0, 0), (0, 1, 0, 1, 0, 0, 0, 0),
         (0, 0, 0, 0, 1, 0, 1, 0), (0, 0, 0, 0, 0, 1, 0, 1)],
        (0,) * 8)
    qr = rref(F2, 8, [(1, 0, 0, 0, 0, 0, 0, 0)])
    qs = rref(F2, 8, [(0, 0, 0, 0, 1, 0, 0, 0)])
    cand = FRCandidate(
        initial=state, blocks=(1, 1, 1, 1),
        v_a=qr, v_b=qs, v_u=qr, v_w=qs,
        a1=(0,) * 8, b1=(0,) * 8,
        u_ok=(0,) * 8, u_fail=(1, 0, 0, 0, 0, 0, 0, 0),
        w_ok=(0,) * 8, w_fail=(0, 0, 0, 0, 1, 0, 0, 0))
    rep = check_fr_conditions(cand)
    assert not rep.conditions[0]  # V_B not reachable from U's commutant
    assert not rep.all_hold
    assert rep.forced_equality_consistent
    assert not fr_chain_initial(cand)["holds"]


def test_fast_scan_slice_agrees_with_merge_and_finds_nothing():
    t = _fr_tables()
    whole = _fr_scan_range(t, 0, 60)
    parts = [_fr_scan_range(t, 0, 29), _fr_scan_range(t, 29, 60)]
    merged = _merge_fr_stats(parts)
    whole.pop("paradoxes")
    merged_paradoxes = merged.pop("paradoxes")
    assert merged == whole
    assert merged_paradoxes == []


def test_fast_conditions_match_exact_on_fixed_tuples(rng):
    t = _fr_tables()
    for _ in range(25):
        li = rng.randrange(len(t.lagrangians))
        v = rng.randrange(256)
        a = rng.randrange(3)
        b = rng.randrange(3)
        u = rng.randrange(30)
        w = rng.randrange(30)
        a1 = rng.choice(t.meas_a[a].outs)
        b1 = rng.choice(t.meas_b[b].outs)
        uok = rng.choice(t.meas_u[u].outs)
        wok = rng.choice(t.meas_w[w].outs)
        wfail = rng.choice([x for x in t.meas_w[w].outs if x != wok])
        fast = _fr_conditions_single(t, li, v, a, a1, b, b1, u, uok, w, wok, wfail)
        cand = _fr_candidate_from_ints(t, li, v, a, a1, b, b1, u, uok, w, wok, wfail)
        assert check_fr_conditions(cand).conditions == fast


def _set_level_conditions(c):
    """Third, fully independent evaluation of the seven conditions by literal
    element enumeration (no subspace algebra, no bit packing)."""
    from toytheory.algebra import enumerate_subspace
    from toytheory.phase_space import bracket_vectors
    V = set(enumerate_subspace(c.initial.known))

    def span_set(sub):
        return set(enumerate_subspace(sub))

    VU, VB, VA, VW = map(span_set, (c.v_u, c.v_b, c.v_a, c.v_w))

    def commutant(meas_set):
        return {f for f in V
                if all(bracket_vectors(F2, f, g) == 0 for g in meas_set)}

    KU, KB, KA = commutant(VU), commutant(VB), commutant(VA)

    def sumset(xs, ys):
        return {tuple((x + y) % 2 for x, y in zip(a, b))
                for a in xs for b in ys}

    def perp_contains(sset, x):
        return all(sum(p * q for p, q in zip(s, x)) % 2 == 0 for s in sset)

    v = c.initial.valuation

    def comb(*vecs):
        out = [0] * 8
        for vec in vecs:
            out = [(p + q) % 2 for p, q in zip(out, vec)]
        return tuple((p - q) % 2 for p, q in zip(out, v))

    return (VB <= sumset(KU, VU),
            VA <= sumset(KB, VB),
            VW <= sumset(KA, VA),
            perp_contains(sumset(VU, VW) & V, comb(c.u_ok, c.w_ok)),
            perp_contains(sumset(VB, VU) & KU, comb(c.b1, c.u_ok)),
            perp_contains(sumset(VB, VA) & KB, comb(c.a1, c.b1)),
            perp_contains(sumset(VA, VW) & KA, comb(c.a1, c.w_fail)))


def test_conditions_match_literal_set_enumeration(rng):
    t = _fr_tables()
    for _ in range(40):
        li = rng.randrange(len(t.lagrangians))
        v = rng.randrange(256)
        a = rng.randrange(3)
        b = rng.randrange(3)
        u = rng.randrange(30)
        w = rng.randrange(30)
        a1 = rng.choice(t.meas_a[a].outs)
        b1 = rng.choice(t.meas_b[b].outs)
        uok = rng.choice(t.meas_u[u].outs)
        wok = rng.choice(t.meas_w[w].outs)
        wfail = rng.choice([x for x in t.meas_w[w].outs if x != wok])
        cand = _fr_candidate_from_ints(t, li, v, a, a1, b, b1, u, uok,
                                       w, wok, wfail)
        assert check_fr_conditions(cand).conditions == \
            _set_level_conditions(cand)


def test_sequential_reading_never_assembles_paradox(rng):
    t = _fr_tables()
    for _ in range(6):
        li = rng.randrange(len(t.lagrangians))
        v = rng.randrange(256)
        a = rng.randrange(3)
        b = rng.randrange(3)
        u = rng.randrange(30)
        w = rng.randrange(30)
        cand = _fr_candidate_from_ints(
            t, li, v, a, t.meas_a[a].outs[0], b, t.meas_b[b].outs[0],
            u, t.meas_u[u].outs[0], w, t.meas_w[w].outs[0],
            t.meas_w[w].outs[1])
        seq = fr_chain_sequential(cand)
        assert not seq["holds"]


def test_mutated_search_finds_false_positives():
    t = _fr_tables()
    stats = _fr_scan_range(t, 0, 40, weaken_condition1=True, stop_after=3)
    assert len(stats["paradoxes"]) >= 1
    # and each false positive indeed fails one of the dropped conditions
    for tup in stats["paradoxes"]:
        conds = _fr_conditions_single(t, *tup)
        assert not all(conds[:3])
        assert all(conds[3:])


def test_search_fr_paradox_workers_agree():
    r1 = search_fr_paradox(d=2, exhaustive=True, workers=1, spot_checks=0)
    r2 = search_fr_paradox(d=2, exhaustive=True, workers=2, spot_checks=0)
    s1 = [e for e in r1.events if e["kind"] == "scan"][0]
    s2 = [e for e in r2.events if e["kind"] == "scan"][0]
    assert s1 == s2
    assert r1.verdict["no_paradox_found"]
    assert r2.verdict["no_paradox_found"]


def test_search_fr_paradox_sampled_d3():
    r = search_fr_paradox(d=3, exhaustive=False, seed=11, samples=150,
                          sequential_checks=6)
    assert r.passed


def test_exhaustive_mode_gated_to_single_toy_bits():
    with pytest.raises(SearchSpaceExceeded):
        search_fr_paradox(d=3, exhaustive=True)
