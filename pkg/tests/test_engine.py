import time

import pytest
from hypothesis import given, settings, strategies as st

from paracoherent.engine import (
    EnumerationState, SolveStats, SolveTimeout, answer_sets, blocking_constraint,
    branching_order, first_answer_set, gl_reduct, has_classical_model, is_answer_set,
    is_minimal_model, is_model, next_answer_set, optimum_answer_set, violated_weak,
)
from paracoherent.oracle import RandomParams, oracle_answer_sets, oracle_has_classical_model, random_program
from paracoherent.program import format_rule, parse
from paracoherent.transform import TransformKind, kappa_transform, transform, weak_gap_constraints

from conftest import named


def ids(p, *names):
    return p.signature.ids(names)


def reduct_texts(p, i):
    return [format_rule(r, p.signature) for r in gl_reduct(p, i).rules]


def test_reduct_odd_cycle(odd_cycle):
    assert reduct_texts(odd_cycle, ids(odd_cycle, "b")) == ["b.", "a :- c.", "d."]
    assert reduct_texts(odd_cycle, frozenset()) == ["b.", "c.", "a :- c.", "d."]


def test_reduct_of_positive_program():
    p = parse("a | b :- c. c. :- a, b.")
    assert gl_reduct(p, ids(p, "a", "c")).rules == p.rules


def test_is_model(odd_cycle):
    p = parse("a | b.")
    assert is_model(p, ids(p, "a"))
    p = parse("a. :- a.")
    assert not is_model(p, ids(p, "a"))
    assert is_model(odd_cycle, ids(odd_cycle, "b", "d"))
    assert not is_model(odd_cycle, ids(odd_cycle, "b"))


def test_is_minimal_model():
    p = parse("a | b.")
    assert is_minimal_model(p, ids(p, "a"))
    assert not is_minimal_model(p, ids(p, "a", "b"))
    p = parse("a :- a.")
    assert not is_minimal_model(p, ids(p, "a"))
    assert is_minimal_model(p, frozenset())


def test_is_minimal_model_preconditions():
    p = parse("a :- not b.")
    with pytest.raises(ValueError):
        is_minimal_model(p, ids(p, "a"))
    p = parse("a.")
    with pytest.raises(ValueError):
        is_minimal_model(p, frozenset())


def test_reduct_of_kappa_answer_set(odd_cycle):
    tp = transform(odd_cycle, TransformKind.KAPPA, with_gap=False)
    m_b = tp.signature.ids(["lam_1_1", "b", "k_b", "k_d"])
    assert is_minimal_model(gl_reduct(tp.program, m_b), m_b)
    assert is_answer_set(tp.program, m_b)


def test_is_answer_set(odd_cycle, pi_odd):
    m_wide = pi_odd.signature.ids(["k_a", "k_b", "k_d", "gap_k_a", "gap_k_b", "gap_k_d"])
    assert is_answer_set(pi_odd.program, m_wide)
    assert not is_answer_set(odd_cycle, ids(odd_cycle, "b", "d"))
    p = parse("a.")
    assert is_answer_set(p, ids(p, "a"))


def test_next_answer_set_odd_cycle(pi_odd):
    state = EnumerationState(pi_odd.program)
    emitted = [next_answer_set(state) for _ in range(3)]
    assert next_answer_set(state) is None and state.exhausted
    assert sorted(sorted(pi_odd.signature.names(m)) for m in emitted) == [
        ["a", "c", "gap_k_d", "k_a", "k_d", "lam_2_1"],
        ["b", "gap_k_d", "k_b", "k_d", "lam_1_1"],
        ["gap_k_a", "gap_k_b", "gap_k_d", "k_a", "k_b", "k_d"],
    ]
    assert state.stats.solver_calls == 4
    assert state.stats.models_enumerated == 3


def test_next_answer_set_trivial():
    assert next_answer_set(EnumerationState(parse("a. :- a."))) is None
    p = parse("a.")
    state = EnumerationState(p)
    assert next_answer_set(state) == ids(p, "a")
    assert next_answer_set(state) is None
    assert next_answer_set(state) is None


def test_blocking_constraint_literal_description():
    p = parse("a | b. c :- a.")
    m = ids(p, "a", "c")
    block = blocking_constraint(p, m)
    assert block.positive_body == m and block.negative_body == ids(p, "b")


def test_optimum_odd_cycle(pi_odd):
    program = pi_odd.program.extend(weak=weak_gap_constraints(pi_odd))
    m = optimum_answer_set(program)
    assert violated_weak(program, m) == 1
    assert len(pi_odd.gap_of(m)) == 1


def test_optimum_trivial():
    p = parse("a.")
    assert optimum_answer_set(p) == ids(p, "a")
    assert optimum_answer_set(parse("a :- not a.")) is None
    p = parse("a | b. :~ a.")
    assert optimum_answer_set(p) == ids(p, "b")


def test_optimum_uneven_gaps(uneven_gaps):
    tp = transform(uneven_gaps, TransformKind.HT)
    program = tp.program.extend(weak=weak_gap_constraints(tp))
    for seed in (None, 0, 1, 2, 3):
        m = optimum_answer_set(program, seed=seed)
        assert violated_weak(program, m) == 1
        assert tp.signature.names(m) >= {"b", "k_d"}


def test_has_classical_model(odd_cycle):
    assert has_classical_model(odd_cycle)
    assert not has_classical_model(parse("a. :- a."))
    assert has_classical_model(parse(""))
    assert not has_classical_model(parse("a :- not a. :- a."))


def test_stats_accumulate(pi_odd):
    stats = SolveStats()
    first_answer_set(pi_odd.program, stats=stats)
    first_answer_set(pi_odd.program, stats=stats)
    assert stats.solver_calls == 2
    assert stats.peak_program_size == len(pi_odd.program.rules)
    assert stats.decisions > 0
    assert set(stats.as_dict()) >= {"solver_calls", "models_enumerated", "elapsed", "peak_program_size"}


def test_deadline_raises():
    p = parse("\n".join(f"x{i} | y{i}." for i in range(12)))
    with pytest.raises(SolveTimeout):
        list(answer_sets(p, deadline=time.monotonic() - 1))
    state = EnumerationState(p, deadline=time.monotonic() + 60)
    assert state.next() is not None


def test_branching_order():
    assert branching_order(5, None) == [0, 1, 2, 3, 4]
    assert sorted(branching_order(20, 3)) == list(range(20))
    assert branching_order(20, 3) == branching_order(20, 3)


# --------------------------------------------------------------------------- against the oracle

seeds = st.integers(0, 100_000)
params = st.builds(
    RandomParams,
    atoms=st.integers(1, 5), rules=st.integers(1, 8), max_head=st.integers(1, 3),
    max_body=st.integers(1, 3), neg_prob=st.sampled_from([0.0, 0.3, 0.6, 0.9]), seed=seeds,
)


@given(params)
@settings(max_examples=150, deadline=None)
def test_enumeration_matches_oracle_on_source(prm):
    p = random_program(prm)
    assert set(EnumerationState(p)) == oracle_answer_sets(p)
    assert set(answer_sets(p)) == oracle_answer_sets(p)
    assert has_classical_model(p) == oracle_has_classical_model(p)


@given(params, st.sampled_from(list(TransformKind)), st.one_of(st.none(), seeds))
@settings(max_examples=100, deadline=None)
def test_enumeration_matches_oracle_on_transformed(prm, kind, seed):
    tp = transform(random_program(prm), kind)
    emitted = list(EnumerationState(tp.program, seed=seed))
    assert len(emitted) == len(set(emitted))
    assert set(emitted) == oracle_answer_sets(tp.program)


@given(params)
@settings(max_examples=80, deadline=None)
def test_blocking_soundness(prm):
    tp = kappa_transform(random_program(prm))
    expected = oracle_answer_sets(tp.program)
    for m in list(expected)[:3]:
        blocked = tp.program.extend([blocking_constraint(tp.program, m)])
        assert oracle_answer_sets(blocked) == expected - {m}


@given(params)
@settings(max_examples=80, deadline=None)
def test_answer_set_check_matches_oracle(prm):
    p = random_program(prm)
    expected = oracle_answer_sets(p)
    atoms = sorted(p.atoms)
    for mask in range(1 << len(atoms)):
        i = frozenset(a for k, a in enumerate(atoms) if mask >> k & 1)
        assert is_answer_set(p, i) == (i in expected)


@given(params)
@settings(max_examples=80, deadline=None)
def test_optimum_cost_matches_oracle(prm):
    tp = kappa_transform(random_program(prm))
    program = tp.program.extend(weak=weak_gap_constraints(tp))
    expected = oracle_answer_sets(tp.program)
    m = optimum_answer_set(program)
    if not expected:
        assert m is None
    else:
        assert m in expected
        assert violated_weak(program, m) == min(violated_weak(program, x) for x in expected)


@given(params, seeds)
@settings(max_examples=50, deadline=None)
def test_enumeration_deterministic(prm, seed):
    tp = transform(random_program(prm), TransformKind.HT)
    assert list(EnumerationState(tp.program, seed=seed)) == list(EnumerationState(tp.program, seed=seed))


def test_odd_cycle_matches_oracle(pi_odd):
    assert named(pi_odd, EnumerationState(pi_odd.program)) == named(pi_odd, oracle_answer_sets(pi_odd.program))
