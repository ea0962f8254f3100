import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from evidential.errors import AtomBudgetExceeded, ConsistentTheory
from evidential.formula import BOTTOM, And, Atom, Not, Or
from evidential.logic import (
    Reasoner,
    consistent,
    entails,
    minimal_inconsistent_subsets,
    minimal_subset,
)
from evidential.solver import Solver, enumerate_entails, enumerate_satisfiable

from .conftest import PROPS, formulas

p, q, r = PROPS[:3]


def test_basic_entailment():
    assert entails([p, Or((Not(p), q))], q)
    assert not entails([Or((p, q))], p)
    assert entails([p, Not(p)], r)  # explosion
    assert entails([], Or((p, Not(p))))


def test_falsum():
    assert not consistent([BOTTOM])
    assert consistent([Not(BOTTOM)])
    assert entails([BOTTOM], p)


def test_empty_theory_is_consistent():
    assert consistent([])


def test_reasoner_queries_leave_the_base_alone():
    R = Reasoner([Or((p, q))])
    assert not R.satisfiable([Not(p), Not(q)])
    assert R.satisfiable([Not(p)])
    assert R.entails(q, given=[Not(p)])
    assert not R.entails(q)
    assert R.consistent()


def test_atom_budget():
    many = [Atom("a", (f"c{i}",)) for i in range(20)]
    with pytest.raises(AtomBudgetExceeded) as info:
        Reasoner(many, atom_budget=10)
    assert info.value.budget == 10
    R = Reasoner(many[:5], atom_budget=10)
    with pytest.raises(AtomBudgetExceeded):
        R.satisfiable(many[5:])


def test_solver_on_raw_clauses():
    # Pigeonhole: 3 pigeons, 2 holes.
    v = lambda i, j: 2 * i + j + 1  # noqa: E731
    clauses = [[v(i, 0), v(i, 1)] for i in range(3)]
    clauses += [[-v(a, j), -v(b, j)] for j in range(2) for a in range(3) for b in range(a + 1, 3)]
    assert Solver(clauses, 6).solve() is None
    assert Solver(clauses[:-1], 6).solve() is not None


@given(st.lists(formulas(), min_size=1, max_size=5), formulas())
def test_entailment_matches_truth_tables(theory, query):
    assert entails(theory, query) == enumerate_entails(theory, query)
    assert consistent(theory) == enumerate_satisfiable(theory)


@given(st.lists(formulas(max_leaves=6), min_size=1, max_size=7))
def test_minimal_subset_is_minimal(theory):
    core = minimal_subset(theory)
    if enumerate_satisfiable(theory):
        assert core is None
        return
    assert not enumerate_satisfiable(core)
    for k in range(len(core)):
        assert enumerate_satisfiable(core[:k] + core[k + 1:])


def test_minimal_subset_with_hard_constraints():
    pool = [p, q, r]
    assert minimal_subset(pool, hard=[Not(And((p, r)))]) == [p, r]
    assert minimal_subset(pool, hard=[Not(BOTTOM)]) is None


def test_single_core():
    assert minimal_inconsistent_subsets([p, Not(p), q]) == [[p, Not(p)]]


def test_two_cores():
    cores = minimal_inconsistent_subsets([p, Not(p), q, Not(q)], limit=2)
    assert cores == [[p, Not(p)], [q, Not(q)]]


def test_consistent_theory_has_no_core():
    with pytest.raises(ConsistentTheory):
        minimal_inconsistent_subsets([p, q])


def test_cores_are_distinct_and_minimal():
    rng = random.Random(7)
    atoms = PROPS[:4]
    theory = [rng.choice([a, Not(a)]) for a in atoms for _ in range(2)]
    theory += [Or((Not(atoms[0]), atoms[1]))]
    if consistent(theory):
        theory.append(Not(atoms[1]))
        theory.append(atoms[0])
    cores = minimal_inconsistent_subsets(theory, limit=5)
    assert len({frozenset(c) for c in cores}) == len(cores)
    for c in cores:
        assert not enumerate_satisfiable(c)
        assert all(enumerate_satisfiable(c[:k] + c[k + 1:]) for k in range(len(c)))
