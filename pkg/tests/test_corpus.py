import time

import pytest
from hypothesis import given
from hypothesis import strategies as st

from evidential.acceptance import (
    AcceptanceLevel,
    UpdateDiff,
    accepted_set,
    corpus_report,
    is_accepted,
    serious_possibility,
    update_diff,
)
from evidential.evidence import EvidenceBase
from evidential.formula import And, Atom, Not
from evidential.language import IGNORANCE, ProbabilityInterval
from evidential.parser import parse_formula, parse_program


def stage(cache, name, st_name, **params):
    sc = cache(name, **params)
    return sc, sc.stage(st_name).evidence


def F(E, text):
    return parse_formula(text, E.signature)


class TestAcceptanceLevel:
    @pytest.mark.parametrize("eps", [0.0, 0.5, -0.1, 0.7])
    def test_out_of_range(self, eps):
        with pytest.raises(ValueError):
            AcceptanceLevel(eps)

    def test_threshold_is_closed(self):
        level = AcceptanceLevel(0.05)
        assert level.admits(ProbabilityInterval(0.95, 1.0))
        assert not level.admits(ProbabilityInterval(0.9499, 1.0))
        # 2/3 meets 1 - 1/3 despite float rounding.
        assert AcceptanceLevel(1 / 3).admits(ProbabilityInterval(2 / 3, 2 / 3))


class TestIsAccepted:
    def test_tweety(self, scenario_cache):
        _, E = stage(scenario_cache, "tweety", "stage-1")
        assert is_accepted(E, F(E, "flies(tweety)"), 0.05)
        assert not is_accepted(E, F(E, "flies(tweety)"), 0.04)

    @pytest.mark.parametrize("eps", [0.01, 0.1, 0.3, 0.49])
    def test_nixon_both_accepts_neither_side(self, scenario_cache, eps):
        _, E = stage(scenario_cache, "nixon", "both")
        assert not is_accepted(E, F(E, "pacifist(nixon)"), eps)
        assert not is_accepted(E, F(E, "~pacifist(nixon)"), eps)

    def test_cohabitation(self, scenario_cache):
        _, E = stage(scenario_cache, "cohabitation", "standard")
        assert is_accepted(E, F(E, "ht_toronto(john) v ht_vancouver(john)"), 0.01)
        assert not is_accepted(E, F(E, "ht_toronto(john)"), 0.01)
        assert not is_accepted(E, F(E, "ht_vancouver(john)"), 0.01)


class TestAcceptedSet:
    def test_lottery_hundred(self, scenario_cache):
        sc, E = stage(scenario_cache, "lottery", "standard", n=100)
        K = accepted_set(E, 0.05, sc.universe)
        assert len(K) == 101
        assert sc.universe[-1] not in K  # all tickets lose
        assert all(e.interval.lower >= 0.95 for e in K.entries)

    def test_tweety_stage_two(self, scenario_cache):
        _, E = stage(scenario_cache, "tweety", "stage-2")
        flies = F(E, "flies(tweety)")
        K = accepted_set(E, 0.05, [flies, Not(flies)])
        assert K.sentences == (Not(flies),)

    def test_empty_universe(self, scenario_cache):
        _, E = stage(scenario_cache, "tweety", "stage-2")
        K = accepted_set(E, 0.05, [])
        assert len(K) == 0 and K.evaluations == ()

    def test_universe_is_deduplicated_in_order(self, scenario_cache):
        _, E = stage(scenario_cache, "tweety", "stage-1")
        f, b = F(E, "flies(tweety)"), F(E, "bird(tweety)")
        K = accepted_set(E, 0.05, [f, b, f])
        assert K.universe == (f, b) and K.sentences == (f, b)

    def test_every_evaluation_is_kept(self, scenario_cache):
        sc, E = stage(scenario_cache, "nixon", "both")
        K = accepted_set(E, 0.1, sc.universe)
        assert len(K.evaluations) == len(sc.universe)
        assert K.interval_of(F(E, "pacifist(nixon)")) == IGNORANCE
        assert K.evaluation_of(F(E, "pacifist(nixon)")).trace.result == IGNORANCE

    @given(st.sampled_from([("tweety", "stage-1"), ("tweety", "stage-2"), ("nixon", "quaker"),
                            ("nixon", "both"), ("cohabitation", "standard")]),
           st.floats(0.001, 0.499), st.floats(0.001, 0.499))
    def test_threshold_monotonicity(self, scenario_cache, where, e1, e2):
        e1, e2 = sorted((e1, e2))
        sc, E = stage(scenario_cache, *where)
        small = set(accepted_set(E, e1, sc.universe).sentences)
        large = set(accepted_set(E, e2, sc.universe).sentences)
        assert small <= large


class TestUpdateDiff:
    def test_tweety(self, scenario_cache):
        sc, E = stage(scenario_cache, "tweety", "stage-1")
        d = update_diff(E, F(E, "penguin(tweety)"), 0.05, sc.universe)
        flies = F(E, "flies(tweety)")
        assert d.retracted == {flies}
        assert d.added == {Not(flies), F(E, "penguin(tweety)")}
        assert d.unchanged == 1  # bird(tweety)
        assert flies in d.changed

    def test_nixon(self, scenario_cache):
        sc, E = stage(scenario_cache, "nixon", "quaker")
        d = update_diff(E, F(E, "republican(nixon)"), 0.1, sc.universe)
        assert d.retracted == {F(E, "pacifist(nixon)")}

    def test_irrelevant_fact(self, scenario_cache):
        sc, E = stage(scenario_cache, "cohabitation", "standard")
        d = update_diff(E, F(E, "likes_hockey(john)"), 0.01, sc.universe)
        assert d.added == frozenset() and d.retracted == frozenset()

    def test_non_monotonicity_witness(self, scenario_cache):
        _, E1 = stage(scenario_cache, "tweety", "stage-1")
        _, E2 = stage(scenario_cache, "tweety", "stage-2")
        flies = F(E1, "flies(tweety)")
        assert is_accepted(E1, flies, 0.05) and not is_accepted(E2, flies, 0.05)

    def test_added_and_retracted_are_disjoint(self):
        p = Atom("p", ())
        with pytest.raises(ValueError):
            UpdateDiff(frozenset([p]), frozenset([p]), 0)


class TestSeriousPossibility:
    def test_measurement(self, scenario_cache):
        # 0.98 per measurement and 1 - 0.98**200 for the batch both clear 0.97.
        sc, E = stage(scenario_cache, "measurement", "standard", N=200, p=0.02, epsilon=0.03)
        K = accepted_set(E, sc.epsilon, sc.universe)
        assert not serious_possibility(E, sc.epsilon, sc.universe, F(E, "~within(m3)"), K)
        all_within = And(tuple(Atom("within", (f"m{i}",)) for i in range(1, 201)))
        assert not serious_possibility(E, sc.epsilon, sc.universe, all_within, K)
        # The corpus as a whole is inconsistent, yet not everything is ruled out.
        assert serious_possibility(E, sc.epsilon, sc.universe, F(E, "within(m3)"), K)

    def test_fresh_atom(self):
        E = EvidenceBase.from_program(parse_program(
            "const a. pred p/1. pred q/1. pred fresh/1. fact p(a). stat x: q(x) | p(x) in [0.99, 1]."))
        U = [F(E, "q(a)"), F(E, "p(a)")]
        assert serious_possibility(E, 0.05, U, F(E, "fresh(a)"))
        assert serious_possibility(E, 0.05, U, F(E, "~fresh(a)"))

    def test_negation_of_a_member(self, scenario_cache):
        sc, E = stage(scenario_cache, "tweety", "stage-1")
        K = accepted_set(E, sc.epsilon, sc.universe)
        for k in K.sentences:
            assert not serious_possibility(E, sc.epsilon, sc.universe, Not(k), K)

    def test_empty_corpus(self, scenario_cache):
        _, E = stage(scenario_cache, "tweety", "stage-0")
        assert serious_possibility(E, 0.05, [], F(E, "flies(tweety)"))


class TestCorpusReport:
    def test_lottery_hundred(self, scenario_cache):
        sc, E = stage(scenario_cache, "lottery", "standard", n=100)
        rep = corpus_report(E, 0.05, sc.universe)
        assert not rep.jointly_consistent
        assert [len(c) for c in rep.cores] == [101]
        assert rep.single_premise_closure_violations == ()
        assert not rep.conjunction_closure
        [check] = rep.conjunctions
        assert check.conjunction == sc.universe[-1] and not check.accepted

    def test_tweety_stage_two(self, scenario_cache):
        sc, E = stage(scenario_cache, "tweety", "stage-2")
        rep = corpus_report(E, 0.05, sc.universe)
        assert rep.jointly_consistent and rep.cores == ()

    def test_empty_corpus(self, scenario_cache):
        _, E = stage(scenario_cache, "tweety", "stage-0")
        rep = corpus_report(E, 0.05, [])
        assert rep.jointly_consistent and rep.single_premise_closure_violations == ()
        assert rep.conjunction_closure

    def test_closure_violation_is_reported(self):
        # A sharper but unrelated class drags the weaker sentence below threshold.
        E = EvidenceBase.from_program(parse_program("""
            const a. pred q/1. pred r/1. pred t/1. pred u/1.
            fact q(a). fact r(a).
            stat x: t(x) | q(x) in [0.95, 1].
            stat x: t(x) v u(x) | r(x) in [0.1, 0.2].
        """))
        phi, psi = F(E, "t(a)"), F(E, "t(a) v u(a)")
        rep = corpus_report(E, 0.05, [phi, psi])
        assert rep.corpus.sentences == (phi,)
        assert rep.corpus.interval_of(psi) == ProbabilityInterval(0.1, 1.0)
        assert rep.single_premise_closure_violations == ((phi, psi),)

    def test_extension_of_the_universe_is_opt_in(self, scenario_cache):
        _, E = stage(scenario_cache, "cohabitation", "standard")
        either = F(E, "ht_toronto(john) v ht_vancouver(john)")
        wider = F(E, "ht_toronto(john) v ht_vancouver(john) v likes_hockey(john)")
        assert wider not in corpus_report(E, 0.01, [either]).corpus.universe
        rep = corpus_report(E, 0.01, [either], extend_with=[wider])
        assert wider in rep.corpus
        assert rep.single_premise_closure_violations == ()


def test_everything_certain_is_accepted(scenario_cache):
    for name, st_name in [("tweety", "stage-2"), ("cohabitation", "standard"), ("nixon", "both")]:
        _, E = stage(scenario_cache, name, st_name)
        for phi in E.certain:
            for eps in (0.001, 0.2, 0.49):
                assert is_accepted(E, phi, eps)


@given(st.sets(st.sampled_from(["p(a)", "~q(a)", "p(a) -> q(a) v r(a)", "r(a) -> p(a)"]), max_size=3),
       st.sampled_from(["p(a)", "r(a) -> q(a) v p(a)", "~r(a) v p(a)", "q(a)"]),
       st.floats(0.001, 0.499))
def test_entailed_sentences_are_accepted(facts, query, eps):
    text = "const a. pred p/1. pred q/1. pred r/1.\n" + "".join(f"fact {x}.\n" for x in facts)
    E = EvidenceBase.from_program(parse_program(text), check=False)
    if not E.reasoner.consistent():
        return
    phi = F(E, query)
    if E.entails(phi):
        assert is_accepted(E, phi, eps)


@pytest.mark.parametrize("n", [20, 100, 1000])
def test_lottery_family(scenario_cache, n):
    sc, E = stage(scenario_cache, "lottery", "standard", n=n)
    eps = sc.epsilon
    assert (n - 1) / n >= 1 - eps
    start = time.perf_counter()
    K = accepted_set(E, eps, sc.universe)
    loses, some_wins, all_lose = sc.universe[:n], sc.universe[n], sc.universe[n + 1]
    assert all(l in K for l in loses) and some_wins in K and all_lose not in K
    assert not E.consistent_with(*K.sentences)
    assert time.perf_counter() - start < 30
