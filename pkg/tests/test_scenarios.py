import math

import mpmath
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from evidential.evidence import EvidenceBase
from evidential.formula import Atom
from evidential.language import ProbabilityInterval
from evidential.parser import parse_program
from evidential.scenarios import (
    DISCARD,
    SCENARIO_NAMES,
    USE,
    MeasurementModel,
    ScenarioRun,
    accepted_set,
    batch_error_lower,
    build_scenario,
    check_manifest,
    expected_utility_comparison,
    lottery_epsilon,
)

MANIFESTS = [
    ("tweety", {}),
    ("nixon", {}),
    ("cohabitation", {}),
    ("lottery", {"n": 2}),
    ("lottery", {"n": 4}),
    ("lottery", {"n": 6}),
    ("lottery", {"n": 20}),
    ("lottery", {"n": 100}),
    ("measurement", {"N": 50}),
    ("measurement", {}),
]


@pytest.mark.parametrize("name, params", MANIFESTS)
def test_manifest_passes(scenario_cache, name, params):
    sc = scenario_cache(name, **params)
    results = check_manifest(sc)
    assert results, "every scenario states at least one expectation"
    failed = [(r.assertion, r.error) for r in results if not r.passed]
    assert failed == []


@pytest.mark.parametrize("name, params", MANIFESTS)
def test_stages_are_consistent_and_exportable(scenario_cache, name, params):
    sc = scenario_cache(name, **params)
    for stage in sc.stages:
        E = stage.evidence
        assert E.reasoner.consistent()
        again = EvidenceBase.from_program(parse_program(sc.knowledge_text(stage.name)),
                                          atom_budget=E.atom_budget)
        assert again == E


def test_a_broken_expectation_is_reported_not_raised(scenario_cache):
    from dataclasses import replace

    from evidential.scenarios import ManifestEntry

    sc = scenario_cache("tweety")
    broken = replace(sc, manifest=(ManifestEntry("always false", lambda r: False),
                                   ManifestEntry("crashes", lambda r: 1 / 0)))
    results = check_manifest(broken)
    assert [r.passed for r in results] == [False, False]
    assert results[1].error.startswith("ZeroDivisionError")


class TestBuilders:
    def test_names(self):
        assert SCENARIO_NAMES == ("tweety", "nixon", "cohabitation", "lottery", "measurement")
        with pytest.raises(ValueError):
            build_scenario("zookeeper")

    def test_stage_shapes(self, scenario_cache):
        assert [s.name for s in scenario_cache("tweety").stages] == ["stage-0", "stage-1", "stage-2"]
        assert scenario_cache("nixon").stage("both").parent == "quaker"
        with pytest.raises(KeyError):
            scenario_cache("tweety").stage("stage-9")

    @pytest.mark.parametrize("name, params", [
        ("lottery", {"n": 1}), ("lottery", {"n": 0}), ("lottery", {"n": 2.5}),
        ("measurement", {"N": 0}), ("measurement", {"p": 0.0}), ("measurement", {"p": 1.0}),
        ("measurement", {"tol": -1.0}), ("tweety", {"epsilon": 0.5}),
    ])
    def test_invalid_parameters(self, name, params):
        with pytest.raises(ValueError):
            build_scenario(name, **params)

    def test_epsilon_override(self):
        assert build_scenario("tweety").epsilon == 0.05
        assert build_scenario("tweety", epsilon=0.2).epsilon == 0.2

    def test_numeric_renderings_can_be_overridden(self):
        sc = build_scenario("tweety", fly_rate=(0.8, 0.9))
        assert sc.stage("stage-1").evidence.stats[0].interval == ProbabilityInterval(0.8, 0.9)

    def test_lottery_epsilon(self):
        assert lottery_epsilon(2) == 0.25
        assert lottery_epsilon(4) == 0.25
        assert lottery_epsilon(10) == 0.1
        assert lottery_epsilon(20) == 0.05 == lottery_epsilon(1000)
        # Two tickets cannot clear any threshold above 1/2, so n=2 shows no paradox.
        assert 1 / 2 < 1 - lottery_epsilon(2)
        for n in (3, 7, 19, 20, 500):
            assert (n - 1) / n >= 1 - lottery_epsilon(n) - 1e-12

    def test_lottery_defaults_have_no_prerequisite(self, scenario_cache):
        sc = scenario_cache("lottery", n=4)
        assert len(sc.defaults) == 4
        assert all(d.prerequisite is None and d.justifications == (d.consequent,) for d in sc.defaults)

    def test_large_lottery_skips_the_rivals(self):
        sc = build_scenario("lottery", n=150)
        assert sc.default_theory is None and sc.mh == ()


class TestMeasurement:
    def test_batch_interval(self):
        m = MeasurementModel(10_000, 0.05, 0.001)
        assert m.batch_interval.upper == 1.0
        assert abs(m.batch_interval.lower - 0.99995483) < 1e-8
        assert len(m.constants) == 10_000

    @given(st.integers(1, 10**6), st.floats(1e-9, 0.999))
    def test_batch_lower_matches_high_precision(self, N, p):
        mpmath.mp.dps = 50
        exact = 1 - (1 - mpmath.mpf(p)) ** N
        assert abs(batch_error_lower(N, p) - float(exact)) <= 1e-12

    @settings(max_examples=25)
    @given(st.integers(1, 40), st.floats(0.02, 0.49), st.floats(0.5, 1.0))
    def test_corpus_is_minimally_inconsistent(self, N, eps, frac):
        p = eps * frac
        assume((1 - p) ** N <= eps - 1e-9)
        sc = build_scenario("measurement", N=N, p=p, epsilon=eps)
        E = sc.stage("standard").evidence
        K = accepted_set(E, eps, sc.universe)
        assert len(K) == N + 1
        assert not E.consistent_with(*K.sentences)
        within = K.sentences[:N]
        for i in range(N):
            rest = within[:i] + within[i + 1:] + K.sentences[N:]
            assert E.consistent_with(*rest)

    def test_scaled_down_structure_matches_large_default(self, scenario_cache):
        small = scenario_cache("measurement", N=50)
        run = ScenarioRun(small)
        # With 50 measurements the batch bound 1 - 0.999**50 is far below 0.99.
        assert not run.accepted("standard", Atom("some_error", ("batch",)))
        assert run.report("standard").jointly_consistent


class TestExpectedUtility:
    def test_probabilistic_regime(self):
        r = expected_utility_comparison(10, 0.25, 5, 1, 0.01)
        assert (r.acceptance_decision, r.probabilistic_decision) == (DISCARD, USE)
        assert r.value_of_use == 3.5
        assert r.eu_probabilistic == 35 and r.eu_acceptance == 0
        assert not r.agree

    def test_both_discard(self):
        r = expected_utility_comparison(10, 0.25, 1, 5, 0.01)
        assert (r.acceptance_decision, r.probabilistic_decision) == (DISCARD, DISCARD)
        assert r.value_of_use == -0.5
        assert r.eu_probabilistic == 0 == r.eu_acceptance and r.agree

    def test_both_use(self):
        r = expected_utility_comparison(10, 0.0001, 1, 1, 0.01)
        assert r.acceptance_decision == r.probabilistic_decision == USE
        assert r.eu_acceptance == r.eu_probabilistic == pytest.approx(10 * 0.9998)

    def test_acceptance_can_use_at_a_loss(self):
        # Within tolerance is accepted, but the rare error is ruinous.
        r = expected_utility_comparison(10, 0.005, 1, 1000, 0.01)
        assert r.acceptance_decision == USE and r.probabilistic_decision == DISCARD
        assert r.eu_acceptance < 0 == r.eu_probabilistic

    @pytest.mark.parametrize("args", [(0, 0.1, 1, 1), (10, 0.0, 1, 1), (10, 1.0, 1, 1),
                                      (10, 0.1, 0, 1), (10, 0.1, 1, -1), (True, 0.1, 1, 1)])
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            expected_utility_comparison(*args)

    @settings(max_examples=1000)
    @given(st.integers(1, 10**6), st.floats(1e-6, 1 - 1e-6), st.floats(1e-3, 1e3),
           st.floats(1e-3, 1e3), st.floats(1e-4, 0.499))
    def test_probabilistic_policy_is_never_worse(self, N, p, gain, loss, eps):
        r = expected_utility_comparison(N, p, gain, loss, eps)
        assert r.eu_probabilistic >= r.eu_acceptance
        assert math.isclose(r.value_of_use, (1 - p) * gain - p * loss)
