"""Builders for the canonical examples, each with a checkable manifest.

Every scenario carries its evidence stages, a query universe, the inputs
for the rival formalisms where they apply, and a list of expected outcomes.
The expectations are predicates over a :class:`ScenarioRun`, so checking
the manifest always exercises the live engines.

The qualitative frequencies of the examples ("almost all birds fly") are
rendered as the numeric constants below. Each builder accepts keyword
overrides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

from .acceptance import (
    MAX_CORE_INPUT,
    AcceptanceLevel,
    Corpus,
    CorpusReport,
    UpdateDiff,
    accepted_set,
    corpus_diff,
    corpus_report,
    serious_possibility,
)
from .ep import Candidate, candidates_for, evidential_probability
from .evidence import EvidenceBase, EvidenceItem, assert_evidence, strictly_more_specific
from .formula import And, Atom, Formula, Implies, Not, Or
from .language import (
    Default,
    ProbabilityInterval,
    Program,
    Signature,
    StatisticalStatement,
    UniversalRule,
)
from .logic import DEFAULT_ATOM_BUDGET
from .parser import format_program
from .rivals import (
    CONTRADICTION,
    DefaultTheory,
    DerivationTrace,
    Extension,
    MHSentence,
    compute_extensions,
    mh_derive,
    normally,
    plain,
    probably,
    verify_trace,
)

TWEETY_FLY_RATE = (0.95, 1.0)
NIXON_QUAKER_PACIFIST = (0.9, 1.0)
NIXON_REPUBLICAN_HAWK = (0.9, 1.0)
COHAB_WITH_SPOUSE = (0.99, 1.0)
COHAB_WITH_EMPLOYER = (0.99, 1.0)

# Extensions and traces are only computed for lotteries up to these sizes.
LOTTERY_MAX_EXTENSIONS = 8
LOTTERY_MAX_MH = 100

SCENARIO_NAMES = ("tweety", "nixon", "cohabitation", "lottery", "measurement")


def _a(pred: str, *args: str) -> Atom:
    return Atom(pred, tuple(args))


def _iv(pair) -> ProbabilityInterval:
    return ProbabilityInterval(*pair)


@dataclass(frozen=True)
class Stage:
    name: str
    evidence: EvidenceBase
    parent: Optional[str] = None
    added: Optional[EvidenceItem] = None


@dataclass(frozen=True)
class MHSetup:
    sigma0: tuple[MHSentence, ...]
    rules: tuple[int, ...]
    goals: tuple[MHSentence, ...]
    step_bound: int


@dataclass(frozen=True)
class ManifestEntry:
    assertion: str
    check: Callable[["ScenarioRun"], bool] = field(compare=False, repr=False)


@dataclass(frozen=True)
class ManifestResult:
    assertion: str
    passed: bool
    error: Optional[str] = None


@dataclass(frozen=True)
class Scenario:
    name: str
    params: tuple[tuple[str, object], ...]
    stages: tuple[Stage, ...]
    universe: tuple[Formula, ...]
    epsilon: float
    default_theory: Optional[DefaultTheory] = None
    mh: tuple[MHSetup, ...] = ()
    defaults: tuple[Default, ...] = ()
    manifest: tuple[ManifestEntry, ...] = ()

    def stage(self, name: str) -> Stage:
        for s in self.stages:
            if s.name == name:
                return s
        raise KeyError(f"scenario {self.name} has no stage {name!r}")

    @property
    def label(self) -> str:
        if not self.params:
            return self.name
        inner = ", ".join(f"{k}={v}" for k, v in self.params)
        return f"{self.name}({inner})"

    def knowledge_text(self, stage: Optional[str] = None) -> str:
        """The stage (by default the last) in the knowledge language."""
        st = self.stage(stage) if stage else self.stages[-1]
        E = st.evidence
        return format_program(E.signature, E.facts, E.rules, E.stats, self.defaults,
                              header=f"{self.label}, stage {st.name}")

    def universe_text(self) -> str:
        return "".join(f"{phi}\n" for phi in self.universe)


class ScenarioRun:
    """Lazily computed, memoized engine results for one scenario."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.epsilon = scenario.epsilon
        self._corpora: dict[str, Corpus] = {}
        self._reports: dict[str, CorpusReport] = {}

    def evidence(self, stage: str) -> EvidenceBase:
        return self.scenario.stage(stage).evidence

    def corpus(self, stage: str) -> Corpus:
        if stage not in self._corpora:
            E = self.evidence(stage)
            self._corpora[stage] = accepted_set(E, self.epsilon, self.scenario.universe)
        return self._corpora[stage]

    def report(self, stage: str) -> CorpusReport:
        if stage not in self._reports:
            self._reports[stage] = corpus_report(self.evidence(stage), self.epsilon,
                                                 self.scenario.universe, corpus=self.corpus(stage))
        return self._reports[stage]

    def diff(self, stage: str) -> UpdateDiff:
        parent = self.scenario.stage(stage).parent
        if parent is None:
            raise ValueError(f"stage {stage!r} has no parent to diff against")
        return corpus_diff(self.corpus(parent), self.corpus(stage))

    def interval(self, stage: str, phi: Formula) -> ProbabilityInterval:
        corpus = self.corpus(stage)
        if corpus.in_universe(phi):
            return corpus.interval_of(phi)
        return evidential_probability(self.evidence(stage), phi)[0]

    def accepted(self, stage: str, phi: Formula) -> bool:
        return AcceptanceLevel(self.epsilon).admits(self.interval(stage, phi))

    def candidates(self, stage: str, phi: Formula) -> list[Candidate]:
        return candidates_for(self.evidence(stage), phi)

    def serious_possibility(self, stage: str, phi: Formula) -> bool:
        return serious_possibility(self.evidence(stage), self.epsilon, self.scenario.universe,
                                   phi, corpus=self.corpus(stage))

    @cached_property
    def extensions(self) -> list[Extension]:
        if self.scenario.default_theory is None:
            return []
        return compute_extensions(self.scenario.default_theory)

    @cached_property
    def mh_traces(self) -> list[DerivationTrace]:
        return [mh_derive(m.sigma0, m.rules, m.goals, m.step_bound) for m in self.scenario.mh]

    def mh_replays(self) -> bool:
        return all(verify_trace(m.sigma0, m.rules, t)
                   for m, t in zip(self.scenario.mh, self.mh_traces))


def check_manifest(scenario: Scenario, run: Optional[ScenarioRun] = None) -> list[ManifestResult]:
    run = run or ScenarioRun(scenario)
    out = []
    for entry in scenario.manifest:
        try:
            out.append(ManifestResult(entry.assertion, bool(entry.check(run))))
        except Exception as exc:  # a crashing check is a failing check
            out.append(ManifestResult(entry.assertion, False, f"{type(exc).__name__}: {exc}"))
    return out


def _stages(program: Program, steps, atom_budget: int = DEFAULT_ATOM_BUDGET) -> tuple[Stage, ...]:
    """``steps`` is a list of (name, parent, item); the first has neither."""
    base = EvidenceBase.from_program(program, atom_budget)
    made: dict[str, Stage] = {}
    for name, parent, item in steps:
        if parent is None:
            E = base
        else:
            E = made[parent].evidence
            if item is not None:
                E = assert_evidence(E, item)
        made[name] = Stage(name, E, parent, item)
    return tuple(made.values())


def _entry(text: str, check) -> ManifestEntry:
    return ManifestEntry(text, check)


# -- tweety -----------------------------------------------------------------

def tweety(epsilon: float = 0.05, fly_rate=TWEETY_FLY_RATE) -> Scenario:
    t = "tweety"
    bird, penguin, flies = _a("bird", t), _a("penguin", t), _a("flies", t)
    sig = Signature((t,), (("bird", 1), ("penguin", 1), ("flies", 1)))
    program = Program(
        sig,
        rules=(UniversalRule("x", _a("penguin", "x"), _a("bird", "x")),
               UniversalRule("x", _a("penguin", "x"), Not(_a("flies", "x")))),
        stats=(StatisticalStatement("x", _a("flies", "x"), _a("bird", "x"), _iv(fly_rate)),),
    )
    stages = _stages(program, [("stage-0", None, None), ("stage-1", "stage-0", bird),
                               ("stage-2", "stage-1", penguin)])
    defaults = (Default(bird, (flies,), flies),)
    theory = DefaultTheory(stages[-1].evidence.certain, defaults)
    universe = (bird, penguin, flies, Not(flies))
    lo = fly_rate[0]
    manifest = (
        _entry("stage-0: flies(tweety) has interval [0, 1]",
               lambda r: r.interval("stage-0", flies) == ProbabilityInterval(0.0, 1.0)),
        _entry("stage-1: one direct candidate for flies(tweety), from the bird class",
               lambda r: [(c.source.reference, c.derivation) for c in r.candidates("stage-1", flies)]
               == [(_a("bird", "x"), "direct")]),
        _entry(f"stage-1: flies(tweety) has interval [{lo:g}, 1] and is accepted",
               lambda r: r.interval("stage-1", flies) == _iv(fly_rate) and r.accepted("stage-1", flies)),
        _entry("penguin is a strictly more specific class than bird",
               lambda r: strictly_more_specific(r.evidence("stage-2"), _a("penguin", "x"), _a("bird", "x"))),
        _entry("stage-2: flies(tweety) has interval [0, 0]",
               lambda r: r.interval("stage-2", flies) == ProbabilityInterval(0.0, 0.0)),
        _entry("stage-2 diff: retracted {flies(tweety)}, added {~flies(tweety), penguin(tweety)}",
               lambda r: r.diff("stage-2").retracted == {flies}
               and r.diff("stage-2").added == {Not(flies), penguin}),
        _entry("stage-2: corpus is exactly {bird(tweety), penguin(tweety), ~flies(tweety)}",
               lambda r: set(r.corpus("stage-2").sentences) == {bird, penguin, Not(flies)}),
        _entry("stage-2: corpus is jointly consistent",
               lambda r: r.report("stage-2").jointly_consistent),
        _entry("default theory at stage-2 has exactly 1 extension, without flies(tweety)",
               lambda r: len(r.extensions) == 1 and not r.extensions[0].contains(flies)),
    )
    return Scenario("tweety", (), stages, universe, epsilon, theory, (), defaults, manifest)


# -- nixon ------------------------------------------------------------------

def nixon(epsilon: float = 0.1, quaker_rate=NIXON_QUAKER_PACIFIST,
          republican_rate=NIXON_REPUBLICAN_HAWK) -> Scenario:
    n = "nixon"
    quaker, republican, pacifist = _a("quaker", n), _a("republican", n), _a("pacifist", n)
    sig = Signature((n,), (("quaker", 1), ("republican", 1), ("pacifist", 1)))
    program = Program(sig, stats=(
        StatisticalStatement("x", _a("pacifist", "x"), _a("quaker", "x"), _iv(quaker_rate)),
        StatisticalStatement("x", Not(_a("pacifist", "x")), _a("republican", "x"), _iv(republican_rate)),
    ))
    stages = _stages(program, [
        ("standard", None, None),
        ("quaker", "standard", quaker),
        ("republican", "standard", republican),
        ("both", "quaker", republican),
    ])
    defaults = (Default(quaker, (pacifist,), pacifist),
                Default(republican, (Not(pacifist),), Not(pacifist)))
    theory = DefaultTheory(stages[-1].evidence.certain, defaults)
    universe = (quaker, republican, pacifist, Not(pacifist))
    manifest = (
        _entry("quaker: pacifist(nixon) accepted",
               lambda r: r.accepted("quaker", pacifist)),
        _entry("republican: ~pacifist(nixon) accepted",
               lambda r: r.accepted("republican", Not(pacifist))),
        _entry("both: two candidates for pacifist(nixon), quaker and republican",
               lambda r: [c.source.reference for c in r.candidates("both", pacifist)]
               == [_a("quaker", "x"), _a("republican", "x")]),
        _entry("both: pacifist(nixon) has interval exactly [0, 1]",
               lambda r: r.interval("both", pacifist) == ProbabilityInterval(0.0, 1.0)),
        _entry("both: neither pacifist(nixon) nor ~pacifist(nixon) accepted",
               lambda r: not r.accepted("both", pacifist) and not r.accepted("both", Not(pacifist))),
        _entry("both diff (from quaker): retracted {pacifist(nixon)}",
               lambda r: r.diff("both").retracted == {pacifist}),
        _entry("default theory has exactly 2 extensions",
               lambda r: len(r.extensions) == 2),
    )
    return Scenario("nixon", (), stages, universe, epsilon, theory, (), defaults, manifest)


# -- cohabitation -----------------------------------------------------------

def cohabitation(epsilon: float = 0.01, spouse_rate=COHAB_WITH_SPOUSE,
                 employer_rate=COHAB_WITH_EMPLOYER) -> Scenario:
    j = "john"
    preds = ("married", "employed", "spouse_in_toronto", "employer_in_vancouver",
             "home_with_spouse", "home_with_employer", "ht_toronto", "ht_vancouver",
             "likes_hockey")
    sig = Signature((j,), tuple((p, 1) for p in preds))
    x = lambda p: _a(p, "x")  # noqa: E731
    at = lambda p: _a(p, j)  # noqa: E731
    program = Program(
        sig,
        facts=(at("married"), at("employed"), at("spouse_in_toronto"), at("employer_in_vancouver")),
        rules=(
            UniversalRule("x", And((x("home_with_spouse"), x("spouse_in_toronto"))), x("ht_toronto")),
            UniversalRule("x", And((x("home_with_employer"), x("employer_in_vancouver"))),
                          x("ht_vancouver")),
            UniversalRule("x", x("ht_toronto"), Not(x("ht_vancouver"))),
        ),
        stats=(
            StatisticalStatement("x", x("home_with_spouse"), x("married"), _iv(spouse_rate)),
            StatisticalStatement("x", x("home_with_employer"), x("employed"), _iv(employer_rate)),
        ),
    )
    stages = _stages(program, [("standard", None, None),
                               ("hockey", "standard", at("likes_hockey"))])
    defaults = (
        Default(at("married"), (at("home_with_spouse"),), at("home_with_spouse")),
        Default(at("employed"), (at("home_with_employer"),), at("home_with_employer")),
    )
    theory = DefaultTheory(stages[0].evidence.certain, defaults)
    toronto, vancouver = at("ht_toronto"), at("ht_vancouver")
    either = Or((toronto, vancouver))
    universe = (toronto, vancouver, either, at("home_with_spouse"), at("home_with_employer"))
    lo = min(spouse_rate[0], employer_rate[0])
    manifest = (
        _entry("two weakened candidates for the disjunction (married, employed)",
               lambda r: [(c.source.reference, c.derivation) for c in r.candidates("standard", either)]
               == [(x("married"), "weakened"), (x("employed"), "weakened")]),
        _entry(f"ht_toronto(john) v ht_vancouver(john) accepted with interval [{lo:g}, 1]",
               lambda r: r.accepted("standard", either)
               and r.interval("standard", either) == ProbabilityInterval(lo, 1.0)),
        _entry("neither ht_toronto(john) nor ht_vancouver(john) accepted",
               lambda r: not r.accepted("standard", toronto) and not r.accepted("standard", vancouver)),
        _entry("default theory has exactly 2 extensions: one hometown Toronto, one Vancouver",
               lambda r: len(r.extensions) == 2
               and sorted((e.contains(toronto), e.contains(vancouver)) for e in r.extensions)
               == [(False, True), (True, False)]),
        _entry("asserting likes_hockey(john) changes nothing",
               lambda r: not r.diff("hockey").added and not r.diff("hockey").retracted
               and not r.diff("hockey").changed),
    )
    return Scenario("cohabitation", (), stages, universe, epsilon, theory, (), defaults, manifest)


# -- lottery ----------------------------------------------------------------

def lottery_epsilon(n: int) -> float:
    """Default threshold: loose enough that each single ticket is a loser."""
    if n >= 20:
        return 0.05
    if n >= 3:
        return 1.0 / n
    return 0.25


def lottery(n: int = 100, epsilon: Optional[float] = None) -> Scenario:
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise ValueError(f"a lottery needs at least 2 tickets, got {n!r}")
    epsilon = lottery_epsilon(n) if epsilon is None else epsilon
    tickets = tuple(f"t{j}" for j in range(1, n + 1))
    sig = Signature(tickets, (("ticket", 1), ("loses", 1), ("winner_by", 1)))
    loses = [_a("loses", t) for t in tickets]
    some_wins = Or(tuple(Not(l) for l in loses))
    # At most one winner, as a ladder: winner_by(tj) means some ticket up to j wins.
    ladder = [Implies(Not(loses[0]), _a("winner_by", tickets[0]))]
    for k in range(1, n):
        prev, cur = _a("winner_by", tickets[k - 1]), _a("winner_by", tickets[k])
        ladder += [Implies(Not(loses[k]), cur), Implies(prev, cur), Implies(prev, loses[k])]
    rate = (n - 1) / n
    program = Program(
        sig,
        facts=tuple(_a("ticket", t) for t in tickets) + (some_wins,) + tuple(ladder),
        stats=(StatisticalStatement("x", _a("loses", "x"), _a("ticket", "x"),
                                    ProbabilityInterval(rate, rate)),),
    )
    budget = max(DEFAULT_ATOM_BUDGET, 3 * n + 16)
    stages = _stages(program, [("standard", None, None)], budget)
    all_lose = And(tuple(loses))
    universe = tuple(loses) + (some_wins, all_lose)
    defaults = tuple(Default(None, (l,), l) for l in loses)
    theory = None
    if n <= LOTTERY_MAX_EXTENSIONS:
        theory = DefaultTheory(stages[0].evidence.certain, defaults, budget)
    mh = ()
    if n <= LOTTERY_MAX_MH:
        sigma0 = (plain(Not(all_lose)), plain(some_wins), *map(plain, ladder), *map(normally, loses))
        bound = 4 * n + 10
        mh = (MHSetup(sigma0, (1, 2, 3, 4, 5), (probably(all_lose), probably(Not(all_lose))), bound),
              MHSetup(sigma0, (1, 2, 3, 4, 5, 6), (CONTRADICTION,), bound))

    point = ProbabilityInterval(rate, rate)
    level = AcceptanceLevel(epsilon)
    S = "standard"
    entries = []
    if level.admits(point):
        entries += [
            _entry(f"all {n} loses(tj) accepted with interval [{rate:.6g}, {rate:.6g}]",
                   lambda r: all(r.interval(S, l) == point and r.accepted(S, l) for l in loses)),
            _entry("some ticket wins: accepted with interval [1, 1]",
                   lambda r: r.interval(S, some_wins) == ProbabilityInterval(1.0, 1.0)),
            _entry("all tickets lose: rejected with interval [0, 0]",
                   lambda r: r.interval(S, all_lose) == ProbabilityInterval(0.0, 0.0)
                   and not r.accepted(S, all_lose)),
            _entry("corpus is jointly inconsistent",
                   lambda r: not r.report(S).jointly_consistent),
            _entry("no single-premise closure violations",
                   lambda r: r.report(S).single_premise_closure_violations == ()),
            _entry("K is not closed under conjunction (all tickets lose is not accepted)",
                   lambda r: not r.report(S).conjunction_closure),
        ]
        if (n + 1) + len(stages[0].evidence.certain) <= MAX_CORE_INPUT:
            entries.append(_entry(f"minimal inconsistent core has exactly {n + 1} sentences",
                                  lambda r: [len(c) for c in r.report(S).cores] == [n + 1]))
    else:
        entries += [
            _entry(f"no loses(tj) accepted at epsilon={epsilon:g}",
                   lambda r: not any(r.accepted(S, l) for l in loses)),
            _entry("corpus is jointly consistent", lambda r: r.report(S).jointly_consistent),
        ]
    if theory is not None:
        entries += [
            _entry(f"default theory has exactly {n} extensions",
                   lambda r: len(r.extensions) == n),
            _entry(f"each extension holds exactly {n - 1} loses(tj) and one winner",
                   lambda r: all(sum(e.contains(l) for l in loses) == n - 1 for e in r.extensions)),
        ]
    if mh:
        entries += [
            _entry("rules 1-5 derive Probably(all lose) and Probably(~all lose)",
                   lambda r: not r.mh_traces[0].unreached),
            _entry("rule 6 yields a flagged plain contradiction",
                   lambda r: not r.mh_traces[1].unreached and r.mh_traces[1].inconsistent),
            _entry("both traces replay step by step", lambda r: r.mh_replays()),
        ]
    return Scenario("lottery", (("n", n),), stages, universe, epsilon, theory, mh, defaults,
                    tuple(entries))


# -- measurement ------------------------------------------------------------

def batch_error_lower(N: int, p: float) -> float:
    """1 - (1 - p)**N: the chance that at least one of N measurements errs.

    Written as -expm1(N * log1p(-p)) to keep precision for small p. The
    independence of errors is assumed here and nowhere else.
    """
    return -math.expm1(N * math.log1p(-p))


@dataclass(frozen=True)
class MeasurementModel:
    N: int
    tolerance: float
    error_prob: float

    def __post_init__(self):
        if isinstance(self.N, bool) or not isinstance(self.N, int) or self.N < 1:
            raise ValueError(f"need at least one measurement, got {self.N!r}")
        if not 0.0 < self.error_prob < 1.0:
            raise ValueError(f"error probability must lie in (0, 1), got {self.error_prob!r}")
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance!r}")

    @property
    def constants(self) -> tuple[str, ...]:
        return tuple(f"m{i}" for i in range(1, self.N + 1))

    @property
    def batch_interval(self) -> ProbabilityInterval:
        return ProbabilityInterval(batch_error_lower(self.N, self.error_prob), 1.0)

    def all_within(self) -> Formula:
        return And(tuple(_a("within", m) for m in self.constants))

    def link(self) -> tuple[Formula, Formula]:
        """some_error(batch) holds exactly when not every measurement is within tolerance."""
        err, ok = _a("some_error", "batch"), self.all_within()
        return Implies(err, Not(ok)), Implies(Not(ok), err)


def measurement(N: int = 10_000, tol: float = 0.05, p: float = 0.001,
                epsilon: float = 0.01) -> Scenario:
    model = MeasurementModel(N, tol, p)
    ms = model.constants
    sig = Signature(ms + ("batch",), (("measurement", 1), ("batch", 1), ("within", 1),
                                      ("some_error", 1)))
    program = Program(
        sig,
        facts=tuple(_a("measurement", m) for m in ms) + (_a("batch", "batch"),) + model.link(),
        stats=(
            StatisticalStatement("x", _a("within", "x"), _a("measurement", "x"),
                                 ProbabilityInterval(1.0 - p, 1.0)),
            StatisticalStatement("x", _a("some_error", "x"), _a("batch", "x"), model.batch_interval),
        ),
    )
    budget = max(DEFAULT_ATOM_BUDGET, 3 * N + 16)
    stages = _stages(program, [("standard", None, None)], budget)
    within = [_a("within", m) for m in ms]
    some_error = _a("some_error", "batch")
    universe = tuple(within) + (some_error,)
    probe = ms[min(3, N) - 1]
    errs = Not(_a("within", probe))
    all_within = model.all_within()
    level = AcceptanceLevel(epsilon)
    L = model.batch_interval.lower
    S = "standard"
    entries = []
    single = level.admits(ProbabilityInterval(1.0 - p, 1.0))
    batch = level.admits(model.batch_interval)
    entries.append(_entry(
        f"every within(mi) {'accepted' if single else 'rejected'} (1 - p = {1 - p:g})",
        lambda r: all(r.accepted(S, w) == single for w in within)))
    entries.append(_entry(
        f"some_error(batch) {'accepted' if batch else 'rejected'} with lower bound {L:.12g}",
        lambda r: r.accepted(S, some_error) == batch and r.interval(S, some_error).lower == L))
    if single and batch:
        entries += [
            _entry("corpus is jointly inconsistent",
                   lambda r: not r.report(S).jointly_consistent),
            _entry(f"{errs} is not a serious possibility",
                   lambda r: not r.serious_possibility(S, errs)),
            _entry("all measurements within tolerance is not a serious possibility",
                   lambda r: not r.serious_possibility(S, all_within)),
        ]
    params = (("N", N), ("tol", tol), ("p", p))
    return Scenario("measurement", params, stages, universe, epsilon, None, (), (), tuple(entries))


_BUILDERS = {
    "tweety": tweety,
    "nixon": nixon,
    "cohabitation": cohabitation,
    "lottery": lottery,
    "measurement": measurement,
}


def build_scenario(name: str, epsilon: Optional[float] = None, **params) -> Scenario:
    """Build a named scenario; ``epsilon=None`` keeps the scenario's own default."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise ValueError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIO_NAMES)}") from None
    if epsilon is not None:
        AcceptanceLevel(epsilon)
        params["epsilon"] = epsilon
    return builder(**params)


# -- expected utility -------------------------------------------------------

USE, DISCARD = "USE", "DISCARD"


@dataclass(frozen=True)
class EUComparison:
    N: int
    p: float
    gain: float
    loss: float
    epsilon: float
    value_of_use: float
    acceptance_decision: str
    probabilistic_decision: str
    eu_acceptance: float
    eu_probabilistic: float

    @property
    def agree(self) -> bool:
        return self.acceptance_decision == self.probabilistic_decision


def expected_utility_comparison(N: int, p: float, gain: float, loss: float,
                                epsilon: float = 0.01) -> EUComparison:
    """Per-measurement USE/DISCARD under the two policies, and their totals.

    USE is worth (1 - p) * gain - p * loss in expectation; DISCARD is worth
    0. The acceptance policy uses a value iff "within tolerance" is
    accepted; the probabilistic policy uses it iff its expectation is
    positive.
    """
    if isinstance(N, bool) or not isinstance(N, int) or N < 1:
        raise ValueError(f"N must be a positive integer, got {N!r}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p!r}")
    if not (gain > 0 and loss > 0):
        raise ValueError("gain and loss must both be positive")
    level = AcceptanceLevel(epsilon)
    value = (1.0 - p) * gain - p * loss
    acc = USE if level.admits(ProbabilityInterval(1.0 - p, 1.0)) else DISCARD
    prob = USE if value > 0 else DISCARD
    total = lambda d: N * value if d == USE else 0.0  # noqa: E731
    return EUComparison(N, p, gain, loss, epsilon, value, acc, prob, total(acc), total(prob))
