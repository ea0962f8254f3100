"""The acceptance corpus K and the questions one can ask of it.

A sentence is accepted when the lower end of its evidential probability
reaches ``1 - epsilon``. K is always computed over an explicit, finite
query universe. It is not closed under conjunction and may be jointly
inconsistent; the report functions here measure exactly that.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .ep import EvaluationTrace, evidential_probability
from .errors import ConsistentTheory
from .evidence import EvidenceBase, EvidenceItem, assert_evidence
from .formula import And, Formula, Not, normal_key
from .language import ProbabilityInterval
from .logic import Reasoner, as_theory, minimal_inconsistent_subsets, reasoner_for

DEFAULT_EPSILON = 0.01
# Slack for threshold comparisons, so that e.g. 2/3 counts as reaching 1 - 1/3.
THRESHOLD_SLACK = 1e-12
# Above this many sentences, core extraction is skipped in reports.
MAX_CORE_INPUT = 5000


@dataclass(frozen=True)
class AcceptanceLevel:
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        if not (0.0 < self.epsilon < 0.5):
            raise ValueError(f"epsilon must lie strictly between 0 and 0.5, got {self.epsilon}")

    @property
    def threshold(self) -> float:
        return 1.0 - self.epsilon

    def admits(self, interval: ProbabilityInterval) -> bool:
        return interval.lower >= self.threshold - THRESHOLD_SLACK


def _level(epsilon) -> AcceptanceLevel:
    return epsilon if isinstance(epsilon, AcceptanceLevel) else AcceptanceLevel(epsilon)


def is_accepted(E: EvidenceBase, phi: Formula, epsilon: float = DEFAULT_EPSILON) -> bool:
    interval, _ = evidential_probability(E, phi)
    return _level(epsilon).admits(interval)


@dataclass(frozen=True)
class Evaluation:
    sentence: Formula
    interval: ProbabilityInterval
    trace: EvaluationTrace


@dataclass(frozen=True)
class Corpus:
    """Accepted members of a query universe, with every evaluation kept for audit."""

    epsilon: float
    universe: tuple[Formula, ...]
    evaluations: tuple[Evaluation, ...]
    entries: tuple[Evaluation, ...] = field(init=False)

    def __post_init__(self):
        level = _level(self.epsilon)
        object.__setattr__(self, "entries",
                           tuple(e for e in self.evaluations if level.admits(e.interval)))

    @cached_property
    def sentences(self) -> tuple[Formula, ...]:
        return tuple(e.sentence for e in self.entries)

    @cached_property
    def _by_sentence(self) -> dict[Formula, Evaluation]:
        return {e.sentence: e for e in self.evaluations}

    @cached_property
    def _members(self) -> frozenset:
        return frozenset(self.sentences)

    def evaluation_of(self, phi: Formula) -> Evaluation:
        return self._by_sentence[phi]

    def interval_of(self, phi: Formula) -> ProbabilityInterval:
        return self._by_sentence[phi].interval

    def in_universe(self, phi: Formula) -> bool:
        return phi in self._by_sentence

    def __contains__(self, phi: Formula) -> bool:
        return phi in self._members

    def __len__(self) -> int:
        return len(self.entries)


def accepted_set(E: EvidenceBase, epsilon: float, universe: Iterable[Formula]) -> Corpus:
    level = _level(epsilon)
    universe = as_theory(universe)
    evals = []
    for phi in universe:
        interval, trace = evidential_probability(E, phi)
        evals.append(Evaluation(phi, interval, trace))
    return Corpus(level.epsilon, universe, tuple(evals))


@dataclass(frozen=True)
class UpdateDiff:
    added: frozenset
    retracted: frozenset
    unchanged: int
    changed: frozenset = frozenset()

    def __post_init__(self):
        if self.added & self.retracted:
            raise ValueError("a sentence cannot be both added and retracted")


def corpus_diff(before: Corpus, after: Corpus) -> UpdateDiff:
    old, new = set(before.sentences), set(after.sentences)
    old_iv = {e.sentence: e.interval for e in before.evaluations}
    changed = frozenset(
        e.sentence for e in after.evaluations
        if e.sentence in old_iv and old_iv[e.sentence] != e.interval
    )
    return UpdateDiff(frozenset(new - old), frozenset(old - new), len(old & new), changed)


def update_diff(E: EvidenceBase, new_item: EvidenceItem, epsilon: float,
                universe: Iterable[Formula]) -> UpdateDiff:
    """What asserting ``new_item`` adds to and removes from K.

    Every universe sentence is evaluated again from scratch after the
    update; nothing is carried over incrementally.
    """
    universe = as_theory(universe)
    before = accepted_set(E, epsilon, universe)
    after = accepted_set(assert_evidence(E, new_item), epsilon, universe)
    return corpus_diff(before, after)


def serious_possibility(E: EvidenceBase, epsilon: float, universe: Iterable[Formula],
                        phi: Formula, corpus: Optional[Corpus] = None) -> bool:
    """False iff some single member of K contradicts ``phi`` given E.

    Members are tested one at a time, never jointly: K itself may be
    inconsistent, and then everything would contradict it as a whole.
    """
    if corpus is None:
        corpus = accepted_set(E, epsilon, universe)
    members = corpus.sentences
    if not members:
        return True
    neg = normal_key(Not(phi))
    if any(normal_key(k) == neg for k in members):
        return False
    if not E.consistent_with(phi):
        return False
    with_phi = Reasoner(E.certain + (phi,), E.atom_budget)
    return all(with_phi.satisfiable([k]) for k in members)


@dataclass(frozen=True)
class ConjunctionCheck:
    conjunction: Formula
    accepted: bool


@dataclass(frozen=True)
class CorpusReport:
    corpus: Corpus
    jointly_consistent: bool
    cores: Optional[tuple[tuple[Formula, ...], ...]]
    single_premise_closure_violations: tuple[tuple[Formula, Formula], ...]
    conjunctions: tuple[ConjunctionCheck, ...]

    @property
    def conjunction_closure(self) -> bool:
        """True iff every universe conjunction of accepted members is itself accepted."""
        return all(c.accepted for c in self.conjunctions)


def corpus_report(E: EvidenceBase, epsilon: float, universe: Iterable[Formula],
                  core_limit: int = 1, corpus: Optional[Corpus] = None,
                  extend_with: Sequence[Formula] = ()) -> CorpusReport:
    """Structure of K: joint consistency, cores, and closure failures.

    ``extend_with`` optionally adds candidate consequences to the universe
    before the closure check; it is empty by default, so only the declared
    universe is examined.
    """
    universe = as_theory(tuple(universe) + tuple(extend_with))
    if corpus is None or extend_with:
        corpus = accepted_set(E, epsilon, universe)
    members = corpus.sentences
    consistent = E.consistent_with(*members)

    cores = None
    if consistent:
        cores = ()
    elif len(members) + len(E.certain) <= MAX_CORE_INPUT:
        try:
            found = minimal_inconsistent_subsets(members + E.certain, core_limit,
                                                 max(E.atom_budget, len(members)))
            cores = tuple(tuple(c) for c in found)
        except ConsistentTheory:  # pragma: no cover - ruled out just above
            cores = ()

    accepted = set(members)
    rejected = [phi for phi in universe if phi not in accepted]
    violations = []
    for phi in members:
        logic = reasoner_for((phi,), E.atom_budget)
        for psi in rejected:
            if logic.entails(psi):
                violations.append((phi, psi))

    conjunctions = tuple(
        ConjunctionCheck(phi, phi in accepted)
        for phi in universe
        if isinstance(phi, And) and all(p in accepted for p in phi.parts)
    )
    return CorpusReport(corpus, consistent, cores, tuple(violations), conjunctions)
