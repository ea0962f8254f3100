"""Evidential probability: an interval for a ground sentence, relative to E.

The evaluator first asks whether the certain evidence settles the sentence
outright. If not, it collects candidate intervals from statistical
statements whose reference class provably contains the subject. It drops
candidates overruled by a strictly more specific class, then takes the
interval hull of what is left.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .evidence import EvidenceBase, class_applies, strictly_more_specific
from .formula import Formula, Not, normal_key
from .language import (
    CERTAIN,
    IGNORANCE,
    IMPOSSIBLE,
    ProbabilityInterval,
    StatisticalStatement,
)

DIRECT, WEAKENED, NEGATED = "direct", "weakened", "negated"


@dataclass(frozen=True)
class Candidate:
    source: StatisticalStatement
    subject: str
    interval: ProbabilityInterval
    derivation: str

    def describe(self) -> str:
        s = self.source
        return f"%{s.variable}({s.target} | {s.reference})"


@dataclass(frozen=True)
class TraceStep:
    kind: str
    subject: str
    outcome: str
    interval: Optional[ProbabilityInterval] = None

    def line(self) -> str:
        text = f"{self.kind}: {self.subject} => {self.outcome}"
        if self.interval is not None:
            text += f" {format_interval(self.interval)}"
        return text

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "subject": self.subject, "outcome": self.outcome}
        if self.interval is not None:
            out["interval"] = interval_dict(self.interval)
        return out


@dataclass(frozen=True)
class EvaluationTrace:
    query: Formula
    steps: tuple[TraceStep, ...]
    result: ProbabilityInterval

    def lines(self) -> list[str]:
        return [step.line() for step in self.steps]

    def to_dicts(self) -> list[dict]:
        return [step.to_dict() for step in self.steps]


def format_prob(x: float) -> str:
    """Six decimal places, half-even rounding of the shortest decimal form."""
    from decimal import ROUND_HALF_EVEN, Decimal

    return str(Decimal(repr(float(x))).quantize(Decimal("0.000001"), rounding=ROUND_HALF_EVEN))


def format_interval(iv: ProbabilityInterval) -> str:
    return f"[{format_prob(iv.lower)}, {format_prob(iv.upper)}]"


def interval_dict(iv: ProbabilityInterval) -> dict:
    return {"lower": format_prob(iv.lower), "upper": format_prob(iv.upper)}


def subject_of(E: EvidenceBase, phi: Formula) -> Optional[str]:
    """The constant of ``phi`` declared first, or None for a constant-free sentence."""
    consts = E.signature.ground_atoms(phi)
    return consts[0] if consts else None


def _candidates(E: EvidenceBase, phi: Formula, log: list[TraceStep]) -> list[Candidate]:
    a = subject_of(E, phi)
    if a is None:
        log.append(TraceStep("subject", str(phi), "none (no constants)"))
        return []
    log.append(TraceStep("subject", str(phi), a))
    key = normal_key(phi)
    neg_key = normal_key(Not(phi))
    out = []
    for stat in E.stats:
        label = f"%{stat.variable}({stat.target} | {stat.reference})"
        if not class_applies(E, stat.reference, a, stat.variable):
            log.append(TraceStep("class", label, f"does not apply to {a}"))
            continue
        target = stat.target_for(a)
        tkey = normal_key(target)
        if not E.consistent_with(target):
            log.append(TraceStep("skip", label, f"{target} contradicts the evidence"))
            continue
        if tkey == key:
            cand = Candidate(stat, a, stat.interval, DIRECT)
        elif tkey == neg_key:
            cand = Candidate(stat, a, stat.interval.complement(), NEGATED)
        elif E.entails(phi, given=[target]):
            cand = Candidate(stat, a, ProbabilityInterval(stat.interval.lower, 1.0), WEAKENED)
        elif E.entails(Not(phi), given=[target]):
            cand = Candidate(stat, a, ProbabilityInterval(0.0, 1.0 - stat.interval.lower), NEGATED)
        else:
            log.append(TraceStep("skip", label, f"{target} bears on neither {phi} nor its negation"))
            continue
        log.append(TraceStep("candidate", label, cand.derivation, cand.interval))
        out.append(cand)
    return out


def candidates_for(E: EvidenceBase, phi: Formula) -> list[Candidate]:
    """Candidate intervals for ``phi`` from the statistics in E.

    Direct: the instantiated target is ``phi`` up to literal normalization
    (its syntactic negation gives the complementary interval). Weakened:
    the target plus E entails ``phi``, giving [lower, 1]. Negated: the
    target plus E entails the negation, giving [0, 1 - lower].
    """
    return _candidates(E, phi, [])


def _prune(E: EvidenceBase, cands: Sequence[Candidate]):
    kept, pairs = [], []
    for c2 in cands:
        winner = None
        for c1 in cands:
            if c1 is c2 or c1.interval.contains(c2.interval):
                continue
            s1, s2 = c1.source, c2.source
            if strictly_more_specific(E, s1.reference, s2.reference, s1.variable, s2.variable):
                winner = c1
                break
        if winner is None:
            kept.append(c2)
        else:
            pairs.append((c2, winner))
    return kept, pairs


def prune_specificity(E: EvidenceBase, candidates: Sequence[Candidate]) -> list[Candidate]:
    """Drop each candidate overruled by a strictly more specific one.

    A more specific class only overrules when its interval is not a
    superset of the broader one; a vaguer specific class does not erase
    sharper general knowledge. Each drop is decided against the full input
    list, so the surviving set does not depend on input order.
    """
    return _prune(E, candidates)[0]


def interval_hull(intervals: Iterable[ProbabilityInterval]) -> ProbabilityInterval:
    intervals = list(intervals)
    if not intervals:
        raise ValueError("interval_hull of an empty collection")
    return ProbabilityInterval(min(i.lower for i in intervals), max(i.upper for i in intervals))


def evidential_probability(E: EvidenceBase, phi: Formula) -> tuple[ProbabilityInterval, EvaluationTrace]:
    log: list[TraceStep] = []
    if E.entails(phi):
        log.append(TraceStep("entails", str(phi), "true"))
        result, rule = CERTAIN, "entailed"
    else:
        log.append(TraceStep("entails", str(phi), "false"))
        refuted = E.entails(Not(phi))
        log.append(TraceStep("entails", str(Not(phi)), "true" if refuted else "false"))
        if refuted:
            result, rule = IMPOSSIBLE, "refuted"
        else:
            cands = _candidates(E, phi, log)
            kept, pairs = _prune(E, cands)
            for dropped, by in pairs:
                log.append(TraceStep("pruned", dropped.describe(), f"by {by.describe()}",
                                     dropped.interval))
            result = interval_hull(c.interval for c in kept) if kept else IGNORANCE
            rule = "hull"
    log.append(TraceStep("result", str(phi), rule, result))
    return result, EvaluationTrace(phi, tuple(log), result)
