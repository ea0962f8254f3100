"""The evidence base: certain sentences plus statistical statements.

Only the certain part takes part in entailment. It must stay consistent,
so an assert that would break it is rejected. The acceptance corpus built
on top may well be inconsistent; that is a different object.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from functools import cached_property
from typing import Union

from .errors import InconsistentEvidence, MissingItem
from .formula import Formula, Implies, atoms, substitute, terms
from .language import Program, Signature, StatisticalStatement, UniversalRule, ground_rules
from .logic import DEFAULT_ATOM_BUDGET, Reasoner, as_theory

EvidenceItem = Union[Formula, UniversalRule, StatisticalStatement]


@dataclass(frozen=True)
class EvidenceBase:
    signature: Signature
    facts: tuple[Formula, ...] = ()
    rules: tuple[UniversalRule, ...] = ()
    stats: tuple[StatisticalStatement, ...] = ()
    atom_budget: int = field(default=DEFAULT_ATOM_BUDGET, compare=False)

    @classmethod
    def from_program(cls, program: Program, atom_budget: int = DEFAULT_ATOM_BUDGET,
                     check: bool = True) -> "EvidenceBase":
        base = cls(program.signature, program.facts, program.rules, program.stats, atom_budget)
        if check and not base.reasoner.consistent():
            raise InconsistentEvidence("the certain part of the evidence is inconsistent")
        return base

    @cached_property
    def certain(self) -> tuple[Formula, ...]:
        return as_theory(self.facts + tuple(ground_rules(self.rules, self.signature.constants)))

    @cached_property
    def reasoner(self) -> Reasoner:
        return Reasoner(self.certain, self.atom_budget)

    @cached_property
    def rule_reasoner(self) -> Reasoner:
        """Ground rules only; the individual facts are left out."""
        return Reasoner(ground_rules(self.rules, self.signature.constants), self.atom_budget)

    @cached_property
    def _subsumption_memo(self) -> dict:
        return {}

    def entails(self, f: Formula, given=()) -> bool:
        return self.reasoner.entails(f, given)

    def consistent_with(self, *sentences: Formula) -> bool:
        return self.reasoner.satisfiable(sentences)

    def with_budget(self, atom_budget: int) -> "EvidenceBase":
        return dataclasses.replace(self, atom_budget=atom_budget)

    def __contains__(self, item) -> bool:
        return item in self.facts or item in self.rules or item in self.stats


def _check_item(E: EvidenceBase, item: EvidenceItem) -> None:
    sig = E.signature
    try:
        if isinstance(item, UniversalRule):
            sig.check(item.antecedent, item.variable)
            sig.check(item.consequent, item.variable)
        elif isinstance(item, StatisticalStatement):
            sig.check(item.target, item.variable)
            sig.check(item.reference, item.variable)
        else:
            sig.check(item)
    except ValueError as exc:
        raise ValueError(f"{item} is not well-formed: {exc}") from None


def assert_evidence(E: EvidenceBase, item: EvidenceItem) -> EvidenceBase:
    """A new base with ``item`` added; ``E`` is left unchanged.

    Raises InconsistentEvidence if a certain sentence (fact or rule)
    contradicts what E already contains.
    """
    _check_item(E, item)
    if isinstance(item, StatisticalStatement):
        return dataclasses.replace(E, stats=E.stats + (item,))
    if isinstance(item, UniversalRule):
        new = ground_rules([item], E.signature.constants)
        updated = dataclasses.replace(E, rules=E.rules + (item,))
    else:
        new = [item]
        updated = dataclasses.replace(E, facts=E.facts + (item,))
    if not E.reasoner.satisfiable(new):
        raise InconsistentEvidence(f"asserting {item} makes the evidence inconsistent")
    return updated


def _drop_last(items: tuple, item) -> tuple:
    for k in range(len(items) - 1, -1, -1):
        if items[k] == item:
            return items[:k] + items[k + 1:]
    raise MissingItem(f"{item} is not in the evidence base")


def retract_evidence(E: EvidenceBase, item: EvidenceItem) -> EvidenceBase:
    """A new base without (the most recent occurrence of) ``item``."""
    if isinstance(item, StatisticalStatement):
        return dataclasses.replace(E, stats=_drop_last(E.stats, item))
    if isinstance(item, UniversalRule):
        return dataclasses.replace(E, rules=_drop_last(E.rules, item))
    return dataclasses.replace(E, facts=_drop_last(E.facts, item))


def class_applies(E: EvidenceBase, reference: Formula, a: str, variable: str = "x") -> bool:
    """Does E's certain part prove that ``a`` belongs to the reference class?"""
    return E.entails(substitute(reference, variable, a))


def class_subsumes(E: EvidenceBase, r1: Formula, r2: Formula,
                   var1: str = "x", var2: str | None = None) -> bool:
    """Is every member of class ``r1`` provably a member of ``r2``?

    Checked for each declared constant against the ground rules alone.
    Facts about particular individuals are left out on purpose: with
    them, two classes would count as the same just because the one
    individual we know about happens to be in both.
    """
    var2 = var1 if var2 is None else var2
    key = (r1, var1, r2, var2)
    memo = E._subsumption_memo
    if key in memo:
        return memo[key]
    consts = E.signature.constants
    uniform = (
        not any(t != var1 for t in terms(r1))
        and not any(t != var2 for t in terms(r2))
        and not any(a.args for rule in E.rules for a in _rule_atoms(rule)
                    if any(t != rule.variable for t in a.args))
    )
    if uniform and consts:
        # Rules and classes mention no constants, so every constant behaves alike.
        consts = consts[:1]
    reasoner = E.rule_reasoner
    result = all(
        reasoner.entails(Implies(substitute(r1, var1, c), substitute(r2, var2, c)))
        for c in consts
    )
    memo[key] = result
    return result


def _rule_atoms(rule: UniversalRule):
    yield from atoms(rule.antecedent)
    yield from atoms(rule.consequent)


def strictly_more_specific(E: EvidenceBase, r1: Formula, r2: Formula,
                           var1: str = "x", var2: str | None = None) -> bool:
    var2 = var1 if var2 is None else var2
    return class_subsumes(E, r1, r2, var1, var2) and not class_subsumes(E, r2, r1, var2, var1)
