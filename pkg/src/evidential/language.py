"""Declarations of the knowledge language: signature, rules, statistics, defaults."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

from .formula import Atom, Formula, Implies, atoms, substitute, terms


@dataclass(frozen=True)
class Signature:
    constants: tuple[str, ...] = ()
    predicates: tuple[tuple[str, int], ...] = ()

    @cached_property
    def _const_index(self) -> dict[str, int]:
        return {c: i for i, c in enumerate(self.constants)}

    @cached_property
    def _arity(self) -> dict[str, int]:
        return dict(self.predicates)

    def has_constant(self, name: str) -> bool:
        return name in self._const_index

    def order(self, name: str) -> int:
        return self._const_index[name]

    def arity(self, pred: str) -> Optional[int]:
        return self._arity.get(pred)

    def with_constants(self, names: Iterable[str]) -> "Signature":
        new = [c for c in dict.fromkeys(names) if c not in self._const_index]
        return Signature(self.constants + tuple(new), self.predicates)

    def with_predicates(self, preds: Iterable[tuple[str, int]]) -> "Signature":
        extra = []
        for name, n in preds:
            known = self.arity(name)
            if known is None and name not in dict(extra):
                extra.append((name, n))
            elif known is not None and known != n:
                raise ValueError(f"predicate {name} has arity {known}, not {n}")
        return Signature(self.constants, self.predicates + tuple(extra))

    def check(self, f: Formula, variable: str | None = None) -> None:
        """Raise ValueError unless every atom of ``f`` is well-formed here."""
        for a in atoms(f):
            n = self.arity(a.pred)
            if n is None:
                raise ValueError(f"undeclared predicate {a.pred}")
            if n != len(a.args):
                raise ValueError(f"predicate {a.pred} has arity {n}, used with {len(a.args)}")
            for t in a.args:
                if t != variable and not self.has_constant(t):
                    raise ValueError(f"undeclared constant {t}")

    def ground_atoms(self, f: Formula) -> list[str]:
        """Constants of ``f`` in declaration order."""
        return sorted((t for t in terms(f) if self.has_constant(t)), key=self.order)


@dataclass(frozen=True)
class ProbabilityInterval:
    lower: float
    upper: float

    def __post_init__(self):
        if not (0.0 <= self.lower <= self.upper <= 1.0):
            raise ValueError(f"invalid probability interval [{self.lower}, {self.upper}]")

    def contains(self, other: "ProbabilityInterval") -> bool:
        """Superset test: does this interval include all of ``other``?"""
        return self.lower <= other.lower and other.upper <= self.upper

    def complement(self) -> "ProbabilityInterval":
        return ProbabilityInterval(1.0 - self.upper, 1.0 - self.lower)

    def __str__(self) -> str:
        return f"[{self.lower:g}, {self.upper:g}]"


CERTAIN = ProbabilityInterval(1.0, 1.0)
IMPOSSIBLE = ProbabilityInterval(0.0, 0.0)
IGNORANCE = ProbabilityInterval(0.0, 1.0)


@dataclass(frozen=True)
class UniversalRule:
    variable: str
    antecedent: Formula
    consequent: Formula

    def ground(self, const: str) -> Formula:
        return Implies(
            substitute(self.antecedent, self.variable, const),
            substitute(self.consequent, self.variable, const),
        )

    def __str__(self) -> str:
        ante = self.antecedent
        ante_text = f"({ante})" if isinstance(ante, Implies) else str(ante)
        return f"rule all {self.variable}: {ante_text} -> {self.consequent}."


@dataclass(frozen=True)
class StatisticalStatement:
    """``%var(target | reference) in [lower, upper]``."""

    variable: str
    target: Formula
    reference: Formula
    interval: ProbabilityInterval

    def target_for(self, const: str) -> Formula:
        return substitute(self.target, self.variable, const)

    def reference_for(self, const: str) -> Formula:
        return substitute(self.reference, self.variable, const)

    def __str__(self) -> str:
        lo, hi = self.interval.lower, self.interval.upper
        return (f"stat {self.variable}: {self.target} | {self.reference} "
                f"in [{lo!r}, {hi!r}].")


@dataclass(frozen=True)
class Default:
    """``prerequisite : M j1, ..., M jn / consequent``; prerequisite may be None."""

    prerequisite: Optional[Formula]
    justifications: tuple[Formula, ...]
    consequent: Formula

    def __post_init__(self):
        if not self.justifications:
            raise ValueError("a default needs at least one justification")

    def __str__(self) -> str:
        pre = f"{self.prerequisite} " if self.prerequisite is not None else ""
        justs = ", ".join(f"M {j}" for j in self.justifications)
        return f"default {pre}: {justs} / {self.consequent}."


def is_open_in(f: Formula, variable: str) -> bool:
    return any(variable in a.args for a in atoms(f))


def ground_rules(rules: Iterable[UniversalRule], constants: Iterable[str]) -> list[Formula]:
    """Eager grounding: one sentence per (rule, constant), rule-major order."""
    constants = list(constants)
    return [r.ground(c) for r in rules for c in constants]


@dataclass(frozen=True)
class Program:
    """A parsed knowledge file."""

    signature: Signature
    facts: tuple[Formula, ...] = ()
    rules: tuple[UniversalRule, ...] = ()
    stats: tuple[StatisticalStatement, ...] = ()
    defaults: tuple[Default, ...] = ()

    @cached_property
    def ground_rules(self) -> tuple[Formula, ...]:
        return tuple(ground_rules(self.rules, self.signature.constants))

    @cached_property
    def theory(self) -> tuple[Formula, ...]:
        return tuple(dict.fromkeys(self.facts + self.ground_rules))
