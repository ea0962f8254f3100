"""Reiter default theories and their extensions, by guess and verify.

An extension is represented by its finite generator set, the background
theory W plus the consequents of the defaults that generate it. Membership
in the (deductively closed) extension is answered by entailment.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from ..errors import BoundExceeded
from ..formula import Formula
from ..language import Default
from ..logic import DEFAULT_ATOM_BUDGET, as_theory, reasoner_for

MAX_DEFAULTS = 20


@dataclass(frozen=True)
class DefaultTheory:
    W: tuple[Formula, ...]
    D: tuple[Default, ...]
    atom_budget: int = DEFAULT_ATOM_BUDGET

    def __post_init__(self):
        object.__setattr__(self, "W", as_theory(self.W))
        object.__setattr__(self, "D", tuple(self.D))


@dataclass(frozen=True)
class Extension:
    generating_defaults: tuple[Default, ...]
    characterization: tuple[Formula, ...]

    @property
    def consequents(self) -> tuple[Formula, ...]:
        return tuple(dict.fromkeys(d.consequent for d in self.generating_defaults))

    def contains(self, phi: Formula, atom_budget: int = DEFAULT_ATOM_BUDGET) -> bool:
        """Membership in the deductive closure."""
        return reasoner_for(self.characterization, atom_budget).entails(phi)


def _applicable(reasoner, d: Default) -> bool:
    if d.prerequisite is not None and not reasoner.entails(d.prerequisite):
        return False
    return all(reasoner.satisfiable([j]) for j in d.justifications)


def _grounded(theory: DefaultTheory, generators: Sequence[Default]) -> bool:
    """Can the generating defaults fire in some order, starting from W alone?"""
    known = list(theory.W)
    pending = list(generators)
    while pending:
        r = reasoner_for(known, theory.atom_budget)
        ready = [d for d in pending if d.prerequisite is None or r.entails(d.prerequisite)]
        if not ready:
            return False
        for d in ready:
            pending.remove(d)
            known.append(d.consequent)
    return True


def is_extension(theory: DefaultTheory, S: Iterable[Formula]) -> bool:
    """Is W plus the generator set S an extension of ``theory``?

    S must contain, beyond W, exactly the consequents of the defaults that
    are applicable to W plus S (prerequisite entailed, every justification
    consistent), and those defaults must be groundable from W.
    """
    S = as_theory(S)
    W = set(theory.W)
    ext = as_theory(theory.W + S)
    r = reasoner_for(ext, theory.atom_budget)
    if not r.consistent():
        # The only inconsistent extension is the one of an inconsistent W.
        return not reasoner_for(theory.W, theory.atom_budget).consistent() and set(S) <= W
    applicable = [d for d in theory.D if _applicable(r, d)]
    if {d.consequent for d in applicable} - W != set(S) - W:
        return False
    return _grounded(theory, applicable)


def compute_extensions(theory: DefaultTheory) -> list[Extension]:
    """Every extension, by checking each subset of D as a generating set.

    Subsets are visited by size and then in index order. Supersets of a
    subset whose consequents already contradict W are skipped. Results
    come out in that same order, without duplicates.
    """
    n = len(theory.D)
    if n > MAX_DEFAULTS:
        raise BoundExceeded(f"{n} defaults exceeds the enumeration bound of {MAX_DEFAULTS}")
    dead: list[frozenset[int]] = []
    seen: set[frozenset] = set()
    out = []
    for k in range(n + 1):
        for combo in combinations(range(n), k):
            chosen = frozenset(combo)
            if any(d <= chosen for d in dead):
                continue
            gens = [theory.D[i] for i in combo]
            S = as_theory(d.consequent for d in gens)
            ext_set = as_theory(theory.W + S)
            if k and not reasoner_for(ext_set, theory.atom_budget).consistent():
                dead.append(chosen)
                continue
            key = frozenset(ext_set)
            if key in seen or not is_extension(theory, S):
                continue
            # The generating defaults are exactly the applicable ones.
            r = reasoner_for(ext_set, theory.atom_budget)
            applicable = tuple(d for d in theory.D if _applicable(r, d))
            if set(gens) != set(applicable):
                continue
            seen.add(key)
            out.append(Extension(applicable, ext_set))
    return out
