"""Entailment, consistency and minimal inconsistent subsets over ground theories.

A *theory* here is any finite sequence of ground formulas; it is treated as
a set (duplicates ignored, first occurrence fixes the order).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

from .errors import AtomBudgetExceeded, ConsistentTheory
from .formula import Formula, Not
from .solver import Encoder, Solver

DEFAULT_ATOM_BUDGET = 4096

Theory = tuple  # of Formula


def as_theory(sentences: Iterable[Formula]) -> Theory:
    return tuple(dict.fromkeys(sentences))


class Reasoner:
    """A theory compiled once and queried many times.

    Queries add sentences on top of the compiled base without changing it.
    """

    def __init__(self, sentences: Iterable[Formula], atom_budget: int = DEFAULT_ATOM_BUDGET):
        self.sentences = as_theory(sentences)
        self.atom_budget = atom_budget
        self.encoder = Encoder()
        clauses = []
        for s in self.sentences:
            clauses.extend(self.encoder.encode(s))
            if len(self.encoder.var_of) > atom_budget:
                raise AtomBudgetExceeded(len(self.encoder.var_of), atom_budget)
        self.solver = Solver(clauses, self.encoder.nvars)

    def satisfiable(self, extra: Iterable[Formula] = ()) -> bool:
        return self.solver.solve(self._clauses(extra), want_model=False) is not None

    def model(self, extra: Iterable[Formula] = ()):
        return self.solver.solve(self._clauses(extra))

    def _clauses(self, extra: Iterable[Formula]) -> list:
        enc = self.encoder.fork()
        clauses = []
        for f in extra:
            clauses.extend(enc.encode(f))
        if enc.atom_count() > self.atom_budget:
            raise AtomBudgetExceeded(enc.atom_count(), self.atom_budget)
        return clauses

    def consistent(self) -> bool:
        return self.solver.ok and self.satisfiable()

    def entails(self, query: Formula, given: Iterable[Formula] = ()) -> bool:
        """base + given |= query."""
        return not self.satisfiable([*given, Not(query)])


@lru_cache(maxsize=128)
def _reasoner(theory: Theory, atom_budget: int) -> Reasoner:
    return Reasoner(theory, atom_budget)


def reasoner_for(theory: Iterable[Formula], atom_budget: int = DEFAULT_ATOM_BUDGET) -> Reasoner:
    return _reasoner(as_theory(theory), atom_budget)


def entails(theory: Iterable[Formula], query: Formula, atom_budget: int = DEFAULT_ATOM_BUDGET) -> bool:
    """True iff every assignment satisfying ``theory`` satisfies ``query``."""
    return reasoner_for(theory, atom_budget).entails(query)


def consistent(theory: Iterable[Formula], atom_budget: int = DEFAULT_ATOM_BUDGET) -> bool:
    return reasoner_for(theory, atom_budget).consistent()


class _SubsetOracle:
    """Satisfiability of arbitrary subsets of a fixed sentence list.

    Each sentence is encoded once; a subset query just concatenates clauses.
    """

    def __init__(self, sentences: Sequence[Formula], hard: Sequence[Formula], atom_budget: int):
        enc = Encoder()
        self.hard = [c for f in hard for c in enc.encode(f)]
        self.parts = [enc.encode(s) for s in sentences]
        if len(enc.var_of) > atom_budget:
            raise AtomBudgetExceeded(len(enc.var_of), atom_budget)
        self.nvars = enc.nvars
        self.calls = 0

    def sat(self, subset: Iterable[int]) -> bool:
        self.calls += 1
        clauses = list(self.hard)
        for i in subset:
            clauses.extend(self.parts[i])
        return Solver(clauses, self.nvars).solve() is not None


def _shrink(oracle: _SubsetOracle, items: list[int]) -> list[int]:
    """Deletion-based shrinking to a minimal unsatisfiable subset.

    Deletes blocks first (halving the block size each pass) and finishes
    with single-item deletion, so every survivor is individually necessary.
    """
    core = list(items)
    chunk = max(1, len(core) // 2)
    while True:
        i = 0
        while i < len(core):
            trial = core[:i] + core[i + chunk:]
            if not oracle.sat(trial):
                core = trial
            else:
                i += chunk
        if chunk == 1:
            return core
        chunk = max(1, chunk // 2)


def minimal_subset(
    sentences: Sequence[Formula],
    hard: Sequence[Formula] = (),
    atom_budget: int = DEFAULT_ATOM_BUDGET,
) -> list[Formula] | None:
    """A minimal subset of ``sentences`` inconsistent together with ``hard``.

    Returns None when even the full list is consistent with ``hard``.
    """
    sentences = list(as_theory(sentences))
    oracle = _SubsetOracle(sentences, hard, atom_budget)
    everything = list(range(len(sentences)))
    if oracle.sat(everything):
        return None
    return [sentences[i] for i in _shrink(oracle, everything)]


def minimal_inconsistent_subsets(
    theory: Iterable[Formula],
    limit: int = 1,
    atom_budget: int = DEFAULT_ATOM_BUDGET,
) -> list[list[Formula]]:
    """Up to ``limit`` minimal inconsistent subsets of ``theory``.

    Further cores come from a hitting-set search: each new search removes
    one member of every core found so far. Cores are listed in input order,
    sorted by the positions of their members.
    """
    sentences = list(as_theory(theory))
    oracle = _SubsetOracle(sentences, (), atom_budget)
    n = len(sentences)
    if oracle.sat(range(n)):
        raise ConsistentTheory("theory is consistent; it has no inconsistent subsets")
    cores: list[frozenset[int]] = []
    queue: list[frozenset[int]] = [frozenset()]
    seen = {frozenset()}
    while queue and len(cores) < limit:
        removed = queue.pop(0)
        unhit = next((c for c in cores if not (c & removed)), None)
        if unhit is None:
            remaining = [i for i in range(n) if i not in removed]
            if oracle.sat(remaining):
                continue
            unhit = frozenset(_shrink(oracle, remaining))
            cores.append(unhit)
        for i in sorted(unhit):
            nxt = removed | {i}
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    cores.sort(key=sorted)
    return [[sentences[i] for i in sorted(c)] for c in cores]
