"""A goal-directed prover for the operator rule system with Probably.

Sentences are plain formulas or a formula under one of the operators
Consistent, Normally and Probably. The rules:

    1. any consequence of the plain members may be added
    2. Consistent(p) when p is consistent with the plain members
    3. Normally(p), Consistent(p) give Probably(p)
    4. p gives Probably(p)
    5. if p1..pn entail p, then Probably(p1)..Probably(pn) give Probably(p)
    6. Probably(p) gives p (optional)

Rule 1 is only ever applied toward a sub-goal; free forward closure would
never terminate. Each trace records its steps with premise indices and
can be replayed independently with :func:`verify_trace`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from ..errors import StepBoundExceeded
from ..formula import BOTTOM, Formula, Not, normal_key
from ..logic import DEFAULT_ATOM_BUDGET, as_theory, minimal_subset, reasoner_for

PLAIN, CONSISTENT, NORMALLY, PROBABLY = "plain", "Consistent", "Normally", "Probably"
WRAPPERS = (PLAIN, CONSISTENT, NORMALLY, PROBABLY)
ALL_RULES = frozenset(range(1, 7))
PREMISE = 0


@dataclass(frozen=True)
class MHSentence:
    body: Formula
    wrapper: str = PLAIN

    def __post_init__(self):
        if self.wrapper not in WRAPPERS:
            raise ValueError(f"unknown operator {self.wrapper!r}")

    @property
    def key(self):
        return (self.wrapper, normal_key(self.body))

    @property
    def is_plain(self) -> bool:
        return self.wrapper == PLAIN

    def __str__(self) -> str:
        return str(self.body) if self.is_plain else f"{self.wrapper}({self.body})"


def plain(f: Formula) -> MHSentence:
    return MHSentence(f, PLAIN)


def consistent_(f: Formula) -> MHSentence:
    return MHSentence(f, CONSISTENT)


def normally(f: Formula) -> MHSentence:
    return MHSentence(f, NORMALLY)


def probably(f: Formula) -> MHSentence:
    return MHSentence(f, PROBABLY)


CONTRADICTION = plain(BOTTOM)


@dataclass(frozen=True)
class MHStep:
    rule: int
    premises: tuple[int, ...]
    sentence: MHSentence

    def line(self, index: int) -> str:
        why = "premise" if self.rule == PREMISE else f"rule {self.rule}"
        if self.premises:
            why += " from " + ", ".join(str(p) for p in self.premises)
        return f"{index}. {self.sentence}  [{why}]"

    def to_dict(self) -> dict:
        return {"rule": self.rule, "premises": list(self.premises), "sentence": str(self.sentence)}


@dataclass(frozen=True)
class DerivationTrace:
    steps: tuple[MHStep, ...]
    goals: tuple[MHSentence, ...] = ()
    reached: tuple[Optional[int], ...] = ()

    @property
    def unreached(self) -> tuple[MHSentence, ...]:
        return tuple(g for g, r in zip(self.goals, self.reached) if r is None)

    def derives(self, s: MHSentence) -> bool:
        return any(step.sentence.key == s.key for step in self.steps)

    @property
    def inconsistent(self) -> bool:
        """Do the plain sentences on the trace contradict one another?"""
        bodies = [s.sentence.body for s in self.steps if s.sentence.is_plain]
        return bool(bodies) and not reasoner_for(bodies).consistent()

    def lines(self) -> list[str]:
        out = [step.line(i) for i, step in enumerate(self.steps)]
        for g, r in zip(self.goals, self.reached):
            out.append(f"goal {g}: " + ("unreached" if r is None else f"step {r}"))
        if self.inconsistent:
            out.append("contradiction: the plain sentences derived are inconsistent")
        return out

    def to_dict(self) -> dict:
        return {
            "steps": [s.to_dict() for s in self.steps],
            "goals": [{"goal": str(g), "step": r} for g, r in zip(self.goals, self.reached)],
            "inconsistent": self.inconsistent,
        }


class _Exhausted(Exception):
    pass


class _Search:
    def __init__(self, sigma0: Sequence[MHSentence], rules: frozenset, bound: int, atom_budget: int):
        self.sigma0 = tuple(dict.fromkeys(sigma0))
        self.in_sigma = {s.key: s for s in self.sigma0}
        self.rules = rules
        self.bound = bound
        self.atom_budget = atom_budget
        self.steps: list[MHStep] = []
        self.index: dict = {}
        self.active: set = set()

    # -- bookkeeping -------------------------------------------------------

    def emit(self, rule: int, premises: Iterable[int], s: MHSentence) -> int:
        if len(self.steps) >= self.bound:
            raise _Exhausted
        self.steps.append(MHStep(rule, tuple(premises), s))
        self.index[s.key] = len(self.steps) - 1
        return len(self.steps) - 1

    def rollback(self, mark: int) -> None:
        del self.steps[mark:]
        self.index = {k: i for k, i in self.index.items() if i < mark}

    def plain_members(self) -> tuple[Formula, ...]:
        derived = (st.sentence.body for st in self.steps if st.sentence.is_plain)
        sig = (s.body for s in self.sigma0 if s.is_plain)
        return as_theory([*sig, *derived])

    def present(self, s: MHSentence) -> bool:
        return s.key in self.in_sigma or s.key in self.index

    # -- search ------------------------------------------------------------

    def derive(self, goal: MHSentence) -> Optional[int]:
        if goal.key in self.index:
            return self.index[goal.key]
        if goal.key in self.in_sigma:
            return self.emit(PREMISE, (), self.in_sigma[goal.key])
        if goal.key in self.active:
            return None
        self.active.add(goal.key)
        try:
            for attempt in self.strategies(goal):
                mark = len(self.steps)
                found = attempt(goal)
                if found is not None:
                    return found
                self.rollback(mark)
            return None
        finally:
            self.active.discard(goal.key)

    def strategies(self, goal: MHSentence):
        table = {
            PLAIN: [(1, self.by_consequence), (1, self.by_contradiction), (6, self.by_detachment)],
            CONSISTENT: [(2, self.by_consistency)],
            PROBABLY: [(4, self.by_assertion), (3, self.by_normality), (5, self.by_lifting)],
            NORMALLY: [],
        }[goal.wrapper]
        return [fn for rule, fn in table if rule in self.rules]

    def by_consequence(self, goal):
        members = self.plain_members()
        if not reasoner_for(members, self.atom_budget).entails(goal.body):
            return None
        used = minimal_subset(members, hard=[Not(goal.body)], atom_budget=self.atom_budget)
        premises = [self.derive(plain(s)) for s in used]
        return self.emit(1, premises, goal)

    def by_contradiction(self, goal):
        # Falsum: derive the negation of some plain member, then use rule 1.
        if goal.key != CONTRADICTION.key:
            return None
        for chi in self.plain_members():
            target = chi.sub if isinstance(chi, Not) else Not(chi)
            mark = len(self.steps)
            t = self.derive(plain(target))
            if t is not None:
                c = self.derive(plain(chi))
                if c is not None:
                    return self.emit(1, (c, t), goal)
            self.rollback(mark)
        return None

    def by_detachment(self, goal):
        p = self.derive(probably(goal.body))
        return None if p is None else self.emit(6, (p,), goal)

    def by_consistency(self, goal):
        if not reasoner_for(self.plain_members(), self.atom_budget).satisfiable([goal.body]):
            return None
        return self.emit(2, (), goal)

    def by_assertion(self, goal):
        p = self.derive(plain(goal.body))
        return None if p is None else self.emit(4, (p,), goal)

    def by_normality(self, goal):
        if not self.present(normally(goal.body)):
            return None
        n = self.derive(normally(goal.body))
        c = self.derive(consistent_(goal.body))
        return None if c is None else self.emit(3, (n, c), goal)

    def by_lifting(self, goal):
        pool = list(self.plain_members())
        pool += [s.body for s in self.sigma0 if s.wrapper in (NORMALLY, PROBABLY)]
        used = minimal_subset(pool, hard=[Not(goal.body)], atom_budget=self.atom_budget)
        if used is None or [normal_key(u) for u in used] == [normal_key(goal.body)]:
            return None
        premises = []
        for s in used:
            p = self.derive(probably(s))
            if p is None:
                return None
            premises.append(p)
        return self.emit(5, premises, goal)


def mh_derive(
    sigma0: Iterable[MHSentence],
    rules_enabled: Iterable[int] = (1, 2, 3, 4, 5),
    goals: Iterable[MHSentence] = (),
    step_bound: int = 50,
    atom_budget: int = DEFAULT_ATOM_BUDGET,
) -> DerivationTrace:
    """Search for a derivation of each goal, in order, sharing one trace.

    Goals the rules cannot reach are listed in ``unreached``. Running out
    of steps raises StepBoundExceeded carrying the partial trace.
    """
    rules = frozenset(rules_enabled)
    if not rules <= ALL_RULES:
        raise ValueError(f"rules must be drawn from 1..6, got {sorted(rules)}")
    if step_bound < 1:
        raise ValueError("step_bound must be at least 1")
    goals = tuple(goals)
    search = _Search(tuple(sigma0), rules, step_bound, atom_budget)
    reached: list[Optional[int]] = []
    for k, g in enumerate(goals):
        try:
            reached.append(search.derive(g))
        except _Exhausted:
            reached += [None] * (len(goals) - k)
            partial = DerivationTrace(tuple(search.steps), goals, tuple(reached))
            raise StepBoundExceeded(partial, partial.unreached) from None
    return DerivationTrace(tuple(search.steps), goals, tuple(reached))


def verify_trace(sigma0: Iterable[MHSentence], rules_enabled: Iterable[int],
                 trace: DerivationTrace, atom_budget: int = DEFAULT_ATOM_BUDGET) -> bool:
    """Re-check every step against the steps before it."""
    try:
        replay(sigma0, rules_enabled, trace, atom_budget)
    except ValueError:
        return False
    return True


def replay(sigma0: Iterable[MHSentence], rules_enabled: Iterable[int],
           trace: DerivationTrace, atom_budget: int = DEFAULT_ATOM_BUDGET) -> None:
    """Like :func:`verify_trace`, but raises ValueError naming the bad step."""
    sigma0 = tuple(sigma0)
    sigma_keys = {s.key for s in sigma0}
    sigma_plain = [s.body for s in sigma0 if s.is_plain]
    rules = frozenset(rules_enabled)
    steps = trace.steps

    for i, step in enumerate(steps):
        def fail(why: str):
            raise ValueError(f"step {i} ({step.sentence}): {why}")

        if any(not 0 <= p < i for p in step.premises):
            fail("premise index does not precede the step")
        prem = [steps[p].sentence for p in step.premises]
        s = step.sentence
        if step.rule == PREMISE:
            if s.key not in sigma_keys:
                fail("not a member of the initial set")
            continue
        if step.rule not in rules:
            fail(f"rule {step.rule} is not enabled")
        plain_before = as_theory(sigma_plain + [st.sentence.body for st in steps[:i]
                                                 if st.sentence.is_plain])
        if step.rule == 1:
            if not s.is_plain or not all(p.is_plain for p in prem):
                fail("rule 1 relates plain sentences only")
            if not reasoner_for([p.body for p in prem], atom_budget).entails(s.body):
                fail("premises do not entail the conclusion")
        elif step.rule == 2:
            if s.wrapper != CONSISTENT or prem:
                fail("rule 2 concludes Consistent(p) from no premises")
            if not reasoner_for(plain_before, atom_budget).satisfiable([s.body]):
                fail("body is inconsistent with the plain sentences")
        elif step.rule == 3:
            if (s.wrapper != PROBABLY or len(prem) != 2
                    or prem[0].key != normally(s.body).key
                    or prem[1].key != consistent_(s.body).key):
                fail("rule 3 needs Normally(p) and Consistent(p)")
        elif step.rule == 4:
            if s.wrapper != PROBABLY or len(prem) != 1 or prem[0].key != plain(s.body).key:
                fail("rule 4 needs the plain sentence")
        elif step.rule == 5:
            if s.wrapper != PROBABLY or not all(p.wrapper == PROBABLY for p in prem):
                fail("rule 5 relates Probably sentences only")
            if not reasoner_for([p.body for p in prem], atom_budget).entails(s.body):
                fail("premise bodies do not entail the conclusion")
        elif step.rule == 6:
            if not s.is_plain or len(prem) != 1 or prem[0].key != probably(s.body).key:
                fail("rule 6 needs Probably(p)")
        else:
            fail(f"unknown rule {step.rule}")
