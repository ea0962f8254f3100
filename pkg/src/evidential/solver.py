"""Clause encoding and a DPLL satisfiability solver.

The solver keeps per-clause true/false literal counters, so it knows the
moment every clause is satisfied and can stop with a partial model; the
unassigned atoms are free. The base clause set is propagated once at
construction. Each query pushes its extra clauses on top, searches, and
undoes back to the base state. Partial models found along the way are kept
and tried first on later queries, which settles most "is this consistent"
questions without any search.
"""

from __future__ import annotations

import threading
from typing import Iterable, Sequence

import numpy as np

from .formula import And, Atom, Falsum, Formula, Implies, Not, Or, atoms

Clause = list  # of nonzero ints, DIMACS style

# Distribute an Or over its children's clause sets only while the product
# stays at most this many clauses (or no larger than the plain sum).
_DISTRIBUTE_LIMIT = 64
_MODEL_CACHE = 6


class Encoder:
    """Maps atoms to variables and formulas to clauses.

    ``fork()`` returns a child encoder that can see the parent's atoms but
    allocates fresh variables above the parent's range without touching it.
    """

    def __init__(self, parent: "Encoder | None" = None):
        self.parent = parent
        self.var_of: dict[Atom, int] = {}
        self.nvars = parent.nvars if parent else 0
        self.base = self.nvars

    def fork(self) -> "Encoder":
        return Encoder(self)

    def lookup(self, atom: Atom) -> int | None:
        enc = self
        while enc is not None:
            v = enc.var_of.get(atom)
            if v is not None:
                return v
            enc = enc.parent
        return None

    def var(self, atom: Atom) -> int:
        v = self.lookup(atom)
        if v is None:
            self.nvars += 1
            v = self.var_of[atom] = self.nvars
        return v

    def fresh(self) -> int:
        self.nvars += 1
        return self.nvars

    def atom_count(self) -> int:
        n = len(self.var_of)
        enc = self.parent
        while enc is not None:
            n += len(enc.var_of)
            enc = enc.parent
        return n

    def encode(self, f: Formula) -> list[Clause]:
        return _cnf(_nnf(f, True), self)


# NNF nodes: ("lit", atom, sign) | ("and", [...]) | ("or", [...]) | ("top",) | ("bot",)

def _nnf(f: Formula, positive: bool):
    if isinstance(f, Atom):
        return ("lit", f, positive)
    if isinstance(f, Not):
        return _nnf(f.sub, not positive)
    if isinstance(f, Falsum):
        return ("bot",) if positive else ("top",)
    if isinstance(f, Implies):
        if positive:
            return ("or", [_nnf(f.left, False), _nnf(f.right, True)])
        return ("and", [_nnf(f.left, True), _nnf(f.right, False)])
    if isinstance(f, (And, Or)):
        is_and = isinstance(f, And) == positive
        return ("and" if is_and else "or", [_nnf(p, positive) for p in f.parts])
    raise TypeError(f"not a formula: {f!r}")


def _cnf(node, enc: Encoder) -> list[Clause]:
    kind = node[0]
    if kind == "lit":
        v = enc.var(node[1])
        return [[v if node[2] else -v]]
    if kind == "top":
        return []
    if kind == "bot":
        return [[]]
    if kind == "and":
        out: list[Clause] = []
        for child in node[1]:
            out.extend(_cnf(child, enc))
        return out
    # disjunction
    parts = [_cnf(child, enc) for child in node[1]]
    if any(len(p) == 0 for p in parts):
        return []  # a true disjunct
    parts = [p for p in parts if all(p_clause for p_clause in p)]
    if not parts:
        return [[]]
    product = 1
    for p in parts:
        product *= len(p)
    if product > max(_DISTRIBUTE_LIMIT, sum(len(p) for p in parts)):
        # name the multi-clause disjuncts: aux -> disjunct
        named = []
        extra: list[Clause] = []
        for p in parts:
            if len(p) == 1:
                named.append(p)
            else:
                aux = enc.fresh()
                extra.extend([-aux] + c for c in p)
                named.append([[aux]])
        parts = named
    else:
        extra = []
    clauses: list[Clause] = [[]]
    for p in parts:
        clauses = [a + b for a in clauses for b in p]
    return [c for c in map(_tidy, clauses) if c is not None] + extra


def _tidy(clause: Clause) -> Clause | None:
    seen = dict.fromkeys(clause)
    for lit in seen:
        if -lit in seen:
            return None
    return list(seen)


class Solver:
    def __init__(self, clauses: Iterable[Clause], nvars: int):
        self.nvars = nvars
        self.clauses: list[Clause] = []
        self.lens: list[int] = []
        self.occ: dict[int, list[int]] = {}
        self.n_true: list[int] = []
        self.n_false: list[int] = []
        self.value: dict[int, bool] = {}
        self.trail: list[int] = []
        self.unsat = 0
        self._models: list[dict[int, bool]] = []
        self._lock = threading.Lock()
        units: list[int] = []
        self.ok = True
        for c in clauses:
            if not c:
                self.ok = False
            self._add(c, units)
        if self.ok:
            self.ok = self._propagate(units)
        self.base_clauses = len(self.clauses)
        self.base_trail = len(self.trail)

    # -- bookkeeping -------------------------------------------------------

    def _add(self, clause: Clause, units: list[int]) -> bool:
        idx = len(self.clauses)
        self.clauses.append(clause)
        self.lens.append(len(clause))
        t = f = 0
        for lit in clause:
            self.occ.setdefault(lit, []).append(idx)
            v = self.value.get(abs(lit))
            if v is None:
                continue
            if v == (lit > 0):
                t += 1
            else:
                f += 1
        self.n_true.append(t)
        self.n_false.append(f)
        if t == 0:
            self.unsat += 1
            rem = len(clause) - f
            if rem == 0:
                return False
            if rem == 1:
                units.append(idx)
        return True

    def _pop_clause(self) -> None:
        clause = self.clauses.pop()
        self.lens.pop()
        for lit in clause:
            self.occ[lit].pop()
        if self.n_true.pop() == 0:
            self.unsat -= 1
        self.n_false.pop()

    def _assign(self, lit: int, units: list[int]) -> bool:
        self.value[abs(lit)] = lit > 0
        self.trail.append(abs(lit))
        n_true, n_false, lens = self.n_true, self.n_false, self.lens
        for c in self.occ.get(lit, ()):
            n_true[c] += 1
            if n_true[c] == 1:
                self.unsat -= 1
        ok = True
        for c in self.occ.get(-lit, ()):
            nf = n_false[c] + 1
            n_false[c] = nf
            if n_true[c] == 0:
                rem = lens[c] - nf
                if rem == 0:
                    ok = False
                elif rem == 1:
                    units.append(c)
        return ok

    def _propagate(self, units: list[int]) -> bool:
        value = self.value
        while units:
            c = units.pop()
            if self.n_true[c]:
                continue
            for lit in self.clauses[c]:
                if abs(lit) not in value:
                    break
            else:
                return False
            if not self._assign(lit, units):
                return False
        return True

    def _undo_to(self, mark: int) -> None:
        n_true, n_false, occ = self.n_true, self.n_false, self.occ
        while len(self.trail) > mark:
            var = self.trail.pop()
            lit = var if self.value.pop(var) else -var
            for c in occ.get(lit, ()):
                n_true[c] -= 1
                if n_true[c] == 0:
                    self.unsat += 1
            for c in occ.get(-lit, ()):
                n_false[c] -= 1

    def _pick(self) -> int:
        n_true, value = self.n_true, self.value
        for c, clause in enumerate(self.clauses):
            if n_true[c] == 0:
                for lit in clause:
                    if abs(lit) not in value:
                        return lit
        raise AssertionError("no open clause")

    def _search(self, conflict: bool) -> bool:
        stack: list[tuple[int, int, bool]] = []
        while True:
            if conflict:
                while stack:
                    mark, lit, flipped = stack.pop()
                    self._undo_to(mark)
                    if not flipped:
                        stack.append((mark, -lit, True))
                        units: list[int] = []
                        conflict = not (self._assign(-lit, units) and self._propagate(units))
                        break
                else:
                    return False
                continue
            if self.unsat == 0:
                return True
            lit = self._pick()
            stack.append((len(self.trail), lit, False))
            units = []
            conflict = not (self._assign(lit, units) and self._propagate(units))

    # -- public ------------------------------------------------------------

    def solve(self, extra: Sequence[Clause] = (), want_model: bool = True):
        """A partial model of base + extra clauses, or None if unsatisfiable.

        Variables absent from the returned mapping may take either value.
        With ``want_model=False`` any satisfiable answer may be a bare True.
        """
        if not self.ok or any(len(c) == 0 for c in extra):
            return None
        with self._lock:
            for m in self._models:
                added = _extend(m, extra)
                if added is not None:
                    if not want_model:
                        return True
                    return {**m, **added} if added else m
            units: list[int] = []
            ok = True
            for c in extra:
                ok = self._add(c, units) and ok
            sat = ok and self._propagate(units)
            sat = self._search(not sat)
            model = None
            if sat:
                model = dict(self.value)
                base_part = {v: b for v, b in model.items() if v <= self.nvars}
                self._models.insert(0, base_part)
                del self._models[_MODEL_CACHE:]
            self._undo_to(self.base_trail)
            while len(self.clauses) > self.base_clauses:
                self._pop_clause()
            return model


def _extend(model: dict[int, bool], extra: Sequence[Clause]) -> dict[int, bool] | None:
    """Greedily extend a cached partial model to the extra clauses.

    Returns only the new assignments, or None if the greedy pass fails.
    """
    added: dict[int, bool] = {}
    for clause in extra:
        free = None
        for lit in clause:
            v = model.get(abs(lit))
            if v is None:
                v = added.get(abs(lit))
            if v is None:
                if free is None:
                    free = lit
            elif v == (lit > 0):
                break
        else:
            if free is None:
                return None
            added[abs(free)] = free > 0
    return added


def truth_table(sentences: Sequence[Formula], universe: Sequence[Atom] | None = None):
    """Enumerate all assignments; returns (atoms, bool matrix of models).

    Row ``i`` of the returned array is True iff assignment ``i`` satisfies
    every sentence. Intended as an independent oracle for small theories.
    """
    if universe is None:
        seen: dict[Atom, None] = {}
        for s in sentences:
            for a in atoms(s):
                seen.setdefault(a, None)
        universe = list(seen)
    k = len(universe)
    if k > 22:
        raise ValueError(f"{k} atoms is too many to enumerate")
    idx = np.arange(1 << k, dtype=np.int64)
    cols = {a: ((idx >> i) & 1).astype(bool) for i, a in enumerate(universe)}
    ok = np.ones(1 << k, dtype=bool)
    for s in sentences:
        ok &= _vec(s, cols, 1 << k)
    return list(universe), ok


def _vec(f: Formula, cols, size):
    if isinstance(f, Atom):
        return cols[f]
    if isinstance(f, Not):
        return ~_vec(f.sub, cols, size)
    if isinstance(f, And):
        out = np.ones(size, dtype=bool)
        for p in f.parts:
            out &= _vec(p, cols, size)
        return out
    if isinstance(f, Or):
        out = np.zeros(size, dtype=bool)
        for p in f.parts:
            out |= _vec(p, cols, size)
        return out
    if isinstance(f, Implies):
        return ~_vec(f.left, cols, size) | _vec(f.right, cols, size)
    if isinstance(f, Falsum):
        return np.zeros(size, dtype=bool)
    raise TypeError(f)


def enumerate_satisfiable(sentences: Sequence[Formula]) -> bool:
    _, ok = truth_table(sentences)
    return bool(ok.any())


def enumerate_entails(sentences: Sequence[Formula], query: Formula) -> bool:
    universe: dict[Atom, None] = {}
    for s in list(sentences) + [query]:
        for a in atoms(s):
            universe.setdefault(a, None)
    atoms_, ok = truth_table(sentences, list(universe))
    size = 1 << len(atoms_)
    cols = {a: ((np.arange(size) >> i) & 1).astype(bool) for i, a in enumerate(atoms_)}
    return bool(np.all(_vec(query, cols, size)[ok]))


