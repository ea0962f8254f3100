"""Ground, function-free formulas.

Formulas are immutable and hashable. An atom's arguments are plain strings;
in an open formula (the body of a rule or a statistical statement) one of
those strings is the bound variable, and :func:`substitute` replaces it with
a constant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union


def _hashed(cls):
    # Large conjunctions (a 10^4-measurement batch) get hashed repeatedly.
    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((cls.__name__,) + self._key()))

    def __hash__(self):
        return self._hash

    cls.__post_init__ = __post_init__
    cls.__hash__ = __hash__
    return cls


@dataclass(frozen=True, eq=True)
@_hashed
class Atom:
    pred: str
    args: tuple[str, ...] = ()
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def _key(self):
        return (self.pred, self.args)

    def __str__(self) -> str:
        if not self.args:
            return self.pred
        return f"{self.pred}({','.join(self.args)})"


@dataclass(frozen=True, eq=True)
@_hashed
class Not:
    sub: "Formula"
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def _key(self):
        return (self.sub,)

    def __str__(self) -> str:
        return "~" + _wrap(self.sub, _PREC_NOT)


@dataclass(frozen=True, eq=True)
@_hashed
class And:
    parts: tuple["Formula", ...]
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def _key(self):
        return self.parts

    def __str__(self) -> str:
        return " & ".join(_wrap(p, _PREC_AND + 1) for p in self.parts)


@dataclass(frozen=True, eq=True)
@_hashed
class Or:
    parts: tuple["Formula", ...]
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def _key(self):
        return self.parts

    def __str__(self) -> str:
        return " v ".join(_wrap(p, _PREC_OR + 1) for p in self.parts)


@dataclass(frozen=True, eq=True)
@_hashed
class Implies:
    left: "Formula"
    right: "Formula"
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def _key(self):
        return (self.left, self.right)

    def __str__(self) -> str:
        return f"{_wrap(self.left, _PREC_IMP + 1)} -> {_wrap(self.right, _PREC_IMP)}"


@dataclass(frozen=True)
class Falsum:
    """The always-false sentence; used as the contradiction marker."""

    def __str__(self) -> str:
        return "false"


Formula = Union[Atom, Not, And, Or, Implies, Falsum]
BOTTOM = Falsum()

_PREC_IMP, _PREC_OR, _PREC_AND, _PREC_NOT, _PREC_ATOM = range(5)


def _prec(f: Formula) -> int:
    if isinstance(f, Implies):
        return _PREC_IMP
    if isinstance(f, Or):
        return _PREC_OR
    if isinstance(f, And):
        return _PREC_AND
    if isinstance(f, Not):
        return _PREC_NOT
    return _PREC_ATOM


def _wrap(f: Formula, min_prec: int) -> str:
    text = str(f)
    return text if _prec(f) >= min_prec else f"({text})"


def conj(parts: Iterable[Formula]) -> Formula:
    parts = tuple(parts)
    if not parts:
        raise ValueError("empty conjunction")
    return parts[0] if len(parts) == 1 else And(parts)


def disj(parts: Iterable[Formula]) -> Formula:
    parts = tuple(parts)
    if not parts:
        raise ValueError("empty disjunction")
    return parts[0] if len(parts) == 1 else Or(parts)


def neg(f: Formula) -> Formula:
    """Negate, collapsing a double negation."""
    return f.sub if isinstance(f, Not) else Not(f)


def is_literal(f: Formula) -> bool:
    return isinstance(f, Atom) or (isinstance(f, Not) and isinstance(f.sub, Atom))


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, Not):
        return (f.sub,)
    if isinstance(f, (And, Or)):
        return f.parts
    if isinstance(f, Implies):
        return (f.left, f.right)
    return ()


def atoms(f: Formula) -> Iterator[Atom]:
    """Atoms of ``f`` in left-to-right order (with repeats)."""
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            yield g
        else:
            stack.extend(reversed(children(g)))


def terms(f: Formula) -> list[str]:
    """Distinct argument strings in order of first mention."""
    seen: dict[str, None] = {}
    for a in atoms(f):
        for t in a.args:
            seen.setdefault(t, None)
    return list(seen)


def substitute(f: Formula, var: str, const: str) -> Formula:
    if isinstance(f, Atom):
        if var not in f.args:
            return f
        return Atom(f.pred, tuple(const if t == var else t for t in f.args))
    if isinstance(f, Not):
        return Not(substitute(f.sub, var, const))
    if isinstance(f, And):
        return And(tuple(substitute(p, var, const) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(substitute(p, var, const) for p in f.parts))
    if isinstance(f, Implies):
        return Implies(substitute(f.left, var, const), substitute(f.right, var, const))
    return f


def evaluate(f: Formula, model) -> bool:
    """Truth value of ``f`` under ``model`` (a mapping Atom -> bool)."""
    if isinstance(f, Atom):
        return bool(model[f])
    if isinstance(f, Not):
        return not evaluate(f.sub, model)
    if isinstance(f, And):
        return all(evaluate(p, model) for p in f.parts)
    if isinstance(f, Or):
        return any(evaluate(p, model) for p in f.parts)
    if isinstance(f, Implies):
        return (not evaluate(f.left, model)) or evaluate(f.right, model)
    return False


def normal_key(f: Formula):
    """Canonical key for literal-level syntactic matching.

    Two formulas share a key iff they are equal after double-negation
    elimination and flattening conjunctions/disjunctions into sets.
    Nothing stronger (no De Morgan, no absorption).
    """
    while isinstance(f, Not) and isinstance(f.sub, Not):
        f = f.sub.sub
    if isinstance(f, Atom):
        return ("atom", f.pred, f.args)
    if isinstance(f, Not):
        return ("not", normal_key(f.sub))
    if isinstance(f, (And, Or)):
        kind = type(f)
        flat = set()
        stack = list(f.parts)
        while stack:
            p = stack.pop()
            while isinstance(p, Not) and isinstance(p.sub, Not):
                p = p.sub.sub
            if isinstance(p, kind):
                stack.extend(p.parts)
            else:
                flat.add(normal_key(p))
        if len(flat) == 1:
            return next(iter(flat))
        return ("and" if kind is And else "or", frozenset(flat))
    if isinstance(f, Implies):
        return ("imp", normal_key(f.left), normal_key(f.right))
    return ("false",)


def same_sentence(a: Formula, b: Formula) -> bool:
    return normal_key(a) == normal_key(b)
