"""Recursive-descent parser and printer for the knowledge language.

    decl    := "const" ident ("," ident)* "."
             | "pred" ident "/" nat "."
             | "fact" formula "."
             | "rule" "all" ident ":" formula "->" formula "."
             | "stat" ident ":" formula "|" formula "in" "[" num "," num "]" "."
             | "default" [formula] ":" "M" formula ("," "M" formula)* "/" formula "."
    formula := imp
    imp     := or ["->" imp]
    or      := and ("v" and)*
    and     := unary ("&" unary)*
    unary   := "~" unary | "(" formula ")" | "false" | ident ["(" ident ("," ident)* ")"]

Comments run from ``#`` to the end of the line. Predicates are declared
implicitly by first use unless the text contains any ``pred`` declaration,
in which case every predicate must be declared before it is used.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from .errors import ParseError, SignatureError
from .formula import BOTTOM, And, Atom, Formula, Implies, Not, Or
from .language import (
    Default,
    ProbabilityInterval,
    Program,
    Signature,
    StatisticalStatement,
    UniversalRule,
    is_open_in,
)

RESERVED = {"v", "in", "all", "M", "false"}
KEYWORDS = {"const", "pred", "fact", "rule", "stat", "default"}

_TOKEN = re.compile(
    r"(?P<space>[ \t\r\n]+)"
    r"|(?P<comment>#[^\n]*)"
    r"|(?P<num>(?:\d+(?:\.\d+)?|\.\d+)(?:[eE][-+]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>->|[()~&,.:/|\[\]])"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind not in ("space", "comment"):
            out.append(Token(kind, m.group(), line, pos - line_start + 1))
        chunk = m.group()
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


Item = Union[Formula, UniversalRule, StatisticalStatement, Default]


class _Parser:
    def __init__(self, text: str, signature: Signature | None = None, strict: bool | None = None):
        self.toks = tokenize(text)
        self.i = 0
        sig = signature or Signature()
        self.constants = list(sig.constants)
        self.const_set = set(self.constants)
        self.preds: dict[str, int] = dict(sig.predicates)
        if strict is None:
            strict = any(
                t.kind == "ident" and t.text == "pred"
                and (k == 0 or self.toks[k - 1].text == ".")
                for k, t in enumerate(self.toks)
            )
        self.strict = strict
        self.var: Optional[str] = None

    # -- token helpers -----------------------------------------------------

    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg: str, tok: Token | None = None, cls=ParseError):
        tok = tok or self.peek()
        return cls(msg, tok.line, tok.col)

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.text == text and tok.kind in ("op", "ident")

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.text != text or tok.kind not in ("op", "ident"):
            found = tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.next()

    def ident(self, what: str = "identifier") -> Token:
        tok = self.peek()
        if tok.kind != "ident":
            raise self.error(f"expected {what}, found {tok.text or 'end of input'!r}")
        return self.next()

    def number(self) -> float:
        tok = self.peek()
        if tok.kind != "num":
            raise self.error(f"expected a number, found {tok.text or 'end of input'!r}")
        self.next()
        return float(tok.text)

    # -- formulas ----------------------------------------------------------

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.at("->"):
            self.next()
            return Implies(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        parts = [self.conjunction()]
        while self.peek().kind == "ident" and self.peek().text == "v":
            self.next()
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conjunction(self) -> Formula:
        parts = [self.unary()]
        while self.at("&"):
            self.next()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self) -> Formula:
        if self.at("~"):
            self.next()
            return Not(self.unary())
        if self.at("("):
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        if self.peek().kind == "ident" and self.peek().text == "false":
            self.next()
            return BOTTOM
        return self.atom()

    def atom(self) -> Atom:
        name_tok = self.ident("a predicate")
        name = name_tok.text
        if name in RESERVED:
            raise self.error(f"{name!r} is reserved", name_tok)
        args: list[str] = []
        if self.at("("):
            self.next()
            while True:
                arg_tok = self.ident("a constant")
                arg = arg_tok.text
                if arg != self.var and arg not in self.const_set:
                    raise self.error(f"undeclared constant {arg!r}", arg_tok, SignatureError)
                args.append(arg)
                if self.at(","):
                    self.next()
                    continue
                self.expect(")")
                break
        known = self.preds.get(name)
        if known is None:
            if self.strict:
                raise self.error(f"undeclared predicate {name!r}", name_tok, SignatureError)
            self.preds[name] = len(args)
        elif known != len(args):
            raise self.error(
                f"predicate {name!r} has arity {known}, used here with {len(args)}",
                name_tok, SignatureError)
        return Atom(name, tuple(args))

    # -- declarations ------------------------------------------------------

    def bind_variable(self) -> str:
        tok = self.ident("a variable")
        if tok.text in RESERVED or tok.text in self.const_set:
            raise self.error(f"{tok.text!r} cannot be used as a variable", tok)
        self.var = tok.text
        self.expect(":")
        return tok.text

    def require_open(self, f: Formula, var: str, tok: Token, what: str) -> None:
        if not is_open_in(f, var):
            raise self.error(f"{what} must mention the variable {var!r}", tok)

    def declaration(self, program: dict) -> None:
        kw = self.ident("a declaration keyword")
        self.var = None
        if kw.text == "const":
            while True:
                tok = self.ident("a constant name")
                if tok.text in RESERVED or tok.text in KEYWORDS:
                    raise self.error(f"{tok.text!r} cannot name a constant", tok)
                if tok.text in self.const_set:
                    raise self.error(f"constant {tok.text!r} declared twice", tok, SignatureError)
                self.constants.append(tok.text)
                self.const_set.add(tok.text)
                if not self.at(","):
                    break
                self.next()
        elif kw.text == "pred":
            tok = self.ident("a predicate name")
            if tok.text in RESERVED:
                raise self.error(f"{tok.text!r} cannot name a predicate", tok)
            self.expect("/")
            n_tok = self.peek()
            if n_tok.kind != "num" or not n_tok.text.isdigit():
                raise self.error("expected an arity")
            self.next()
            n = int(n_tok.text)
            if self.preds.get(tok.text, n) != n:
                raise self.error(f"predicate {tok.text!r} redeclared with a different arity",
                                 tok, SignatureError)
            self.preds[tok.text] = n
        elif kw.text == "fact":
            program["facts"].append(self.formula())
        elif kw.text == "rule":
            self.expect("all")
            var = self.bind_variable()
            start = self.peek()
            ante = self.disjunction()
            self.expect("->")
            cons = self.formula()
            self.require_open(ante, var, start, "a rule antecedent")
            self.require_open(cons, var, start, "a rule consequent")
            program["rules"].append(UniversalRule(var, ante, cons))
        elif kw.text == "stat":
            var = self.bind_variable()
            t_tok = self.peek()
            target = self.formula()
            self.expect("|")
            r_tok = self.peek()
            reference = self.formula()
            self.require_open(target, var, t_tok, "a statistical target")
            self.require_open(reference, var, r_tok, "a reference class")
            self.expect("in")
            bracket = self.expect("[")
            lo = self.number()
            self.expect(",")
            hi = self.number()
            self.expect("]")
            try:
                interval = ProbabilityInterval(lo, hi)
            except ValueError as exc:
                raise self.error(str(exc), bracket) from None
            program["stats"].append(StatisticalStatement(var, target, reference, interval))
        elif kw.text == "default":
            prereq = None
            if not self.at(":"):
                prereq = self.formula()
            self.expect(":")
            justs = []
            while True:
                self.expect("M")
                justs.append(self.formula())
                if not self.at(","):
                    break
                self.next()
            self.expect("/")
            cons = self.formula()
            program["defaults"].append(Default(prereq, tuple(justs), cons))
        else:
            raise self.error(f"unknown declaration {kw.text!r}", kw)
        self.var = None
        self.expect(".")

    def signature(self) -> Signature:
        return Signature(tuple(self.constants), tuple(self.preds.items()))


def parse_program(text: str) -> Program:
    p = _Parser(text)
    program: dict[str, list] = {"facts": [], "rules": [], "stats": [], "defaults": []}
    while p.peek().kind != "eof":
        p.declaration(program)
    return Program(
        signature=p.signature(),
        facts=tuple(program["facts"]),
        rules=tuple(program["rules"]),
        stats=tuple(program["stats"]),
        defaults=tuple(program["defaults"]),
    )


def parse_formula(text: str, signature: Signature, variable: str | None = None) -> Formula:
    """Parse one formula over an existing signature; a trailing '.' is allowed."""
    p = _Parser(text, signature, strict=True)
    p.var = variable
    f = p.formula()
    if p.at("."):
        p.next()
    if p.peek().kind != "eof":
        raise p.error(f"unexpected {p.peek().text!r} after formula")
    return f


def parse_item(text: str, signature: Signature) -> Item:
    """Parse a single fact/rule/stat/default declaration over ``signature``."""
    p = _Parser(text, signature, strict=True)
    program: dict[str, list] = {"facts": [], "rules": [], "stats": [], "defaults": []}
    start = p.peek()
    if start.text in ("const", "pred"):
        raise p.error("signature declarations cannot be asserted as evidence")
    p.declaration(program)
    if p.peek().kind != "eof":
        raise p.error("expected exactly one declaration")
    for items in program.values():
        if items:
            return items[0]
    raise p.error("empty declaration", start)


def parse_universe(text: str, signature: Signature) -> tuple[Formula, ...]:
    """One ground sentence per line; blank lines and '#' comments skipped."""
    out: dict[Formula, None] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        try:
            out.setdefault(parse_formula(body, signature), None)
        except ParseError as exc:
            raise type(exc)(exc.message, lineno, exc.column) from None
    return tuple(out)


def format_program(
    signature: Signature,
    facts=(),
    rules=(),
    stats=(),
    defaults=(),
    header: str | None = None,
) -> str:
    """Render declarations in the knowledge language.

    Every predicate is declared explicitly, so the output parses in strict
    mode and round-trips through :func:`parse_program`.
    """
    lines = []
    if header:
        lines.extend(f"# {h}" if h else "#" for h in header.splitlines())
    if signature.constants:
        lines.append(f"const {', '.join(signature.constants)}.")
    lines.extend(f"pred {name}/{n}." for name, n in signature.predicates)
    lines.extend(str(r) for r in rules)
    lines.extend(f"fact {f}." for f in facts)
    lines.extend(str(s) for s in stats)
    lines.extend(str(d) for d in defaults)
    return "\n".join(lines) + "\n"


def format_formula(f: Formula) -> str:
    return str(f)
