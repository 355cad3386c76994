"""Parser for the ``.bstc`` text format.

Grammar (``#`` starts a comment that runs to end of line)::

    formula  := iff
    iff      := imp ( '<->' imp )*                 left-assoc
    imp      := or ( '->' imp )?                   right-assoc
    or       := and ( 'or' and )*
    and      := unary ( 'and' unary )*
    unary    := 'not' unary | '(' formula ')' | atom
    atom     := term ( '=' | '!=' | 'sub' ) term
              | ivar ( 'in' | 'notin' ) term
              | ivar ( '=' | '!=' ) ivar
    term     := inter ( '+' inter )*               left-assoc
    inter    := prim ( ( '&' | '-' ) prim )*       left-assoc
    prim     := SETVAR | '0' | '{' ivar ( ',' ivar )* '}' | 'c' '(' term ')'
              | '(' term ')'

Set variables start with an uppercase letter, individual variables with a
lowercase one. ``c``, ``not``, ``and``, ``or``, ``sub``, ``in`` and ``notin``
are reserved. Identifiers containing ``__`` are reserved for generated names.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .syntax import (
    EMPTY, And, Atom, Choice, Difference, Formula, Iff, Implies, Intersection, Not, Or,
    Relation, SetVar, Singleton, Term, Union, union_of,
)

KEYWORDS = {"c", "not", "and", "or", "sub", "in", "notin"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<op><->|->|!=|[=+&\-(){},])
  | (?P<zero>0)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)

_PREDICATES = {"=", "!=", "sub", "in", "notin"}
_TERM_FOLLOW = _PREDICATES | {"+", "&", "-"}


@dataclass(eq=False)
class ParseError(Exception):
    line: int
    column: int
    message: str
    expected: list[str] = field(default_factory=list)

    def __str__(self) -> str:
        text = f"{self.line}:{self.column}: {self.message}"
        if self.expected:
            text += f" (expected {', '.join(self.expected)})"
        return text


@dataclass(frozen=True)
class Token:
    kind: str  # 'op', 'zero', 'setvar', 'ivar', 'kw', 'eof'
    text: str
    offset: int


def _position(src: str, offset: int) -> tuple[int, int]:
    line = src.count("\n", 0, offset) + 1
    col = offset - (src.rfind("\n", 0, offset) + 1) + 1
    return line, col


def tokenize(src: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            line, col = _position(src, pos)
            raise ParseError(line, col, f"unexpected character {src[pos]!r}")
        kind = m.lastgroup
        text = m.group()
        if kind == "ident":
            if "__" in text:
                line, col = _position(src, pos)
                raise ParseError(line, col, f"identifier {text!r} uses the reserved '__'")
            if text in KEYWORDS:
                kind = "kw"
            elif text[0].isupper():
                kind = "setvar"
            else:
                kind = "ivar"
        if kind != "ws":
            tokens.append(Token(kind, text, pos))
        pos = m.end()
    tokens.append(Token("eof", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = tokenize(src)
        self.pos = 0

    # -- helpers

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def at(self, *texts: str) -> bool:
        tok = self.peek()
        return tok.kind in ("op", "kw") and tok.text in texts

    def fail(self, tok: Token, message: str, expected: list[str]):
        line, col = _position(self.src, tok.offset)
        raise ParseError(line, col, message, expected)

    def describe(self, tok: Token) -> str:
        return "end of input" if tok.kind == "eof" else repr(tok.text)

    def expect(self, text: str, opener: Token | None = None) -> Token:
        tok = self.peek()
        if tok.kind in ("op", "kw") and tok.text == text:
            self.pos += 1
            return tok
        if opener is not None and tok.kind == "eof":
            self.fail(opener, f"unbalanced {opener.text!r}: reached end of input", [repr(text)])
        self.fail(tok, f"unexpected {self.describe(tok)}", [repr(text)])

    def closing_paren(self, start: int) -> int | None:
        """Index of the ')' matching the '(' at token index ``start``."""
        depth = 0
        for i in range(start, len(self.tokens)):
            t = self.tokens[i]
            if t.kind == "op" and t.text == "(":
                depth += 1
            elif t.kind == "op" and t.text == ")":
                depth -= 1
                if depth == 0:
                    return i
        return None

    # -- formulae

    def formula(self) -> Formula:
        left = self.implication()
        while self.at("<->"):
            self.pos += 1
            left = Iff(left, self.implication())
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.at("->"):
            self.pos += 1
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.at("or"):
            self.pos += 1
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self.at("and"):
            self.pos += 1
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        if self.at("not"):
            self.pos += 1
            return Not(self.unary())
        if self.at("("):
            close = self.closing_paren(self.pos)
            after = self.tokens[close + 1] if close is not None else None
            # "(...)" followed by a predicate or set operator is a term
            if after is None or not (after.kind in ("op", "kw") and after.text in _TERM_FOLLOW):
                opener = self.expect("(")
                inner = self.formula()
                self.expect(")", opener)
                return inner
        return self.atom()

    def atom(self) -> Formula:
        tok = self.peek()
        if tok.kind == "ivar":
            self.pos += 1
            if self.at("in", "notin"):
                neg = self.peek().text == "notin"
                self.pos += 1
                a = Atom(Relation.SUB, Singleton(tok.text), self.term())
                return Not(a) if neg else a
            if self.at("=", "!="):
                neg = self.peek().text == "!="
                self.pos += 1
                other = self.peek()
                if other.kind != "ivar":
                    self.fail(other, f"unexpected {self.describe(other)}", ["individual variable"])
                self.pos += 1
                a = Atom(Relation.EQ, Singleton(tok.text), Singleton(other.text))
                return Not(a) if neg else a
            self.fail(self.peek(), f"unexpected {self.describe(self.peek())}",
                      ["'in'", "'notin'", "'='", "'!='"])
        left = self.term()
        op = self.peek()
        if not (op.kind in ("op", "kw") and op.text in ("=", "!=", "sub")):
            self.fail(op, f"unexpected {self.describe(op)}", ["'='", "'!='", "'sub'"])
        self.pos += 1
        right = self.term()
        rel = Relation.SUB if op.text == "sub" else Relation.EQ
        a = Atom(rel, left, right)
        return Not(a) if op.text == "!=" else a

    # -- terms

    def term(self) -> Term:
        left = self.inter()
        while self.at("+"):
            self.pos += 1
            left = Union(left, self.inter())
        return left

    def inter(self) -> Term:
        left = self.prim()
        while self.at("&", "-"):
            cls = Intersection if self.peek().text == "&" else Difference
            self.pos += 1
            left = cls(left, self.prim())
        return left

    def prim(self) -> Term:
        tok = self.peek()
        if tok.kind == "setvar":
            self.pos += 1
            return SetVar(tok.text)
        if tok.kind == "zero":
            self.pos += 1
            return EMPTY
        if tok.kind == "kw" and tok.text == "c":
            self.pos += 1
            opener = self.expect("(")
            arg = self.term()
            self.expect(")", opener)
            return Choice(arg)
        if self.at("{"):
            opener = self.peek()
            self.pos += 1
            names = [self.ivar()]
            while self.at(","):
                self.pos += 1
                names.append(self.ivar())
            self.expect("}", opener)
            return union_of(*(Singleton(n) for n in names))
        if self.at("("):
            opener = self.peek()
            self.pos += 1
            inner = self.term()
            self.expect(")", opener)
            return inner
        self.fail(tok, f"unexpected {self.describe(tok)}",
                  ["set variable", "'0'", "'{'", "'c('", "'('"])

    def ivar(self) -> str:
        tok = self.peek()
        if tok.kind != "ivar":
            self.fail(tok, f"unexpected {self.describe(tok)}", ["individual variable"])
        self.pos += 1
        return tok.text


def parse_formula(src: str) -> Formula:
    """Parse ``src``; raises :class:`ParseError` on the first error."""
    p = _Parser(src)
    if p.peek().kind == "eof":
        p.fail(p.peek(), "empty input", ["formula"])
    f = p.formula()
    tok = p.peek()
    if tok.kind != "eof":
        p.fail(tok, f"unexpected {p.describe(tok)}", ["end of input"])
    return f


def parse_term(src: str) -> Term:
    p = _Parser(src)
    t = p.term()
    if p.peek().kind != "eof":
        p.fail(p.peek(), f"unexpected {p.describe(p.peek())}", ["end of input"])
    return t
