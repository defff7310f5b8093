"""Concrete syntax: tokenizer, recursive-descent parser, pretty-printer.

Grammar (loosest to tightest): sum `+`, composition `||`, prefix `.`,
postfix restriction `\\ {a,b}` and relabelling `[b/a]`, atoms. Multi-step
prefixes are written `(a || 'b || tau).P`; a parenthesised group followed
by `.` is re-read as a multi-prefix of actions. Programs are sequences of
`Name = term;` clauses with `#` line comments.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ComplementaryPrefix, SourceError
from .terms import (
    TAU,
    Action,
    Const,
    DefEnv,
    MultiPrefix,
    Nil,
    NIL,
    Par,
    Prefix,
    Process,
    RelabelFn,
    Relabel,
    Restrict,
    Step,
    Sum,
    coname,
    name,
)

KEYWORDS = {"nil", "tau"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<coname>'[a-z][A-Za-z0-9_]*)
  | (?P<name>[a-z][A-Za-z0-9_]*)
  | (?P<const>[A-Z][A-Za-z0-9_]*)
  | (?P<par>\|\|)
  | (?P<op>[+.(){},\[\]/=;\\])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(src: str) -> list[Token]:
    out: list[Token] = []
    line, col, pos = 1, 1, 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if not m:
            raise SourceError(f"unexpected character {src[pos]!r}", line, col)
        kind = m.lastgroup
        text = m.group()
        if kind == "nl":
            line += 1
            col = 1
        elif kind in ("ws", "comment"):
            col += len(text)
        else:
            if kind == "name" and text in KEYWORDS:
                kind = text
            if kind == "par":
                kind = "||"
            if kind == "op":
                kind = text
            out.append(Token(kind, text, line, col))
            col += len(text)
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.peek()
        self.pos += 1
        return t

    def expect(self, kind: str) -> Token:
        t = self.peek()
        if t.kind != kind:
            raise SourceError(
                f"expected {kind!r}, found {t.text or 'end of input'!r}",
                t.line,
                t.col,
            )
        return self.next()

    def fail(self, msg: str) -> SourceError:
        t = self.peek()
        return SourceError(msg, t.line, t.col)

    # --- terms ---

    def term(self) -> Process:
        p = self.par_term()
        while self.peek().kind == "+":
            self.next()
            p = Sum(p, self.par_term())
        return p

    def par_term(self) -> Process:
        p = self.prefix_term()
        while self.peek().kind == "||":
            self.next()
            p = Par(p, self.prefix_term())
        return p

    def action(self) -> Action:
        t = self.peek()
        if t.kind == "tau":
            self.next()
            return TAU
        if t.kind == "name":
            self.next()
            return name(t.text)
        if t.kind == "coname":
            self.next()
            return coname(t.text[1:])
        raise self.fail(f"expected an action, found {t.text or 'end of input'!r}")

    def prefix_term(self) -> Process:
        t = self.peek()
        if t.kind in ("name", "coname", "tau") and self.peek(1).kind == ".":
            a = self.action()
            self.expect(".")
            return Prefix(a, self.prefix_term())
        if t.kind == "(":
            saved = self.pos
            step = self.try_multiprefix_head()
            if step is not None:
                try:
                    mp = MultiPrefix(step, self.prefix_term())
                except ComplementaryPrefix:
                    raise SourceError(
                        "complementary actions in one multi-prefix "
                        "(the side condition α_i ≠ complement of α_j)",
                        t.line,
                        t.col,
                    ) from None
                return mp
            self.pos = saved
        return self.postfix_term()

    def try_multiprefix_head(self) -> Step | None:
        """Attempt `( action (|| action)* ) .`; None if it does not match."""
        saved = self.pos
        self.expect("(")
        acts = []
        while True:
            if self.peek().kind not in ("name", "coname", "tau"):
                self.pos = saved
                return None
            # an action followed by `.` inside the parens is a nested term
            if self.peek(1).kind not in ("||", ")"):
                self.pos = saved
                return None
            acts.append(self.action())
            if self.peek().kind == "||":
                self.next()
                continue
            break
        if self.peek().kind != ")" or self.peek(1).kind != ".":
            self.pos = saved
            return None
        self.next()
        self.next()
        return Step.of(acts)

    def postfix_term(self) -> Process:
        p = self.atom()
        while True:
            t = self.peek()
            if t.kind == "\\":
                self.next()
                p = Restrict(p, self.label_set())
            elif t.kind == "[":
                p = Relabel(p, self.relabelling())
            else:
                return p

    def label_set(self) -> frozenset[str]:
        self.expect("{")
        labels: set[str] = set()
        if self.peek().kind != "}":
            while True:
                t = self.expect("name")
                labels.add(t.text)
                if self.peek().kind == ",":
                    self.next()
                    continue
                break
        self.expect("}")
        return frozenset(labels)

    def relabelling(self) -> RelabelFn:
        tok = self.expect("[")
        pairs: dict[str, str] = {}
        while True:
            new = self.expect("name").text
            self.expect("/")
            old_tok = self.expect("name")
            if old_tok.text in pairs:
                raise SourceError(
                    f"relabelling maps {old_tok.text} twice",
                    old_tok.line,
                    old_tok.col,
                )
            pairs[old_tok.text] = new
            if self.peek().kind == ",":
                self.next()
                continue
            break
        self.expect("]")
        del tok
        return RelabelFn.of(pairs)

    def atom(self) -> Process:
        t = self.peek()
        if t.kind == "nil":
            self.next()
            return NIL
        if t.kind == "const":
            self.next()
            return Const(t.text)
        if t.kind == "(":
            self.next()
            p = self.term()
            self.expect(")")
            return p
        raise self.fail(f"expected a term, found {t.text or 'end of input'!r}")

    # --- programs ---

    def program(self) -> DefEnv:
        env = DefEnv()
        while self.peek().kind != "eof":
            t = self.peek()
            if t.kind != "const":
                raise self.fail(
                    f"expected a definition, found {t.text or 'end of input'!r}"
                )
            self.next()
            self.expect("=")
            body = self.term()
            self.expect(";")
            try:
                env.define(t.text, body)
            except Exception as e:
                raise SourceError(str(e), t.line, t.col) from None
        return env


def parse_term(src: str) -> Process:
    p = _Parser(tokenize(src))
    term = p.term()
    t = p.peek()
    if t.kind != "eof":
        raise SourceError(f"trailing input {t.text!r}", t.line, t.col)
    return term


def parse_program(src: str, validate: bool = True) -> DefEnv:
    env = _Parser(tokenize(src)).program()
    if validate:
        env.validate()
    return env


# --- printing ---

_SUM, _PAR, _PREFIX, _ATOM = 0, 1, 2, 3


def _level(p: Process) -> int:
    if isinstance(p, Sum):
        return _SUM
    if isinstance(p, Par):
        return _PAR
    if isinstance(p, (Prefix, MultiPrefix)):
        return _PREFIX
    return _ATOM


def pretty(p: Process) -> str:
    def wrap(q: Process, minimum: int) -> str:
        s = pretty(q)
        return f"({s})" if _level(q) < minimum else s

    if isinstance(p, Nil):
        return "nil"
    if isinstance(p, Const):
        return p.name
    if isinstance(p, Prefix):
        return f"{p.action.render()}.{wrap(p.body, _PREFIX)}"
    if isinstance(p, MultiPrefix):
        inner = " || ".join(a.render() for a in p.step)
        return f"({inner}).{wrap(p.body, _PREFIX)}"
    if isinstance(p, Sum):
        return f"{wrap(p.left, _SUM)} + {wrap(p.right, _SUM + 1)}"
    if isinstance(p, Par):
        return f"{wrap(p.left, _PAR)} || {wrap(p.right, _PAR + 1)}"
    if isinstance(p, Restrict):
        labels = ",".join(sorted(p.labels))
        return f"{wrap(p.body, _ATOM)} \\ {{{labels}}}"
    if isinstance(p, Relabel):
        # an identity relabelling still needs a parseable form
        fn = p.fn.render() or "a/a"
        return f"{wrap(p.body, _ATOM)}[{fn}]"
    raise TypeError(p)


def pretty_program(env: DefEnv) -> str:
    return "".join(f"{a} = {pretty(env.defs[a])};\n" for a in env.defs)
