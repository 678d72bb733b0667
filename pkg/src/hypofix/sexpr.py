"""Parse and print terms, definitions, and values in s-expression syntax.

Grammar notes:

* symbols are case-insensitive on input and canonicalized to lowercase;
* ``nil`` and ``t`` denote the nil/true values, not symbols;
* integers (``-25``) and rationals (``1/2``) are numeric literals;
* strings use double quotes with ``\\"`` escapes, characters are ``#\\a``;
* ``'form`` quotes: inside a quoted form everything is data (no variables);
* dotted pairs (``'(-25 . 0)``) are legal only inside quoted data;
* in an unquoted application the head must be a symbol; other bare symbols
  in operand position are variables.

``parse_term(print_term(t)) == t`` for every term this package builds.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .terms import App, Const, Term, Var
from .values import NIL, Char, Pair, Symbol, T, normalize_number


class ParseError(ValueError):
    """Malformed input; carries the character offset of the problem."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at offset {pos})")
        self.pos = pos


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|;[^\n]*)
  | (?P<open>\()
  | (?P<close>\))
  | (?P<quote>')
  | (?P<string>"(?:\\.|[^"\\])*")
  | (?P<char>\#\\\S)
  | (?P<atom>[^\s()'";]+)
    """,
    re.VERBOSE,
)

_INT_RE = re.compile(r"[+-]?\d+\Z")
_RAT_RE = re.compile(r"[+-]?\d+/\d+\Z")


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens: list[tuple[str, str, int]] = []
        self._scan()
        self.index = 0

    def _scan(self):
        pos = 0
        text = self.text
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                raise ParseError(f"bad character {text[pos]!r}", pos)
            kind = m.lastgroup
            if kind != "ws":
                self.tokens.append((kind, m.group(), pos))
            pos = m.end()

    def peek(self):
        if self.index < len(self.tokens):
            return self.tokens[self.index]
        return ("eof", "", len(self.text))

    def next(self):
        tok = self.peek()
        self.index += 1
        return tok

    def at_eof(self) -> bool:
        return self.index >= len(self.tokens)


def _unescape(body: str) -> str:
    return body.replace('\\"', '"').replace("\\\\", "\\")


def _atom_value(text: str, pos: int):
    """Classify a bare atom token; returns ('num', v) ('sym', name)."""
    if _INT_RE.match(text):
        return ("num", int(text))
    if _RAT_RE.match(text):
        num, den = text.split("/")
        if int(den) == 0:
            raise ParseError("rational with zero denominator", pos)
        return ("num", normalize_number(Fraction(int(num), int(den))))
    if text == ".":
        raise ParseError("stray dot", pos)
    return ("sym", text.lower())


def _parse_datum(tz: _Tokenizer):
    """Parse one quoted-data form into a Value."""
    kind, text, pos = tz.next()
    if kind == "eof":
        raise ParseError("unexpected end of input in quoted form", pos)
    if kind == "close":
        raise ParseError("unbalanced ')'", pos)
    if kind == "quote":
        # nested quote inside data denotes (quote x) as a list
        inner = _parse_datum(tz)
        return Pair(Symbol("quote"), Pair(inner, NIL))
    if kind == "string":
        return _unescape(text[1:-1])
    if kind == "char":
        return Char(text[2:])
    if kind == "atom":
        tag, v = _atom_value(text, pos)
        if tag == "num":
            return v
        if v == "nil":
            return NIL
        if v == "t":
            return T
        return Symbol(v)
    # open paren: list, possibly dotted
    items = []
    while True:
        k, t2, p2 = tz.peek()
        if k == "eof":
            raise ParseError("unbalanced '(' in quoted form", pos)
        if k == "close":
            tz.next()
            out = NIL
            for item in reversed(items):
                out = Pair(item, out)
            return out
        if k == "atom" and t2 == ".":
            if not items:
                raise ParseError("stray dot", p2)
            tz.next()
            tail = _parse_datum(tz)
            k3, _, p3 = tz.next()
            if k3 != "close":
                raise ParseError("expected ')' after dotted tail", p3)
            out = tail
            for item in reversed(items):
                out = Pair(item, out)
            return out
        items.append(_parse_datum(tz))


def _parse_term(tz: _Tokenizer) -> Term:
    kind, text, pos = tz.next()
    if kind == "eof":
        raise ParseError("empty input", pos)
    if kind == "close":
        raise ParseError("unbalanced ')'", pos)
    if kind == "quote":
        return Const(_parse_datum(tz))
    if kind == "string":
        return Const(_unescape(text[1:-1]))
    if kind == "char":
        return Const(Char(text[2:]))
    if kind == "atom":
        tag, v = _atom_value(text, pos)
        if tag == "num":
            return Const(v)
        if v == "nil":
            return Const(NIL)
        if v == "t":
            return Const(T)
        return Var(v)
    # application
    k, t2, p2 = tz.next()
    if k != "atom":
        raise ParseError("application head must be a symbol", p2)
    tag, head = _atom_value(t2, p2)
    if tag != "sym":
        raise ParseError("application head must be a symbol", p2)
    args = []
    while True:
        k, t3, p3 = tz.peek()
        if k == "eof":
            raise ParseError("unbalanced '('", pos)
        if k == "close":
            tz.next()
            return App(head, args)
        if k == "atom" and t3 == ".":
            raise ParseError("stray dot outside quoted data", p3)
        args.append(_parse_term(tz))


def parse_term(text: str) -> Term:
    """Parse a single term; trailing garbage is an error."""
    tz = _Tokenizer(text)
    t = _parse_term(tz)
    if not tz.at_eof():
        _, _, pos = tz.peek()
        raise ParseError("trailing input after term", pos)
    return t


def print_value(v) -> str:
    """Render a value in the canonical (unquoted) data syntax."""
    if v is NIL:
        return "nil"
    if v is T:
        return "t"
    t = type(v)
    if t is int:
        return str(v)
    if t is Fraction:
        return f"{v.numerator}/{v.denominator}"
    if t is Char:
        return f"#\\{v.ch}"
    if t is str:
        body = v.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{body}"'
    if t is Symbol:
        return v.name
    # pair: render the spine, dotting an improper tail
    parts = []
    node = v
    while isinstance(node, Pair):
        parts.append(print_value(node.head))
        node = node.tail
    if node is NIL:
        return "(" + " ".join(parts) + ")"
    return "(" + " ".join(parts) + " . " + print_value(node) + ")"


def _self_evaluating(v) -> bool:
    t = type(v)
    return t is int or t is Fraction or t is str or t is Char


def print_term(t: Term) -> str:
    """Canonical lowercase rendering; inverse of parse_term."""
    tt = type(t)
    if tt is Var:
        return t.name
    if tt is Const:
        if _self_evaluating(t.value):
            return print_value(t.value)
        return "'" + print_value(t.value)
    return "(" + " ".join([t.fn] + [print_term(a) for a in t.args]) + ")"


class FunctionDef:
    """A user definition: ``(defun name (params...) body)``."""

    __slots__ = ("name", "params", "body")

    def __init__(self, name: str, params: list[str], body: Term):
        self.name = name
        self.params = list(params)
        self.body = body

    @property
    def arity(self) -> int:
        return len(self.params)

    def __repr__(self):
        return f"FunctionDef({self.name}/{self.arity})"


def parse_defs(text: str) -> list[FunctionDef]:
    """Parse a sequence of defun forms, in file order."""
    tz = _Tokenizer(text)
    defs: list[FunctionDef] = []
    seen: set[str] = set()
    while not tz.at_eof():
        kind, _, pos = tz.next()
        if kind != "open":
            raise ParseError("expected '(defun ...)'", pos)
        k, t2, p2 = tz.next()
        if k != "atom" or t2.lower() != "defun":
            raise ParseError("expected 'defun'", p2)
        k, t3, p3 = tz.next()
        if k != "atom":
            raise ParseError("expected function name", p3)
        tag, name = _atom_value(t3, p3)
        if tag != "sym":
            raise ParseError("function name must be a symbol", p3)
        if name in seen:
            raise ParseError(f"duplicate function name {name}", p3)
        k, _, p4 = tz.next()
        if k != "open":
            raise ParseError("expected parameter list", p4)
        params: list[str] = []
        while True:
            k, t5, p5 = tz.next()
            if k == "close":
                break
            if k != "atom":
                raise ParseError("expected parameter symbol", p5)
            tag, pname = _atom_value(t5, p5)
            if tag != "sym":
                raise ParseError("parameter must be a symbol", p5)
            if pname in params:
                raise ParseError(f"duplicate parameter {pname}", p5)
            params.append(pname)
        body = _parse_term(tz)
        k, _, p6 = tz.next()
        if k != "close":
            raise ParseError("expected ')' to close defun", p6)
        extra = free_vars_of_body(body) - set(params)
        if extra:
            raise ParseError(
                f"body of {name} uses unbound variables {sorted(extra)}", pos
            )
        seen.add(name)
        defs.append(FunctionDef(name, params, body))
    return defs


def free_vars_of_body(body: Term) -> set[str]:
    from .terms import free_vars

    return free_vars(body)
