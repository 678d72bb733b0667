"""Abstract syntax of the term language.

A term is a variable, a quoted constant, or an application of a function
symbol to argument terms. Symbols are plain lowercase strings here;
`values.Symbol` is reserved for symbol *values*.
"""

from __future__ import annotations

from typing import Iterator


class Term:
    __slots__ = ()


class Var(Term):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name

    def __eq__(self, other):
        return type(other) is Var and other.name == self.name

    def __hash__(self):
        return hash(("var", self.name))

    def __repr__(self):
        return f"Var({self.name})"


class Const(Term):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value

    def __eq__(self, other):
        return type(other) is Const and other.value == self.value

    def __hash__(self):
        return hash(("const", self.value))

    def __repr__(self):
        return f"Const({self.value!r})"


class App(Term):
    __slots__ = ("fn", "args", "_hash")

    def __init__(self, fn: str, args):
        self.fn = fn
        self.args = tuple(args)
        self._hash = None

    def __eq__(self, other):
        return (
            type(other) is App
            and other.fn == self.fn
            and other.args == self.args
        )

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash(("app", self.fn, self.args))
        return h

    def __repr__(self):
        from .sexpr import print_term

        return f"<{print_term(self)}>"


CONNECTIVES = frozenset({"and", "or", "not", "implies", "if", "equal"})


def free_vars(t: Term) -> set[str]:
    """Exact free-variable set; constants contribute nothing."""
    out: set[str] = set()
    stack = [t]
    while stack:
        node = stack.pop()
        if type(node) is Var:
            out.add(node.name)
        elif type(node) is App:
            stack.extend(node.args)
    return out


def subterms(t: Term) -> Iterator[Term]:
    """All subterms of t, including t itself."""
    stack = [t]
    while stack:
        node = stack.pop()
        yield node
        if type(node) is App:
            stack.extend(node.args)


def depth(t: Term) -> int:
    """Nesting depth: leaves are 1, an application is 1 + max over args.

    Used as the syntactic-complexity measure for suggestion tie-breaking;
    deliberately coarse so that structurally different renderings of the
    same idea tie instead of ousting one another.
    """
    if type(t) is not App:
        return 1
    if not t.args:
        return 1
    return 1 + max(depth(a) for a in t.args)


def node_count(t: Term) -> int:
    """AST size; constants count 1 regardless of their value's size."""
    n = 0
    stack = [t]
    while stack:
        node = stack.pop()
        n += 1
        if type(node) is App:
            stack.extend(node.args)
    return n


def canonical_key(t: Term) -> str:
    """Total deterministic ordering key for terms: the printed form."""
    from .sexpr import print_term

    return print_term(t)
