"""Total, deterministic evaluator for the term language.

Semantics follow total-logic conventions so no candidate hypothesis can
crash the pipeline by a type error alone:

* car/cdr of a non-pair yield nil;
* binary arithmetic coerces non-numbers to 0; so do < and <=;
* ``and`` returns its last operand's value or nil, ``or`` the first
  non-nil operand, ``if``/``implies`` are lazy;
* truthiness is "not nil".

An evaluation fails only on step-budget exhaustion, an unknown function
symbol, or an arity mismatch; callers treat any failure on a candidate
hypothesis as grounds to discard that candidate.
"""

from __future__ import annotations

import sys
from fractions import Fraction
from importlib import resources

from .sexpr import FunctionDef, parse_defs
from .terms import App, Const, Term, Var
from .values import (
    NIL,
    Char,
    Pair,
    Symbol,
    T,
    is_number,
    normalize_number,
    truthy,
    value_lt,
)

DEFAULT_STEP_BUDGET = 100_000

# Call nesting is capped separately from the step budget: deep non-tail
# recursion would otherwise hit the C stack before the budget runs out.
MAX_CALL_DEPTH = 200

if sys.getrecursionlimit() < 8_000:
    sys.setrecursionlimit(8_000)


class EvalError(Exception):
    """kind is one of 'budget_exhausted', 'unknown_function', 'arity_mismatch'."""

    def __init__(self, kind: str, detail: str = ""):
        super().__init__(f"{kind}: {detail}" if detail else kind)
        self.kind = kind


def _bool(b) -> object:
    return T if b else NIL


def _num(v):
    return v if is_number(v) else 0


def _bi_cons(a, b):
    return Pair(a, b)


def _bi_car(a):
    return a.head if type(a) is Pair else NIL


def _bi_cdr(a):
    return a.tail if type(a) is Pair else NIL


def _bi_consp(a):
    return _bool(type(a) is Pair)


def _bi_atom(a):
    return _bool(type(a) is not Pair)


def _bi_equal(a, b):
    return _bool(a == b)


def _bi_add(a, b):
    return normalize_number(_num(a) + _num(b))


def _bi_mul(a, b):
    return normalize_number(_num(a) * _num(b))


def _bi_neg(a):
    return normalize_number(-_num(a))


def _bi_lt(a, b):
    return _bool(_num(a) < _num(b))


def _bi_le(a, b):
    return _bool(_num(a) <= _num(b))


def _bi_stringp(a):
    return _bool(type(a) is str)


def _bi_symbolp(a):
    # nil and t are symbols, matching the host logic the paper's examples
    # live in; plain symbols too.
    return _bool(a is NIL or a is T or type(a) is Symbol)


def _bi_integerp(a):
    return _bool(type(a) is int)


def _bi_rationalp(a):
    return _bool(type(a) is int or type(a) is Fraction)


def _bi_numberp(a):
    # no complex numbers in this universe, so numberp == rationalp
    return _bool(type(a) is int or type(a) is Fraction)


def _bi_natp(a):
    return _bool(type(a) is int and a >= 0)


def _bi_posp(a):
    return _bool(type(a) is int and a > 0)


def _bi_booleanp(a):
    return _bool(a is NIL or a is T)


def _bi_characterp(a):
    return _bool(type(a) is Char)


def _bi_true_listp(a):
    while type(a) is Pair:
        a = a.tail
    return _bool(a is NIL)


def _bi_value_lt(a, b):
    return _bool(value_lt(a, b))


def _bi_explode(a):
    """String to list of characters; nil on non-strings."""
    if type(a) is not str:
        return NIL
    out = NIL
    for ch in reversed(a):
        out = Pair(Char(ch), out)
    return out


def _bi_implode(a):
    """List of characters to string; non-characters flatten to nothing."""
    chars = []
    while type(a) is Pair:
        if type(a.head) is Char:
            chars.append(a.head.ch)
        a = a.tail
    return "".join(chars)


BUILTINS: dict[str, tuple[int, object]] = {
    "cons": (2, _bi_cons),
    "car": (1, _bi_car),
    "cdr": (1, _bi_cdr),
    "consp": (1, _bi_consp),
    "atom": (1, _bi_atom),
    "equal": (2, _bi_equal),
    "+": (2, _bi_add),
    "*": (2, _bi_mul),
    "-": (1, _bi_neg),
    "<": (2, _bi_lt),
    "<=": (2, _bi_le),
    "<<": (2, _bi_value_lt),
    "stringp": (1, _bi_stringp),
    "symbolp": (1, _bi_symbolp),
    "integerp": (1, _bi_integerp),
    "rationalp": (1, _bi_rationalp),
    "numberp": (1, _bi_numberp),
    "natp": (1, _bi_natp),
    "posp": (1, _bi_posp),
    "booleanp": (1, _bi_booleanp),
    "characterp": (1, _bi_characterp),
    "true-listp": (1, _bi_true_listp),
    "explode": (1, _bi_explode),
    "implode": (1, _bi_implode),
}

SPECIAL_FORMS = frozenset({"and", "or", "not", "if", "implies"})


def prelude_text() -> str:
    return (
        resources.files("hypofix").joinpath("prelude.lisp").read_text("utf-8")
    )


class DefTable:
    """Immutable-after-load table of user definitions over the builtins."""

    def __init__(self, defs: list[FunctionDef] | None = None):
        self.defs: dict[str, FunctionDef] = {}
        for d in defs or []:
            self.add(d)

    def add(self, d: FunctionDef):
        if d.name in self.defs or d.name in BUILTINS or d.name in SPECIAL_FORMS:
            raise ValueError(f"redefinition of {d.name}")
        self.defs[d.name] = d

    def lookup(self, name: str) -> FunctionDef | None:
        return self.defs.get(name)

    def arity(self, name: str) -> int | None:
        if name in SPECIAL_FORMS:
            return {"not": 1, "if": 3}.get(name, 2)
        if name in BUILTINS:
            return BUILTINS[name][0]
        d = self.defs.get(name)
        return d.arity if d else None

    def knows(self, name: str) -> bool:
        return (
            name in SPECIAL_FORMS or name in BUILTINS or name in self.defs
        )


def load_prelude(extra_defs_text: str = "") -> DefTable:
    """The bundled prelude, optionally extended by user definitions."""
    table = DefTable(parse_defs(prelude_text()))
    if extra_defs_text:
        for d in parse_defs(extra_defs_text):
            table.add(d)
    return table


class _Budget:
    __slots__ = ("left", "depth")

    def __init__(self, steps: int):
        self.left = steps
        self.depth = 0


def eval_term(
    t: Term,
    env: dict[str, object],
    table: DefTable,
    step_budget: int = DEFAULT_STEP_BUDGET,
):
    """Evaluate t under variable bindings env. Raises EvalError on failure."""
    budget = _Budget(step_budget)
    try:
        return _eval(t, env, table, budget)
    except RecursionError:
        raise EvalError("budget_exhausted", "recursion too deep") from None


def _eval(t: Term, env, table: DefTable, budget: _Budget):
    tt = type(t)
    if tt is Const:
        return t.value
    if tt is Var:
        try:
            return env[t.name]
        except KeyError:
            raise EvalError("unknown_function", f"unbound variable {t.name}") from None

    fn = t.fn
    args = t.args
    budget.left -= 1
    if budget.left < 0:
        raise EvalError("budget_exhausted")

    if fn in SPECIAL_FORMS:
        if fn == "not":
            if len(args) != 1:
                raise EvalError("arity_mismatch", "not takes 1 argument")
            return _bool(not truthy(_eval(args[0], env, table, budget)))
        if fn == "if":
            if len(args) != 3:
                raise EvalError("arity_mismatch", "if takes 3 arguments")
            a = _eval(args[0], env, table, budget)
            return _eval(args[1] if truthy(a) else args[2], env, table, budget)
        if len(args) != 2:
            raise EvalError("arity_mismatch", f"{fn} takes 2 arguments")
        if fn == "and":
            a = _eval(args[0], env, table, budget)
            if not truthy(a):
                return NIL
            return _eval(args[1], env, table, budget)
        if fn == "or":
            a = _eval(args[0], env, table, budget)
            if truthy(a):
                return a
            return _eval(args[1], env, table, budget)
        # implies
        a = _eval(args[0], env, table, budget)
        if not truthy(a):
            return T
        return _bool(truthy(_eval(args[1], env, table, budget)))

    builtin = BUILTINS.get(fn)
    if builtin is not None:
        arity, impl = builtin
        if len(args) != arity:
            raise EvalError("arity_mismatch", f"{fn} takes {arity} arguments")
        if arity == 1:
            return impl(_eval(args[0], env, table, budget))
        return impl(
            _eval(args[0], env, table, budget),
            _eval(args[1], env, table, budget),
        )

    d = table.lookup(fn)
    if d is None:
        raise EvalError("unknown_function", fn)
    if len(args) != d.arity:
        raise EvalError("arity_mismatch", f"{fn} takes {d.arity} arguments")
    call_env = {
        p: _eval(a, env, table, budget) for p, a in zip(d.params, args)
    }
    budget.depth += 1
    if budget.depth > MAX_CALL_DEPTH:
        raise EvalError("budget_exhausted", "call depth limit")
    try:
        return _eval(d.body, call_env, table, budget)
    finally:
        budget.depth -= 1
