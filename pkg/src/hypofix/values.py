"""Runtime values of the term language.

The value universe is: nil, t, arbitrary-precision integers, rationals
(always in lowest terms, never with denominator 1), characters, strings,
symbols, and pairs (which may be improper, e.g. ``(-25 . 0)``).

All values are immutable and hashable so they can be deduplicated and used
as memoization keys.
"""

from __future__ import annotations

from fractions import Fraction


class _Nil:
    """The single nil value; the only falsy value of the language."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "nil"


class _T:
    """The canonical true value."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "t"


NIL = _Nil()
T = _T()

_SYMBOLS: dict[str, "Symbol"] = {}


class Symbol:
    """An interned symbol. Distinct from nil/t and from strings."""

    __slots__ = ("name",)

    def __new__(cls, name: str):
        sym = _SYMBOLS.get(name)
        if sym is None:
            sym = super().__new__(cls)
            sym.name = name
            _SYMBOLS[name] = sym
        return sym

    def __repr__(self):
        return self.name

    def __hash__(self):
        return hash(("sym", self.name))

    def __eq__(self, other):
        return self is other


class Char:
    """A single character, distinct from a length-1 string."""

    __slots__ = ("ch",)

    def __init__(self, ch: str):
        if len(ch) != 1:
            raise ValueError(f"Char needs exactly one character, got {ch!r}")
        self.ch = ch

    def __repr__(self):
        return f"#\\{self.ch}"

    def __hash__(self):
        return hash(("char", self.ch))

    def __eq__(self, other):
        return isinstance(other, Char) and other.ch == self.ch


class Pair:
    """A cons cell. The tail need not be a list, so improper lists exist."""

    __slots__ = ("head", "tail", "_hash")

    def __init__(self, head, tail):
        self.head = head
        self.tail = tail
        self._hash = None

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash(("pair", self.head, self.tail))
        return h

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Pair):
            return False
        # iterative along the spine to keep deep/thin lists cheap
        a, b = self, other
        while isinstance(a, Pair) and isinstance(b, Pair):
            if a is b:
                return True
            if a.head != b.head:
                return False
            a, b = a.tail, b.tail
        return a == b

    def __repr__(self):
        from .sexpr import print_value

        return print_value(self)


# A Value is: NIL | T | int | Fraction | Char | str | Symbol | Pair.
Value = object


def normalize_number(q) -> "int | Fraction":
    """Collapse a rational with denominator 1 to an int."""
    if isinstance(q, Fraction):
        if q.denominator == 1:
            return int(q)
        return q
    return q


def is_number(v) -> bool:
    return type(v) is int or type(v) is Fraction


def truthy(v) -> bool:
    """Everything except nil is true."""
    return v is not NIL


def cons_list(*items, tail=NIL):
    """Build a (possibly improper) list value from python items."""
    out = tail
    for item in reversed(items):
        out = Pair(item, out)
    return out


_KIND_RANK = {}


def _kind_rank(v) -> int:
    t = type(v)
    if v is NIL:
        return 0
    if v is T:
        return 1
    if t is int or t is Fraction:
        return 2
    if t is Char:
        return 3
    if t is str:
        return 4
    if t is Symbol:
        return 5
    return 6  # Pair


def value_order_key(v):
    """Total-order key over the whole value universe.

    Ranks by kind (nil < t < numbers < chars < strings < symbols < pairs),
    then within a kind: numbers by value, chars/strings/symbols
    lexicographically, pairs lexicographically on (head, tail).
    """
    rank = _kind_rank(v)
    if rank == 2:
        return (2, Fraction(v))
    if rank == 3:
        return (3, v.ch)
    if rank == 4:
        return (4, v)
    if rank == 5:
        return (5, v.name)
    if rank == 6:
        # tuple of keys along the spine, then the final tail's key
        keys = [6]
        while isinstance(v, Pair):
            keys.append(value_order_key(v.head))
            v = v.tail
        keys.append(value_order_key(v))
        return tuple(keys)
    return (rank,)


def value_lt(a, b) -> bool:
    """The `<<` total order used by the optional comparator vocabulary."""
    ka, kb = value_order_key(a), value_order_key(b)
    # mixed tuple shapes compare fine because ranks differ at position 0
    if ka[0] != kb[0]:
        return ka[0] < kb[0]
    return ka < kb
