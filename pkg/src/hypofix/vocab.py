"""Symbol sets that seed template generation.

The candidate language combines a fixed list of primitive monadic
predicates with function symbols mined from the goal and, level by level,
from the bodies of definitions already collected. Logical connectives
never enter the mined set, and neither do the primitive predicates
themselves: predicates are never nested inside one another, so they may
not reappear as term skeletons.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .lang import DefTable
from .terms import App, CONNECTIVES, Term
from .values import NIL, T

# Fixed tau-style monadic predicate dictionary; not extended when new
# definitions appear.
PRIMITIVE_PREDICATES = (
    "consp",
    "atom",
    "stringp",
    "symbolp",
    "integerp",
    "rationalp",
    "numberp",
    "natp",
    "posp",
    "booleanp",
    "characterp",
    "true-listp",
)

COMPARATORS = ("equal", "<<")

DEFAULT_LEAF_CONSTANTS = (0, 1, T, NIL)


@dataclass
class Vocabulary:
    primitive_preds: list[str]
    comparators: list[str]
    extra_preds: list[tuple[str, int]]
    term_fns: list[tuple[str, int]]
    leaf_constants: list[object]
    variables: list[str]


def _symbols_in(t: Term) -> set[str]:
    out: set[str] = set()
    stack = [t]
    while stack:
        node = stack.pop()
        if type(node) is App:
            out.add(node.fn)
            stack.extend(node.args)
    return out


def mine_functions(
    goal: Term, table: DefTable, def_depth: int
) -> list[tuple[str, int]]:
    """Function symbols in the goal, expanded def_depth levels into the
    bodies of already-collected user definitions. Sorted alphabetically."""
    if def_depth < 0:
        raise ValueError("def_depth must be >= 0")
    collected = {s for s in _symbols_in(goal) if s not in CONNECTIVES}
    frontier = set(collected)
    for _ in range(def_depth):
        added: set[str] = set()
        for name in frontier:
            d = table.lookup(name)
            if d is None:
                continue
            for s in _symbols_in(d.body):
                if s not in CONNECTIVES and s not in collected:
                    added.add(s)
        if not added:
            break
        collected |= added
        frontier = added
    out = []
    for name in sorted(collected):
        arity = table.arity(name)
        if arity is not None:
            out.append((name, arity))
    return out


def build_vocabulary(
    goal: Term,
    table: DefTable,
    def_depth: int = 1,
    extra_preds: tuple[str, ...] = (),
    enable_comparators: bool = False,
    enable_constants: bool = False,
) -> Vocabulary:
    """Assemble the full candidate vocabulary for one goal.

    Comparators default off; leaf constants ride along with them (or can
    be forced on), since constants are only worth exploring when there is
    a comparator to relate them to anything.
    """
    from .terms import free_vars

    resolved_extra: list[tuple[str, int]] = []
    for name in extra_preds:
        arity = table.arity(name)
        if arity is None:
            raise ValueError(f"unknown extra predicate {name!r}")
        resolved_extra.append((name, arity))

    prim_set = set(PRIMITIVE_PREDICATES)
    mined = [
        (name, arity)
        for name, arity in mine_functions(goal, table, def_depth)
        if name not in prim_set
    ]

    use_constants = enable_constants or enable_comparators
    return Vocabulary(
        primitive_preds=list(PRIMITIVE_PREDICATES),
        comparators=list(COMPARATORS) if enable_comparators else [],
        extra_preds=resolved_extra,
        term_fns=mined,
        leaf_constants=list(DEFAULT_LEAF_CONSTANTS) if use_constants else [],
        variables=sorted(free_vars(goal)),
    )
