"""Lazy generation of candidate-hypothesis terms.

Candidates are assembled in stages: Boolean patterns (partial expressions
whose placeholder slots host predicates) x predicate templates x term
templates x leaf fillings. Everything streams through mixed-radix
counters so one fully ground term is materialized at a time.

Boolean pattern grammar. A pattern is a slot, a negated slot, or a binary
``and``/``or`` of sub-patterns, limited by three rules besides the depth
bound (every connective level counts toward depth):

* negation applies directly to slots only;
* ``or`` takes un-negated children;
* patterns carry at most ``MAX_SLOTS`` slots, and a connective never
  appears directly under itself (associativity duplicates).

The slot cap matches the structure of the original system's reported
default template count, keeps the candidate space inside the run cap, and
keeps disjunction - the generalizing connective whose over-weakening
failure mode the assessment corpus reproduces - from drowning simple type
hypotheses under spuriously general covers. Negative slots under ``or``
are excluded for the same reason: a disjoined negation of a broad
recognizer subsumes nearly everything the bank can distinguish.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .terms import App, Const, Term, Var
from .vocab import Vocabulary

MAX_SLOTS = 2


class Hole(Term):
    """Placeholder leaf of a template; filled left-to-right."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("hole")

    def __repr__(self):
        return "_"


HOLE = Hole()


def hole_count(t: Term) -> int:
    if t is HOLE:
        return 1
    if type(t) is App:
        return sum(hole_count(a) for a in t.args)
    return 0


def template_str(t: Term) -> str:
    """Render a template with ``_`` for holes; used for logs and sorting."""
    if t is HOLE:
        return "_"
    if type(t) is Var:
        return t.name
    if type(t) is Const:
        from .sexpr import print_term

        return print_term(t)
    return "(" + " ".join([t.fn] + [template_str(a) for a in t.args]) + ")"


def _is_not(t: Term) -> bool:
    return type(t) is App and t.fn == "not"


def boolean_patterns(max_depth: int, max_slots: int = MAX_SLOTS) -> list[Term]:
    """All Boolean pattern shapes of connective depth <= max_depth, one
    representative per unordered shape for the commutative connectives."""
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    shapes: list[Term] = [HOLE]
    keys = {template_str(HOLE)}

    def consider(t: Term):
        key = template_str(t)
        if key not in keys:
            keys.add(key)
            shapes.append(t)

    current = [HOLE]
    for _ in range(max_depth):
        grown = list(current)
        for s in current:
            if s is HOLE:
                grown.append(App("not", [HOLE]))
        for op in ("and", "or"):
            for a in current:
                for b in current:
                    if op == "or" and (_is_not(a) or _is_not(b)):
                        continue
                    if (type(a) is App and a.fn == op) or (
                        type(b) is App and b.fn == op
                    ):
                        continue
                    if hole_count(a) + hole_count(b) > max_slots:
                        continue
                    # commutative: keep children in canonical key order
                    if template_str(a) <= template_str(b):
                        grown.append(App(op, [a, b]))
                    else:
                        grown.append(App(op, [b, a]))
        current = []
        for t in grown:
            key = template_str(t)
            if key not in keys:
                keys.add(key)
                shapes.append(t)
            current.append(t)
        # dedup the working set as well
        seen = set()
        uniq = []
        for t in current:
            k = template_str(t)
            if k not in seen:
                seen.add(k)
                uniq.append(t)
        current = uniq
    return shapes


def predicate_templates(v: Vocabulary) -> list[Term]:
    """One template per primitive predicate, enabled comparator, and
    user-supplied extra predicate. Never nested in each other."""
    out = [App(p, [HOLE]) for p in v.primitive_preds]
    out.extend(App(c, [HOLE, HOLE]) for c in v.comparators)
    out.extend(App(name, [HOLE] * arity) for name, arity in v.extra_preds)
    return out


def term_templates(v: Vocabulary, term_depth: int) -> list[Term]:
    """Skeletons over the mined function symbols up to the given nesting
    depth, plus the bare hole (pass a leaf straight through)."""
    if term_depth < 1:
        raise ValueError("term_depth must be >= 1")
    level: list[Term] = [HOLE]
    for _ in range(term_depth):
        next_level = [HOLE]
        seen = {template_str(HOLE)}
        for name, arity in v.term_fns:
            for combo in _tuples(level, arity):
                t = App(name, combo)
                key = template_str(t)
                if key not in seen:
                    seen.add(key)
                    next_level.append(t)
        level = next_level
    skeletons = [t for t in level if t is not HOLE]
    skeletons.sort(key=template_str)
    return skeletons + [HOLE]


def _tuples(pool: list[Term], n: int) -> Iterator[tuple]:
    if n == 0:
        yield ()
        return
    for rest in _tuples(pool, n - 1):
        for item in pool:
            yield (item,) + rest


def decode_mixed_radix(index: int, base: int, digits: int) -> list[int]:
    """Most-significant-digit-first expansion of index in the given base."""
    if index < 0 or index >= base**digits:
        raise ValueError("index out of range")
    out = [0] * digits
    for i in range(digits - 1, -1, -1):
        out[i] = index % base
        index //= base
    return out


def fill_holes(template: Term, fillers: list[Term]) -> Term:
    """Replace holes left-to-right by the given subtrees."""
    it = iter(fillers)

    def go(t: Term) -> Term:
        if t is HOLE:
            return next(it)
        if type(t) is App:
            return App(t.fn, [go(a) for a in t.args])
        return t

    out = go(template)
    try:
        next(it)
    except StopIteration:
        return out
    raise ValueError("too many fillers")


def combine(bool_pats: Iterable[Term], pred_tpls: list[Term]) -> Iterator[Term]:
    """Every assignment of predicate templates to Boolean-pattern slots,
    independently per slot."""
    p = len(pred_tpls)
    for pat in bool_pats:
        slots = hole_count(pat)
        if slots == 0:
            yield pat
            continue
        for index in range(p**slots):
            digits = decode_mixed_radix(index, p, slots)
            yield fill_holes(pat, [pred_tpls[d] for d in digits])


def combined_template_count(n_preds: int, bool_pats: Iterable[Term]) -> int:
    return sum(n_preds ** hole_count(pat) for pat in bool_pats)


def canonical_commutative(t: Term) -> bool:
    """True iff every and/or node's children are in canonical print order."""
    if type(t) is not App:
        return True
    if t.fn in ("and", "or") and len(t.args) == 2:
        from .sexpr import print_term

        a, b = t.args
        if print_term(a) > print_term(b):
            return False
    return all(canonical_commutative(a) for a in t.args)


def instantiate_stream(
    combined: Term, term_tpls: list[Term], leaves: list[Term]
) -> Iterator[Term]:
    """Ground a combined template lazily.

    Stage 1 fills each predicate-argument hole with a term template via a
    mixed-radix counter; stage 2 fills the remaining holes with leaves via
    a second counter. Ground terms whose commutative children are out of
    canonical order are skipped: the in-order permutation is produced by a
    sibling counter state, so the stream as a whole is duplicate-free.
    """
    if not leaves:
        raise ValueError("leaves must be nonempty")
    n1 = len(term_tpls)
    slots = hole_count(combined)
    if slots == 0:
        if canonical_commutative(combined):
            yield combined
        return
    for idx1 in range(n1**slots):
        digits = decode_mixed_radix(idx1, n1, slots)
        staged = fill_holes(combined, [term_tpls[d] for d in digits])
        residual = hole_count(staged)
        if residual == 0:
            if canonical_commutative(staged):
                yield staged
            continue
        n2 = len(leaves)
        for idx2 in range(n2**residual):
            digits2 = decode_mixed_radix(idx2, n2, residual)
            ground = fill_holes(staged, [leaves[d] for d in digits2])
            if canonical_commutative(ground):
                yield ground


def leaf_terms(v: Vocabulary) -> list[Term]:
    return [Var(name) for name in v.variables] + [
        Const(c) for c in v.leaf_constants
    ]


def ground_atoms(
    v: Vocabulary, term_depth: int, full: bool
) -> list[Term]:
    """Ground predicate instances: each predicate template instantiated
    over term templates and leaves (full tier) or leaves alone (leaf
    tier). Extra predicates always take leaves directly; they exist to
    appear in hypotheses verbatim, not to be recombined with mined terms.
    """
    leaves = leaf_terms(v)
    if not leaves:
        return []
    tpls = term_templates(v, term_depth) if full else [HOLE]
    out: list[Term] = []
    for pred in predicate_templates(v):
        is_extra = any(pred.fn == name for name, _ in v.extra_preds)
        fills = [HOLE] if is_extra else tpls
        out.extend(instantiate_stream(pred, fills, leaves))
    return out
