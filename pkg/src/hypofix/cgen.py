"""Counterexample and witness generation.

A test bank for a conjecture is built in two phases:

1. exhaustive evaluation over the cross product of a fixed pool of small,
   "interesting" values (when the product is small enough), enumerated in
   a seed-shuffled order so truncation to the target counts keeps a
   representative mix rather than a prefix of the product order;
2. stratified random sampling until both targets are met or the trial
   budget runs out.

Both lists are deduplicated; every returned assignment re-evaluates to its
claimed classification.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .lang import DEFAULT_STEP_BUDGET, DefTable, EvalError, eval_term
from .terms import Term, free_vars
from .values import NIL, Char, Pair, Symbol, T, truthy

DEFAULT_SEED = 2025

# Small pool whose cross product phase 1 sweeps exhaustively. These are
# the degenerate bindings every assessment example relies on.
SMALL_POOL = (
    NIL,
    T,
    0,
    1,
    -1,
    Fraction(1, 2),
    "",
    "a",
    Symbol("sym"),
    Pair(NIL, NIL),
    Pair(1, Pair(2, NIL)),
    Pair(1, 2),
)

PHASE1_LIMIT = 10_000

_SYMBOL_POOL = ("a", "b", "c", "k", "foo", "bar", "sym")
_CHAR_POOL = "abcxyz019"

# kind -> cumulative weight; pairs and integers dominate the paper's
# displayed examples.
_KIND_WEIGHTS = (
    ("nil", 10),
    ("t", 5),
    ("int", 25),
    ("rat", 10),
    ("char", 5),
    ("str", 10),
    ("sym", 10),
    ("pair", 25),
)


class BankError(Exception):
    """kind is 'no_counterexamples' or 'no_witnesses'."""

    def __init__(self, kind: str):
        msg = {
            "no_counterexamples": "no counterexamples found: "
            "conjecture appears true at tested scale",
            "no_witnesses": "no witnesses found: cannot separate",
        }[kind]
        super().__init__(msg)
        self.kind = kind


@dataclass
class GenConfig:
    target_cex: int = 50
    target_wit: int = 50
    max_trials: int = 100_000
    seed: int = DEFAULT_SEED
    size_budget: int = 8

    def __post_init__(self):
        if self.target_cex < 1 or self.target_wit < 1:
            raise ValueError("targets must be >= 1")
        if self.max_trials < max(self.target_cex, self.target_wit):
            raise ValueError("max_trials must cover the targets")


@dataclass
class TestBank:
    """Ordered counterexamples and witnesses for one conjecture."""

    goal: Term
    vars: list[str]
    cex: list[dict]
    wit: list[dict]

    @property
    def size(self) -> int:
        return len(self.cex) + len(self.wit)


def sample_value(rng: random.Random, size_budget: int):
    """Draw one random value; recursion consumes budget so this terminates."""
    if size_budget < 1:
        raise ValueError("size_budget must be >= 1")
    while True:
        r = rng.randrange(100)
        acc = 0
        kind = "pair"
        for name, w in _KIND_WEIGHTS:
            acc += w
            if r < acc:
                kind = name
                break
        if kind == "pair" and size_budget < 2:
            continue
        break
    if kind == "nil":
        return NIL
    if kind == "t":
        return T
    if kind == "int":
        return rng.randint(-100, 100)
    if kind == "rat":
        num = rng.randint(-20, 20)
        den = rng.choice((2, 3, 4, 5, 7))
        from .values import normalize_number

        return normalize_number(Fraction(num, den))
    if kind == "char":
        return Char(rng.choice(_CHAR_POOL))
    if kind == "str":
        n = rng.randint(0, min(3, size_budget))
        return "".join(rng.choice(_CHAR_POOL) for _ in range(n))
    if kind == "sym":
        return Symbol(rng.choice(_SYMBOL_POOL))
    # pair: split the remaining budget between head and tail
    head_budget = rng.randint(1, size_budget - 1)
    head = sample_value(rng, head_budget)
    tail = sample_value(rng, size_budget - head_budget)
    return Pair(head, tail)


def pool_assignments(vars: list[str]) -> list[dict] | None:
    """The phase-1 exhaustive assignments, or None when the product is
    too large to sweep."""
    n = len(SMALL_POOL) ** len(vars)
    if n > PHASE1_LIMIT:
        return None
    out = [{}]
    for v in vars:
        out = [dict(a, **{v: val}) for a in out for val in SMALL_POOL]
    return out


def build_bank(
    goal: Term,
    cfg: GenConfig,
    table: DefTable,
    step_budget: int = DEFAULT_STEP_BUDGET,
) -> TestBank:
    """Find counterexamples and witnesses for goal.

    Deterministic for a fixed config (including seed). Raises BankError
    when either list would be empty.
    """
    vars = sorted(free_vars(goal))
    rng = random.Random(cfg.seed)
    cex: list[dict] = []
    wit: list[dict] = []
    seen: set[tuple] = set()

    def consider(assignment: dict) -> None:
        key = tuple(assignment[v] for v in vars)
        if key in seen:
            return
        seen.add(key)
        try:
            value = eval_term(goal, assignment, table, step_budget)
        except EvalError:
            return
        if truthy(value):
            if len(wit) < cfg.target_wit:
                wit.append(assignment)
        else:
            if len(cex) < cfg.target_cex:
                cex.append(assignment)

    phase1 = pool_assignments(vars)
    if phase1 is not None:
        rng.shuffle(phase1)
        for a in phase1:
            consider(a)

    trials = 0
    while (
        (len(cex) < cfg.target_cex or len(wit) < cfg.target_wit)
        and trials < cfg.max_trials
        and vars
    ):
        trials += 1
        consider({v: sample_value(rng, cfg.size_budget) for v in vars})

    if not cex:
        raise BankError("no_counterexamples")
    if not wit:
        raise BankError("no_witnesses")
    return TestBank(goal=goal, vars=vars, cex=cex, wit=wit)
