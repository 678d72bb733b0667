"""Bounded verification of repaired conjectures.

Each suggestion h is tested as ``(implies h goal)`` on the exhaustive
small-value pool plus fresh random assignments drawn from a seed disjoint
from the bank's, so suggestions face data they were not selected on.
"likely-valid" means no falsifier was found; it is explicitly not a
proof. No suggestion is dropped based on its status.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .cgen import pool_assignments, sample_value
from .lang import DEFAULT_STEP_BUDGET, DefTable, EvalError, eval_term
from .sieve import LIKELY_VALID, REFUTED, Suggestion
from .terms import Term, free_vars
from .values import truthy

# keeps verification draws disjoint from bank draws under a shared --seed
SEED_OFFSET = 0x5EED5EED


@dataclass
class VerifyConfig:
    trials: int = 20_000
    seed: int = 0
    size_budget: int = 8

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


def verify(
    h: Term,
    goal: Term,
    cfg: VerifyConfig,
    table: DefTable,
    step_budget: int = DEFAULT_STEP_BUDGET,
) -> tuple[str, dict | None, int]:
    """Test (implies h goal); returns (status, refuting assignment or
    None, number of trials skipped by evaluation failures)."""
    vars = sorted(free_vars(goal))
    skipped = 0

    def check(assignment: dict):
        nonlocal skipped
        try:
            hv = eval_term(h, assignment, table, step_budget)
            if not truthy(hv):
                return None
            gv = eval_term(goal, assignment, table, step_budget)
        except EvalError:
            skipped += 1
            return None
        if not truthy(gv):
            return assignment
        return None

    pool = pool_assignments(vars)
    if pool is not None:
        for a in pool:
            falsifier = check(a)
            if falsifier is not None:
                return REFUTED, falsifier, skipped

    rng = random.Random(cfg.seed + SEED_OFFSET)
    for _ in range(cfg.trials):
        if not vars:
            break
        a = {v: sample_value(rng, cfg.size_budget) for v in vars}
        falsifier = check(a)
        if falsifier is not None:
            return REFUTED, falsifier, skipped
    return LIKELY_VALID, None, skipped


def verify_all(
    suggestions: list[Suggestion],
    goal: Term,
    cfg: VerifyConfig,
    table: DefTable,
) -> list[Suggestion]:
    """Attach statuses in place; every suggestion stays in the report."""
    for s in suggestions:
        status, falsifier, _ = verify(s.term, goal, cfg, table)
        s.status = status
        s.refutation = falsifier
    return suggestions
