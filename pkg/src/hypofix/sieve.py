"""Decide which ground candidates become suggestions.

A candidate survives when it separates the test bank (nil on every
counterexample, truthy on at least one witness), has no redundant
and/or subterm, and is not subsumed. Subsumption is semantic over the
bank: P is at most as general as Q when P's truth vector implies Q's
pointwise over all bank assignments. More general wins; among
equal-vector candidates the syntactically simpler (shallower) one wins,
and exact ties are all kept.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cgen import TestBank
from .lang import DEFAULT_STEP_BUDGET, DefTable, EvalError, eval_term
from .terms import App, Term, depth
from .values import truthy

UNVERIFIED = "unverified"
LIKELY_VALID = "likely-valid"
REFUTED = "refuted"


class CandidateInvalid(Exception):
    """Evaluation of a candidate failed on some bank assignment."""

    def __init__(self, assignment: dict, failure: EvalError):
        super().__init__(str(failure))
        self.assignment = assignment
        self.failure = failure


@dataclass(frozen=True)
class TruthVector:
    """Truthiness bits over the bank's fixed order (bit i = assignment i)."""

    cex_bits: int
    wit_bits: int
    n_cex: int
    n_wit: int

    def separates(self) -> bool:
        return self.cex_bits == 0 and self.wit_bits != 0

    def implies(self, other: "TruthVector") -> bool:
        """Pointwise entailment over cex and wit bits together."""
        return (
            self.cex_bits & ~other.cex_bits == 0
            and self.wit_bits & ~other.wit_bits == 0
        )

    def same_bits(self, other: "TruthVector") -> bool:
        return (
            self.cex_bits == other.cex_bits
            and self.wit_bits == other.wit_bits
        )


def separates(v: TruthVector) -> bool:
    return v.separates()


def entailed_either_way(p: TruthVector, q: TruthVector) -> bool:
    return p.implies(q) or q.implies(p)


class VectorCache:
    """Evaluates truth vectors against one bank, composing and/or/not at
    the truthiness level and memoizing non-connective subterms."""

    def __init__(
        self,
        bank: TestBank,
        table: DefTable,
        step_budget: int = DEFAULT_STEP_BUDGET,
    ):
        self.bank = bank
        self.table = table
        self.step_budget = step_budget
        self._memo: dict[Term, object] = {}
        self.full_cex = (1 << len(bank.cex)) - 1
        self.full_wit = (1 << len(bank.wit)) - 1

    def vector(self, t: Term) -> TruthVector:
        """Raises CandidateInvalid if any bank evaluation fails."""
        tt = type(t)
        if tt is App and t.fn in ("and", "or", "not"):
            args = [self.vector(a) for a in t.args]
            if t.fn == "not" and len(args) == 1:
                return TruthVector(
                    self.full_cex ^ args[0].cex_bits,
                    self.full_wit ^ args[0].wit_bits,
                    args[0].n_cex,
                    args[0].n_wit,
                )
            if len(args) == 2:
                a, b = args
                if t.fn == "and":
                    return TruthVector(
                        a.cex_bits & b.cex_bits,
                        a.wit_bits & b.wit_bits,
                        a.n_cex,
                        a.n_wit,
                    )
                return TruthVector(
                    a.cex_bits | b.cex_bits,
                    a.wit_bits | b.wit_bits,
                    a.n_cex,
                    a.n_wit,
                )
            # odd arity: fall through to direct evaluation
        cached = self._memo.get(t)
        if cached is not None:
            if isinstance(cached, CandidateInvalid):
                raise cached
            return cached
        try:
            vec = self._evaluate(t)
        except CandidateInvalid as inv:
            self._memo[t] = inv
            raise
        self._memo[t] = vec
        return vec

    def _evaluate(self, t: Term) -> TruthVector:
        cex_bits = 0
        for i, a in enumerate(self.bank.cex):
            try:
                if truthy(eval_term(t, a, self.table, self.step_budget)):
                    cex_bits |= 1 << i
            except EvalError as e:
                raise CandidateInvalid(a, e) from None
        wit_bits = 0
        for i, a in enumerate(self.bank.wit):
            try:
                if truthy(eval_term(t, a, self.table, self.step_budget)):
                    wit_bits |= 1 << i
            except EvalError as e:
                raise CandidateInvalid(a, e) from None
        return TruthVector(
            cex_bits, wit_bits, len(self.bank.cex), len(self.bank.wit)
        )


def truth_vector(
    t: Term,
    bank: TestBank,
    table: DefTable,
    cache: VectorCache | None = None,
) -> TruthVector:
    """One evaluation per bank assignment; CandidateInvalid on failure."""
    if cache is None:
        cache = VectorCache(bank, table)
    return cache.vector(t)


def redundant(
    t: Term,
    bank: TestBank,
    table: DefTable,
    cache: VectorCache | None = None,
) -> bool:
    """True iff some and/or node has children whose vectors entail one
    another in either direction; a simpler equivalent candidate is also
    enumerated, so such terms are skipped."""
    if cache is None:
        cache = VectorCache(bank, table)

    def walk(node: Term) -> bool:
        if type(node) is not App:
            return False
        if node.fn in ("and", "or") and len(node.args) == 2:
            a, b = node.args
            if entailed_either_way(cache.vector(a), cache.vector(b)):
                return True
        return any(walk(a) for a in node.args)

    return walk(t)


@dataclass
class Suggestion:
    term: Term
    vector: TruthVector
    complexity: int
    status: str = UNVERIFIED
    refutation: dict | None = None


@dataclass
class SieveStats:
    enumerated: int = 0
    invalid: int = 0
    non_separating: int = 0
    redundant: int = 0
    subsumed: int = 0
    invalid_examples: list = field(default_factory=list)

    def record_invalid(self, inv: CandidateInvalid, term: Term):
        self.invalid += 1
        if len(self.invalid_examples) < 5:
            self.invalid_examples.append((term, inv))

    def consistent_with(self, kept: int) -> bool:
        return (
            self.invalid
            + self.non_separating
            + self.redundant
            + self.subsumed
            + kept
            == self.enumerated
        )


class AdmitState:
    """Kept-set maintenance: forward and backward semantic subsumption
    with the depth-complexity tie rules."""

    def __init__(self):
        self.kept: list[Suggestion] = []
        self.ousted = 0

    def add(self, term: Term, vec: TruthVector, complexity: int) -> bool:
        """Returns True if the candidate entered the kept set."""
        kept = self.kept
        for s in kept:
            if vec.same_bits(s.vector):
                if s.complexity < complexity:
                    return False
                if s.complexity == complexity:
                    if s.term == term:
                        return False
                    # tie: offer both; scan rest for a strict dominator
                    continue
                # s is more complex; backward pass removes it below
            elif vec.implies(s.vector):
                return False
        survivors = []
        for s in kept:
            if vec.same_bits(s.vector):
                if s.complexity > complexity:
                    continue  # ousted: equal meaning, more complex
                survivors.append(s)
            elif s.vector.implies(vec):
                continue  # ousted: strictly less general
            else:
                survivors.append(s)
        self.ousted = len(kept) - len(survivors)
        survivors.append(Suggestion(term, vec, complexity))
        self.kept = survivors
        return True


def admit(
    candidates,
    bank: TestBank,
    table: DefTable,
    stats: SieveStats | None = None,
    cache: VectorCache | None = None,
) -> list[Suggestion]:
    """Run the full sieve over a candidate term stream."""
    if stats is None:
        stats = SieveStats()
    if cache is None:
        cache = VectorCache(bank, table)
    state = AdmitState()
    for t in candidates:
        stats.enumerated += 1
        try:
            vec = cache.vector(t)
        except CandidateInvalid as inv:
            stats.record_invalid(inv, t)
            continue
        if not vec.separates():
            stats.non_separating += 1
            continue
        if redundant(t, bank, table, cache):
            stats.redundant += 1
            continue
        if state.add(t, vec, depth(t)):
            stats.subsumed += state.ousted
        else:
            stats.subsumed += 1
    return state.kept
