"""Pipeline orchestration and command-line interface.

Stage order: parse -> test bank -> vocabulary -> template enumeration ->
sieve -> verify -> report. Enumeration and sieving are fused and
streaming: candidate truth vectors are composed bitwise from the ground
predicate instances' vectors, and a candidate's term object is only
materialized once it survives the separation and redundancy checks.

Exit codes: 0 success, 2 parse error, 3 no counterexamples, 4 no
witnesses, 5 iff goal, 6 candidate cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass

from .cgen import DEFAULT_SEED, BankError, GenConfig, TestBank, build_bank
from .lang import DefTable, load_prelude
from .sexpr import ParseError, parse_term, print_term
from .sieve import (
    AdmitState,
    CandidateInvalid,
    SieveStats,
    Suggestion,
    TruthVector,
    VectorCache,
)
from .terms import App, Term, depth
from .tplgen import (
    HOLE,
    atom_count,
    boolean_patterns,
    combined_template_count,
    ground_atoms,
    predicate_templates,
    template_str,
    term_templates,
)
from .verify import VerifyConfig, verify_all
from .vocab import Vocabulary, build_vocabulary

log = logging.getLogger("hypofix")

DEFAULT_MAX_CANDIDATES = 5_000_000


class IffGoalError(Exception):
    pass


class CandidateCapExceeded(Exception):
    pass


@dataclass
class RunConfig:
    goal_text: str
    defs_text: str = ""
    seed: int = DEFAULT_SEED
    num_cex: int = 50
    num_wit: int = 50
    max_trials: int = 100_000
    size_budget: int = 8
    bool_depth: int = 2
    term_depth: int = 1
    def_depth: int = 1
    extra_preds: tuple[str, ...] = ()
    comparators: bool = False
    constants: bool = False
    verify_trials: int = 20_000
    fmt: str = "text"
    max_candidates: int = DEFAULT_MAX_CANDIDATES

    def __post_init__(self):
        for name in (
            "num_cex",
            "num_wit",
            "max_trials",
            "size_budget",
            "term_depth",
            "verify_trials",
            "max_candidates",
        ):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.fmt not in ("text", "json"):
            raise ValueError("format must be text or json")


def _validate_against_table(t: Term, table: DefTable, what: str):
    stack = [t]
    while stack:
        node = stack.pop()
        if type(node) is App:
            arity = table.arity(node.fn)
            if arity is None:
                raise ParseError(
                    f"unknown function {node.fn!r} in {what}", 0
                )
            if arity != len(node.args):
                raise ParseError(
                    f"{node.fn} takes {arity} arguments, got "
                    f"{len(node.args)} in {what}",
                    0,
                )
            stack.extend(node.args)


def _slot_tiers(pattern: Term) -> list[str]:
    """Classify each slot: 'leaf' when a mined-term fill would sit under a
    disjunction or a top-level negation (the generalizing positions),
    'full' elsewhere."""
    tiers: list[str] = []

    def walk(node: Term, under_or: bool, not_is_root: bool):
        if node is HOLE:
            tiers.append("leaf" if (under_or or not_is_root) else "full")
            return
        if type(node) is App:
            for a in node.args:
                walk(
                    a,
                    under_or or node.fn == "or",
                    node.fn == "not" and not_is_root,
                )

    walk(pattern, False, type(pattern) is App and pattern.fn == "not")
    return tiers


class _AtomTable:
    """Ground predicate instances with pre-evaluated truth vectors."""

    def __init__(self, atoms: list[Term], cache: VectorCache):
        self.terms: list[Term] = []
        self.cex: list[int] = []
        self.wit: list[int] = []
        self.n_invalid = 0
        for t in atoms:
            try:
                v = cache.vector(t)
            except CandidateInvalid:
                self.n_invalid += 1
                continue
            self.terms.append(t)
            self.cex.append(v.cex_bits)
            self.wit.append(v.wit_bits)
        self.n_total = len(atoms)

    @property
    def n_valid(self) -> int:
        return len(self.terms)


def _pattern_total(pattern: Term, n_full: int, n_leaf: int) -> int:
    """Stream length for one pattern (after commutative dedup)."""
    tiers = _slot_tiers(pattern)
    if not tiers:
        return 1
    if type(pattern) is App and pattern.fn in ("and", "or"):
        a, b = pattern.args
        symmetric = template_str(a) == template_str(b)
        n0 = n_full if tiers[0] == "full" else n_leaf
        n1 = n_full if tiers[1] == "full" else n_leaf
        if symmetric:
            return n0 * (n0 + 1) // 2
        return n0 * n1
    n = 1
    for tier in tiers:
        n *= n_full if tier == "full" else n_leaf
    return n


def _make_not(t: Term) -> Term:
    return App("not", [t])


def _make_binary(op: str, a: Term, b: Term) -> Term:
    if print_term(a) <= print_term(b):
        return App(op, [a, b])
    return App(op, [b, a])


def _sieve_patterns(
    patterns: list[Term],
    full: _AtomTable,
    leaf: _AtomTable,
    cache: VectorCache,
    stats: SieveStats,
) -> AdmitState:
    """Fused enumerate+sieve over all pattern instantiations."""
    state = AdmitState()
    full_cex, full_wit = cache.full_cex, cache.full_wit

    n_cex, n_wit = len(cache.bank.cex), len(cache.bank.wit)

    def consider(c_bits, w_bits, build):
        # candidate already known separating and non-redundant
        term = build()
        vec = TruthVector(c_bits, w_bits, n_cex, n_wit)
        if state.add(term, vec, depth(term)):
            stats.subsumed += state.ousted
        else:
            stats.subsumed += 1

    for pattern in patterns:
        tiers = _slot_tiers(pattern)
        is_app = type(pattern) is App
        if not tiers:
            continue
        if pattern is HOLE or (is_app and pattern.fn == "not" and len(tiers) == 1):
            negate = pattern is not HOLE
            table = full if tiers[0] == "full" else leaf
            stats.enumerated += table.n_total
            stats.invalid += table.n_invalid
            non_sep = 0
            for i in range(table.n_valid):
                c, w = table.cex[i], table.wit[i]
                if negate:
                    c, w = full_cex ^ c, full_wit ^ w
                if c != 0 or w == 0:
                    non_sep += 1
                    continue
                atom = table.terms[i]
                consider(c, w, (lambda a=atom: _make_not(a)) if negate else (lambda a=atom: a))
            stats.non_separating += non_sep
            continue

        # binary and/or patterns; children are slots or negated slots
        op = pattern.fn
        kid_a, kid_b = pattern.args
        neg_a, neg_b = type(kid_a) is App, type(kid_b) is App
        sym = template_str(kid_a) == template_str(kid_b)
        tab_a = full if tiers[0] == "full" else leaf
        tab_b = full if tiers[1] == "full" else leaf
        total = _pattern_total(pattern, full.n_total, leaf.n_total)
        valid = _pattern_total(pattern, full.n_valid, leaf.n_valid)
        stats.enumerated += total
        stats.invalid += total - valid

        ca, wa, ta = tab_a.cex, tab_a.wit, tab_a.terms
        cb, wb, tb = tab_b.cex, tab_b.wit, tab_b.terms
        is_and = op == "and"
        non_sep = 0
        redundant_n = 0
        for i in range(tab_a.n_valid):
            ac, aw = ca[i], wa[i]
            if neg_a:
                ac, aw = full_cex ^ ac, full_wit ^ aw
            j0 = i if sym else 0
            for j in range(j0, tab_b.n_valid):
                bc, bw = cb[j], wb[j]
                if neg_b:
                    bc, bw = full_cex ^ bc, full_wit ^ bw
                if is_and:
                    c = ac & bc
                    if c != 0:
                        non_sep += 1
                        continue
                    w = aw & bw
                else:
                    c = ac | bc
                    if c != 0:
                        non_sep += 1
                        continue
                    w = aw | bw
                if w == 0:
                    non_sep += 1
                    continue
                # redundant-subterm check on the two children
                if (
                    (ac & ~bc == 0 and aw & ~bw == 0)
                    or (bc & ~ac == 0 and bw & ~aw == 0)
                ):
                    redundant_n += 1
                    continue

                def build(i=i, j=j):
                    left = _make_not(ta[i]) if neg_a else ta[i]
                    right = _make_not(tb[j]) if neg_b else tb[j]
                    return _make_binary(op, left, right)

                consider(c, w, build)
        stats.non_separating += non_sep
        stats.redundant += redundant_n
    return state


def run(cfg: RunConfig) -> dict:
    """Execute the full pipeline; returns the report as a plain dict."""
    t0 = time.monotonic()
    table = load_prelude(cfg.defs_text)

    goal = parse_term(cfg.goal_text)
    if type(goal) is App and goal.fn == "iff":
        raise IffGoalError(
            "iff goals are not supported; split into two implications"
        )
    _validate_against_table(goal, table, "goal")
    for d in table.defs.values():
        _validate_against_table(d.body, table, f"definition of {d.name}")

    gen_cfg = GenConfig(
        target_cex=cfg.num_cex,
        target_wit=cfg.num_wit,
        max_trials=cfg.max_trials,
        seed=cfg.seed,
        size_budget=cfg.size_budget,
    )
    bank = build_bank(goal, gen_cfg, table)

    vocab = build_vocabulary(
        goal,
        table,
        def_depth=cfg.def_depth,
        extra_preds=tuple(cfg.extra_preds),
        enable_comparators=cfg.comparators,
        enable_constants=cfg.constants,
    )

    patterns = boolean_patterns(cfg.bool_depth)
    preds = predicate_templates(vocab)
    tpls = term_templates(vocab, cfg.term_depth)
    n_combined = combined_template_count(len(preds), patterns)
    log.info(
        "%d boolean patterns x %d predicate templates -> %d combined; "
        "%d term templates",
        len(patterns),
        len(preds),
        n_combined,
        len(tpls),
    )

    # cap check happens on arithmetic counts, before any grounding work
    n_full = atom_count(vocab, cfg.term_depth, full=True)
    n_leaf = atom_count(vocab, cfg.term_depth, full=False)
    projected = sum(_pattern_total(p, n_full, n_leaf) for p in patterns)
    if projected > cfg.max_candidates:
        raise CandidateCapExceeded(
            f"enumeration would visit {projected} candidates "
            f"(cap {cfg.max_candidates}); lower the depths or raise "
            f"--max-candidates"
        )

    cache = VectorCache(bank, table)
    full_atoms = _AtomTable(
        ground_atoms(vocab, cfg.term_depth, full=True), cache
    )
    leaf_atoms = _AtomTable(
        ground_atoms(vocab, cfg.term_depth, full=False), cache
    )

    stats = SieveStats()
    state = _sieve_patterns(patterns, full_atoms, leaf_atoms, cache, stats)
    suggestions = state.kept

    ver_cfg = VerifyConfig(
        trials=cfg.verify_trials, seed=cfg.seed, size_budget=cfg.size_budget
    )
    verify_all(suggestions, goal, ver_cfg, table)
    suggestions.sort(key=lambda s: (s.complexity, print_term(s.term)))

    elapsed = time.monotonic() - t0
    return _build_report(
        cfg, goal, bank, vocab, n_combined, len(tpls), stats, suggestions, elapsed
    )


def format_assignment(assignment: dict, vars: list[str]) -> str:
    from .terms import Const

    parts = [
        f"({v} {print_term(Const(assignment[v]))})" for v in vars
    ]
    return "(" + " ".join(parts) + ")"


def _build_report(
    cfg: RunConfig,
    goal: Term,
    bank: TestBank,
    vocab: Vocabulary,
    n_combined: int,
    n_term_tpls: int,
    stats: SieveStats,
    suggestions: list[Suggestion],
    elapsed: float,
) -> dict:
    sugg_entries = []
    for s in suggestions:
        entry = {
            "hypothesis": print_term(s.term),
            "complexity": s.complexity,
            "status": s.status,
            "repaired": print_term(App("implies", [s.term, goal])),
        }
        entry["refutation"] = (
            format_assignment(s.refutation, bank.vars)
            if s.refutation is not None
            else None
        )
        sugg_entries.append(entry)
    return {
        "goal": print_term(goal),
        "config": {
            "seed": cfg.seed,
            "num_cex": cfg.num_cex,
            "num_wit": cfg.num_wit,
            "bool_depth": cfg.bool_depth,
            "term_depth": cfg.term_depth,
            "def_depth": cfg.def_depth,
            "extra_preds": list(cfg.extra_preds),
            "comparators": cfg.comparators,
            "constants": cfg.constants,
            "verify_trials": cfg.verify_trials,
            "max_candidates": cfg.max_candidates,
        },
        "bank": {
            "variables": bank.vars,
            "num_counterexamples": len(bank.cex),
            "num_witnesses": len(bank.wit),
            "counterexamples": [
                format_assignment(a, bank.vars) for a in bank.cex
            ],
            "witnesses": [format_assignment(a, bank.vars) for a in bank.wit],
        },
        "templates": {
            "term_templates": n_term_tpls,
            "combined_templates": n_combined,
        },
        "candidates": {
            "enumerated": stats.enumerated,
            "invalid": stats.invalid,
            "non_separating": stats.non_separating,
            "redundant": stats.redundant,
            "subsumed": stats.subsumed,
            "kept": len(suggestions),
        },
        "suggestions": sugg_entries,
        "timing_seconds": elapsed,
    }


def render(report: dict, fmt: str) -> str:
    """Text for humans; JSON (stable key order, no timing) for machines."""
    if fmt == "json":
        stable = {k: v for k, v in report.items() if k != "timing_seconds"}
        return json.dumps(stable, sort_keys=True, indent=2) + "\n"
    lines = []
    lines.append(f"goal: {report['goal']}")
    bank = report["bank"]
    lines.append(
        f"bank: {bank['num_counterexamples']} counterexamples, "
        f"{bank['num_witnesses']} witnesses "
        f"(variables: {' '.join(bank['variables']) or 'none'})"
    )
    for a in bank["counterexamples"]:
        lines.append(f"  cex {a}")
    for a in bank["witnesses"]:
        lines.append(f"  wit {a}")
    c = report["candidates"]
    lines.append(
        "candidates: {enumerated} enumerated, {invalid} invalid, "
        "{non_separating} non-separating, {redundant} redundant, "
        "{subsumed} subsumed, {kept} kept".format(**c)
    )
    lines.append(
        f"templates: {report['templates']['combined_templates']} combined, "
        f"{report['templates']['term_templates']} term"
    )
    if not report["suggestions"]:
        lines.append("no suggestions found")
    else:
        lines.append(f"suggestions ({len(report['suggestions'])}):")
        for s in report["suggestions"]:
            lines.append(
                f"  [{s['status']}] {s['hypothesis']} "
                f"(complexity {s['complexity']})"
            )
            lines.append(f"    repaired: {s['repaired']}")
            if s["refutation"]:
                lines.append(f"    refuted by: {s['refutation']}")
        if len(report["suggestions"]) > 1:
            lines.append(
                "multiple suggestions are incomparable on the test bank; "
                "pick the one matching your intent"
            )
    lines.append(f"elapsed: {report['timing_seconds']:.2f}s")
    return "\n".join(lines) + "\n"


def _read_goal_arg(goal_arg: str) -> str:
    if goal_arg.startswith("@"):
        with open(goal_arg[1:], "r", encoding="utf-8") as f:
            return f.read()
    return goal_arg


def build_arg_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hypofix",
        description=(
            "Suggest missing hypotheses for a false conjecture, guided by "
            "counterexamples and witnesses."
        ),
    )
    p.add_argument("--goal", required=True, help="conjecture text, or @FILE")
    p.add_argument("--defs", help="file of user defuns appended to the prelude")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--num-cex", type=int, default=50)
    p.add_argument("--num-wit", type=int, default=50)
    p.add_argument("--bool-depth", type=int, default=2)
    p.add_argument("--term-depth", type=int, default=1)
    p.add_argument("--def-depth", type=int, default=1)
    p.add_argument(
        "--extra-pred", action="append", default=[], metavar="NAME",
        help="additional predicate symbol (repeatable)",
    )
    p.add_argument("--comparators", action="store_true")
    p.add_argument("--constants", action="store_true")
    p.add_argument("--verify-trials", type=int, default=20_000)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument(
        "--max-candidates", type=int, default=DEFAULT_MAX_CANDIDATES
    )
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)
    defs_text = ""
    if args.defs:
        with open(args.defs, "r", encoding="utf-8") as f:
            defs_text = f.read()
    try:
        cfg = RunConfig(
            goal_text=_read_goal_arg(args.goal),
            defs_text=defs_text,
            seed=args.seed,
            num_cex=args.num_cex,
            num_wit=args.num_wit,
            bool_depth=args.bool_depth,
            term_depth=args.term_depth,
            def_depth=args.def_depth,
            extra_preds=tuple(args.extra_pred),
            comparators=args.comparators,
            constants=args.constants,
            verify_trials=args.verify_trials,
            fmt=args.format,
            max_candidates=args.max_candidates,
        )
        report = run(cfg)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    except BankError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3 if e.kind == "no_counterexamples" else 4
    except IffGoalError as e:
        print(f"error: {e}", file=sys.stderr)
        return 5
    except CandidateCapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return 6
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    sys.stdout.write(render(report, cfg.fmt))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
