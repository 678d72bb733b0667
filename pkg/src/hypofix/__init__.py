"""hypofix: counterexample-guided repair of false conjectures.

Given a conjecture in a small total functional term language that is false
as stated, find counterexamples and witnesses, then synthesize and rank
candidate missing hypotheses that separate them.
"""

from .lang import DefTable, EvalError, eval_term, load_prelude
from .sexpr import FunctionDef, ParseError, parse_defs, parse_term, print_term
from .terms import App, Const, Term, Var, free_vars

__all__ = [
    "App",
    "Const",
    "DefTable",
    "EvalError",
    "FunctionDef",
    "ParseError",
    "Term",
    "Var",
    "eval_term",
    "free_vars",
    "load_prelude",
    "parse_defs",
    "parse_term",
    "print_term",
]
