"""Logics with graph-property quantifiers on random graphs.

Modules: ``formula`` (syntax), ``graph`` (graphs and solvers), ``evaluator``
and ``tensor_eval`` (model checking), ``decider`` (limit values for Conn and
Chr(k) sentences), ``ham_arith`` (arithmetic through Hamiltonicity) and
``probe`` (Monte Carlo estimates).
"""
from .errors import (CapExceeded, EquivalenceViolation, ParseError, SemanticsViolation,
                     UnsupportedFragment, WellDefinednessViolation, ZeroOneError)
from .formula import parse, parse_so, pretty, to_text
from .graph import Caps, Graph, RngSpec, sample_gnp
from .evaluator import Evaluator, definable_set, evaluate
from .decider import decide

__version__ = "0.1.0"
