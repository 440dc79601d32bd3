"""Arithmetisation tools built on the Hamiltonicity quantifier."""
from .setdef import (SetDef, build_degree_class_formula, build_preceq, build_strict_less,
                     preceq_exact, preceq_holds)
from .repr import ReprCertificate, Testbed, build_testbed, check_double_powerset_repr, check_powerset_repr
from .encoder import EncoderContext, encode_so, weak_patterns
from .arith import ArithConfig, build_arith, build_logstar, build_nonconv
from .dclass import dclass_sample, dclass_stats, degree_target, expected_class_size
