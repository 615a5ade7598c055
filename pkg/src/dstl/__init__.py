"""Formulas, model checking and proof checking for a logic of distributed states."""

from .checker import BACKEND, check, check_spec, naive_check, obligation, parse_spec
from .computation import (Computation, DistributedState, StateId, build, causal_closure,
                          concurrent, enumerate_ds, initial_ds, leq, leq_c, load_model,
                          parse_model)
from .errors import CapExceeded, DstlError, ModelError, ParseError, ProofError
from .formula import desugar, is_tautology, parse_dsl, parse_temporal, render
from .semantics import (KripkeModel, ds_frame, kripke_satisfies, satisfies, valid,
                        validate_frame, valuation)
from .verdict import Verdict

__version__ = "0.1.0"
