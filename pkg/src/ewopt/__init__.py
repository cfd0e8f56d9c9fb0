"""Extended weighted modular systems: exact brute-force semantics and tooling."""

from .core import (
    Evaluation,
    ExtendedInterpretation,
    Specification,
    StateCapExceeded,
    Vocabulary,
    enumerate_evaluations,
    enumerate_interpretations,
    get_state_cap,
    set_state_cap,
)
from .ewsys import (
    MAX,
    MIN,
    ComplementModule,
    CostVector,
    Eams,
    EwCondition,
    EwSystem,
    ExplicitModule,
    IncoherentSystemError,
    UniversalModule,
    check_coherence,
)
from .logics import CASModule, Extensional, ICSPModule, Linear, LPModule, PLModule, Rule, SMTModule
from .solver import (
    enumerate_extended_models,
    enumerate_models,
    optimal_extended_models,
    optimal_extended_models_by_domination,
    optimal_models,
    optimal_models_by_domination,
    solve,
)

__version__ = "0.1.0"
