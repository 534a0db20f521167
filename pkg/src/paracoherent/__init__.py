"""Paracoherent answer sets (semi-stable and semi-equilibrium models) of ground disjunctive programs."""

__version__ = "0.1.0"

from .algorithms import (  # noqa: E402
    AlgorithmKind, NoParacoherentModel, ParacoherentResult, enumerate_all, filtering, guess_check,
    is_paracoherent, minimize, paracoherent_models, run_algorithm, split, weak_method,
)
from .program import Program, Rule, WeakConstraint, classify, format_program, parse  # noqa: E402
from .transform import TransformKind, ht_transform, kappa_transform, transform  # noqa: E402
