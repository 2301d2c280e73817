"""Waterman-Shiba variation, integral moduli of continuity and the
``LambdaBV^(p) in H_omega^q`` embedding criterion, computed on step functions."""

__version__ = "0.1.0"

from .counterexample import (
    CounterexamplePlan,
    build_g,
    find_violation,
    verify_divergence_ratio,
    verify_membership_bound,
)
from .embedding import (
    EmbeddingParams,
    corollary_term,
    criterion_argmax,
    criterion_term,
    embed_report,
    sufficiency_bound,
)
from .extremal import ExtremalProblem, brute_force_value, solve_closed_form
from .modulus import lq_shift_distance, omega_q, shift_profile
from .sequences import (
    ModulusOfContinuity,
    WatermanSequence,
    divergence_prefix,
    inv_partial_sum,
    lambda_at,
    omega_eval,
)
from .stepfn import StepFunction, eval_at, from_breakpoints, from_pieces, increment_over
from .variation import (
    IntervalFamily,
    family_value,
    lambda_p_norm,
    variation_exact,
    variation_greedy,
)
