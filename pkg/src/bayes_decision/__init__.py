"""Bayesian decision analysis: outcome distributions, Weber-Fechner utilities
and the sum-of-bounds criterion of choice."""
from .criterion import (
    Analysis,
    BoundsConfig,
    BoundsResult,
    Preference,
    analyze,
    bounds,
    compare_scores,
    criterion_score,
    decide,
)
from .dist import (
    BinaryNetwork,
    ConditionalTable,
    Decision,
    DecisionProblem,
    DiscreteDistribution,
    JointTable,
    Odds,
    binomial_outcome_dist,
    deciban,
    enumerate_posterior,
    inverse_deciban,
    joint_from_conditionals,
    marginalize_outcomes,
    mixture_binomial_outcome_dist,
    moment,
    posterior_odds,
)
from .exceptions import (
    DecisionError,
    DimensionError,
    IndeterminateOddsError,
    NoFairProbabilityError,
    NormalizationError,
    UndefinedConditionalError,
    UtilityDomainError,
)
from .fairness import (
    CertaintyBet,
    closed_form_fair_probabilities,
    fair_interval,
    fair_probability,
    fairness_curve,
    kt_value,
    kt_weight,
    predict_kt_bet,
    symmetry_ratio,
)
from .utility import (
    UtilityModel,
    calibrate_weber,
    debt_utility,
    income_utility,
    linear_utility,
    pushforward,
)

__version__ = "0.1.0"
