"""Sum-of-bounds criterion of choice.

Each decision's utility distribution gets k-sigma lower and upper bounds.
A bound that overshoots the distribution's support is replaced by the
support extreme, which is what breaks the equivalence with plain expected
utility. Decisions are ranked by the sum of their bounds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .dist import DecisionProblem, DiscreteDistribution
from .exceptions import UtilityDomainError
from .utility import UtilityModel, pushforward

MODES = ("sum_of_bounds", "lower_only", "upper_only", "expectation_only")
TIE_RTOL = 1e-9
TIE_ATOL = 1e-15


@dataclass(frozen=True)
class BoundsConfig:
    """Settings of the criterion.

    ``caution`` and ``opportunity`` multiply the standard deviation of the
    lower and upper bound; both default to ``k``.
    """

    k: float = 1.0
    caution: float | None = None
    opportunity: float | None = None
    mode: str = "sum_of_bounds"
    clip_to_support: bool = True

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.k < 0:
            raise ValueError("k must be nonnegative")
        if self.caution is None:
            object.__setattr__(self, "caution", float(self.k))
        if self.opportunity is None:
            object.__setattr__(self, "opportunity", float(self.k))
        if self.caution < 0 or self.opportunity < 0:
            raise ValueError("premiums must be nonnegative")


@dataclass(frozen=True)
class BoundsResult:
    mean: float
    std: float
    lb_raw: float
    ub_raw: float
    lb: float
    ub: float
    support_min: float
    support_max: float
    clipped_low: bool
    clipped_high: bool

    @property
    def branch(self) -> str:
        if self.clipped_low and self.clipped_high:
            return "both_clipped"
        if self.clipped_low:
            return "lower_clipped"
        if self.clipped_high:
            return "upper_clipped"
        return "no_clip"


def bounds(dist: DiscreteDistribution, cfg: BoundsConfig = BoundsConfig()) -> BoundsResult:
    """Lower/upper bounds ``mean -/+ premium * std`` with overshoot clipping.

    Premiums are applied first; each overshooting bound is then replaced by
    the support extreme independently of the other.
    """
    mean, std = dist.mean, dist.std
    a, b = dist.support_min, dist.support_max
    lb_raw = mean - cfg.caution * std
    ub_raw = mean + cfg.opportunity * std
    clipped_low = cfg.clip_to_support and lb_raw < a
    clipped_high = cfg.clip_to_support and ub_raw > b
    return BoundsResult(
        mean=mean,
        std=std,
        lb_raw=lb_raw,
        ub_raw=ub_raw,
        lb=a if clipped_low else lb_raw,
        ub=b if clipped_high else ub_raw,
        support_min=a,
        support_max=b,
        clipped_low=bool(clipped_low),
        clipped_high=bool(clipped_high),
    )


def criterion_score(result: BoundsResult, cfg: BoundsConfig = BoundsConfig()) -> float:
    if cfg.mode == "sum_of_bounds":
        return result.lb + result.ub
    if cfg.mode == "lower_only":
        return result.lb
    if cfg.mode == "upper_only":
        return result.ub
    return 2.0 * result.mean


def score_distribution(dist: DiscreteDistribution, cfg: BoundsConfig = BoundsConfig()) -> float:
    return criterion_score(bounds(dist, cfg), cfg)


@dataclass(frozen=True)
class Preference:
    """Outcome of a comparison.

    ``best`` holds every decision index whose score ties the maximum.
    """

    verdict: str
    best: tuple[int, ...]
    scores: tuple[float, ...]
    labels: tuple[str, ...] = ()

    @property
    def preferred(self) -> int | None:
        return self.best[0] if self.verdict == "prefer" else None

    @property
    def preferred_label(self) -> str | None:
        idx = self.preferred
        if idx is None:
            return None
        return self.labels[idx] if self.labels else f"D{idx + 1}"

    def __str__(self):
        if self.verdict == "indifferent":
            names = [self.labels[i] if self.labels else f"D{i + 1}" for i in self.best]
            return "indifferent between " + ", ".join(names)
        return f"prefer {self.preferred_label}"


def compare_scores(scores: Sequence[float], labels: Sequence[str] = ()) -> Preference:
    scores = tuple(float(s) for s in scores)
    if len(scores) < 2:
        raise ValueError("a choice needs at least two decisions")
    top = max(scores)
    best = tuple(
        i for i, s in enumerate(scores) if math.isclose(s, top, rel_tol=TIE_RTOL, abs_tol=TIE_ATOL)
    )
    verdict = "prefer" if len(best) == 1 else "indifferent"
    return Preference(verdict, best, scores, tuple(labels))


@dataclass(frozen=True)
class DecisionAnalysis:
    label: str
    outcomes: DiscreteDistribution
    utilities: DiscreteDistribution
    bounds: BoundsResult
    score: float


@dataclass(frozen=True)
class Analysis:
    decisions: tuple[DecisionAnalysis, ...]
    preference: Preference | None
    config: BoundsConfig = field(default_factory=BoundsConfig)


def _outcome_dists(problem):
    if isinstance(problem, DecisionProblem):
        return problem.labels, problem.outcome_distributions()
    dists = list(problem)
    return [f"D{i + 1}" for i in range(len(dists))], dists


def analyze(
    problem: DecisionProblem | Sequence[DiscreteDistribution],
    model: UtilityModel | None = None,
    cfg: BoundsConfig = BoundsConfig(),
    labels: Sequence[str] | None = None,
) -> Analysis:
    """Run the whole pipeline and keep every intermediate result.

    Outcome distributions come from the product and sum rules (or are given
    directly), are mapped to utilities, bounded and scored. A single
    decision is analyzed without a verdict.
    """
    model = model if model is not None else UtilityModel.linear()
    names, dists = _outcome_dists(problem)
    if labels is not None:
        names = list(labels)
    rows = []
    for name, outcomes in zip(names, dists):
        try:
            utilities = pushforward(outcomes, model)
        except UtilityDomainError as exc:
            raise UtilityDomainError(f"decision {name!r}, {exc}", value=exc.value) from None
        res = bounds(utilities, cfg)
        rows.append(DecisionAnalysis(name, outcomes, utilities, res, criterion_score(res, cfg)))
    pref = compare_scores([r.score for r in rows], names) if len(rows) >= 2 else None
    return Analysis(tuple(rows), pref, cfg)


def decide(
    problem: DecisionProblem | Sequence[DiscreteDistribution],
    model: UtilityModel | None = None,
    cfg: BoundsConfig = BoundsConfig(),
    labels: Sequence[str] | None = None,
) -> Preference:
    analysis = analyze(problem, model, cfg, labels)
    if analysis.preference is None:
        raise ValueError("a choice needs at least two decisions")
    return analysis.preference
