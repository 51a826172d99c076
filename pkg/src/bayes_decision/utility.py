"""Logarithmic (Weber-Fechner / Bernoulli) utilities of money and debt.

Utilities are measured in utiles, where one utile is one just noticeable
difference of the monetary stimulus at the calibration reference.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dist import DiscreteDistribution
from .exceptions import UtilityDomainError

KINDS = ("bernoulli_income", "bernoulli_debt", "linear")
DEFAULT_GAMMA = 1.0


@dataclass(frozen=True)
class UtilityModel:
    """Utility of a monetary increment.

    kind
        ``bernoulli_income``: ``q log((S + x) / S)`` with initial wealth ``S``.
        ``bernoulli_debt``: ``-b log((D + x) / D)`` with initial debt ``D``,
        where ``x`` is the change in debt.
        ``linear``: the increment itself.
    q
        Weber constant in utiles per unit of natural log (``b`` for debt).
    reference
        Initial wealth or debt; unused by the linear kind.
    gamma
        Smallest significant amount; increments must exceed
        ``gamma - reference``.
    """

    kind: str = "linear"
    q: float = 1.0
    reference: float | None = None
    gamma: float = DEFAULT_GAMMA

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown utility kind {self.kind!r}; expected one of {KINDS}")
        if not self.q > 0:
            raise ValueError("Weber constant must be positive")
        if self.kind != "linear":
            if self.reference is None or not self.reference > 0:
                raise ValueError(f"{self.kind} needs a positive reference amount")
            if not self.gamma > 0:
                raise ValueError("significance threshold gamma must be positive")

    @classmethod
    def income(cls, q: float, wealth: float, gamma: float = DEFAULT_GAMMA) -> "UtilityModel":
        return cls("bernoulli_income", q, wealth, gamma)

    @classmethod
    def debt(cls, b: float, debt: float, gamma: float = DEFAULT_GAMMA) -> "UtilityModel":
        return cls("bernoulli_debt", b, debt, gamma)

    @classmethod
    def linear(cls) -> "UtilityModel":
        return cls("linear")

    @property
    def is_logarithmic(self) -> bool:
        return self.kind != "linear"

    @property
    def lower_limit(self) -> float:
        """Increments must be strictly greater than this."""
        if self.kind == "linear":
            return -math.inf
        return self.gamma - self.reference

    def scaled(self, factor: float) -> "UtilityModel":
        """Same model with the Weber constant multiplied by ``factor``."""
        return UtilityModel(self.kind, self.q * factor, self.reference, self.gamma)

    def with_reference(self, reference: float) -> "UtilityModel":
        return UtilityModel(self.kind, self.q, reference, self.gamma)

    def check_domain(self, delta) -> None:
        delta = np.asarray(delta, dtype=float)
        bad = delta[~(delta > self.lower_limit)]
        if bad.size:
            what = "debt increment" if self.kind == "bernoulli_debt" else "increment"
            raise UtilityDomainError(
                f"{what} {bad[0]:g} is at or below the significance threshold "
                f"(must exceed {self.lower_limit:g} for reference {self.reference:g})",
                value=float(bad[0]),
            )

    def __call__(self, delta):
        """Utility of one increment or an array of increments."""
        scalar = np.ndim(delta) == 0
        x = np.asarray(delta, dtype=float)
        if not np.all(np.isfinite(x)):
            raise UtilityDomainError("increments must be finite")
        if self.kind == "linear":
            u = x.copy()
        else:
            self.check_domain(x)
            u = self.q * np.log1p(x / self.reference)
            if self.kind == "bernoulli_debt":
                u = -u
        return float(u) if scalar else u


def _require(model, kind):
    if model.kind != kind:
        raise ValueError(f"expected a {kind} model, got {model.kind}")


def income_utility(delta, model: UtilityModel):
    _require(model, "bernoulli_income")
    return model(delta)


def debt_utility(delta_debt, model: UtilityModel):
    """Debt increases cost utiles, repayments earn them."""
    _require(model, "bernoulli_debt")
    return model(delta_debt)


def linear_utility(delta, model: UtilityModel | None = None):
    if model is not None:
        _require(model, "linear")
    return UtilityModel.linear()(delta)


def calibrate_weber(reference: float, jnd: float, kind: str = "bernoulli_income") -> float:
    """Weber constant that makes one just noticeable difference worth 1 utile.

    For income the JND is a gain on top of ``reference``; for debt it is a
    decrease of the outstanding debt.
    """
    if not reference > 0 or not jnd > 0:
        raise ValueError("reference and jnd must be positive")
    if kind in ("income", "bernoulli_income"):
        return 1.0 / math.log((reference + jnd) / reference)
    if kind in ("debt", "bernoulli_debt"):
        if jnd >= reference:
            raise ValueError("debt decrement must be smaller than the debt")
        return -1.0 / math.log((reference - jnd) / reference)
    raise ValueError(f"cannot calibrate a {kind!r} model")


def pushforward(outcomes: DiscreteDistribution, model: UtilityModel) -> DiscreteDistribution:
    """Utility distribution of a monetary outcome distribution."""
    try:
        utilities = model(outcomes.values)
    except UtilityDomainError as exc:
        raise UtilityDomainError(f"outcome {exc.value:g}: {exc}", value=exc.value) from None
    return DiscreteDistribution(utilities, outcomes.probs)


def utility_support(model: UtilityModel, min_outcome: float, max_outcome: float):
    if min_outcome > max_outcome:
        raise ValueError("min_outcome exceeds max_outcome")
    return model(min_outcome), model(max_outcome)


def utility_curve(model: UtilityModel, lo: float, hi: float, num: int = 401):
    """Sampled ``(increment, utility)`` pairs across ``[lo, hi]``."""
    x = np.linspace(lo, hi, num)
    return x, model(x)


def power_law_sensation(stimulus, reference: float = 1.0, q: float = 1.0, c: float = 1.0):
    """Stevens power law ``c * (S / S0)**q``.

    With the default unit reference this is ``c * S**q``. The log ratio of
    two sensations equals :func:`log_ratio_sensation` for any reference.
    """
    s = np.asarray(stimulus, dtype=float)
    if np.any(s <= 0) or not reference > 0:
        raise ValueError("stimuli must be positive")
    out = c * (s / reference) ** q
    return float(out) if np.ndim(stimulus) == 0 else out


def log_ratio_sensation(s1, s0, q: float):
    """``q log(S1 / S0)``: sensation difference on the logarithmic scale."""
    s1 = np.asarray(s1, dtype=float)
    s0 = np.asarray(s0, dtype=float)
    if np.any(s1 <= 0) or np.any(s0 <= 0):
        raise ValueError("stimuli must be positive")
    out = q * np.log(s1 / s0)
    return float(out) if out.ndim == 0 else out


DECIBEL_WEBER = 10.0 / math.log(10.0)
