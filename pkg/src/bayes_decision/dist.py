"""Exact discrete probability machinery.

Finite distributions, event/outcome tables, the binomial urn distributions,
full-joint inference on small binary networks, and odds / deciban scales.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from typing import Iterable, Mapping

import numpy as np
from scipy.special import expit
from scipy.stats import binom

from .exceptions import (
    DimensionError,
    IndeterminateOddsError,
    NormalizationError,
    UndefinedConditionalError,
)

NORM_TOL = 1e-9


def _check_probabilities(probs, tol, what):
    probs = np.asarray(probs, dtype=float)
    if probs.ndim != 1 or probs.size == 0:
        raise DimensionError(f"{what} must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(probs)):
        raise NormalizationError(f"{what} contains non-finite entries")
    if np.any(probs < 0) or np.any(probs > 1 + tol):
        raise NormalizationError(f"{what} has entries outside [0, 1]")
    total = probs.sum()
    if abs(total - 1.0) > tol:
        raise NormalizationError(f"{what} sums to {total!r}, not 1")
    return probs


class DiscreteDistribution:
    """Finite distribution over real values.

    Values are kept sorted and strictly increasing; repeated values are merged
    by summing their probabilities. Zero-probability entries are retained but
    ignored by :attr:`support_min` and :attr:`support_max`.
    """

    __slots__ = ("_values", "_probs")

    def __init__(self, values, probs, *, tol=NORM_TOL):
        values = np.asarray(values, dtype=float)
        probs = np.asarray(probs, dtype=float)
        if values.shape != probs.shape or values.ndim != 1:
            raise DimensionError("values and probabilities must be 1-d and equally long")
        if not np.all(np.isfinite(values)):
            raise ValueError("distribution values must be finite")
        probs = _check_probabilities(probs, tol, "distribution")
        uniq, inverse = np.unique(values, return_inverse=True)
        merged = np.bincount(inverse, weights=probs, minlength=uniq.size)
        uniq.setflags(write=False)
        merged.setflags(write=False)
        self._values = uniq
        self._probs = merged

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, float]], **kw) -> "DiscreteDistribution":
        pairs = list(pairs)
        if not pairs:
            raise DimensionError("distribution needs at least one (value, probability) pair")
        values, probs = zip(*pairs)
        return cls(values, probs, **kw)

    @classmethod
    def point_mass(cls, value: float) -> "DiscreteDistribution":
        return cls([value], [1.0])

    @classmethod
    def renormalized(cls, values, weights) -> "DiscreteDistribution":
        """Build a distribution from nonnegative weights of arbitrary total."""
        weights = np.asarray(weights, dtype=float)
        if np.any(weights < 0):
            raise NormalizationError("weights must be nonnegative")
        total = weights.sum()
        if not total > 0:
            raise NormalizationError("weights sum to zero")
        return cls(values, weights / total)

    def renormalize(self) -> "DiscreteDistribution":
        return type(self).renormalized(self._values, self._probs)

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def probs(self) -> np.ndarray:
        return self._probs

    def __len__(self):
        return self._values.size

    def __iter__(self):
        return iter(zip(self._values.tolist(), self._probs.tolist()))

    def __repr__(self):
        body = ", ".join(f"({v:g}, {p:.6g})" for v, p in self)
        return f"DiscreteDistribution([{body}])"

    def __eq__(self, other):
        if not isinstance(other, DiscreteDistribution):
            return NotImplemented
        return np.array_equal(self._values, other._values) and np.array_equal(
            self._probs, other._probs
        )

    __hash__ = None

    def allclose(self, other: "DiscreteDistribution", atol=1e-12) -> bool:
        return (
            self._values.shape == other._values.shape
            and np.allclose(self._values, other._values, rtol=0, atol=atol)
            and np.allclose(self._probs, other._probs, rtol=0, atol=atol)
        )

    def pmf(self, value: float) -> float:
        idx = np.searchsorted(self._values, value)
        if idx < self._values.size and self._values[idx] == value:
            return float(self._probs[idx])
        return 0.0

    @property
    def support_min(self) -> float:
        return float(self._values[self._probs > 0].min())

    @property
    def support_max(self) -> float:
        return float(self._values[self._probs > 0].max())

    def moment(self, k: int) -> float:
        return moment(self, k)

    @property
    def mean(self) -> float:
        return float(np.dot(self._values, self._probs))

    @property
    def var(self) -> float:
        # central form; equals E(x^2) - E(x)^2 without the cancellation
        dev = self._values - self.mean
        return float(np.dot(dev * dev, self._probs))

    @property
    def std(self) -> float:
        return math.sqrt(self.var)

    def map(self, fn) -> "DiscreteDistribution":
        """Push the distribution through ``fn`` keeping each probability mass."""
        mapped = np.asarray(fn(self._values), dtype=float)
        return DiscreteDistribution(mapped, self._probs)

    def shift(self, offset: float) -> "DiscreteDistribution":
        return DiscreteDistribution(self._values + offset, self._probs)


def moment(dist: DiscreteDistribution, k: int) -> float:
    """Raw moment ``E(x**k)``."""
    if int(k) != k or k < 1:
        raise ValueError("moment order must be a positive integer")
    return float(np.dot(dist.values ** int(k), dist.probs))


@dataclass(frozen=True, eq=False)
class ConditionalTable:
    """Row-stochastic table ``P(column | row)``."""

    rows: tuple[str, ...]
    columns: tuple[str, ...]
    entries: np.ndarray = field(repr=False)

    def __init__(self, entries, rows=None, columns=None, *, tol=NORM_TOL):
        entries = np.array(entries, dtype=float)
        if entries.ndim != 2 or entries.size == 0:
            raise DimensionError("conditional table must be a nonempty 2-d array")
        n_rows, n_cols = entries.shape
        rows = tuple(rows) if rows is not None else tuple(f"E{j + 1}" for j in range(n_rows))
        columns = (
            tuple(columns) if columns is not None else tuple(f"O{k + 1}" for k in range(n_cols))
        )
        if len(rows) != n_rows or len(columns) != n_cols:
            raise DimensionError("label counts do not match table shape")
        for j, row in enumerate(entries):
            _check_probabilities(row, tol, f"table row {rows[j]!r}")
        entries.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "columns", columns)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def identity(cls, n: int) -> "ConditionalTable":
        return cls(np.eye(n))

    @property
    def shape(self):
        return self.entries.shape


@dataclass(frozen=True, eq=False)
class JointTable:
    """``P(event, outcome)`` with the real outcome value of every column."""

    matrix: np.ndarray = field(repr=False)
    outcome_values: tuple[float, ...]
    events: tuple[str, ...] = ()

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=float)
        if matrix.ndim != 2:
            raise DimensionError("joint table must be 2-d")
        if matrix.shape[1] != len(self.outcome_values):
            raise DimensionError("one outcome value per joint-table column required")
        if np.any(matrix < 0):
            raise NormalizationError("joint table has negative entries")
        if abs(matrix.sum() - 1.0) > NORM_TOL:
            raise NormalizationError(f"joint table sums to {matrix.sum()!r}, not 1")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "outcome_values", tuple(float(v) for v in self.outcome_values))
        if not self.events:
            object.__setattr__(
                self, "events", tuple(f"E{j + 1}" for j in range(matrix.shape[0]))
            )

    def entry(self, event: int, outcome: int) -> float:
        return float(self.matrix[event, outcome])

    def event_marginal(self) -> np.ndarray:
        return self.matrix.sum(axis=1)

    def outcome_marginal(self) -> np.ndarray:
        return self.matrix.sum(axis=0)


def joint_from_conditionals(prior, table: ConditionalTable, outcome_values) -> JointTable:
    """Product rule: ``P(E_j, O_k) = P(E_j) P(O_k | E_j)``."""
    prior = _check_probabilities(prior, NORM_TOL, "event prior")
    if prior.size != table.shape[0]:
        raise DimensionError(
            f"prior has {prior.size} events but the table has {table.shape[0]} rows"
        )
    outcome_values = tuple(float(v) for v in outcome_values)
    if len(outcome_values) != table.shape[1]:
        raise DimensionError(
            f"{len(outcome_values)} outcome values for {table.shape[1]} table columns"
        )
    return JointTable(prior[:, None] * table.entries, outcome_values, table.rows)


def marginalize_outcomes(joint: JointTable) -> DiscreteDistribution:
    """Sum the joint table over events."""
    return DiscreteDistribution(joint.outcome_values, joint.outcome_marginal())


@dataclass(frozen=True)
class Decision:
    label: str
    prior: tuple[float, ...]
    table: ConditionalTable
    outcome_values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "prior", tuple(float(p) for p in self.prior))
        object.__setattr__(self, "outcome_values", tuple(float(v) for v in self.outcome_values))
        if len(self.prior) != self.table.shape[0]:
            raise DimensionError(f"decision {self.label!r}: prior length != table rows")
        if len(self.outcome_values) != self.table.shape[1]:
            raise DimensionError(f"decision {self.label!r}: outcome values != table columns")

    def joint(self) -> JointTable:
        return joint_from_conditionals(self.prior, self.table, self.outcome_values)

    def outcome_distribution(self) -> DiscreteDistribution:
        return marginalize_outcomes(self.joint())


@dataclass(frozen=True)
class DecisionProblem:
    decisions: tuple[Decision, ...]

    def __post_init__(self):
        object.__setattr__(self, "decisions", tuple(self.decisions))

    @property
    def labels(self) -> list[str]:
        return [d.label for d in self.decisions]

    def outcome_distributions(self) -> list[DiscreteDistribution]:
        return [d.outcome_distribution() for d in self.decisions]


def binomial_outcome_dist(n: int, p: float, fee: float = 0.0) -> DiscreteDistribution:
    """Net return ``r - fee`` of ``r`` successes in ``n`` Bernoulli(p) draws."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"success probability {p!r} outside [0, 1]")
    if int(n) != n or n < 1:
        raise ValueError("number of draws must be a positive integer")
    r = np.arange(int(n) + 1)
    pmf = binom.pmf(r, int(n), p)
    keep = pmf > 0  # p of 0 or 1 leaves a single reachable count
    return DiscreteDistribution(r[keep] - fee, pmf[keep])


def mixture_binomial_outcome_dist(n: int, N: int, fee: float = 0.0) -> DiscreteDistribution:
    """Net return when the urn's red count is unknown, uniform on ``1..N-1``."""
    if int(N) != N or N < 2:
        raise ValueError("urn size must be an integer >= 2")
    if int(n) != n or n < 1:
        raise ValueError("number of draws must be a positive integer")
    r = np.arange(int(n) + 1)
    red = np.arange(1, int(N))
    pmf = binom.pmf(r[:, None], int(n), red[None, :] / N).mean(axis=1)
    return DiscreteDistribution(r - fee, pmf)


@dataclass(frozen=True, eq=False)
class BinaryNetwork:
    """Network of boolean variables given by their conditional tables.

    ``cpts[var]`` maps each tuple of parent values (ordered as
    ``parents[var]``) to ``P(var = True | parents)``.
    """

    variables: tuple[str, ...]
    parents: Mapping[str, tuple[str, ...]]
    cpts: Mapping[str, Mapping[tuple[bool, ...], float]]

    def __post_init__(self):
        variables = tuple(self.variables)
        if len(set(variables)) != len(variables):
            raise ValueError("duplicate variable names")
        parents = {v: tuple(self.parents.get(v, ())) for v in variables}
        cpts = {}
        for var in variables:
            for par in parents[var]:
                if par not in parents:
                    raise KeyError(f"{var!r} lists unknown parent {par!r}")
            table = {tuple(bool(x) for x in k): float(p) for k, p in self.cpts[var].items()}
            for assignment in itertools.product((False, True), repeat=len(parents[var])):
                if assignment not in table:
                    raise ValueError(f"{var!r} lacks an entry for parents={assignment}")
                if not 0.0 <= table[assignment] <= 1.0:
                    raise NormalizationError(f"P({var}|{assignment}) outside [0, 1]")
            cpts[var] = table
        try:
            order = tuple(TopologicalSorter(parents).static_order())
        except CycleError as exc:
            raise ValueError(f"cyclic parent references: {exc.args[1]}") from None
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "parents", parents)
        object.__setattr__(self, "cpts", cpts)
        object.__setattr__(self, "_order", order)

    def prob(self, var: str, value: bool, assignment: Mapping[str, bool]) -> float:
        key = tuple(assignment[p] for p in self.parents[var])
        p_true = self.cpts[var][key]
        return p_true if value else 1.0 - p_true

    def joint_probability(self, assignment: Mapping[str, bool]) -> float:
        prob = 1.0
        for var in self._order:
            prob *= self.prob(var, assignment[var], assignment)
        return prob

    def assignments(self):
        for values in itertools.product((False, True), repeat=len(self.variables)):
            yield dict(zip(self.variables, values))


def enumerate_posterior(net: BinaryNetwork, query: str, evidence: Mapping[str, bool]) -> float:
    """``P(query = True | evidence)`` by summing the full joint distribution."""
    if query not in net.variables:
        raise KeyError(query)
    for var in evidence:
        if var not in net.variables:
            raise KeyError(var)
    if query in evidence:
        raise ValueError(f"query variable {query!r} is also observed")
    numerator = denominator = 0.0
    for assignment in net.assignments():
        if any(assignment[v] != bool(x) for v, x in evidence.items()):
            continue
        mass = net.joint_probability(assignment)
        denominator += mass
        if assignment[query]:
            numerator += mass
    if denominator == 0.0:
        raise UndefinedConditionalError(f"evidence {dict(evidence)} has probability zero")
    return numerator / denominator


@dataclass(frozen=True)
class Odds:
    """Nonnegative ratio of two probabilities; may be infinite."""

    ratio: float

    def __post_init__(self):
        ratio = float(self.ratio)
        if math.isnan(ratio) or ratio < 0:
            raise ValueError(f"odds must be nonnegative, got {self.ratio!r}")
        object.__setattr__(self, "ratio", ratio)

    @classmethod
    def from_probabilities(cls, p_for: float, p_against: float) -> "Odds":
        if p_against == 0:
            if p_for == 0:
                raise IndeterminateOddsError("0/0 odds")
            return cls(math.inf)
        return cls(p_for / p_against)

    @classmethod
    def from_probability(cls, p: float) -> "Odds":
        return cls.from_probabilities(p, 1.0 - p)

    def to_probability(self) -> float:
        if math.isinf(self.ratio):
            return 1.0
        return self.ratio / (1.0 + self.ratio)

    def __float__(self):
        return self.ratio

    def __gt__(self, other):
        return self.ratio > float(other)

    def __lt__(self, other):
        return self.ratio < float(other)


def posterior_odds(prior, likelihood_ratio) -> Odds:
    """Odds form of Bayes' rule: posterior = prior odds x likelihood ratio."""
    prior = prior if isinstance(prior, Odds) else Odds(prior)
    lr = likelihood_ratio if isinstance(likelihood_ratio, Odds) else Odds(likelihood_ratio)
    if (prior.ratio == 0 and math.isinf(lr.ratio)) or (
        lr.ratio == 0 and math.isinf(prior.ratio)
    ):
        raise IndeterminateOddsError("0 x infinity odds product")
    return Odds(prior.ratio * lr.ratio)


def deciban(p: float) -> float:
    """Evidence ``10 log10(p / (1 - p))``; infinite at 0 and 1."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p!r} outside [0, 1]")
    if p == 0.0:
        return -math.inf
    if p == 1.0:
        return math.inf
    return 10.0 * (math.log10(p) - math.log10(1.0 - p))


def inverse_deciban(d: float) -> float:
    return float(expit(d * math.log(10.0) / 10.0))


def product_rule_check(joint: JointTable) -> tuple[np.ndarray, np.ndarray]:
    """Both factorizations of a joint table, ``P(E)P(O|E)`` and ``P(O)P(E|O)``."""
    m = joint.matrix
    p_event = m.sum(axis=1, keepdims=True)
    p_outcome = m.sum(axis=0, keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        o_given_e = np.where(p_event > 0, m / p_event, 0.0)
        e_given_o = np.where(p_outcome > 0, m / p_outcome, 0.0)
    return p_event * o_given_e, p_outcome * e_given_o


__all__ = [
    "NORM_TOL",
    "BinaryNetwork",
    "ConditionalTable",
    "Decision",
    "DecisionProblem",
    "DiscreteDistribution",
    "JointTable",
    "Odds",
    "binomial_outcome_dist",
    "deciban",
    "enumerate_posterior",
    "inverse_deciban",
    "joint_from_conditionals",
    "marginalize_outcomes",
    "mixture_binomial_outcome_dist",
    "moment",
    "posterior_odds",
    "product_rule_check",
]

