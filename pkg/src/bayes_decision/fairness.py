"""Fair probabilities of certainty bets.

A certainty bet pits an uncertain outcome ``O_u`` (probability ``p``, else
nothing) against a sure ``O_c``. The fair probability is the ``p`` at which
both decisions score the same under the criterion of choice.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect, brentq

from .criterion import (
    BoundsConfig,
    BoundsResult,
    Preference,
    analyze,
    bounds,
    criterion_score,
)
from .dist import DiscreteDistribution
from .exceptions import NoFairProbabilityError
from .utility import UtilityModel

SCAN_POINTS = 10_001
ROOT_RTOL = 4 * np.finfo(float).eps


@dataclass(frozen=True)
class CertaintyBet:
    certain: float
    uncertain: float
    p: float = 0.5

    def __post_init__(self):
        _check_bet(self.certain, self.uncertain)
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"probability {self.p!r} outside [0, 1]")

    def uncertain_dist(self) -> DiscreteDistribution:
        return _uncertain_dist(self.uncertain, self.p)

    def certain_dist(self) -> DiscreteDistribution:
        return DiscreteDistribution.point_mass(self.certain)


def _check_bet(certain, uncertain):
    if uncertain == 0:
        raise ValueError("uncertain outcome must be nonzero")
    if certain * uncertain < 0:
        raise ValueError("certain and uncertain outcomes must share a sign")
    if abs(certain) > abs(uncertain):
        raise ValueError("|O_c| must not exceed |O_u|")


def _uncertain_dist(uncertain, p):
    return DiscreteDistribution([0.0, uncertain], [1.0 - p, p])


@dataclass(frozen=True)
class FairnessResult:
    """Fair probabilities of a bet with their bounds branches.

    ``intervals`` hold the lower and upper bound of the uncertain bet at each
    root, in utility units (money under linear utility).
    """

    certain: float
    uncertain: float
    roots: tuple[float, ...]
    branches: tuple[str, ...]
    intervals: tuple[tuple[float, float], ...]
    target: float

    @property
    def p_fair(self) -> float:
        return self.roots[0]


def _certain_score(certain, model, cfg):
    u = model(certain)
    return criterion_score(bounds(DiscreteDistribution.point_mass(u), cfg), cfg)


def fairness_objective(p, certain, uncertain, model: UtilityModel, cfg: BoundsConfig) -> float:
    """Score of the uncertain bet at ``p`` minus the score of the sure one."""
    utilities = _uncertain_dist(uncertain, p).map(model)
    return criterion_score(bounds(utilities, cfg), cfg) - _certain_score(certain, model, cfg)


def _scan_objective(grid, u_top, target, cfg):
    # two-point utility distribution {0: 1-p, u_top: p}; u(0) = 0 for every model
    mean = grid * u_top
    std = abs(u_top) * np.sqrt(grid * (1.0 - grid))
    lo = np.where(grid < 1.0, min(0.0, u_top), u_top)
    lo = np.where(grid > 0.0, lo, 0.0)
    hi = np.where(grid < 1.0, max(0.0, u_top), u_top)
    hi = np.where(grid > 0.0, hi, 0.0)
    lb = mean - cfg.caution * std
    ub = mean + cfg.opportunity * std
    if cfg.clip_to_support:
        lb = np.where(lb < lo, lo, lb)
        ub = np.where(ub > hi, hi, ub)
    if cfg.mode == "sum_of_bounds":
        score = lb + ub
    elif cfg.mode == "lower_only":
        score = lb
    elif cfg.mode == "upper_only":
        score = ub
    else:
        score = 2.0 * mean
    return score - target


def _interval(res: BoundsResult, target: float, cfg: BoundsConfig):
    # at a root the bounds sum to the sure score, so the unclipped bound is
    # target minus the clipped one
    if cfg.mode != "sum_of_bounds":
        return (res.lb, res.ub)
    if res.clipped_low and res.clipped_high:
        return (res.support_min, res.support_max)
    if res.clipped_low:
        return (res.support_min, target - res.support_min)
    if res.clipped_high:
        return (target - res.support_max, res.support_max)
    return (res.lb, res.ub)


def _polish(objective, p, lo, hi):
    """Shrink a sign-change bracket around ``p`` down to adjacent floats.

    Returns the endpoint with the smaller residual, or None when the
    bracket around ``p`` holds no sign change.
    """
    width = 16 * np.spacing(p)
    a, b = max(lo, p - width), min(hi, p + width)
    fa, fb = objective(a), objective(b)
    if fa * fb > 0.0:
        a, b, fa, fb = lo, hi, objective(lo), objective(hi)
        if fa * fb > 0.0:
            return None
    while True:
        mid = a + (b - a) / 2.0
        if mid <= a or mid >= b:
            break
        fm = objective(mid)
        if fm == 0.0:
            return float(mid)
        if fa * fm < 0.0:
            b, fb = mid, fm
        else:
            a, fa = mid, fm
    return float(a if abs(fa) <= abs(fb) else b)


def fair_probability(
    certain: float,
    uncertain: float,
    model: UtilityModel | None = None,
    cfg: BoundsConfig = BoundsConfig(),
    scan_points: int = SCAN_POINTS,
) -> FairnessResult:
    """All probabilities at which the uncertain and the sure bet tie.

    The objective is scanned on a uniform grid over ``[0, 1]`` and every sign
    change is refined by bisection. The endpoints stand for the degenerate
    bets (nothing for sure, ``O_u`` for sure) and count as roots only when
    the objective vanishes there. A root must bring the objective within
    ``1e-9`` of zero (relative to the sure score) unless the sign change has
    been pinned down to adjacent floats.
    """
    model = model if model is not None else UtilityModel.linear()
    _check_bet(certain, uncertain)
    target = _certain_score(certain, model, cfg)
    u_top = model(uncertain)
    grid = np.linspace(0.0, 1.0, scan_points)
    values = _scan_objective(grid, u_top, target, cfg)

    def objective(p):
        return fairness_objective(p, certain, uncertain, model, cfg)

    scale = max(1.0, abs(target))
    roots = []
    i = 0
    n = grid.size
    while i < n:
        if values[i] == 0.0:
            # a run of exact zeros is reported by its two ends
            j = i
            while j + 1 < n and values[j + 1] == 0.0:
                j += 1
            roots.append(float(grid[i]))
            if j > i:
                roots.append(float(grid[j]))
            i = j + 1
            continue
        if i + 1 < n and values[i] * values[i + 1] < 0.0:
            p = bisect(objective, grid[i], grid[i + 1], xtol=1e-300, rtol=ROOT_RTOL, maxiter=2000)
            # keep whichever side of the final bracket is closer to zero; the
            # grid points compete too because near p = 0 or 1 the square root
            # is steep enough that no float inside the bracket may qualify
            cands = [p, np.nextafter(p, 0.0), np.nextafter(p, 1.0), grid[i], grid[i + 1]]
            best = min(cands, key=lambda x: abs(objective(x)))
            if abs(objective(best)) <= 1e-9 * scale:
                roots.append(float(best))
            else:
                # the zero may lie between two adjacent floats (as for O_c
                # within about 1e-8 of O_u); then p is as good as float allows
                p = _polish(objective, p, grid[i], grid[i + 1])
                if p is not None:
                    roots.append(p)
        i += 1

    roots = sorted(set(roots))
    if not roots:
        raise NoFairProbabilityError(
            f"no fair probability in [0, 1] for O_c={certain:g}, O_u={uncertain:g}"
        )
    branches, intervals = [], []
    for p in roots:
        res = bounds(_uncertain_dist(uncertain, p).map(model), cfg)
        branches.append(res.branch)
        intervals.append(_interval(res, target, cfg))
    return FairnessResult(certain, uncertain, tuple(roots), tuple(branches), tuple(intervals), target)


def fair_interval(result: FairnessResult, index: int = 0) -> tuple[float, float]:
    """Clipped lower and upper bound of the uncertain bet at a fair root.

    Under linear utility these are in money; otherwise in utiles.
    """
    return result.intervals[index]


def expectation_fair_probability(certain: float, uncertain: float) -> float:
    """Fair probability when only expected values are compared."""
    if uncertain == 0:
        raise ValueError("uncertain outcome must be nonzero")
    return certain / uncertain


def closed_form_fair_probabilities(ratio: float, k: float = 1.0) -> list[float]:
    """Fair probabilities of a two-point bet with symmetric ``k``-sigma bounds.

    ``ratio`` is ``u(O_c) / u(O_u)``, which equals ``O_c / O_u`` under linear
    utility. Each clipping regime yields a quadratic in ``p``; only solutions
    consistent with their regime are kept.
    """
    r = float(ratio)
    k2 = k * k
    found = []

    def regime(p):
        s = k * math.sqrt(max(p * (1.0 - p), 0.0))
        return p - s < 0.0, p + s > 1.0

    def quad(a, b, c):
        disc = b * b - 4 * a * c
        if disc < 0:
            disc = 0.0 if disc > -1e-15 else None
        if disc is None:
            return []
        sq = math.sqrt(disc)
        return [(-b - sq) / (2 * a), (-b + sq) / (2 * a)]

    if 0.0 < r < 1.0 and regime(r) == (False, False):
        found.append(r)
    # lower bound clipped to 0: p + k sigma = 2r
    for p in quad(1.0 + k2, -(4.0 * r + k2), 4.0 * r * r):
        if 0.0 < p < 1.0 and p <= 2.0 * r + 1e-15 and regime(p) == (True, False):
            found.append(p)
    # upper bound clipped to 1: p - k sigma + 1 = 2r
    s = 2.0 * r - 1.0
    for p in quad(1.0 + k2, -(2.0 * s + k2), s * s):
        if 0.0 < p < 1.0 and p >= s - 1e-15 and regime(p) == (False, True):
            found.append(p)
    return sorted(set(found))


@dataclass(frozen=True)
class CurvePoint:
    ratio: float
    certain: float
    p_fair: float | None
    roots: tuple[float, ...] = ()
    error: str | None = None


def default_ratio_grid(n: int = 99) -> np.ndarray:
    return np.linspace(1.0, n, n) / (n + 1)


def fairness_curve(
    uncertain: float,
    model: UtilityModel | None = None,
    cfg: BoundsConfig = BoundsConfig(),
    grid=None,
    scan_points: int = SCAN_POINTS,
) -> list[CurvePoint]:
    """Fair probability across certain/uncertain ratios.

    Where a ratio admits several roots, the one closest to the previously
    selected point is kept; the first point is seeded from the closed-form
    two-point solution. Solver failures become points with ``p_fair=None``.
    """
    model = model if model is not None else UtilityModel.linear()
    grid = default_ratio_grid() if grid is None else np.asarray(grid, dtype=float)
    if np.any(grid <= 0) or np.any(grid > 1):
        raise ValueError("ratios must lie in (0, 1]")
    u_top = model(uncertain)
    points = []
    previous = None
    for ratio in grid:
        certain = float(ratio * uncertain)
        try:
            result = fair_probability(certain, uncertain, model, cfg, scan_points)
        except NoFairProbabilityError as exc:
            points.append(CurvePoint(float(ratio), certain, None, (), str(exc)))
            continue
        if previous is None:
            seeds = closed_form_fair_probabilities(model(certain) / u_top, cfg.k)
            previous = seeds[0] if seeds else result.roots[0]
        chosen = min(result.roots, key=lambda p: abs(p - previous))
        previous = chosen
        points.append(CurvePoint(float(ratio), certain, chosen, result.roots))
    return points


def symmetry_ratio(
    uncertain: float,
    model: UtilityModel | None = None,
    cfg: BoundsConfig = BoundsConfig(),
    scan_points: int = SCAN_POINTS,
) -> float:
    """Certain/uncertain ratio whose fair probability is one half."""
    model = model if model is not None else UtilityModel.linear()

    def excess(ratio):
        roots = fair_probability(ratio * uncertain, uncertain, model, cfg, scan_points).roots
        return min(roots, key=lambda p: abs(p - 0.5)) - 0.5

    lo, hi = 1e-6, 1.0
    if excess(lo) * excess(hi) > 0:
        raise NoFairProbabilityError("fair probability never crosses one half")
    return float(brentq(excess, lo, hi, xtol=1e-12))


def kt_weight(p, gamma: float, sign: str = "plus"):
    """Probability weighting ``p^g / (p^g + (1 - p)^(1/g))``.

    Implemented with the exponents exactly as written in the comparison;
    ``gamma = 1`` gives the identity. ``sign`` names the outcome domain
    ("plus" for gains with parameter gamma, "minus" for losses with delta);
    both domains share the same functional form.
    """
    if sign not in ("plus", "minus"):
        raise ValueError("sign must be 'plus' or 'minus'")
    if not gamma > 0:
        raise ValueError("weighting parameter must be positive")
    p_arr = np.asarray(p, dtype=float)
    if np.any(p_arr < 0) or np.any(p_arr > 1):
        raise ValueError("probabilities must lie in [0, 1]")
    if gamma == 1.0:
        return p if np.ndim(p) == 0 else p_arr.copy()
    num = p_arr**gamma
    den = num + (1.0 - p_arr) ** (1.0 / gamma)
    out = num / den
    return float(out) if np.ndim(p) == 0 else out


def kt_value(x, alpha: float = 0.88, beta: float = 0.88, lam: float = 2.25):
    """Two-part value function: ``x**alpha`` for gains, ``-lam (-x)**beta`` for losses."""
    if not (0 < alpha <= 1 and 0 < beta <= 1 and lam > 0):
        raise ValueError("need 0 < alpha, beta <= 1 and lambda > 0")
    x_arr = np.asarray(x, dtype=float)
    gains = np.where(x_arr >= 0, np.abs(x_arr) ** alpha, 0.0)
    losses = np.where(x_arr < 0, -lam * np.abs(x_arr) ** beta, 0.0)
    out = gains + losses
    return float(out) if np.ndim(x) == 0 else out


@dataclass(frozen=True)
class KTPrediction:
    bet: CertaintyBet
    preference: Preference
    p_fair: float
    dominating: str
    uncertain_bounds: BoundsResult
    certain_bounds: BoundsResult

    @property
    def takes_uncertain(self) -> bool:
        return self.preference.preferred == 0


def predict_kt_bet(
    bet: CertaintyBet,
    model: UtilityModel | None = None,
    cfg: BoundsConfig = BoundsConfig(),
) -> KTPrediction:
    """Verdict on a certainty bet together with its fair probability.

    Decision 1 is the uncertain bet, decision 2 the sure one. ``dominating``
    names the bound whose difference between the two decisions is larger.
    """
    model = model if model is not None else UtilityModel.linear()
    analysis = analyze(
        [bet.uncertain_dist(), bet.certain_dist()], model, cfg, labels=("D1", "D2")
    )
    b1, b2 = analysis.decisions[0].bounds, analysis.decisions[1].bounds
    upper_gain = b1.ub - b2.ub
    lower_gain = b1.lb - b2.lb
    dominating = "upper" if abs(upper_gain) > abs(lower_gain) else "lower"
    p_fair = fair_probability(bet.certain, bet.uncertain, model, cfg).p_fair
    return KTPrediction(bet, analysis.preference, p_fair, dominating, b1, b2)
