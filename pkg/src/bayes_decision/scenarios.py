"""Worked examples with the published values they must reproduce."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .criterion import BoundsConfig, analyze, bounds, criterion_score
from .dist import (
    BinaryNetwork,
    ConditionalTable,
    Decision,
    DecisionProblem,
    DiscreteDistribution,
    Odds,
    binomial_outcome_dist,
    deciban,
    enumerate_posterior,
    mixture_binomial_outcome_dist,
    posterior_odds,
)
from .fairness import CertaintyBet, fair_probability, predict_kt_bet
from .utility import DECIBEL_WEBER, UtilityModel, calibrate_weber, pushforward

# outcome codes for the seatbelt example: the outcomes are not monetary, so
# harm is coded on an ordinal scale where larger is better
NO_HARM, SOME_BRUISES, BROKEN_BONES = 0.0, -1.0, -2.0
SEATBELT_PRIOR = (0.950, 0.049, 0.001)
SEATBELT_TABLES = {
    "seat belts": ((1.00, 0.00, 0.00), (0.75, 0.25, 0.00), (0.20, 0.70, 0.10)),
    "no seat belts": ((1.00, 0.00, 0.00), (0.25, 0.75, 0.00), (0.10, 0.30, 0.60)),
}


@dataclass(frozen=True)
class Expected:
    """A published value: label, value, tolerance and where it is printed.

    ``tol=None`` means exact equality (used for verdicts and flags).
    """

    label: str
    value: float | str | bool
    tol: float | None
    location: str

    def __post_init__(self):
        if not self.location:
            raise ValueError(f"expected value {self.label!r} needs a source location")


@dataclass(frozen=True)
class Scenario:
    id: str
    description: str
    location: str
    compute: Callable[[], dict] = field(repr=False)
    expected: tuple[Expected, ...]


@dataclass(frozen=True)
class Check:
    label: str
    computed: object
    expected: object
    tol: float | None
    location: str
    passed: bool


@dataclass(frozen=True)
class ScenarioReport:
    id: str
    description: str
    checks: tuple[Check, ...]
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]


def _matches(computed, exp: Expected) -> bool:
    if exp.tol is None:
        return computed == exp.value
    return computed is not None and abs(float(computed) - float(exp.value)) <= exp.tol


# -- problem builders -------------------------------------------------------


def seatbelt_problem() -> DecisionProblem:
    outcome_values = (NO_HARM, SOME_BRUISES, BROKEN_BONES)
    decisions = []
    for label, rows in SEATBELT_TABLES.items():
        table = ConditionalTable(
            rows,
            rows=("no accident", "small accident", "severe accident"),
            columns=("no harm", "some bruises", "broken bones"),
        )
        decisions.append(Decision(label, SEATBELT_PRIOR, table, outcome_values))
    return DecisionProblem(tuple(decisions))


def ellsberg_outcomes(n=100, N=1000, fee=50):
    """Known 50/50 urn versus an urn of unknown composition."""
    return [binomial_outcome_dist(n, 0.5, fee), mixture_binomial_outcome_dist(n, N, fee)]


def fred_network(b=0.001, e=0.01, earthquake=True, epsilon=0.0) -> BinaryNetwork:
    """Burglar alarm triggered by a burglary or a small earthquake.

    ``epsilon`` softens the certain alarm entries: the alarm rings with
    probability ``1 - epsilon`` given a cause and ``epsilon`` without one.
    """
    if earthquake:
        return BinaryNetwork(
            variables=("B", "E", "A"),
            parents={"A": ("B", "E")},
            cpts={
                "B": {(): b},
                "E": {(): e},
                "A": {
                    (False, False): epsilon,
                    (False, True): 1.0 - epsilon,
                    (True, False): 1.0 - epsilon,
                    (True, True): 1.0 - epsilon,
                },
            },
        )
    return BinaryNetwork(
        variables=("B", "A"),
        parents={"A": ("B",)},
        cpts={"B": {(): b}, "A": {(False,): epsilon, (True,): 1.0 - epsilon}},
    )


@dataclass(frozen=True)
class FramedProblem:
    outcomes: tuple[DiscreteDistribution, ...]
    model: UtilityModel


def frame_problem(outcomes, gift: float, mode: str, model: UtilityModel) -> FramedProblem:
    """Account for a windfall either in initial wealth or in the outcomes.

    ``discount_into_wealth`` raises the model's reference by ``gift`` and
    leaves outcomes as stated; ``discount_into_outcomes`` adds ``gift`` to
    every outcome and keeps the reference.
    """
    if gift < 0:
        raise ValueError("gift must be nonnegative")
    outcomes = tuple(outcomes)
    if mode == "discount_into_wealth":
        if model.is_logarithmic:
            model = model.with_reference(model.reference + gift)
        return FramedProblem(outcomes, model)
    if mode == "discount_into_outcomes":
        return FramedProblem(tuple(d.shift(gift) for d in outcomes), model)
    raise ValueError(f"unknown framing mode {mode!r}")


FRAMING_GROUPS = {
    "group1": (1000.0, [DiscreteDistribution([0, 1000], [0.5, 0.5]), DiscreteDistribution.point_mass(500)]),
    "group2": (2000.0, [DiscreteDistribution([-1000, 0], [0.5, 0.5]), DiscreteDistribution.point_mass(-500)]),
}

# both groups once the gift is added to the outcomes
FRAMING_DISCOUNTED = (
    DiscreteDistribution([1000, 2000], [0.5, 0.5]),
    DiscreteDistribution.point_mass(1500),
)

KT_BETS = {
    "kt_risk_seeking_1": CertaintyBet(certain=5, uncertain=5000, p=0.001),
    "kt_risk_aversion_1": CertaintyBet(certain=-5, uncertain=-5000, p=0.001),
    "kt_risk_seeking_2": CertaintyBet(certain=-3000, uncertain=-4000, p=0.8),
    "kt_risk_aversion_2": CertaintyBet(certain=3000, uncertain=4000, p=0.8),
}


# -- computations -----------------------------------------------------------


def _seatbelt():
    problem = seatbelt_problem()
    out = {}
    for tag, dec in zip(("D1", "D2"), problem.decisions):
        marg = dec.outcome_distribution()
        for code, name in ((NO_HARM, "O1"), (SOME_BRUISES, "O2"), (BROKEN_BONES, "O3")):
            out[f"P({name}|{tag})"] = marg.pmf(code)
    joint = problem.decisions[0].joint()
    out["P(E2,O1|D1)"] = joint.entry(1, 0)
    out["P(E3,O2|D1)"] = joint.entry(2, 1)
    out["P(E2,O1|D2)"] = problem.decisions[1].joint().entry(1, 0)
    return out


def _ellsberg(wealth=200.0, q=100.0):
    d1, d2 = ellsberg_outcomes()
    unit = UtilityModel.income(1.0, wealth)
    u1, u2 = pushforward(d1, unit), pushforward(d2, unit)
    cfg = BoundsConfig(k=1)
    b1, b2 = bounds(u1, cfg), bounds(u2, cfg)
    scaled = analyze([d1, d2], UtilityModel.income(q, wealth), cfg, labels=("D1", "D2"))
    s1, s2 = (d.bounds for d in scaled.decisions)
    return {
        "mean(o|D1)": d1.mean,
        "std(o|D1)": d1.std,
        "mean(o|D2)": d2.mean,
        "std(o|D2)": d2.std,
        "P(o=0|D1)": d1.pmf(0.0),
        "mean(u|D1)/q": u1.mean,
        "std(u|D1)/q": u1.std,
        "mean(u|D2)/q": u2.mean,
        "std(u|D2)/q": u2.std,
        "a/q": u1.support_min,
        "b/q": u1.support_max,
        "LB+UB(D1)/q": criterion_score(b1, cfg),
        "LB+UB(D2)/q": criterion_score(b2, cfg),
        "clipped": b1.branch != "no_clip" or b2.branch != "no_clip",
        "lower-bound gain (q=100)": s1.lb - s2.lb,
        "upper-bound loss (q=100)": s2.ub - s1.ub,
        "net gain (q=100)": (s1.lb + s1.ub) - (s2.lb + s2.ub),
        "verdict": scaled.preference.preferred_label,
    }


def _kt(name):
    bet = KT_BETS[name]
    pred = predict_kt_bet(bet)
    res = fair_probability(bet.certain, bet.uncertain)
    lo, hi = res.intervals[0]
    return {
        "p_fair": res.p_fair,
        "fair interval low": lo,
        "fair interval high": hi,
        "verdict": pred.preference.preferred_label,
        "dominating bound": pred.dominating,
    }


def _framing(group, wealth=2000.0, q=100.0):
    gift, outcomes = FRAMING_GROUPS[group]
    model = UtilityModel.income(q, wealth)
    in_outcomes = frame_problem(outcomes, gift, "discount_into_outcomes", UtilityModel.linear())
    identical = all(a == b for a, b in zip(in_outcomes.outcomes, FRAMING_DISCOUNTED))
    in_wealth = frame_problem(outcomes, gift, "discount_into_wealth", model)
    analysis = analyze(list(in_wealth.outcomes), in_wealth.model, BoundsConfig(k=1), labels=("D1", "D2"))
    pref = analysis.preference
    return {
        "identical distributions when discounted into outcomes": identical,
        "D1 outcomes after discounting": [list(p) for p in in_outcomes.outcomes[0]],
        "LB+UB(D1)": analysis.decisions[0].score,
        "LB+UB(D2)": analysis.decisions[1].score,
        "verdict": pref.preferred_label if pref.verdict == "prefer" else "indifferent",
    }


def _debt():
    q, b = 100.0, 40.0
    return {
        "q from (1000, 10)": calibrate_weber(1000, 10, "income"),
        "b from (40000, 1000)": calibrate_weber(40000, 1000, "debt"),
        "income loss 500 at 1500": UtilityModel.income(q, 1500)(-500),
        "debt decrease 500 at 40000": UtilityModel.debt(b, 40000)(-500),
        "debt decrease 500 at 2000": UtilityModel.debt(b, 2000)(-500),
        "debt decrease 500 at 20000": UtilityModel.debt(b, 20000)(-500),
        "income loss 500 at 700": UtilityModel.income(q, 700)(-500),
        "debt increase 1000 at 20000": UtilityModel.debt(b, 20000)(1000),
        "income gain 1000 at 700": UtilityModel.income(q, 700)(1000),
    }


def _fred(b=0.001, e=0.01):
    i1 = fred_network(b, e, earthquake=True)
    i2 = fred_network(b, e, earthquake=False)
    alt_b, alt_e = 0.02, 0.05
    alt = fred_network(alt_b, alt_e)
    return {
        "P(B|A,E) [I1]": enumerate_posterior(i1, "B", {"A": True, "E": True}),
        "P(B|A) [I2]": enumerate_posterior(i2, "B", {"A": True}),
        "P(B|A) [I1]": enumerate_posterior(i1, "B", {"A": True}),
        "P(B|A) [I1] closed form": b / (b + e - b * e),
        "P(B|A,E) [I1], b=0.02 e=0.05": enumerate_posterior(alt, "B", {"A": True, "E": True}),
        "P(B|A) [I1], b=0.02 e=0.05": enumerate_posterior(alt, "B", {"A": True}),
        "P(B|A) [I1] closed form, b=0.02 e=0.05": alt_b / (alt_b + alt_e - alt_b * alt_e),
    }


def _deciban():
    return {
        "deciban(0.5)": deciban(0.5),
        "deciban(0.99)": deciban(0.99),
        "deciban(1.0)": deciban(1.0),
        "deciban(0.11) - deciban(0.10)": deciban(0.11) - deciban(0.10),
    }


def _tom_w():
    prior = Odds(1 / 3)  # computer science : humanities
    threshold = 1.0 / prior.ratio
    return {
        "likelihood-ratio threshold": threshold,
        "posterior odds > 1 at LR 4": posterior_odds(prior, 4).ratio > 1,
        "posterior odds > 1 at LR 2": posterior_odds(prior, 2).ratio > 1,
    }


def _calibration():
    return {
        "q from (1000, 10)": calibrate_weber(1000, 10),
        "1 utile at S=1000, +10": UtilityModel.income(calibrate_weber(1000, 10), 1000)(10),
        "decibel Weber constant": DECIBEL_WEBER,
    }


def _kt_expected(name, p_fair, interval, verdict, eq, sec):
    return (
        Expected("p_fair", p_fair, 1e-8 if p_fair < 1e-3 else 1e-4, eq[0]),
        Expected("fair interval low", interval[0], 1e-9 * max(1.0, abs(interval[0])), eq[1]),
        Expected("fair interval high", interval[1], 1e-9 * max(1.0, abs(interval[1])), eq[1]),
        Expected("verdict", verdict, None, sec),
    )


SCENARIOS: dict[str, Scenario] = {}


def _register(s: Scenario):
    SCENARIOS[s.id] = s


_register(
    Scenario(
        "seatbelt",
        "Seat belts: event/outcome tables marginalized to outcome distributions",
        "Tables 1-4",
        _seatbelt,
        (
            Expected("P(O1|D1)", 0.9872, 5e-4, "Table 2"),
            Expected("P(O2|D1)", 0.0127, 5e-4, "Table 2"),
            Expected("P(O3|D1)", 0.0001, 5e-4, "Table 2"),
            Expected("P(O1|D2)", 0.9621, 5e-4, "Table 4"),
            Expected("P(O2|D2)", 0.0373, 5e-4, "Table 4"),
            Expected("P(O3|D2)", 0.0006, 5e-4, "Table 4"),
            Expected("P(E2,O1|D1)", 0.0370, 5e-4, "Table 1"),
            Expected("P(E3,O2|D1)", 0.0007, 5e-4, "Table 1"),
            Expected("P(E2,O1|D2)", 0.0120, 5e-4, "Table 3"),
        ),
    )
)
_register(
    Scenario(
        "ellsberg",
        "Ellsberg urns: 50/50 urn versus unknown composition, m=200",
        "Ellsberg section",
        _ellsberg,
        (
            Expected("mean(o|D1)", 0.0, 1e-9, "Eq. P1.3.5"),
            Expected("std(o|D1)", 5.0, 1e-9, "Eq. P1.3.5"),
            Expected("mean(o|D2)", 0.0, 1e-6, "Eq. P1.3.9"),
            Expected("std(o|D2)", 29.0, 0.5, "Eq. P1.3.9"),
            Expected("mean(u|D1)/q", -0.0003, 5e-5, "Eq. ells.1"),
            Expected("std(u|D1)/q", 0.025, 5e-5, "Eq. ells.1"),
            Expected("mean(u|D2)/q", -0.0108, 5e-4, "Eq. ells.2"),
            Expected("std(u|D2)/q", 0.1479, 5e-4, "Eq. ells.2"),
            Expected("a/q", -0.2877, 1e-4, "Eq. ells.2b"),
            Expected("b/q", 0.2231, 1e-4, "Eq. ells.2b"),
            Expected("clipped", False, None, "text before Eq. ells.3"),
            Expected("LB+UB(D1)/q", -0.0006, 1e-4, "Eq. ells.3"),
            Expected("LB+UB(D2)/q", -0.0216, 5e-4, "Eq. ells.4"),
            Expected("lower-bound gain (q=100)", 13.34, 0.05, "text after Eq. P1.D.11"),
            Expected("upper-bound loss (q=100)", 11.24, 0.05, "text after Eq. P1.D.11"),
            Expected("net gain (q=100)", 2.10, 0.05, "text after Eq. P1.D.11"),
            Expected("verdict", "D1", None, "Eqs. ells.5-ells.6"),
        ),
    )
)
_register(
    Scenario(
        "kt_risk_seeking_1",
        "0.001 chance of 5000 versus 5 for sure (linear utility)",
        "Risk Seeking I",
        lambda: _kt("kt_risk_seeking_1"),
        _kt_expected("kt_risk_seeking_1", 3.985e-6, (0.0, 10.0), "D1", ("Eq. P1.10.3", "Eq. P1.10.4"), "72% of N=72 chose D1"),
    )
)
_register(
    Scenario(
        "kt_risk_aversion_1",
        "0.001 chance of -5000 versus -5 for sure (linear utility)",
        "Risk Aversion I",
        lambda: _kt("kt_risk_aversion_1"),
        _kt_expected("kt_risk_aversion_1", 3.985e-6, (-10.0, 0.0), "D2", ("Eq. P1.10.3b", "Eq. P1.10.4b"), "83% of N=72 chose D2"),
    )
)
_register(
    Scenario(
        "kt_risk_seeking_2",
        "0.8 chance of -4000 versus -3000 for sure (linear utility)",
        "Risk Seeking II",
        lambda: _kt("kt_risk_seeking_2"),
        _kt_expected("kt_risk_seeking_2", 0.8536, (-4000.0, -2000.0), "D1", ("Eq. P1.10.3c", "Eq. P1.10.4c"), "92% of N=95 chose D1"),
    )
)
_register(
    Scenario(
        "kt_risk_aversion_2",
        "0.8 chance of 4000 versus 3000 for sure (linear utility)",
        "Risk Aversion II",
        lambda: _kt("kt_risk_aversion_2"),
        _kt_expected("kt_risk_aversion_2", 0.8536, (2000.0, 4000.0), "D2", ("Eq. P1.10.3d", "Eq. P1.10.4d"), "80% of N=95 chose D2"),
    )
)
_register(
    Scenario(
        "framing_group1",
        "Gift of 1000, then 0/1000 at even chances versus 500 for sure",
        "Framing appendix, Group 1",
        lambda **kw: _framing("group1", **kw),
        (
            Expected("identical distributions when discounted into outcomes", True, None, "Framing appendix footnote"),
            Expected("verdict", "D2", None, "84% of N=70 chose D2"),
        ),
    )
)
_register(
    Scenario(
        "framing_group2",
        "Gift of 2000, then -1000/0 at even chances versus -500 for sure",
        "Framing appendix, Group 2",
        lambda **kw: _framing("group2", **kw),
        (
            Expected("identical distributions when discounted into outcomes", True, None, "Framing appendix footnote"),
            Expected("verdict", "D1", None, "69% of N=68 chose D1"),
        ),
    )
)
_register(
    Scenario(
        "debt_phd",
        "Income versus debt utilities of repaying a student loan",
        "Negative Bernoulli utility appendix",
        _debt,
        (
            Expected("q from (1000, 10)", 100.50, 0.01, "Eq. P1.10.2b"),
            Expected("b from (40000, 1000)", 39.5, 0.1, "Eqs. P1.zq.3-P1.zq.4"),
            Expected("income loss 500 at 1500", -40.5, 0.1, "text after Eq. P1.zq.6"),
            Expected("debt decrease 500 at 40000", 0.5, 0.01, "Eq. P1.zq.6"),
            Expected("debt decrease 500 at 2000", 11.5, 0.1, "Eq. P1.zq.7"),
            Expected("debt decrease 500 at 20000", 1.0, 0.05, "Eq. P1.zq.8"),
            Expected("income loss 500 at 700", -125.0, 1.0, "poor-person paragraph"),
            Expected("debt increase 1000 at 20000", -2.0, 1.0, "poor-person paragraph"),
            Expected("income gain 1000 at 700", 89.0, 1.0, "poor-person paragraph"),
        ),
    )
)
_register(
    Scenario(
        "fred",
        "Burglar alarm explained away by an earthquake (b=0.001, e=0.01)",
        "Bayesian inference appendix",
        _fred,
        (
            Expected("P(B|A,E) [I1]", 0.001, 1e-12, "Eq. P1.C.12"),
            Expected("P(B|A) [I2]", 1.0, 1e-12, "Eq. P1.C.12b"),
            Expected("P(B|A) [I1]", 0.001 / (0.001 + 0.01 - 0.001 * 0.01), 1e-12, "Eq. P1.C.12c"),
            Expected("P(B|A,E) [I1], b=0.02 e=0.05", 0.02, 1e-12, "Eq. P1.C.12"),
            Expected("P(B|A) [I1], b=0.02 e=0.05", 0.02 / (0.02 + 0.05 - 0.02 * 0.05), 1e-12, "Eq. P1.C.12c"),
        ),
    )
)
_register(
    Scenario(
        "deciban",
        "Evidence in decibans for the certainty effect",
        "Non-linear preferences appendix",
        _deciban,
        (
            Expected("deciban(0.5)", 0.0, 1e-12, "Eq. P1.9.16"),
            Expected("deciban(0.99)", 19.96, 0.01, "Eq. P1.9.17"),
            Expected("deciban(1.0)", math.inf, None, "Eq. P1.9.18"),
            Expected("deciban(0.11) - deciban(0.10)", 0.46, 0.01, "Eq. P1.9.20"),
        ),
    )
)
_register(
    Scenario(
        "tom_w",
        "Base-rate aware odds: prior 1:3 needs likelihood ratio above 3",
        "Representativeness appendix",
        _tom_w,
        (
            Expected("likelihood-ratio threshold", 3.0, 1e-12, "Eq. P1.C.6b"),
            Expected("posterior odds > 1 at LR 4", True, None, "Eqs. P1.C.5, P1.C.7a"),
            Expected("posterior odds > 1 at LR 2", False, None, "Eq. P1.C.5"),
        ),
    )
)
_register(
    Scenario(
        "weber_calibration",
        "Weber constant from a 10 dollar JND at 1000 dollars",
        "Utility section",
        _calibration,
        (
            Expected("q from (1000, 10)", 100.50, 0.01, "Eq. P1.10.2b"),
            Expected("1 utile at S=1000, +10", 1.0, 1e-12, "Eq. P1.10.2a"),
            Expected("decibel Weber constant", 4.34, 0.005, "utility section footnote"),
        ),
    )
)


def list_scenarios() -> list[Scenario]:
    return list(SCENARIOS.values())


def run_scenario(scenario_id: str, **params) -> ScenarioReport:
    """Run one scenario; ``params`` override its inputs (e.g. ``q``, ``wealth``)."""
    try:
        scenario = SCENARIOS[scenario_id]
    except KeyError:
        raise KeyError(f"unknown scenario {scenario_id!r}") from None
    computed = scenario.compute(**params)
    checks = []
    for exp in scenario.expected:
        value = computed.get(exp.label)
        checks.append(Check(exp.label, value, exp.value, exp.tol, exp.location, _matches(value, exp)))
    used = {e.label for e in scenario.expected}
    extra = {k: v for k, v in computed.items() if k not in used}
    return ScenarioReport(scenario.id, scenario.description, tuple(checks), extra)


def run_all() -> list[ScenarioReport]:
    return [run_scenario(s.id) for s in list_scenarios()]

