"""Acceptance criteria, one test per criterion.

Each criterion prints a PASS/FAIL line in the pytest terminal summary (see
conftest.py). The file also runs standalone: ``python3 tests/test_acceptance.py``.
"""
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from bayes_decision.criterion import BoundsConfig, bounds, criterion_score
from bayes_decision.dist import deciban
from bayes_decision.fairness import fair_interval, fair_probability, fairness_curve, symmetry_ratio
from bayes_decision.problemfile import load_problem
from bayes_decision.report import dump_machine, load_machine
from bayes_decision.scenarios import ellsberg_outcomes, run_scenario
from bayes_decision.utility import UtilityModel, calibrate_weber, pushforward

ROOT = Path(__file__).resolve().parent.parent
RESULTS = {}

TITLES = {
    1: "seatbelt marginal tables",
    2: "Ellsberg moments, supports, scores and net gain",
    3: "fairness solver probabilities and fair intervals",
    4: "certainty-bet and framing verdict directions",
    5: "Weber calibration and deciban",
    6: "debt and poor-person utilities",
    7: "property suites",
    8: "fairness curve shapes and symmetry points",
    9: "CLI scenarios, round trip and determinism",
}


def close(value, target, tol, what):
    assert abs(value - target) <= tol, f"{what}: {value!r} vs {target!r} (tol {tol:g})"


def criterion_1():
    problem = load_problem(ROOT / "problems" / "seatbelt.yaml")
    codes = (0, -1, -2)
    expected = ((0.9872, 0.0127, 0.0001), (0.9621, 0.0373, 0.0006))
    for label, dist, target in zip(problem.labels, problem.outcomes, expected):
        for code, t in zip(codes, target):
            close(dist.pmf(code), t, 5e-4, f"P(O={code}|{label})")


def criterion_2():
    d1, d2 = ellsberg_outcomes()
    assert d1.std == pytest.approx(5.0, abs=1e-12), d1.std
    close(d2.std, 29.0, 0.5, "std D2")
    unit = UtilityModel.income(1.0, 200.0)
    u1, u2 = pushforward(d1, unit), pushforward(d2, unit)
    close(u1.mean, -0.0003, 5e-5, "mean u1")
    close(u1.std, 0.025, 5e-5, "std u1")
    close(u2.mean, -0.0108, 5e-4, "mean u2")
    close(u2.std, 0.1479, 5e-4, "std u2")
    close(u1.support_min, -0.2877, 1e-4, "support min")
    close(u1.support_max, 0.2231, 1e-4, "support max")
    cfg = BoundsConfig(k=1)
    close(criterion_score(bounds(u1, cfg), cfg), -0.0006, 5e-4, "LB+UB D1")
    close(criterion_score(bounds(u2, cfg), cfg), -0.0216, 5e-4, "LB+UB D2")
    checks = {c.label: c.computed for c in run_scenario("ellsberg", q=100.0).checks}
    close(checks["net gain (q=100)"], 2.10, 0.05, "net gain")


def criterion_3():
    close(fair_probability(5, 5000).p_fair, 3.985e-6, 1e-8, "p_fair (5, 5000)")
    close(fair_probability(-3000, -4000).p_fair, 0.8536, 1e-4, "p_fair (-3000, -4000)")
    close(fair_probability(3000, 4000).p_fair, 0.8536, 1e-4, "p_fair (3000, 4000)")
    for certain, uncertain, interval in ((5, 5000, (0, 10)), (-3000, -4000, (-4000, -2000)), (3000, 4000, (2000, 4000))):
        got = fair_interval(fair_probability(certain, uncertain))
        assert got == interval, f"fair interval ({certain}, {uncertain}): {got}"


def criterion_4():
    ids = (
        "kt_risk_seeking_1",
        "kt_risk_aversion_1",
        "kt_risk_seeking_2",
        "kt_risk_aversion_2",
        "framing_group1",
        "framing_group2",
    )
    wrong = []
    for scenario_id in ids:
        verdict = next(c for c in run_scenario(scenario_id).checks if c.label == "verdict")
        if not verdict.passed:
            wrong.append(f"{scenario_id}: computed {verdict.computed}, published {verdict.expected}")
    assert not wrong, "; ".join(wrong)


def criterion_5():
    close(calibrate_weber(1000, 10), 100.50, 0.01, "q")
    close(calibrate_weber(40000, 1000, "debt"), 39.5, 0.1, "b")
    close(deciban(0.99), 19.96, 0.01, "deciban(0.99)")


def criterion_6():
    b = 40.0
    close(UtilityModel.debt(b, 40000)(-500), 0.5, 0.01, "repay 500 of 40000")
    close(UtilityModel.debt(b, 2000)(-500), 11.5, 0.1, "repay 500 of 2000")
    close(UtilityModel.debt(b, 20000)(-500), 1.0, 0.05, "repay 500 of 20000")
    q = 100.0
    close(UtilityModel.income(q, 700)(-500), -125, 1, "lose 500 of 700")
    close(UtilityModel.debt(b, 20000)(1000), -2, 1, "borrow 1000 at 20000")
    close(UtilityModel.income(q, 700)(1000), 89, 1, "gain 1000 at 700")


PROPERTY_TESTS = (
    "tests/test_utility.py::TestIncomeUtility::test_scale_invariance_1000_cases",
    "tests/test_utility.py::TestIncomeUtility::test_chaining_1000_cases",
    "tests/test_criterion.py::TestCompare::test_argmax_invariance_under_q",
    "tests/test_dist.py::TestNetworkInference::test_matches_brute_force_on_random_networks",
    "tests/test_fairness.py::TestFairProbability::test_closed_form_branches_on_grid",
)


def criterion_7():
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *PROPERTY_TESTS],
        cwd=ROOT,
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stdout[-2000:]


def criterion_8():
    linear = [pt.p_fair for pt in fairness_curve(5000)]
    assert None not in linear and np.all(np.diff(linear) >= 0), "linear curve not nondecreasing"
    close(symmetry_ratio(5000), 0.5, 1e-9, "linear symmetry point")
    gains = symmetry_ratio(5000, UtilityModel.income(1.0, 1000))
    losses = symmetry_ratio(-5000, UtilityModel.income(1.0, 6000))
    assert gains < 0.5, f"gain symmetry point {gains}"
    assert losses > 0.5, f"loss symmetry point {losses}"
    close(gains, (math.sqrt(6) - 1) / 5, 1e-9, "gain symmetry point")
    close(losses, (1 - 1 / math.sqrt(6)) * 6 / 5, 1e-9, "loss symmetry point")


def _cli(*argv):
    proc = subprocess.run(
        [sys.executable, "-m", "bayes_decision.cli", *map(str, argv)], cwd=ROOT, capture_output=True, text=True
    )
    return proc.returncode, proc.stdout


def criterion_9():
    problems = [ROOT / "problems" / name for name in ("seatbelt.yaml", "ellsberg.yaml")]
    for path in problems:
        runs = [_cli("analyze", path, "--format", "machine") for _ in range(2)]
        assert runs[0][0] == 0 and runs[0][1] == runs[1][1], f"{path.name}: output differs between runs"
        doc = load_machine(runs[0][1])
        assert dump_machine(doc) == runs[0][1], f"{path.name}: machine report does not round-trip"
    code, out = _cli("scenario", "--all")
    failing = [line.split()[0] for line in out.splitlines() if line.endswith("FAIL")]
    assert code == 0, f"scenario --all exited {code}; failing: {', '.join(failing)}"


CRITERIA = {n: globals()[f"criterion_{n}"] for n in TITLES}


@pytest.mark.parametrize("number", list(CRITERIA))
def test_criterion(number):
    try:
        CRITERIA[number]()
    except AssertionError as exc:
        RESULTS[number] = f"FAIL ({str(exc).splitlines()[0]})"
        raise
    RESULTS[number] = "PASS"


def summary_lines():
    return [f"criterion {n}: {RESULTS[n]} - {TITLES[n]}" for n in sorted(RESULTS)]


if __name__ == "__main__":
    for n, check in CRITERIA.items():
        try:
            check()
            RESULTS[n] = "PASS"
        except AssertionError as exc:
            RESULTS[n] = f"FAIL ({str(exc).splitlines()[0]})"
    print("\n".join(summary_lines()))
    sys.exit(0 if all(r == "PASS" for r in RESULTS.values()) else 1)
