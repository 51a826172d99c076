"""Distributions, product/sum rules, binomial bets, networks and odds."""
import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bayes_decision.dist import (
    BinaryNetwork,
    ConditionalTable,
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
    product_rule_check,
)
from bayes_decision.exceptions import (
    DimensionError,
    IndeterminateOddsError,
    NormalizationError,
    UndefinedConditionalError,
)
from bayes_decision.scenarios import SEATBELT_PRIOR, SEATBELT_TABLES, fred_network


def _simplex(n, rng):
    w = rng.gamma(1.0, size=n)
    return w / w.sum()


@st.composite
def prior_and_table(draw):
    n_events = draw(st.integers(1, 5))
    n_outcomes = draw(st.integers(1, 5))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    prior = _simplex(n_events, rng)
    table = np.array([_simplex(n_outcomes, rng) for _ in range(n_events)])
    values = np.sort(rng.choice(np.arange(-50, 50), size=n_outcomes, replace=False)).astype(float)
    return prior, table, values


class TestDiscreteDistribution:
    def test_duplicates_merge_and_sort(self):
        d = DiscreteDistribution([3, 1, 3], [0.25, 0.5, 0.25])
        np.testing.assert_array_equal(d.values, [1, 3])
        np.testing.assert_array_equal(d.probs, [0.5, 0.5])

    def test_rejects_unnormalized(self):
        with pytest.raises(NormalizationError):
            DiscreteDistribution([0, 1], [0.5, 0.6])

    def test_rejects_negative(self):
        with pytest.raises(NormalizationError):
            DiscreteDistribution([0, 1], [1.5, -0.5])

    def test_rejects_shape_mismatch(self):
        with pytest.raises(DimensionError):
            DiscreteDistribution([0, 1, 2], [0.5, 0.5])

    def test_renormalized(self):
        d = DiscreteDistribution.renormalized([0, 1], [1, 3])
        np.testing.assert_allclose(d.probs, [0.25, 0.75])

    def test_support_ignores_zero_mass(self):
        d = DiscreteDistribution([-5, 0, 5], [0.0, 0.5, 0.5])
        assert (d.support_min, d.support_max) == (0.0, 5.0)

    def test_moments(self):
        d = DiscreteDistribution([0, 1], [0.25, 0.75])
        assert moment(d, 1) == pytest.approx(0.75)
        assert d.moment(2) == pytest.approx(0.75)
        assert d.var == pytest.approx(0.75 * 0.25)

    def test_point_mass_has_zero_spread(self):
        d = DiscreteDistribution.point_mass(3000)
        assert d.std == 0.0 and d.mean == 3000.0

    def test_values_are_read_only(self):
        d = DiscreteDistribution([0, 1], [0.5, 0.5])
        with pytest.raises(ValueError):
            d.probs[0] = 1.0

    @given(prior_and_table())
    def test_constructed_distributions_are_normalized(self, case):
        prior, table, values = case
        d = marginalize_outcomes(joint_from_conditionals(prior, ConditionalTable(table), values))
        assert abs(d.probs.sum() - 1.0) <= 1e-9


class TestJointAndMarginal:
    def test_seatbelt_joint_entries(self):
        rows = SEATBELT_TABLES["seat belts"]
        joint = joint_from_conditionals(SEATBELT_PRIOR, ConditionalTable(rows), [0, -1, -2])
        assert joint.entry(2, 1) == pytest.approx(0.0007, abs=1e-12)
        assert joint.entry(1, 0) == pytest.approx(0.049 * 0.75, abs=1e-12)

    def test_seatbelt_marginals(self):
        for name, expected in (
            ("seat belts", (0.9872, 0.0127, 0.0001)),
            ("no seat belts", (0.9621, 0.0373, 0.0006)),
        ):
            joint = joint_from_conditionals(SEATBELT_PRIOR, ConditionalTable(SEATBELT_TABLES[name]), [3, 2, 1])
            np.testing.assert_allclose(joint.outcome_marginal(), expected, atol=5e-4)

    def test_identity_table_puts_prior_on_diagonal(self):
        prior = [0.2, 0.3, 0.5]
        joint = joint_from_conditionals(prior, ConditionalTable.identity(3), [1, 2, 3])
        np.testing.assert_array_equal(joint.matrix, np.diag(prior))

    def test_single_event_marginal_is_its_row(self):
        row = [0.1, 0.6, 0.3]
        d = marginalize_outcomes(joint_from_conditionals([1.0], ConditionalTable([row]), [1, 2, 3]))
        np.testing.assert_array_equal(d.probs, row)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            joint_from_conditionals([0.5, 0.5], ConditionalTable([[1.0]]), [0])

    def test_table_rows_must_sum_to_one(self):
        with pytest.raises(NormalizationError):
            ConditionalTable([[0.5, 0.4]])

    @given(prior_and_table())
    def test_marginal_equals_direct_sum(self, case):
        prior, table, values = case
        joint = joint_from_conditionals(prior, ConditionalTable(table), values)
        direct = [sum(prior[j] * table[j, k] for j in range(len(prior))) for k in range(len(values))]
        np.testing.assert_allclose(joint.outcome_marginal(), direct, rtol=0, atol=1e-12)

    @given(prior_and_table())
    def test_product_rule_symmetry(self, case):
        prior, table, values = case
        joint = joint_from_conditionals(prior, ConditionalTable(table), values)
        forward, backward = product_rule_check(joint)
        np.testing.assert_allclose(forward, joint.matrix, atol=1e-12)
        np.testing.assert_allclose(backward, joint.matrix, atol=1e-12)

    def test_joint_table_validates_total(self):
        with pytest.raises(NormalizationError):
            JointTable(np.array([[0.5, 0.6]]), (0, 1))


class TestBinomialBets:
    def test_known_urn_moments(self):
        d = binomial_outcome_dist(100, 0.5, 50)
        assert d.mean == pytest.approx(0.0, abs=1e-12)
        assert d.std == pytest.approx(5.0, abs=1e-12)

    def test_peak_against_direct_binomial(self):
        d = binomial_outcome_dist(100, 0.5, 50)
        assert d.pmf(0) == pytest.approx(math.comb(100, 50) / 2**100, rel=1e-12)
        assert d.pmf(0) == pytest.approx(0.0796, abs=1e-4)

    def test_certain_success(self):
        assert binomial_outcome_dist(1, 1.0, 0) == DiscreteDistribution.point_mass(1)

    def test_unknown_urn_moments(self):
        d = mixture_binomial_outcome_dist(100, 1000, 50)
        assert d.mean == pytest.approx(0.0, abs=1e-6)
        assert d.std == pytest.approx(29.0, abs=0.5)

    def test_unknown_urn_top_value_by_brute_force(self):
        d = mixture_binomial_outcome_dist(100, 1000, 50)
        direct = sum((R / 1000) ** 100 for R in range(1, 1000)) / 999
        assert d.pmf(50) == pytest.approx(direct, rel=1e-9)

    def test_two_ball_urn_is_fair_binomial(self):
        assert mixture_binomial_outcome_dist(7, 2, 0).allclose(binomial_outcome_dist(7, 0.5, 0))

    @pytest.mark.parametrize("n,N", [(10, 5), (100, 1000), (30, 37)])
    def test_law_of_total_variance(self, n, N):
        d = mixture_binomial_outcome_dist(n, N, 0)
        p = np.arange(1, N) / N
        total = np.mean(n * p * (1 - p)) + np.var(n * p)
        assert d.var == pytest.approx(total, abs=1e-9)


def _random_network(rng):
    names = ["X", "Y", "Z"]
    rng.shuffle(names)
    parents, cpts = {}, {}
    for i, var in enumerate(names):
        earlier = names[:i]
        chosen = tuple(v for v in earlier if rng.random() < 0.6)
        parents[var] = chosen
        cpts[var] = {
            key: float(rng.uniform(0.05, 0.95))
            for key in itertools.product((False, True), repeat=len(chosen))
        }
    return names, parents, cpts


def _brute_force_joint(names, parents, cpts):
    """Full joint table indexed by (X, Y, Z) truth values."""
    joint = np.zeros((2, 2, 2))
    for bits in itertools.product((0, 1), repeat=3):
        a = dict(zip(("X", "Y", "Z"), map(bool, bits)))
        p = 1.0
        for var in names:
            p_true = cpts[var][tuple(a[q] for q in parents[var])]
            p *= p_true if a[var] else 1.0 - p_true
        joint[bits] = p
    return joint


class TestNetworkInference:
    def test_fred_explaining_away(self):
        net = fred_network(0.001, 0.01)
        assert enumerate_posterior(net, "B", {"A": True, "E": True}) == pytest.approx(0.001, abs=1e-15)
        assert enumerate_posterior(net, "B", {"A": True}) == pytest.approx(0.09099, abs=1e-5)

    def test_fred_without_earthquake(self):
        net = fred_network(0.001, 0.01, earthquake=False)
        assert enumerate_posterior(net, "B", {"A": True}) == 1.0

    def test_soft_alarm_converges(self):
        exact = enumerate_posterior(fred_network(0.001, 0.01), "B", {"A": True})
        gaps = [
            abs(enumerate_posterior(fred_network(0.001, 0.01, epsilon=eps), "B", {"A": True}) - exact)
            for eps in (1e-2, 1e-4, 1e-6, 1e-8)
        ]
        assert all(a > b for a, b in zip(gaps, gaps[1:]))
        assert gaps[-1] < 1e-5

    def test_zero_probability_evidence(self):
        # no burglaries and no false alarms: the alarm can never ring
        net = fred_network(0.0, 0.0, earthquake=False)
        with pytest.raises(UndefinedConditionalError):
            enumerate_posterior(net, "B", {"A": True})

    def test_cycle_rejected(self):
        with pytest.raises(ValueError, match="cyclic"):
            BinaryNetwork(
                ("P", "Q"),
                {"P": ("Q",), "Q": ("P",)},
                {"P": {(False,): 0.5, (True,): 0.5}, "Q": {(False,): 0.5, (True,): 0.5}},
            )

    def test_missing_cpt_entry(self):
        with pytest.raises(ValueError):
            BinaryNetwork(("B", "A"), {"A": ("B",)}, {"B": {(): 0.5}, "A": {(True,): 1.0}})

    def test_matches_brute_force_on_random_networks(self):
        rng = np.random.default_rng(20240601)
        for _ in range(200):
            names, parents, cpts = _random_network(rng)
            net = BinaryNetwork(tuple(names), parents, cpts)
            joint = _brute_force_joint(names, parents, cpts)
            axis = {"X": 0, "Y": 1, "Z": 2}
            query, *rest = rng.permutation(["X", "Y", "Z"])
            evidence = {v: bool(rng.integers(2)) for v in rest[: rng.integers(0, 3)]}
            sl = [slice(None)] * 3
            for v, val in evidence.items():
                sl[axis[v]] = int(val)
            conditioned = joint[tuple(sl)]
            # remaining axes keep their original order; find the query's position
            free = [a for a in ("X", "Y", "Z") if a not in evidence]
            q_axis = free.index(query)
            expected = np.take(conditioned, 1, axis=q_axis).sum() / conditioned.sum()
            got = enumerate_posterior(net, query, evidence)
            assert abs(got - expected) <= 1e-12


class TestOddsAndDecibans:
    def test_base_rate_threshold(self):
        prior = Odds(1 / 3)
        assert posterior_odds(prior, 4).ratio == pytest.approx(4 / 3)
        assert posterior_odds(prior, 4) > 1
        assert not posterior_odds(prior, 3) > 1

    def test_uninformative_evidence(self):
        assert posterior_odds(0.7, 1).ratio == pytest.approx(0.7)

    def test_uniform_prior(self):
        assert posterior_odds(1, 3).ratio == 3

    def test_zero_times_infinity(self):
        with pytest.raises(IndeterminateOddsError):
            posterior_odds(0, math.inf)

    def test_odds_probability_round_trip(self):
        assert Odds.from_probability(0.8).to_probability() == pytest.approx(0.8)
        assert Odds.from_probability(1.0).ratio == math.inf

    def test_deciban_values(self):
        assert deciban(0.5) == 0.0
        assert deciban(0.99) == pytest.approx(19.96, abs=0.01)
        assert deciban(0.11) - deciban(0.10) == pytest.approx(0.46, abs=0.01)
        assert deciban(1.0) == math.inf and deciban(0.0) == -math.inf

    def test_deciban_duality_on_grid(self):
        p = np.linspace(0.001, 0.999, 999)
        back = np.array([inverse_deciban(deciban(x)) for x in p])
        np.testing.assert_allclose(back, p, atol=1e-9)

    @given(st.floats(1e-6, 1 - 1e-6))
    def test_deciban_is_antisymmetric(self, p):
        assert deciban(p) == pytest.approx(-deciban(1 - p), abs=1e-9)
