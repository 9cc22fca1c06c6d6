"""
Tests for exact_tests module
============================
"""

from fractions import Fraction

import numpy as np
import pytest
from scipy.stats import binom, fisher_exact, hypergeom

from core.errors import InputError
from core.exact_tests import (
    CountPair,
    ExactTest,
    Margin,
    PValueSupport,
    alt_cdf,
    bt_pvalue,
    bt_support,
    classify_outcomes,
    fet_pvalue,
    fet_support,
    fisher_noncentral_pmf,
    hypergeometric_logpmf,
    hypergeometric_pmf,
    null_cdf,
    supports_nu,
)


class TestFisherPValue:
    """Tests for fet_pvalue."""

    def test_extreme_table_total_two(self):
        assert fet_pvalue(CountPair(0, 2, 5, 5)) == pytest.approx(0.4444, abs=5e-5)
        assert fet_pvalue(CountPair(0, 2, 5, 5)) == pytest.approx(4 / 9, rel=1e-12)

    def test_modal_outcome_is_one(self):
        assert fet_pvalue(CountPair(1, 1, 5, 5)) == 1.0

    def test_extreme_table_total_four(self):
        assert fet_pvalue(CountPair(0, 4, 5, 5)) == pytest.approx(0.0476, abs=5e-5)
        assert fet_pvalue(CountPair(0, 4, 5, 5)) == pytest.approx(1 / 21, rel=1e-12)

    @pytest.mark.parametrize("n1,n2", [(5, 5), (0, 7), (4, 9)])
    def test_degenerate_margins_return_one(self, n1, n2):
        assert fet_pvalue(CountPair(0, 0, n1, n2)) == 1.0
        assert fet_pvalue(CountPair(n1, n2, n1, n2)) == 1.0

    def test_invalid_counts_rejected(self):
        with pytest.raises(InputError):
            CountPair(6, 0, 5, 5)
        with pytest.raises(InputError):
            CountPair(-1, 0, 5, 5)
        with pytest.raises(InputError):
            CountPair(1.5, 0, 5, 5)

    def test_requires_count_pair(self):
        with pytest.raises(InputError):
            fet_pvalue((0, 2, 5, 5))

    def test_symmetric_under_group_swap(self):
        for n1, n2 in [(5, 7), (8, 3), (12, 12)]:
            for x1 in range(n1 + 1):
                for x2 in range(n2 + 1):
                    a = fet_pvalue(CountPair(x1, x2, n1, n2))
                    b = fet_pvalue(CountPair(x2, x1, n2, n1))
                    assert a == pytest.approx(b, rel=1e-12)

    def test_pvalue_is_support_point(self):
        for x1 in range(7):
            for x2 in range(9):
                pair = CountPair(x1, x2, 6, 8)
                support = fet_support(6, 8, pair.c)
                assert fet_pvalue(pair) in support.values

    @pytest.mark.parametrize("table", [
        (3, 12, 20, 20),
        (1, 6, 9, 11),
        (10, 25, 40, 45),
        (2, 30, 50, 60),
    ])
    def test_agrees_with_scipy(self, table):
        x1, x2, n1, n2 = table
        _, expected = fisher_exact([[x1, n1 - x1], [x2, n2 - x2]], alternative="two-sided")
        assert fet_pvalue(CountPair(x1, x2, n1, n2)) == pytest.approx(expected, rel=1e-6)


class TestFisherSupport:
    """Tests for fet_support."""

    def test_example_supports(self, example_supports):
        s1, s2, s3 = example_supports
        assert s1.values == pytest.approx((0.4444, 1.0), abs=5e-5)
        assert s2.values == pytest.approx((0.1667, 1.0), abs=5e-5)
        assert s3.values == pytest.approx((0.0476, 0.5238, 1.0), abs=5e-5)

    def test_single_outcome_class(self):
        assert fet_support(5, 5, 1).values == (1.0,)
        assert not fet_support(5, 5, 1).is_informative

    def test_unequal_groups_total_one_is_informative(self):
        support = fet_support(3, 7, 1)
        assert support.is_informative
        assert support.q == pytest.approx(0.3)

    def test_q_is_first_value(self, example_supports):
        for s in example_supports:
            assert s.q == s.values[0]
        assert supports_nu(example_supports) == example_supports[0].q

    def test_masses_of_tied_outcomes_are_pooled(self):
        support = fet_support(5, 5, 4)
        assert support.masses == pytest.approx((10 / 210, 100 / 210, 100 / 210), rel=1e-12)

    def test_invalid_margin(self):
        with pytest.raises(InputError):
            fet_support(5, 5, 11)
        with pytest.raises(InputError):
            fet_support(-1, 5, 2)

    def test_memoised(self):
        assert fet_support(9, 11, 6) is fet_support(9, 11, 6)

    def test_exact_pmf_for_small_tables(self):
        pmf = hypergeometric_pmf(5, 5, 2)
        assert pmf == [Fraction(2, 9), Fraction(5, 9), Fraction(2, 9)]

    def test_log_space_pmf_for_large_tables(self):
        pmf = hypergeometric_pmf(40, 40, 30)
        assert isinstance(pmf, np.ndarray)
        assert pmf.sum() == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("n1,n2", [(3, 4), (6, 6), (10, 7), (40, 40), (25, 60)])
    def test_cdf_identity_at_support_points(self, n1, n2):
        for c in range(n1 + n2 + 1):
            support = fet_support(n1, n2, c)
            assert sum(support.masses) == pytest.approx(1.0, abs=1e-12)
            assert support.values[-1] == 1.0
            for v in support.values:
                assert support.cdf(v) == pytest.approx(v, abs=1e-9)

    @pytest.mark.slow
    def test_cdf_identity_up_to_thirty(self):
        for n1 in range(1, 31):
            for n2 in range(1, 31):
                for c in range(n1 + n2 + 1):
                    support = fet_support(n1, n2, c)
                    assert abs(sum(support.masses) - 1.0) <= 1e-12
                    for v in support.values:
                        assert abs(support.cdf(v) - v) <= 1e-9

    def test_super_uniform(self):
        grid = np.linspace(0.0, 1.0, 1000)
        for n1, n2, c in [(5, 5, 4), (10, 10, 8), (7, 12, 9), (30, 30, 20)]:
            support = fet_support(n1, n2, c)
            assert np.all(support.cdf(grid) <= grid + 1e-12)


class TestSupportValidation:
    """Tests for PValueSupport construction."""

    def test_rejects_values_not_ending_at_one(self):
        with pytest.raises(InputError):
            PValueSupport(values=(0.3, 0.9), masses=(0.3, 0.7), margin=Margin(c=2))

    def test_rejects_unsorted_values(self):
        with pytest.raises(InputError):
            PValueSupport(values=(0.5, 0.3, 1.0), masses=(0.3, 0.2, 0.5), margin=Margin(c=2))

    def test_rejects_masses_not_summing_to_one(self):
        with pytest.raises(InputError):
            PValueSupport(values=(0.5, 1.0), masses=(0.5, 0.4), margin=Margin(c=2))

    def test_equality_ignores_outcome_map(self):
        built = fet_support(5, 5, 3)
        plain = PValueSupport(values=built.values, masses=built.masses, margin=built.margin)
        assert plain == built


class TestBinomialTest:
    """Tests for bt_pvalue and bt_support."""

    def test_support_total_two(self):
        assert bt_support(2).values == (0.5, 1.0)
        assert bt_support(2).kind is ExactTest.BINOMIAL

    def test_modal_outcome(self):
        assert bt_pvalue(1, 2) == 1.0

    def test_total_one_is_uninformative(self):
        assert bt_support(1).values == (1.0,)

    def test_extreme_outcome(self):
        assert bt_pvalue(0, 10) == pytest.approx(2 / 1024, rel=1e-12)
        assert bt_pvalue(10, 10) == bt_pvalue(0, 10)

    def test_large_total_uses_floats(self):
        support = bt_support(100)
        assert sum(support.masses) == pytest.approx(1.0, abs=1e-12)
        for v in support.values:
            assert support.cdf(v) == pytest.approx(v, abs=1e-9)

    def test_invalid_inputs(self):
        with pytest.raises(InputError):
            bt_support(0)
        with pytest.raises(InputError):
            bt_pvalue(3, 2)


class TestNullCdf:
    """Tests for null_cdf."""

    def test_at_smallest_value(self, example_supports):
        s3 = example_supports[2]
        assert null_cdf(s3, s3.values[0]) == pytest.approx(s3.values[0], abs=1e-12)

    def test_total_mass(self, example_supports):
        for s in example_supports:
            assert null_cdf(s, 1.0) == pytest.approx(1.0, abs=1e-12)

    def test_below_support(self, example_supports):
        assert null_cdf(example_supports[2], 0.03) == 0.0

    def test_right_continuous_step(self, example_supports):
        s3 = example_supports[2]
        assert null_cdf(s3, 0.5) == pytest.approx(s3.values[0])
        assert null_cdf(s3, s3.values[1]) == pytest.approx(s3.values[1])

    def test_out_of_range(self, example_supports):
        with pytest.raises(InputError):
            null_cdf(example_supports[0], 1.5)


class TestAltCdf:
    """Tests for alt_cdf and the noncentral law."""

    def test_central_case_matches_null(self, example_supports):
        for s in example_supports:
            for t in list(s.values) + [0.0, 0.3, 0.77]:
                assert alt_cdf(s, 1.0, t) == null_cdf(s, t)

    def test_large_odds_ratio_concentrates_on_extreme_table(self, example_supports):
        s3 = example_supports[2]
        assert alt_cdf(s3, 1e6, s3.values[0]) == pytest.approx(1.0, abs=1e-4)

    def test_matches_direct_enumeration(self, example_supports):
        # weights C(5,y) C(5,2-y) 2^y = 10, 50, 40; outcomes 0 and 2 have p <= 0.5
        assert alt_cdf(example_supports[0], 2.0, 0.5) == pytest.approx(0.5, rel=1e-9)

    def test_noncentral_pmf_sums_to_one(self):
        pmf = fisher_noncentral_pmf(Margin(c=9, n1=10, n2=12), 3.5)
        assert pmf.sum() == pytest.approx(1.0, abs=1e-12)
        assert pmf.argmax() > fisher_noncentral_pmf(Margin(c=9, n1=10, n2=12), 1.0).argmax()

    def test_binomial_alternative(self):
        support = bt_support(4)
        # rate ratio 3 gives success probability 0.75; p <= 0.125 for outcomes 0 and 4
        expected = 0.25 ** 4 + 0.75 ** 4
        assert alt_cdf(support, 3.0, 0.125) == pytest.approx(expected, rel=1e-9)

    def test_rejects_non_positive_ratio(self, example_supports):
        with pytest.raises(InputError):
            alt_cdf(example_supports[0], 0.0, 0.5)


class TestClassifyOutcomes:
    """Tests for the two-sided classification rule."""

    def test_float_ties_within_tolerance(self):
        pmf = np.array([0.25, 0.5, 0.25 * (1 + 1e-14)])
        values, masses, outcome_pvalues = classify_outcomes(pmf)
        assert values == pytest.approx([0.5, 1.0])
        assert outcome_pvalues[0] == outcome_pvalues[2]

    def test_underflowing_classes_merge_into_next(self):
        log_pmf = np.array([-760.0, -700.0, 0.0, -700.0, -760.0])
        values, masses, outcome_pvalues = classify_outcomes(log_pmf, log=True)
        assert len(values) == 2
        assert values[0] > 0.0
        assert values[-1] == 1.0
        assert outcome_pvalues[0] == outcome_pvalues[1] == outcome_pvalues[3] == values[0]
        assert outcome_pvalues[2] == 1.0
        assert sum(masses) == pytest.approx(1.0, abs=1e-12)


class TestLargeTables:
    """Supports of tables whose far tails underflow as plain floats."""

    def test_log_pmf_matches_exact(self):
        exact = np.array([float(v) for v in hypergeometric_pmf(7, 9, 6)])
        assert np.exp(hypergeometric_logpmf(7, 9, 6)) == pytest.approx(exact, rel=1e-12)

    def test_noncentral_with_unit_ratio_is_hypergeometric(self):
        exact = np.array([float(v) for v in hypergeometric_pmf(10, 12, 9)])
        pmf = fisher_noncentral_pmf(Margin(c=9, n1=10, n2=12), 1.0)
        assert pmf == pytest.approx(exact, rel=1e-9)

    def test_extreme_balanced_margin(self):
        support = fet_support(600, 600, 600)
        assert 0.0 < support.q < 1e-300
        assert support.values[-1] == 1.0
        assert np.all(np.diff(support.values) > 0)
        assert sum(support.masses) == pytest.approx(1.0, abs=1e-12)

    def test_extreme_tables_share_smallest_value(self):
        low = fet_pvalue(CountPair(0, 600, 600, 600))
        assert low > 0.0
        assert low == fet_pvalue(CountPair(600, 0, 600, 600))
        assert low == fet_support(600, 600, 600).q

    @pytest.mark.parametrize("x1", [250, 280, 295])
    def test_mirrored_tables_tie_exactly(self, x1):
        left = fet_pvalue(CountPair(x1, 600 - x1, 600, 600))
        assert left == fet_pvalue(CountPair(600 - x1, x1, 600, 600))

    def test_matches_hypergeometric_tails(self):
        expected = hypergeom.cdf(280, 1200, 600, 600) + hypergeom.sf(319, 1200, 600, 600)
        assert fet_pvalue(CountPair(280, 320, 600, 600)) == pytest.approx(expected, rel=1e-6)

    def test_read_count_scale_table(self):
        n = 10 ** 7
        p = fet_pvalue(CountPair(700, 800, n, n))
        expected = hypergeom.cdf(700, 2 * n, n, 1500) + hypergeom.sf(799, 2 * n, n, 1500)
        assert p == pytest.approx(expected, rel=1e-6)
        assert 0.0 < p < 0.05

    def test_large_binomial_total(self):
        support = bt_support(3000)
        assert support.q > 0.0
        assert bt_pvalue(0, 3000) == bt_pvalue(3000, 3000) == support.q
        assert bt_pvalue(1400, 3000) == bt_pvalue(1600, 3000)
        expected = 2 * binom.cdf(1400, 3000, 0.5)
        assert bt_pvalue(1400, 3000) == pytest.approx(expected, rel=1e-6)
