"""
Tests for procedures module
===========================
"""

import numpy as np
import pytest

from core.errors import ConfigurationError, InputError
from core.estimator import beta_trials, build_grid, pi0_hat_H, storey_pi0_s
from core.exact_tests import fet_support
from core.procedures import (
    ProcedureTag,
    adaptive_bh,
    adaptive_bhh,
    apply_procedure,
    bh,
    bhh,
    cdf_sums,
    leave_one_out_betas,
    leave_one_out_estimates,
)


def random_tests(rng: np.random.Generator, m: int):
    supports = []
    while len(supports) < m:
        n1, n2 = int(rng.integers(4, 20)), int(rng.integers(4, 20))
        s = fet_support(n1, n2, int(rng.integers(2, n1 + n2 - 1)))
        if s.is_informative:
            supports.append(s)
    p = np.array([rng.choice(s.values) for s in supports])
    return supports, p


class TestBH:
    """Tests for bh and adaptive_bh."""

    def test_two_rejections(self):
        report = bh([0.01, 0.02, 0.5], 0.05)
        assert report.k_hat == 2
        assert report.rejected.tolist() == [0, 1]
        assert report.adjusted == pytest.approx([0.03, 0.03, 0.5])

    def test_single_test(self):
        assert bh([0.03], 0.05).k_hat == 1
        assert bh([0.06], 0.05).k_hat == 0

    def test_nothing_rejected(self):
        report = bh([1.0, 1.0, 1.0], 0.05)
        assert report.k_hat == 0
        assert report.rejected.size == 0
        assert report.adjusted.tolist() == [1.0, 1.0, 1.0]
        assert not report.rejected_mask.any()

    def test_ties_share_adjusted_value(self):
        report = bh([0.5, 0.01, 0.01], 0.05)
        assert report.k_hat == 2
        assert report.rejected.tolist() == [1, 2]
        assert report.adjusted[1] == report.adjusted[2]
        assert report.order.tolist() == [1, 2, 0]

    def test_adaptive_plug_in(self):
        p = [0.03, 0.04, 0.9]
        assert bh(p, 0.05).k_hat == 0
        report = adaptive_bh(p, 0.5, 0.05)
        assert report.k_hat == 2
        assert report.pi0_hat == 0.5

    def test_adaptive_with_pi0_one_is_bh(self):
        rng = np.random.default_rng(1)
        p = rng.random(50) ** 3
        plain = bh(p, 0.1)
        adaptive = adaptive_bh(p, 1.0, 0.1)
        assert adaptive.k_hat == plain.k_hat
        assert np.array_equal(adaptive.adjusted, plain.adjusted)

    def test_rejections_nested_in_alpha(self):
        rng = np.random.default_rng(2)
        p = rng.random(40) ** 2
        previous = set()
        for alpha in (0.01, 0.05, 0.1, 0.2, 0.5):
            current = set(bh(p, alpha).rejected.tolist())
            assert previous <= current
            previous = current

    def test_rejected_are_smallest(self):
        rng = np.random.default_rng(4)
        p = rng.random(30) ** 2
        report = bh(p, 0.2)
        if 0 < report.k_hat < p.size:
            assert p[report.rejected].max() <= np.delete(p, report.rejected).min()

    @pytest.mark.parametrize("alpha", [0.0, 1.0, -0.1])
    def test_alpha_range(self, alpha):
        with pytest.raises(InputError):
            bh([0.1, 0.2], alpha)

    def test_pi0_range(self):
        with pytest.raises(InputError):
            adaptive_bh([0.1, 0.2], 0.0, 0.05)
        with pytest.raises(InputError):
            adaptive_bh([0.1, 0.2], 1.5, 0.05)


class TestBHH:
    """Tests for bhh and adaptive_bhh."""

    def test_rejects_where_bh_does_not(self, two_point_support):
        supports = [two_point_support(0.02), two_point_support(0.5), two_point_support(0.5)]
        p = [0.02, 1.0, 1.0]
        assert bh(p, 0.05).k_hat == 0
        report = bhh(p, supports, 0.05)
        assert report.k_hat == 1
        assert report.adjusted[0] == pytest.approx(0.02)

    def test_cdf_sums(self, two_point_support):
        supports = [two_point_support(0.02), two_point_support(0.5)]
        sums = cdf_sums(supports, np.array([0.01, 0.02, 0.5, 1.0]))
        assert sums == pytest.approx([0.0, 0.02, 0.52, 2.0])

    def test_contains_bh_rejections(self):
        rng = np.random.default_rng(8)
        for _ in range(30):
            supports, p = random_tests(rng, 25)
            plain = set(bh(p, 0.1).rejected.tolist())
            heyse = set(bhh(p, supports, 0.1).rejected.tolist())
            assert plain <= heyse

    def test_adaptive_with_pi0_one_is_bhh(self):
        rng = np.random.default_rng(9)
        supports, p = random_tests(rng, 20)
        assert np.array_equal(
            adaptive_bhh(p, supports, 1.0, 0.1).adjusted,
            bhh(p, supports, 0.1).adjusted,
        )

    def test_support_count_mismatch(self, two_point_support):
        with pytest.raises(InputError):
            bhh([0.5, 1.0], [two_point_support(0.5)], 0.05)


class TestLeaveOneOut:
    """Tests for leave-one-out estimates."""

    def test_rows_match_zeroed_pvalue(self):
        rng = np.random.default_rng(12)
        supports, p = random_tests(rng, 8)
        nu = max(s.q for s in supports)
        grid = build_grid(supports, [nu, (nu + 1.0) / 2])
        rows = leave_one_out_betas(p, grid)
        for k in range(p.size):
            zeroed = p.copy()
            zeroed[k] = 0.0
            assert rows[k] == pytest.approx(beta_trials(zeroed, grid), rel=1e-12)

    def test_never_above_full_estimate(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            supports, p = random_tests(rng, 10)
            grid = build_grid(supports)
            full = pi0_hat_H(p, grid).pi0_hat
            assert np.all(leave_one_out_estimates(p, grid) <= full + 1e-12)


class TestProcedureTag:
    """Tests for ProcedureTag parsing."""

    @pytest.mark.parametrize("text,tag", [
        ("bh", ProcedureTag.BH),
        ("abh_H", ProcedureTag.ABH_H),
        ("abh", ProcedureTag.ABH_H),
        ("ABH", ProcedureTag.ABH_H),
        ("abh_storey", ProcedureTag.ABH_STOREY),
        ("bhh", ProcedureTag.BHH),
        ("abhh", ProcedureTag.ABHH_H),
        (" abhh_h ", ProcedureTag.ABHH_H),
    ])
    def test_parse(self, text, tag):
        assert ProcedureTag.parse(text) is tag

    def test_unknown(self):
        with pytest.raises(ConfigurationError) as excinfo:
            ProcedureTag.parse("holm")
        assert "abh_H" in str(excinfo.value)

    def test_flags(self):
        assert ProcedureTag.ABHH_H.is_adaptive and ProcedureTag.ABHH_H.uses_supports
        assert not ProcedureTag.BH.is_adaptive
        assert not ProcedureTag.ABH_STOREY.uses_supports


class TestApplyProcedure:
    """Tests for apply_procedure."""

    def test_abh_estimates_pi0_from_supports(self):
        rng = np.random.default_rng(21)
        supports, p = random_tests(rng, 15)
        report = apply_procedure("abh", p, 0.05, supports=supports)
        assert report.pi0_hat == pytest.approx(pi0_hat_H(p, build_grid(supports)).pi0_hat)
        assert report.procedure == "abh_H"

    def test_pi0_override_of_one_matches_bh(self):
        rng = np.random.default_rng(22)
        supports, p = random_tests(rng, 15)
        adaptive = apply_procedure("abh_H", p, 0.1, supports=supports, pi0_override=1.0)
        plain = apply_procedure("bh", p, 0.1)
        assert adaptive.k_hat == plain.k_hat
        assert np.array_equal(adaptive.adjusted, plain.adjusted)

    def test_storey_plug_in(self):
        p = [0.01, 0.02, 0.6, 0.9]
        report = apply_procedure("abh_storey", p, 0.05, storey_tau=0.5)
        assert report.pi0_hat == pytest.approx(storey_pi0_s(p, 0.5))

    def test_bh_ignores_pi0_override(self):
        assert apply_procedure("bh", [0.03, 0.04], 0.05, pi0_override=0.5).pi0_hat == 1.0

    def test_bhh_needs_supports(self):
        with pytest.raises(ConfigurationError):
            apply_procedure("bhh", [0.5], 0.05)

    def test_abh_needs_supports_or_grid(self):
        with pytest.raises(ConfigurationError):
            apply_procedure("abh_H", [0.5], 0.05)


class TestLinearScanOracle:
    """bh against a direct scan of the step-up definition."""

    @staticmethod
    def scan_k_hat(p: np.ndarray, alpha: float) -> int:
        ordered = np.sort(p)
        m = p.size
        passing = [i for i in range(1, m + 1) if ordered[i - 1] <= i * alpha / m]
        return max(passing) if passing else 0

    def test_matches_scan(self):
        rng = np.random.default_rng(31)
        for _ in range(2000):
            m = int(rng.integers(1, 13))
            p = rng.choice(rng.random(5) ** 2, size=m)
            alpha = float(rng.choice([0.01, 0.05, 0.1, 0.25]))
            assert bh(p, alpha).k_hat == self.scan_k_hat(p, alpha)

    @pytest.mark.parametrize("alpha", [0.01, 0.05, 0.1, 0.15, 0.2])
    def test_matches_scan_at_exact_cutoffs(self, alpha):
        for m in range(1, 13):
            for i in range(1, m + 1):
                p = np.array([k * alpha / m for k in range(1, i + 1)] + [1.0] * (m - i))
                assert bh(p, alpha).k_hat == self.scan_k_hat(p, alpha) == i

    def test_all_pvalues_on_the_last_cutoff(self):
        report = bh(np.full(12, 0.2), 0.2)
        assert report.k_hat == self.scan_k_hat(np.full(12, 0.2), 0.2) == 12
        assert report.rejected.tolist() == list(range(12))

    def test_adaptive_matches_scan(self):
        rng = np.random.default_rng(33)
        for _ in range(500):
            m = int(rng.integers(1, 13))
            p = rng.choice(rng.random(5) ** 2, size=m)
            pi0 = float(rng.choice([0.3, 0.5, 0.8]))
            assert adaptive_bh(p, pi0, 0.1).k_hat == self.scan_k_hat(pi0 * p, 0.1)

    @pytest.mark.slow
    def test_matches_scan_large_sweep(self):
        rng = np.random.default_rng(32)
        for _ in range(10_000):
            m = int(rng.integers(1, 13))
            p = rng.choice(rng.random(6), size=m)
            assert bh(p, 0.1).k_hat == self.scan_k_hat(p, 0.1)
