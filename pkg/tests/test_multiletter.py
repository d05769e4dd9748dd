import math

import numpy as np
import pytest

from conftest import bsc_joint
from ratepriv import (
    InstanceTooLargeError,
    JointDistribution,
    Kernel,
    Pmf,
    ValidationError,
    build_bins,
    conditional_min_entropy,
    ml_decode,
    ml_decode_all,
    multiletter_evaluate,
    product_distribution,
)


class TestProductDistribution:
    def test_n1_is_row(self):
        k = Kernel([[0.9, 0.1], [0.1, 0.9]])
        p = product_distribution(k, 0, 1)
        assert np.allclose(p.mass, [0.9, 0.1])

    def test_bsc_n2(self):
        k = Kernel([[0.9, 0.1], [0.1, 0.9]])
        p = product_distribution(k, 0, 2)
        assert np.allclose(p.mass, [0.81, 0.09, 0.09, 0.01], atol=1e-15)

    def test_max_entry_matches_min_entropy_bound(self):
        k = Kernel([[0.9, 0.1], [0.1, 0.9]])
        h = conditional_min_entropy(k)
        for n in (5, 10):
            p = product_distribution(k, 0, n)
            assert p.mass.max() <= 2.0 ** (-n * h) + 1e-15
            assert p.mass.max() == pytest.approx(0.9**n, abs=1e-15)

    def test_memory_guard(self):
        k = Kernel([[0.25] * 4] * 2)
        with pytest.raises(InstanceTooLargeError):
            product_distribution(k, 0, 15)  # 4^15 = 2^30 > 2^24


class TestBuildBins:
    def test_r_zero_single_bin(self):
        p = Pmf([0.25, 0.25, 0.5])
        bins = build_bins(p, 0, 0)
        assert len(bins) == 1
        assert sorted(np.concatenate(bins).tolist()) == [0, 1, 2]

    def test_uniform_one_point_per_bin(self):
        r = 3
        p = Pmf(np.full(2**r, 2.0**-r))
        bins = build_bins(p, r, 40)
        assert len(bins) == 2**r
        assert all(b.size == 1 for b in bins)
        tv = sum(abs(2.0**-r - p.mass[b].sum()) for b in bins)
        assert tv == pytest.approx(0.0, abs=1e-12)

    def test_bsc_brackets_hold(self):
        # n=10, r=1, s=2 on BSC(0.1): single closed bin within [0.25, 0.5)
        k = Kernel([[0.9, 0.1], [0.1, 0.9]])
        p = product_distribution(k, 0, 10)
        bins = build_bins(p, 1, 2)
        assert len(bins) == 2
        closed_mass = p.mass[bins[0]].sum()
        assert 0.25 - 1e-12 <= closed_mass < 0.5
        leftover = p.mass[bins[1]].sum()
        assert leftover <= 2.0 ** (1 - 2) + 2.0**-1 - 2.0**-2 + 1e-12

    def test_descending_order_with_lexicographic_ties(self):
        p = Pmf([0.25, 0.25, 0.25, 0.25])
        bins = build_bins(p, 2, 30)
        # equal masses: stable order keeps lexicographic sequence order
        assert [b[0] for b in bins] == [0, 1, 2, 3]

    def test_exhaustion_raises(self):
        # s chosen so large bins never reach 2^-r - 2^-s with so few points
        p = Pmf([0.5, 0.5])
        with pytest.raises(RuntimeError):
            build_bins(p, 2, 50)

    def test_invalid_rs(self):
        with pytest.raises(ValidationError):
            build_bins(Pmf([1.0]), 2, 1)


class TestMlDecode:
    def test_all_zeros_decodes_zero(self):
        k = Kernel([[0.9, 0.1], [0.1, 0.9]])
        assert ml_decode(k, Pmf([0.5, 0.5]), [0] * 7) == 0

    def test_tie_breaks_to_smaller_index(self):
        k = Kernel([[0.5, 0.5], [0.5, 0.5]])
        assert ml_decode(k, Pmf([0.5, 0.5]), [0, 1]) == 0

    def test_exact_error_decreasing_in_n(self):
        j = bsc_joint(0.1)
        k = j.conditional_y_given_x()
        errs = [ml_decode_all(k, Pmf(j.p_x), n)[1] for n in (6, 8, 10, 12)]
        assert all(a > b for a, b in zip(errs, errs[1:]))

    def test_error_matches_binomial_closed_form(self):
        j = bsc_joint(0.1)
        k = j.conditional_y_given_x()
        eps = 0.1
        for n in (8, 10):
            _, perr = ml_decode_all(k, Pmf(j.p_x), n)
            p0 = sum(math.comb(n, i) * eps**i * (1 - eps) ** (n - i) for i in range(n // 2 + 1, n + 1))
            p1 = sum(math.comb(n, i) * (1 - eps) ** i * eps ** (n - i) for i in range(0, n // 2 + 1))
            assert perr == pytest.approx(0.5 * p0 + 0.5 * p1, abs=1e-12)

    def test_duplicate_rows_warned(self, caplog):
        import logging

        k = Kernel([[0.5, 0.5], [0.5, 0.5]])
        with caplog.at_level(logging.WARNING):
            ml_decode_all(k, Pmf([0.5, 0.5]), 3)
        assert any("coincide" in r.message for r in caplog.records)


class TestMultiletterEvaluate:
    def test_noiseless_degenerate(self):
        j = JointDistribution([[0.5, 0.0], [0.0, 0.5]])
        rep = multiletter_evaluate(j, 6, 0.01)
        assert rep.degenerate
        assert rep.r == 0 and rep.rate == 0.0
        assert rep.leakage == 0.0

    def test_bsc03_nondegenerate_bounds(self):
        j = bsc_joint(0.3)
        h = conditional_min_entropy(j.conditional_y_given_x())
        rep = multiletter_evaluate(j, 12, h / 2)
        assert rep.r == 3 and rep.s == 4
        assert not rep.degenerate
        lower, upper = 2.0**-rep.r - 2.0**-rep.s, 2.0**-rep.r
        leftover_bound = 2.0 ** (rep.r - rep.s) + 2.0**-rep.r - 2.0**-rep.s
        for bm in rep.bin_masses:
            closed = bm[:-1]
            assert np.all(closed >= lower - 1e-12)
            assert np.all(closed < upper)
            assert bm[-1] <= leftover_bound + 1e-12
        assert np.all(rep.per_symbol_tv < rep.analytic_bound)
        assert rep.pairwise_tv_max <= 2 * rep.per_symbol_tv.max() + 1e-12
        # frozen golden from the exact construction
        assert rep.per_symbol_tv[0] == pytest.approx(0.8564904338060002, abs=1e-12)
        assert rep.decoder_error_prob == pytest.approx(0.07822479096, abs=1e-12)

    def test_bsc01_criterion_parameters_degenerate(self):
        j = bsc_joint(0.1)
        h = conditional_min_entropy(j.conditional_y_given_x())
        leaks = []
        for n in (8, 10, 12):
            rep = multiletter_evaluate(j, n, h / 2)
            assert rep.r == int(math.floor(n * (h - h / 2)))
            assert rep.rate == rep.r / n
            assert np.all(rep.per_symbol_tv < rep.analytic_bound)
            leaks.append(rep.leakage)
        assert all(a >= b for a, b in zip(leaks, leaks[1:]))

    def test_jensen_cross_check(self):
        # exact joint TV never exceeds the pairwise expectation (Jensen step)
        for crossover in (0.2, 0.3):
            j = bsc_joint(crossover, p=0.35)
            h = conditional_min_entropy(j.conditional_y_given_x())
            rep = multiletter_evaluate(j, 10, h / 2)
            m = j.n_x
            # reconstruct pushforwards from report fields
            pz_x = np.array([rep.bin_masses[x] for x in range(m)])
            bound = 0.0
            for a in range(m):
                for b in range(m):
                    bound += j.p_x[a] * j.p_x[b] * np.abs(pz_x[a] - pz_x[b]).sum()
            # bin-mass distributions differ from true pushforwards by at most
            # twice the decoder error; fold that in
            assert rep.joint_tv <= bound + 4 * rep.decoder_error_prob + 1e-12

    def test_ideal_vs_realized_gap_bounded_by_decoder_error(self):
        j = bsc_joint(0.3, p=0.4)
        h = conditional_min_entropy(j.conditional_y_given_x())
        rep = multiletter_evaluate(j, 10, h / 2)
        for x in range(j.n_x):
            ideal = rep.bin_masses[x]
            # realized TV to uniform within 2*decoder error of the ideal TV
            assert abs(rep.realized_tv[x] - rep.per_symbol_tv[x]) <= 2 * rep.decoder_error_prob + 1e-12

    def test_delta_range_enforced(self):
        j = bsc_joint(0.1)
        h = conditional_min_entropy(j.conditional_y_given_x())
        with pytest.raises(ValidationError):
            multiletter_evaluate(j, 8, h)  # delta > 2H/3
        with pytest.raises(ValidationError):
            multiletter_evaluate(j, 8, 0.0)

    def test_leakage_vanishes_with_n_nondegenerate(self):
        j = bsc_joint(0.3)
        h = conditional_min_entropy(j.conditional_y_given_x())
        leaks = [multiletter_evaluate(j, n, h / 2).leakage for n in (8, 10, 12)]
        assert all(l >= 0 for l in leaks)
        assert leaks[-1] <= leaks[0] + 1e-12
