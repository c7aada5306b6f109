import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import minimize_scalar

from secrecy_region.model import (ChannelParams, DomainError, NoSecrecyError, Strategy,
                                  raw_rates, secrecy_rates, symmetric_rate,
                                  symmetric_rate_gradient)
from secrecy_region.optima import (compare_operating_modes, critical_power, lambda_max,
                                   maxmin_point, min_maxmin_power, p_of_lambda,
                                   single_user_point)

# Frozen from a dense 1-D search over the helper power with (p1, lam1, lam2) = (100, 0, 1)
# at a=1, a_c=0.05, N=1 (see test_single_user_matches_1d_search).
SU_FIG2 = 5.543679804374612
SU_HELPER_FIG2 = 8.852981086654285


@st.composite
def channels(draw):
    a = draw(st.floats(0.2, 5.0))
    return ChannelParams(a, a * draw(st.floats(0.02, 0.9)), draw(st.floats(0.1, 5.0)))


def one_d_single_user(ch, P):
    """Best user-1 rate over the helper power alone, by bounded scalar search
    refined from a dense scan."""
    def f(p2):
        return -float(raw_rates(ch.a, ch.a_c, ch.N, P, p2, 0.0, 1.0)[0])
    grid = np.linspace(0.0, P, 20001)
    k = int(np.argmax(raw_rates(ch.a, ch.a_c, ch.N, P, grid, 0.0, 1.0)[0]))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    res = minimize_scalar(f, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    return -res.fun, res.x


class TestMaxMin:
    def test_min_power(self, fig2):
        assert min_maxmin_power(fig2) == pytest.approx(18.1, abs=0.05)
        assert min_maxmin_power(fig2) == pytest.approx(0.95 / 0.0525, rel=1e-14)

    def test_rate(self, fig2):
        sol = maxmin_point(fig2, 100.0)
        assert sol.r_min_star == pytest.approx(math.log2(1.1025 / 0.2), rel=1e-14)
        assert sol.r_min_star == pytest.approx(2.4627, abs=5e-5)
        assert not sol.power_limited
        assert sol.chosen_lambda == 0.0
        assert sol.p_star == pytest.approx(sol.p_min_star, rel=1e-14)

    def test_power_limited(self, fig2):
        sol = maxmin_point(fig2, 10.0)
        assert sol.power_limited and sol.chosen_lambda == 0.0 and sol.p_star == 10.0
        assert sol.r_min_star == symmetric_rate(fig2, 10.0, 0.0)

    def test_lambda_interval(self, fig2):
        assert lambda_max(fig2, 100.0) == pytest.approx(0.05 - 0.95 / 105, rel=1e-12)
        assert maxmin_point(fig2, 100.0).lambda_star_interval[1] == pytest.approx(0.04095, abs=5e-6)

    def test_lambda_choice(self, fig2):
        sol = maxmin_point(fig2, 100.0, 0.03)
        assert sol.chosen_lambda == 0.03
        assert sol.p_star == pytest.approx(p_of_lambda(fig2, 0.03))
        r = secrecy_rates(fig2, sol.strategy)
        assert r.r1_raw == pytest.approx(sol.r_min_star, abs=1e-12)

    def test_lambda_choice_outside_interval(self, fig2):
        with pytest.raises(DomainError):
            maxmin_point(fig2, 100.0, 0.045)
        with pytest.raises(DomainError):
            maxmin_point(fig2, 10.0, 0.01)

    def test_no_secrecy_rejected(self):
        with pytest.raises(NoSecrecyError, match="direct gain must exceed cross gain"):
            maxmin_point(ChannelParams(0.5, 0.6, 1.0), 10.0)

    @given(channels(), st.floats(1.0, 50.0), st.floats(1.0, 50.0))
    def test_rate_independent_of_power(self, ch, k1, k2):
        p_min = min_maxmin_power(ch)
        r1 = maxmin_point(ch, k1 * p_min).r_min_star
        r2 = maxmin_point(ch, k2 * p_min).r_min_star
        assert r1 == r2

    @given(channels(), st.floats(0.01, 0.99))
    def test_power_limited_rate_below_cap(self, ch, frac):
        sol = maxmin_point(ch, frac * min_maxmin_power(ch))
        assert sol.power_limited
        assert sol.r_min_star < maxmin_point(ch, min_maxmin_power(ch)).r_min_star

    def test_second_order_decrease(self, fig2):
        sol = maxmin_point(fig2, 100.0, 0.02)
        p, lam = sol.p_star, sol.chosen_lambda
        for dp, dl in [(1e-2 * p, 0), (-1e-2 * p, 0), (0, 1e-3), (0, -1e-3)]:
            assert symmetric_rate(fig2, p + dp, lam + dl) < sol.r_min_star


class TestLambdaFamily:
    def test_lambda_zero(self, fig2):
        assert p_of_lambda(fig2, 0.0) == pytest.approx(18.0952, abs=5e-5)

    def test_singularity(self, fig2):
        with pytest.raises(DomainError):
            p_of_lambda(fig2, 0.05)

    @given(channels(), st.floats(0.0, 0.999))
    def test_family_is_stationary_and_optimal(self, ch, frac):
        lam = frac * ch.a_c / ch.a
        p = p_of_lambda(ch, lam)
        if p > 1e8:
            return
        expect = math.log2((ch.a + ch.a_c) ** 2 / (4 * ch.a * ch.a_c))
        assert symmetric_rate(ch, p, lam) == pytest.approx(expect, abs=1e-9)
        d_p, d_l = symmetric_rate_gradient(ch, p, lam)
        # gradient entries scale like 1/p and p respectively
        assert abs(d_p) * p < 1e-8 and abs(d_l) / p < 1e-8


class TestSingleUser:
    def test_values(self, fig2):
        sol = single_user_point(fig2, 100.0, 1)
        assert sol.delta == pytest.approx(math.sqrt(106), rel=1e-14)
        assert sol.strategy.p2 == pytest.approx(SU_HELPER_FIG2, rel=1e-12)
        assert sol.r_su_star == pytest.approx(SU_FIG2, rel=1e-12)
        assert sol.strategy == Strategy(100.0, sol.strategy.p2, 0.0, 1.0)

    def test_single_user_matches_1d_search(self, fig2):
        best, arg = one_d_single_user(fig2, 100.0)
        assert best == pytest.approx(SU_FIG2, abs=1e-10)
        assert arg == pytest.approx(SU_HELPER_FIG2, abs=1e-4)

    def test_helper_gets_nothing(self, fig2):
        sol = single_user_point(fig2, 100.0, 1)
        r = secrecy_rates(fig2, sol.strategy)
        assert r.r1_raw == pytest.approx(sol.r_su_star, rel=1e-13)
        assert r.r2_raw == pytest.approx(0.0, abs=1e-14)

    def test_mirror(self, fig2):
        s1, s2 = single_user_point(fig2, 100.0, 1), single_user_point(fig2, 100.0, 2)
        assert s1.r_su_star == s2.r_su_star
        assert s2.strategy == s1.strategy.swapped()
        r = secrecy_rates(fig2, s2.strategy)
        assert r.r2_raw == pytest.approx(s2.r_su_star, rel=1e-13)

    @settings(deadline=None, max_examples=60)
    @given(channels(), st.floats(0.01, 500.0))
    def test_closed_form_vs_1d_search(self, ch, P):
        sol = single_user_point(ch, P)
        best, _ = one_d_single_user(ch, P)
        assert sol.r_su_star == pytest.approx(best, abs=1e-9)
        assert sol.strategy.p2 < P / 2

    @given(channels())
    def test_monotone_in_power(self, ch):
        vals = [single_user_point(ch, P).r_su_star for P in np.geomspace(1e-3, 1e4, 60)]
        assert np.all(np.diff(vals) > 0)

    def test_no_secrecy_rejected(self):
        with pytest.raises(NoSecrecyError):
            single_user_point(ChannelParams(1.0, 1.0, 1.0), 5.0)


class TestCriticalPower:
    def test_value(self, fig2):
        assert critical_power(fig2) == pytest.approx(53.2, abs=0.05)
        assert critical_power(fig2) == pytest.approx(0.95 * 1.3025 / 0.1525 ** 2, rel=1e-14)

    @given(channels())
    def test_identity(self, ch):
        P_c = critical_power(ch)
        diff = single_user_point(ch, P_c).r_su_star - 2 * maxmin_point(ch, P_c).r_min_star
        assert abs(diff) <= 1e-9 * max(1.0, maxmin_point(ch, P_c).r_min_star)

    def test_vanishes_as_gains_meet(self):
        vals = [critical_power(ChannelParams(1.0, 1.0 - eps, 1.0)) for eps in (1e-2, 1e-4, 1e-6)]
        assert vals[0] > vals[1] > vals[2] and vals[2] < 1e-5

    @pytest.mark.parametrize("P,mode", [(30.0, "maxmin"), (100.0, "timeshare")])
    def test_modes(self, fig2, P, mode):
        assert compare_operating_modes(fig2, P).mode == mode

    def test_tie(self, fig2):
        cmp = compare_operating_modes(fig2, critical_power(fig2))
        assert cmp.mode == "tie" and abs(cmp.r_maxmin - cmp.r_timeshare) <= 1e-9
