import math

import pytest
from hypothesis import given, strategies as st

from qslfield.bounds import bb_point, classify_region, critical_field


class TestBBPoint:
    def test_uniform_down_at_unit_field(self):
        pt = bb_point(0.0, 1.0, spin="down")
        assert pt.lhs_energy_per_bit == pytest.approx((1.0 + math.sqrt(3.0)) / 2.0, rel=1e-5)
        assert pt.rhs == pytest.approx(
            (math.sqrt(3.0) - 1.0) * math.log(2.0) / math.pi**2, rel=1e-5
        )
        assert pt.rhs == pytest.approx(0.051411, rel=1e-4)
        assert pt.bound_holds
        assert pt.region == "II"

    @pytest.mark.parametrize("n,b0,spin", [(0.0, 1e-4, "up"), (0.0, 1e3, "down"),
                                           (2.0, 1e-2, "up"), (2.0, 1e2, "down")])
    def test_bound_always_holds(self, n, b0, spin):
        pt = bb_point(n, b0, spin=spin)
        assert pt.bound_holds
        assert 0.0 < pt.rhs < math.inf

    def test_rhs_spin_independent_for_weak_uniform_field(self):
        up = bb_point(0.0, 1e-4, spin="up")
        down = bb_point(0.0, 1e-4, spin="down")
        assert abs(up.rhs - down.rhs) / up.rhs < 1e-3
        assert up.region == "I"

    def test_rest_energy_switch(self):
        with_rest = bb_point(0.0, 1.0, spin="down")
        without = bb_point(0.0, 1.0, spin="down", include_rest_energy=False)
        assert with_rest.lhs_energy_per_bit - without.lhs_energy_per_bit == pytest.approx(
            1.0, rel=1e-12
        )
        assert with_rest.rhs == without.rhs

    def test_quadratic_field_spin_pattern(self):
        # the gap (hence rhs) is larger for spin-up when non-relativistic and
        # larger for spin-down when relativistic
        weak_up = bb_point(2.0, 1e-5, spin="up")
        weak_down = bb_point(2.0, 1e-5, spin="down")
        assert weak_up.region == "I"
        assert weak_down.rhs < weak_up.rhs
        strong_up = bb_point(2.0, 1e3, spin="up")
        strong_down = bb_point(2.0, 1e3, spin="down")
        assert strong_up.region == "III"
        assert strong_down.rhs > strong_up.rhs


class TestClassifyRegion:
    def test_examples(self):
        assert classify_region(2.0) == "II"
        assert classify_region(4.5e-13) == "I"
        assert classify_region(1e3) == "III"

    def test_boundaries(self):
        assert classify_region(0.1) == "II"
        assert classify_region(10.0) == "II"

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            classify_region(-0.1)

    @given(st.floats(min_value=0.0, max_value=1e6))
    def test_total_partition(self, alpha1):
        assert classify_region(alpha1) in {"I", "II", "III"}


class TestCriticalField:
    def test_uniform_field_never_crosses(self):
        res = critical_field(0.0)
        assert not res.found
        assert res.b0_critical is None

    def test_bracket_excluding_root_reports_miss(self):
        res = critical_field(2.0, bracket=(1e-6, 1e-2))
        assert not res.found
        assert res.bracket == (1e-6, 1e-2)

    def test_invalid_bracket(self):
        with pytest.raises(ValueError):
            critical_field(2.0, bracket=(1.0, 0.1))
