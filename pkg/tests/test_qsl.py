import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qslfield.qsl import (
    DIRAC_CHANNEL_FACTOR,
    qsl_time,
    qsl_velocity,
    radial_displacement,
    saturated_qsl,
    state_sweep,
)
from qslfield.constants import CONSTANTS
from qslfield.eigensolver import wavefunction_moment

from conftest import field_for

UNIFORM_DISP = math.sqrt(math.pi) * (1.0 + 3.0 / (2.0 * math.sqrt(2.0))) / 4.0  # 0.91311


class TestQslTime:
    def test_uniform_down_pair(self):
        tau = qsl_time(1.0, math.sqrt(3.0))
        assert tau == pytest.approx(math.pi / (math.sqrt(3.0) - 1.0), rel=1e-12)
        assert tau == pytest.approx(4.2915, rel=1e-4)

    def test_degenerate_pair_rejected(self):
        with pytest.raises(ValueError):
            qsl_time(2.0, 2.0)

    @given(
        eps0=st.floats(min_value=1.0, max_value=1e6),
        gap_frac=st.floats(min_value=1e-6, max_value=1e3),
    )
    def test_inverse_gap_scaling(self, eps0, gap_frac):
        gap = (eps0 + gap_frac * eps0) - eps0  # representable gap
        assert math.isclose(qsl_time(eps0, eps0 + gap) * gap, math.pi, rel_tol=1e-9)


class TestRadialDisplacement:
    def test_channel_factor_value(self):
        assert DIRAC_CHANNEL_FACTOR == pytest.approx(1.0303301, rel=1e-7)

    @pytest.mark.parametrize("spin", ["up", "down"])
    def test_uniform_closed_form(self, solved, spin):
        b0 = 1.0
        sol = solved(0.0, b0, spin, levels=2)
        beta = math.sqrt(b0 / 2.0)
        assert radial_displacement(sol, 0) * beta == pytest.approx(UNIFORM_DISP, rel=5e-3)

    def test_missing_level_rejected(self, solved):
        sol = solved(0.0, 1.0, "up", levels=2)
        with pytest.raises(ValueError):
            radial_displacement(sol, 1)

    def test_matches_shooting_oracle_integral(self, solved):
        from oracle_shooting import oracle_transition_moment

        sol = solved(1.0, 1.0, "up", levels=2)
        package = abs(wavefunction_moment(sol, 0, 1, 1))
        oracle = abs(oracle_transition_moment(1.0, 1.0, "up", 0, 1))
        assert package == pytest.approx(oracle, rel=1e-3)


class TestQslVelocity:
    def test_nonrelativistic_square_root_law(self):
        # v = 0.411 sqrt(b0) in the weak uniform field, either spin
        for b0 in (1e-8, 1e-4):
            for spin in ("up", "down"):
                r = qsl_velocity(field_for(b0, 0.0), spin=spin)
                assert r.v_over_c == pytest.approx(0.411 * math.sqrt(b0), rel=1e-2)

    def test_unit_bookkeeping(self, solved):
        sol = solved(0.0, 1.0, "up", levels=2)
        r = qsl_velocity(field_for(1.0, 0.0), spin="up", solution=sol)
        assert r.rho_disp_pm == pytest.approx(
            r.rho_disp_compton * CONSTANTS.compton_wavelength_pm, rel=1e-12
        )
        assert r.tau_qsl_s == pytest.approx(
            r.tau_qsl_compton * CONSTANTS.compton_time_s, rel=1e-12
        )
        assert r.v_over_c == pytest.approx(r.rho_disp_compton / r.tau_qsl_compton, rel=1e-12)

    def test_relativistic_spin_ordering(self):
        vu = qsl_velocity(field_for(1e6, 0.0), spin="up").v_over_c
        vd = qsl_velocity(field_for(1e6, 0.0), spin="down").v_over_c
        assert vd / vu > 2.0

    def test_spins_coincide_exactly_for_uniform_nonrelativistic(self):
        vu = qsl_velocity(field_for(1e-6, 0.0), spin="up").v_over_c
        vd = qsl_velocity(field_for(1e-6, 0.0), spin="down").v_over_c
        assert abs(vu - vd) / vu < 1e-6

    @pytest.mark.parametrize("n", [0.5, 1.0])
    @pytest.mark.xfail(
        strict=True,
        reason="the spin channels share neither potential nor gap away from "
        "n = 0: the measured velocity split is ~3.7% at n = 0.5 and ~6.5% at "
        "n = 1 (the reference scenario itself quotes 3.2 vs 3.0, a 6.7% "
        "split), so the 1% coincidence window only holds at n = 0",
    )
    def test_spin_coincidence_within_one_percent_up_to_linear(self, n):
        b0 = 1e-9
        vu = qsl_velocity(field_for(b0, n), spin="up").v_over_c
        vd = qsl_velocity(field_for(b0, n), spin="down").v_over_c
        assert abs(vu - vd) / vu < 0.01

    def test_displacement_spin_split_reported(self, solved, capsys):
        # equality is exact at n = 0; elsewhere the channels genuinely differ,
        # so the split is measured and reported rather than asserted
        rows = []
        for n in (-0.5, 0.0, 0.5, 1.0, 2.0):
            up = radial_displacement(solved(n, 1e-6, "up", levels=2), 0)
            down = radial_displacement(solved(n, 1e-6, "down", levels=2), 0)
            rows.append((n, (up - down) / up))
        with capsys.disabled():
            print("\nradial-displacement spin split (nonrelativistic):")
            for n, split in rows:
                print(f"  n = {n:+.1f}: {split:+.2%}")
        exact = dict(rows)[0.0]
        assert abs(exact) < 1e-6
        assert all(abs(split) < 0.5 for _, split in rows)


class TestSaturatedQsl:
    def test_uniform_up_plateau(self):
        res = saturated_qsl(0.0, "up")
        assert res.converged
        assert res.sqsl_v_over_c == pytest.approx(0.2407, rel=2e-3)
        assert res.b0_at_saturation < 1e12

    def test_trace_monotone_to_plateau(self):
        res = saturated_qsl(0.0, "down")
        vs = [v for _, v in res.trace]
        assert all(b - a >= -1e-3 for a, b in zip(vs, vs[1:]))
        b0s = [b for b, _ in res.trace]
        assert b0s == sorted(b0s)


class TestStateSweep:
    def test_row_count_and_causality(self):
        rows = state_sweep(field_for(22.66, 0.0), spin="up", nu_max=5)
        assert len(rows) == 5
        assert [r.nu for r in rows] == list(range(5))
        assert all(0.0 < r.v_over_c < 1.0 for r in rows)

    def test_nu_cap(self):
        with pytest.raises(ValueError):
            state_sweep(field_for(1.0, 0.0), nu_max=51)
