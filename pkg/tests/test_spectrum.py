import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qslfield.eigensolver import EigenSolution, RadialGrid
from qslfield.spectrum import (
    analytic_sqsl_up,
    energies,
    fit_ansatz,
    highfield_energy_uniform,
    sqsl_ansatz_displacement,
    uniform_alpha,
    _gamma_prefactor,
)
from scipy.special import gamma as gamma_fn

from conftest import field_for


class TestEnergies:
    def test_rest_energy_for_zero_mode(self, solved):
        levels = energies(solved(0.0, 1.0, "down", levels=2))
        assert levels[0].energy == pytest.approx(1.0, abs=1e-9)

    def test_sqrt_three(self, solved):
        levels = energies(solved(0.0, 1.0, "up", levels=1))
        assert levels[0].energy == pytest.approx(math.sqrt(3.0), rel=1e-6)

    def test_perfect_square(self, solved):
        # alpha = 3 exactly at b0 = 1.5 for the spin-up ground state
        levels = energies(solved(0.0, 1.5, "up", levels=1))
        assert levels[0].energy == pytest.approx(2.0, rel=1e-6)

    def test_ascending(self, solved):
        levels = energies(solved(0.5, 2.0, "up", levels=4))
        eps = [lv.energy for lv in levels]
        assert eps == sorted(eps)
        assert all(lv.energy >= 1.0 for lv in levels)

    def test_unconverged_rejected(self, solved):
        good = solved(0.0, 1.0, "up", levels=1)
        bad = EigenSolution(
            request=good.request,
            alphas=good.alphas,
            radials=good.radials,
            grid=good.grid,
            converged=False,
            richardson_error=good.richardson_error,
        )
        with pytest.raises(ValueError):
            energies(bad)


class TestUniformAlpha:
    def test_examples(self):
        assert uniform_alpha(1.0, 1, 0, "up") == 4.0
        assert uniform_alpha(1.0, 0, 0, "down") == 0.0
        assert uniform_alpha(0.5, 2, 1, "down") == 2.0

    def test_rejects_nonpositive_field(self):
        with pytest.raises(ValueError):
            uniform_alpha(0.0, 0)


class TestHighFieldLimit:
    def test_up_ground_state(self):
        eps = highfield_energy_uniform(1e6, 0, "up")
        assert eps == pytest.approx(math.sqrt(2e6), rel=1e-12)
        assert eps == pytest.approx(math.sqrt(1.0 + 2e6), rel=1e-3)

    def test_spin_branches_coincide(self):
        assert highfield_energy_uniform(1e6, 0, "up") == pytest.approx(
            highfield_energy_uniform(1e6, 1, "down"), rel=1e-14
        )

    def test_down_zero_mode_excluded(self):
        with pytest.raises(ValueError):
            highfield_energy_uniform(1e6, 0, "down")


class TestGammaAccuracy:
    def test_reference_values(self):
        assert gamma_fn(1.5) == pytest.approx(math.sqrt(math.pi) / 2.0, rel=1e-10)
        assert gamma_fn(1.0) == pytest.approx(1.0, rel=1e-10)
        assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-10)


def exact_uniform_samples():
    samples = []
    for b0 in (0.01, 0.1, 1.0, 10.0):
        for nu in range(5):
            samples.append((b0, nu, "up", uniform_alpha(b0, nu, 0, "up")))
            samples.append((b0, nu, "down", uniform_alpha(b0, nu, 0, "down")))
    return samples


class TestAnsatzFit:
    def test_exact_uniform_recovery(self):
        fit = fit_ansatz(0.0, exact_uniform_samples())
        assert fit.C3 == pytest.approx(2.0, abs=1e-6)
        assert fit.C5 == pytest.approx(0.5, abs=1e-6)
        assert fit.fit_residual <= 1e-6
        assert not fit.fit_poor

    def test_model_evaluation(self):
        fit = fit_ansatz(0.0, exact_uniform_samples())
        assert fit.alpha(2.0, 1, "up") == pytest.approx(8.0, rel=1e-6)
        assert fit.alpha(2.0, 1, "down") == pytest.approx(4.0, rel=1e-6)

    def test_single_level_rejected(self):
        samples = [(b0, 1, "up", uniform_alpha(b0, 1)) for b0 in (0.01, 1.0, 100.0)]
        with pytest.raises(ValueError):
            fit_ansatz(0.0, samples)

    def test_narrow_field_span_rejected(self):
        samples = [(b0, nu, "up", uniform_alpha(b0, nu)) for b0 in (1.0, 2.0)
                   for nu in range(4)]
        with pytest.raises(ValueError):
            fit_ansatz(0.0, samples)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            fit_ansatz(0.0, [])

    def test_distorted_samples_flag_poor_fit(self):
        rng = np.random.default_rng(7)
        samples = []
        for b0, nu, spin, alpha in exact_uniform_samples():
            if alpha > 0:
                samples.append((b0, nu, spin, alpha * (1.0 + rng.uniform(-0.4, 0.4))))
        fit = fit_ansatz(0.0, samples)
        assert fit.fit_poor


class TestAnalyticSqsl:
    def test_uniform_value(self):
        closed = (math.sqrt(2.0) + 1.0) / (4.0 * math.sqrt(2.0 * math.pi))
        assert analytic_sqsl_up(0.0) == pytest.approx(closed, rel=1e-12)
        assert analytic_sqsl_up(0.0) == pytest.approx(0.2407, abs=1e-3)

    def test_continuity(self):
        # smooth everywhere on (-1, 30]; the curve steepens toward n -> -1
        # and again at large n, so sampling is fine enough for the local slope
        coarse = np.arange(0.0, 30.0001, 0.002)
        vc = np.array([analytic_sqsl_up(x) for x in coarse])
        assert np.max(np.abs(np.diff(vc))) < 1e-3
        fine = np.arange(-0.999, 0.0001, 1e-4)
        vf = np.array([analytic_sqsl_up(x) for x in fine])
        assert np.max(np.abs(np.diff(vf))) < 1e-3

    def test_exponent_bound(self):
        with pytest.raises(ValueError):
            analytic_sqsl_up(-1.0)


class TestAnsatzDisplacement:
    def test_reduces_to_uniform_closed_form(self):
        # high-field uniform energies turn the interpolation into the
        # sqrt(pi) (1 + 3/(2 sqrt 2)) / (4 beta) closed form
        b0 = 1e6
        beta = math.sqrt(b0 / 2.0)
        eps0 = highfield_energy_uniform(b0, 0, "up")
        eps1 = highfield_energy_uniform(b0, 1, "up")
        got = sqsl_ansatz_displacement(0.0, eps0, eps1)
        want = math.sqrt(math.pi) * (1.0 + 3.0 / (2.0 * math.sqrt(2.0))) / (4.0 * beta)
        assert got == pytest.approx(want, rel=1e-12)

    def test_degenerate_pair_value(self):
        eps = 5.0
        assert sqsl_ansatz_displacement(0.0, eps, eps) == pytest.approx(
            2.0 * math.sqrt(math.pi) / eps, rel=1e-12
        )

    def test_ordering_validation(self):
        with pytest.raises(ValueError):
            sqsl_ansatz_displacement(0.0, 2.0, 1.5)
        with pytest.raises(ValueError):
            sqsl_ansatz_displacement(0.0, 0.5, 2.0)

    def test_tracks_moment_route_at_quadratic_exponent(self, solved):
        # interpolation vs the transition-moment displacement; they agree
        # closely near n = 0 and drift apart as n grows (~10% by n = 2)
        from qslfield.qsl import radial_displacement

        sol = solved(2.0, 1e6, "up", levels=2)
        eps = [math.sqrt(1.0 + a) for a in sol.alphas]
        interp = sqsl_ansatz_displacement(2.0, eps[0], eps[1])
        moment_route = radial_displacement(sol, 0)
        assert interp == pytest.approx(moment_route, rel=0.25)


@given(st.floats(min_value=-0.9, max_value=30.0))
def test_gamma_prefactor_positive(n):
    assert _gamma_prefactor(n) > 0.0
