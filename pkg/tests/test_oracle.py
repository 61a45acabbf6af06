"""Tests for the independent brute-force verifiers."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from c3ma import (
    NotApplicable,
    feasible_set_probe,
    frobenius_distance,
    golden_section_minimize_f,
    objective,
    search_optimal,
    solve_fu_spt,
    spectrum_from_eigenvalues,
)
from c3ma.pipeline import densify


def spectrum(*values):
    return spectrum_from_eigenvalues(np.array(values, dtype=float))


class TestGoldenSection:
    def test_rank_one_fixture(self):
        # analytic stationarity: 10 mu - 4 = 0
        mu = golden_section_minimize_f(spectrum(1.0, 0.0), 2.0)
        assert mu == pytest.approx(0.4, abs=1e-10)

    def test_four_entry_fixture(self):
        mu = golden_section_minimize_f(spectrum(4.0, 1.0, 0.0, 0.0), 3.0)
        assert mu == pytest.approx(13 / 12, abs=1e-10)

    def test_dominates_fine_grid(self):
        spec = spectrum(4.0, 1.0, 0.0, 0.0)
        kappa = 3.0
        mu = golden_section_minimize_f(spec, kappa)
        best = objective(mu, spec, kappa)
        for t in np.linspace(1e-9, spec.values[0] / kappa, 10_000):
            assert best <= objective(float(t), spec, kappa)

    def test_feasible_raises(self):
        with pytest.raises(NotApplicable):
            golden_section_minimize_f(spectrum(2.0, 1.0), 5.0)


@given(
    st.lists(st.floats(min_value=0.0, max_value=100.0), min_size=1, max_size=25),
    st.floats(min_value=1.0, max_value=1e4),
)
@settings(max_examples=120, deadline=None)
def test_oracle_matches_solver(tail, kappa):
    values = np.array([150.0] + tail)  # leading entry keeps instances infeasible-ish
    spec = spectrum_from_eigenvalues(values)
    sol = search_optimal(spec, kappa)
    if sol.feasible:
        with pytest.raises(NotApplicable):
            golden_section_minimize_f(spec, kappa)
        return
    mu_oracle = golden_section_minimize_f(spec, kappa)
    lam1 = spec.values[0]
    assert abs(sol.mu - mu_oracle) <= 1e-8 * lam1
    gap = objective(sol.mu, spec, kappa) - objective(mu_oracle, spec, kappa)
    assert gap <= 1e-10 * (1 + objective(mu_oracle, spec, kappa))


class TestFeasibleSetProbe:
    def test_never_beats_solver(self):
        rng = np.random.default_rng(0)
        for trial in range(40):
            p = int(rng.integers(2, 9))
            x = rng.standard_normal((p, int(rng.integers(1, p + 1))))
            s = x @ x.T / x.shape[1]
            s = 0.5 * (s + s.T)
            kappa = float(10.0 ** rng.uniform(0, 3))
            approx = solve_fu_spt(s, kappa, form="dense")
            probe = feasible_set_probe(s, kappa, trials=120, seed=trial)
            assert probe >= approx.frobenius_error - 1e-9

    def test_probe_at_solver_solution_recovers_objective(self):
        rng = np.random.default_rng(3)
        x = rng.standard_normal((6, 3))
        s = 0.5 * (x @ x.T + (x @ x.T).T) / 3
        approx = solve_fu_spt(s, 5.0, form="dense")
        assert frobenius_distance(densify(approx), s) == pytest.approx(
            approx.frobenius_error, rel=1e-12
        )

    def test_feasible_input_probe_nonnegative(self):
        s = np.diag([2.0, 1.0])
        approx = solve_fu_spt(s, 10.0)
        assert approx.frobenius_error == 0.0
        assert feasible_set_probe(s, 10.0, trials=50, seed=1) >= 0.0

    def test_rejects_large_instances(self):
        from c3ma.errors import InvalidInput

        with pytest.raises(InvalidInput):
            feasible_set_probe(np.eye(13), 2.0, trials=1, seed=0)
