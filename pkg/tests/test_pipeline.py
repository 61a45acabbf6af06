"""End-to-end solver pipeline tests."""

import numpy as np
import pytest

from c3ma import (
    InfeasibleZeroMatrix,
    InvalidInput,
    ShapeError,
    densify,
    sample_covariance,
    solve_fu_spt,
    solve_gr_svd,
    solve_mod_svd,
)
from c3ma.pipeline import spectrum_of_data

SVD_SOLVERS = (solve_gr_svd, solve_mod_svd)


def random_instance(rng, p_max=60, n_max=30):
    p = int(rng.integers(2, p_max))
    n = int(rng.integers(1, min(p, n_max) + 1))
    return rng.standard_normal((p, n)) * 10.0 ** rng.integers(-2, 3)


class TestFuSpt:
    def test_feasible_short_circuit_returns_input(self):
        s = np.diag([2.0, 1.0])
        approx = solve_fu_spt(s, 5.0, form="dense")
        np.testing.assert_array_equal(approx.dense, s)
        assert approx.solution.feasible
        assert approx.frobenius_error == 0.0

    def test_rank_one_clamped(self):
        s = np.array([[1.0, 1.0], [1.0, 1.0]])
        approx = solve_fu_spt(s, 4.0, form="dense")
        eigs = np.linalg.eigvalsh(approx.dense)
        np.testing.assert_allclose(np.sort(eigs), [8 / 17, 32 / 17], rtol=1e-12)
        # eigenbasis is (1,1)/sqrt(2), (1,-1)/sqrt(2)
        expected = 0.5 * np.array([[40 / 17, 24 / 17], [24 / 17, 40 / 17]])
        np.testing.assert_allclose(approx.dense, expected, atol=1e-12)

    def test_kappa_one_gives_scaled_identity(self):
        rng = np.random.default_rng(0)
        a = rng.standard_normal((5, 5))
        s = 0.5 * (a + a.T) @ (0.5 * (a + a.T)).T  # PSD
        s = 0.5 * (s + s.T)
        approx = solve_fu_spt(s, 1.0, form="dense")
        np.testing.assert_allclose(approx.dense, np.trace(s) / 5 * np.eye(5), atol=1e-10)

    def test_zero_matrix_infeasible(self):
        with pytest.raises(InfeasibleZeroMatrix):
            solve_fu_spt(np.zeros((3, 3)), 2.0)

    def test_asymmetric_rejected(self):
        with pytest.raises(InvalidInput):
            solve_fu_spt(np.array([[1.0, 1.0], [0.0, 1.0]]), 2.0)


@pytest.mark.parametrize("solver", SVD_SOLVERS)
class TestSvdSolvers:
    def test_unit_vector_fixture(self, solver):
        e1 = np.zeros((3, 1))
        e1[0, 0] = 1.0
        approx = solver(e1, 2.0, form="dense")
        np.testing.assert_allclose(
            approx.dense, np.diag([2 / 3, 1 / 3, 1 / 3]), atol=1e-12
        )
        assert approx.solution.mu == pytest.approx(1 / 3, rel=1e-14)

    def test_matches_fu_spt_fixture(self, solver):
        x = np.array([[1.0, -1.0], [1.0, -1.0]])
        approx = solver(x, 4.0, form="dense")
        ref = solve_fu_spt(sample_covariance(x), 4.0, form="dense")
        np.testing.assert_allclose(approx.dense, ref.dense, atol=1e-12)

    def test_orthonormal_columns_two_level(self, solver):
        # X with orthonormal columns scaled by sqrt(n): S_n has eigenvalues
        # one (n times) and zero; symmetry forces a two-level solution.
        rng = np.random.default_rng(5)
        q, _ = np.linalg.qr(rng.standard_normal((10, 4)))
        x = q * np.sqrt(4)
        kappa = 3.0
        approx = solver(x, kappa, form="dense")
        eigs = np.sort(np.linalg.eigvalsh(approx.dense))
        mu = approx.solution.mu
        np.testing.assert_allclose(eigs[:6], np.full(6, mu), rtol=1e-10)
        np.testing.assert_allclose(eigs[6:], np.full(4, kappa * mu), rtol=1e-10)

    def test_wide_matrix_rejected(self, solver):
        with pytest.raises(ShapeError):
            solver(np.ones((2, 5)), 2.0)

    def test_zero_matrix_infeasible(self, solver):
        with pytest.raises(InfeasibleZeroMatrix):
            solver(np.zeros((4, 2)), 2.0)

    def test_center_flag_matches_manual_centering(self, solver):
        rng = np.random.default_rng(7)
        x = rng.standard_normal((12, 5)) + 3.0
        centered = x - x.mean(axis=1, keepdims=True)
        a = solver(x, 10.0, form="dense", center=True)
        b = solver(centered, 10.0, form="dense")
        np.testing.assert_allclose(a.dense, b.dense, atol=1e-12)


class TestAgreementAndInvariants:
    def test_pipeline_agreement_random(self):
        rng = np.random.default_rng(21)
        for _ in range(15):
            x = random_instance(rng)
            kappa = float(10.0 ** rng.uniform(0, 3))
            fu = solve_fu_spt(sample_covariance(x), kappa, form="dense")
            gr = solve_gr_svd(x, kappa, form="dense")
            mo = solve_mod_svd(x, kappa, form="dense")
            scale = np.linalg.norm(fu.dense)
            assert np.linalg.norm(fu.dense - gr.dense) <= 1e-8 * scale
            assert np.linalg.norm(fu.dense - mo.dense) <= 1e-8 * scale

    def test_commutation_with_sample_covariance(self):
        rng = np.random.default_rng(23)
        for _ in range(10):
            x = random_instance(rng)
            s = sample_covariance(x)
            approx = solve_gr_svd(x, 5.0, form="dense")
            defect = np.linalg.norm(approx.dense @ s - s @ approx.dense)
            assert defect <= 1e-8 * np.linalg.norm(s) * np.linalg.norm(approx.dense)

    def test_feasibility_and_exact_kappa_when_singular(self):
        rng = np.random.default_rng(25)
        for _ in range(10):
            x = random_instance(rng)
            kappa = float(10.0 ** rng.uniform(0.2, 3))
            approx = solve_mod_svd(x, kappa, form="dense")
            eigs = np.linalg.eigvalsh(approx.dense)
            assert eigs.min() > 0
            cond = eigs.max() / eigs.min()
            assert cond <= kappa * (1 + 1e-8)
            if x.shape[0] > x.shape[1]:  # singular sample covariance
                assert cond == pytest.approx(kappa, rel=1e-8)

    def test_optimality_dominates_clamp_family(self):
        rng = np.random.default_rng(27)
        x = random_instance(rng, p_max=20, n_max=10)
        s = sample_covariance(x)
        kappa = 4.0
        approx = solve_fu_spt(s, kappa, form="dense")
        spec = spectrum_of_data(x)
        basis = np.linalg.eigh(s)[1][:, ::-1]
        best = np.linalg.norm(approx.dense - s)
        for t in np.linspace(1e-6, spec.values[0] / kappa, 500):
            clamped = np.minimum(np.maximum(t, spec.values), kappa * t)
            candidate = (basis * clamped) @ basis.T
            assert best <= np.linalg.norm(candidate - s) + 1e-9


class TestCompactForm:
    def test_compact_matches_dense(self):
        rng = np.random.default_rng(29)
        x = random_instance(rng)
        approx = solve_gr_svd(x, 7.0, form="dense")
        dense_from_compact = (
            approx.compact.columns * approx.compact.deltas
        ) @ approx.compact.columns.T + approx.compact.mu_star * np.eye(x.shape[0])
        assert np.linalg.norm(dense_from_compact - approx.dense) <= 1e-10 * np.linalg.norm(
            approx.dense
        )

    def test_rank_is_beta_minus_one(self):
        e1 = np.zeros((6, 2))
        e1[0, 0] = 1.0
        e1[1, 1] = 2.0
        approx = solve_mod_svd(e1, 3.0, form="compact")
        assert approx.dense is None
        assert approx.compact.rank == approx.solution.beta - 1
        assert approx.compact.columns.shape == (6, approx.compact.rank)

    def test_densify_roundtrip(self):
        rng = np.random.default_rng(31)
        x = random_instance(rng)
        dense = solve_gr_svd(x, 5.0, form="dense")
        compact = solve_gr_svd(x, 5.0, form="compact")
        np.testing.assert_allclose(densify(compact), dense.dense, atol=1e-12)
        np.testing.assert_array_equal(densify(dense), dense.dense)

    def test_rank_zero_densifies_to_scaled_identity(self):
        from c3ma.pipeline import CompactForm, _expand_compact

        compact = CompactForm(0.5, np.zeros((4, 0)), np.zeros(0))
        np.testing.assert_array_equal(_expand_compact(compact), 0.5 * np.eye(4))

    def test_auto_form_threshold(self):
        rng = np.random.default_rng(33)
        small = solve_gr_svd(rng.standard_normal((10, 3)), 5.0)
        assert small.dense is not None


def test_spectrum_of_data_routes_agree():
    rng = np.random.default_rng(35)
    x = rng.standard_normal((6, 9))  # wide matrix takes the eigendecomposition route
    via_eig = spectrum_of_data(x)
    direct = np.linalg.eigvalsh(sample_covariance(x))[::-1]
    np.testing.assert_allclose(via_eig.values, np.clip(direct, 0, None), atol=1e-12)
    tall = rng.standard_normal((9, 4))  # tall matrix takes the SVD route
    via_svd = spectrum_of_data(tall)
    direct_tall = np.clip(np.linalg.eigvalsh(sample_covariance(tall))[::-1], 0, None)
    np.testing.assert_allclose(
        via_svd.values, direct_tall, rtol=1e-9, atol=1e-12 * direct_tall[0]
    )
