import numpy as np
import pytest

from intreg import (
    Interval,
    IntervalSample,
    build_design,
    cross_validate,
    fit_lasso,
    fit_lasso_mid,
    fit_lasso_spr,
    fit_ls,
    lambda_grid,
)
from intreg.errors import FoldTooSmall
from intreg.lasso import lasso_cd, mid_kkt_gap, soft_threshold

from conftest import exact_fit_sample, random_sample


class TestLassoCd:
    def test_soft_threshold(self):
        x = np.array([-3.0, -0.5, 0.0, 0.5, 3.0])
        assert np.allclose(soft_threshold(x, 1.0), [-2.0, 0.0, 0.0, 0.0, 2.0])

    def test_orthonormal_columns_soft_threshold_exactly(self, rng):
        # with orthonormal columns the solution is the thresholded projection
        F, _ = np.linalg.qr(rng.normal(size=(30, 4)))
        v = rng.normal(size=30)
        beta = F.T @ v
        for lam in (0.0, 0.1, 0.5, 2.0):
            expected = soft_threshold(beta, lam)
            got = lasso_cd(F, v, lam)
            assert np.allclose(got, expected, atol=1e-10)

    def test_zero_columns_stay_zero(self):
        F = np.zeros((5, 2))
        assert np.array_equal(lasso_cd(F, np.ones(5), 0.5), np.zeros(2))

    def test_certificate_gap(self, rng):
        F = rng.normal(size=(25, 3))
        v = rng.normal(size=25)
        a = lasso_cd(F, v, 0.7)
        assert mid_kkt_gap(F, v, 0.7, a) <= 1e-10


class TestBlockFits:
    def test_zero_penalty_matches_least_squares(self):
        s = random_sample(1, n=25, k=2)
        d = build_design(s, "full")
        ls = fit_ls(d, 0.5)
        a_m = fit_lasso_mid(d, 0.0)
        a_s = fit_lasso_spr(d, 0.0, 0.5)
        mid_obj = lambda a: 0.5 * np.sum((d.vm - d.fm @ a) ** 2)
        spr_obj = lambda a: 0.5 * np.sum((d.vs - d.fs @ a) ** 2)
        assert mid_obj(a_m) == pytest.approx(mid_obj(ls.coefficients.mid_stack("full")), abs=1e-6)
        assert spr_obj(a_s) == pytest.approx(spr_obj(ls.coefficients.spread_stack("full")), abs=1e-6)

    def test_saturating_penalty_zeroes_both_blocks(self):
        s = random_sample(2, n=25, k=2)
        d = build_design(s, "full")
        lam_mid = lambda_grid(d, 2, 0.5, "mid")[0]
        lam_spr = lambda_grid(d, 2, 0.5, "spr")[0]
        assert np.all(fit_lasso_mid(d, lam_mid) == 0.0)
        assert np.all(fit_lasso_mid(d, 1.5 * lam_mid) == 0.0)
        assert np.all(fit_lasso_spr(d, lam_spr, 0.5) == 0.0)
        assert np.all(fit_lasso_spr(d, 1.5 * lam_spr, 0.5) == 0.0)

    def test_negative_penalty_rejected(self):
        s = random_sample(3, n=10)
        d = build_design(s, "full")
        with pytest.raises(ValueError):
            fit_lasso_mid(d, -0.1)
        with pytest.raises(ValueError):
            fit_lasso_spr(d, -0.1, 0.5)

    def test_spread_path_stays_feasible(self):
        s = random_sample(4, n=20, k=2)
        d = build_design(s, "full")
        R, r = d.spread_constraints()
        for lam in lambda_grid(d, 25, 1e-3, "spr"):
            a_s = fit_lasso_spr(d, lam, 0.5)
            assert np.min(R @ a_s - r) >= -1e-8

    def test_l1_norm_monotone_along_paths(self):
        s = random_sample(5, n=20, k=2)
        d = build_design(s, "full")
        mid_norms = [np.sum(np.abs(fit_lasso_mid(d, lam))) for lam in lambda_grid(d, 30, 1e-3, "mid")]
        spr_norms = [np.sum(np.abs(fit_lasso_spr(d, lam, 0.5))) for lam in lambda_grid(d, 30, 1e-3, "spr")]
        for norms in (mid_norms, spr_norms):
            diffs = np.diff(norms)  # lambdas decrease, norms must not
            assert np.all(diffs >= -1e-8)


def sign_pattern_lasso(F, v, lam):
    """Exact small-width Lasso optimum by enumerating coefficient signs."""
    from itertools import product

    w = F.shape[1]
    best, best_obj = None, np.inf
    for signs in product((-1, 0, 1), repeat=w):
        signs = np.array(signs, dtype=float)
        active = np.flatnonzero(signs != 0)
        a = np.zeros(w)
        if active.size:
            FA = F[:, active]
            try:
                a[active] = np.linalg.solve(FA.T @ FA, FA.T @ v - lam * signs[active])
            except np.linalg.LinAlgError:
                continue
            if np.any(np.sign(a[active]) != signs[active]):
                continue
        grad = F.T @ (v - F @ a)
        zero = np.flatnonzero(signs == 0)
        if zero.size and np.max(np.abs(grad[zero])) > lam + 1e-10:
            continue
        obj = 0.5 * np.sum((v - F @ a) ** 2) + lam * np.sum(np.abs(a))
        if obj < best_obj:
            best, best_obj = a, obj
    return best, best_obj


class TestObjectiveCertificates:
    def test_mid_block_matches_sign_enumeration(self):
        # small instances: k <= 2, n <= 8 keep the enumeration exact
        for seed in (61, 62, 63):
            s = random_sample(seed, n=8, k=2)
            d = build_design(s, "full")
            for lam in (0.05, 0.4, 1.5):
                a = fit_lasso_mid(d, lam)
                obj = 0.5 * np.sum((d.vm - d.fm @ a) ** 2) + lam * np.sum(np.abs(a))
                _, oracle_obj = sign_pattern_lasso(d.fm, d.vm, lam)
                assert obj <= oracle_obj + 1e-6

    def test_spread_block_matches_full_enumeration(self):
        from intreg.least_squares import spread_qp
        from intreg.oracle import brute_force_qp

        for seed in (71, 72):
            s = random_sample(seed, n=8, k=2)  # 2k + n = 12 constraints, cap-sized
            d = build_design(s, "full")
            for lam in (0.0, 0.1, 0.8):
                a = fit_lasso_spr(d, lam, 0.5)
                qp = spread_qp(d, 0.5, lam)
                oracle = brute_force_qp(qp)
                assert qp.objective(a) <= qp.objective(oracle) + 1e-6


class TestLambdaGrid:
    def test_two_point_grid_hits_endpoints(self):
        s = random_sample(6, n=15)
        d = build_design(s, "full")
        grid = lambda_grid(d, 2, 0.01, "mid")
        lam_max = np.max(np.abs(d.fm.T @ d.vm))
        assert grid[0] == pytest.approx(lam_max, rel=1e-12)
        assert grid[1] == pytest.approx(0.01 * lam_max, rel=1e-12)

    def test_mid_threshold_formula(self):
        s = random_sample(7, n=15)
        d = build_design(s, "full")
        lam_max = lambda_grid(d, 3, 0.1, "mid")[0]
        assert lam_max == pytest.approx(np.max(np.abs(d.fm.T @ d.vm)), rel=1e-12)

    def test_strictly_decreasing_constant_log_step(self):
        s = random_sample(8, n=15)
        d = build_design(s, "full")
        grid = lambda_grid(d, 12, 1e-2, "spr")
        assert np.all(np.diff(grid) < 0)
        steps = np.diff(np.log(grid))
        assert np.allclose(steps, steps[0], atol=1e-10)

    def test_count_validation(self):
        s = random_sample(9, n=15)
        d = build_design(s, "full")
        with pytest.raises(ValueError):
            lambda_grid(d, 1, 0.1, "mid")


class TestCrossValidate:
    def test_identical_seeds_identical_paths(self):
        s = random_sample(10, n=20, k=2)
        p1 = cross_validate(s, "full", 0.5, folds=4, seed=7, block="mid", count=12)
        p2 = cross_validate(s, "full", 0.5, folds=4, seed=7, block="mid", count=12)
        assert np.array_equal(p1.cv_mean, p2.cv_mean)
        assert np.array_equal(p1.coefs, p2.coefs)
        assert p1.lambda_mse == p2.lambda_mse and p1.lambda_1se == p2.lambda_1se

    def test_one_se_never_below_mse_choice(self):
        for seed in range(3):
            s = random_sample(20 + seed, n=18, k=2)
            for block in ("mid", "spr"):
                path = cross_validate(s, "full", 0.5, folds=3, seed=seed, block=block, count=15)
                assert path.lambda_1se >= path.lambda_mse
                assert np.all(path.cv_stderr >= 0.0)

    def test_leave_one_out_on_exact_fit_data(self):
        s = exact_fit_sample(n=8, slope=2.0)
        # hand-run leave-one-out at zero penalty: every held-out row is
        # predicted exactly, because each training subset still fits exactly
        for j in range(s.n):
            train = [i for i in range(s.n) if i != j]
            d_tr = build_design(s.subset(train), "full")
            a_m = fit_lasso_mid(d_tr, 0.0)
            mid_pred = (
                np.hstack([s.mid_x[j], s.spr_x[j]]) @ a_m
                + d_tr.mean_y.mid
                - float(d_tr.mean_mid_xebl @ a_m)
            )
            assert mid_pred == pytest.approx(s.mid_y[j], abs=1e-7)
        path = cross_validate(s, "full", 0.5, folds=s.n, seed=0, block="mid", count=20)
        # error shrinks toward zero as the penalty vanishes, so the smallest
        # grid point wins
        assert path.lambda_mse == path.lambdas[-1]

    def test_fold_bounds_validation(self):
        s = random_sample(11, n=10)
        with pytest.raises(ValueError):
            cross_validate(s, "full", 0.5, folds=1, seed=0)
        with pytest.raises(ValueError):
            cross_validate(s, "full", 0.5, folds=11, seed=0)

    def test_training_side_too_small(self):
        s = random_sample(12, n=2, k=1, noise=0.1)
        with pytest.raises(FoldTooSmall):
            cross_validate(s, "full", 0.5, folds=2, seed=0, count=3)


class TestFitLasso:
    def test_explicit_penalties_skip_cross_validation(self):
        s = random_sample(13, n=20, k=2)
        res = fit_lasso(s, "full", 0.5, lambda_mid=0.3, lambda_spr=0.05)
        assert res.lambda_mid == 0.3 and res.lambda_spr == 0.05
        d = build_design(s, "full")
        assert np.allclose(res.coefficients.mid_stack("full"), fit_lasso_mid(d, 0.3), atol=1e-12)
        assert np.allclose(
            res.coefficients.spread_stack("full"), fit_lasso_spr(d, 0.05, 0.5), atol=1e-12
        )

    def test_seeded_run_is_deterministic(self):
        s = random_sample(14, n=20, k=2)
        r1 = fit_lasso(s, "full", 0.5, rule="1se", folds=4, seed=3, count=10)
        r2 = fit_lasso(s, "full", 0.5, rule="1se", folds=4, seed=3, count=10)
        assert r1.lambda_mid == r2.lambda_mid and r1.lambda_spr == r2.lambda_spr
        assert np.array_equal(r1.coefficients.b1, r2.coefficients.b1)
        assert r1.mse == r2.mse

    def test_pure_noise_spread_zeroed_by_one_se(self):
        rng = np.random.default_rng(99)
        n = 40
        mid_x = rng.normal(size=(n, 2))
        spr_x = rng.uniform(0.2, 1.2, (n, 2))
        mid_y = mid_x @ [2.0, -1.0] + rng.normal(0, 0.2, n)
        spr_y = 1.0 + rng.uniform(0, 0.3, n)  # unrelated to the regressors
        s = IntervalSample(mid_y, spr_y, mid_x, spr_x)
        res = fit_lasso(s, "full", 0.5, rule="1se", folds=5, seed=1, count=40)
        assert np.all(res.coefficients.b2 == 0.0)
        assert np.all(res.coefficients.b3 == 0.0)

    def test_invalid_rule(self):
        s = random_sample(15, n=12)
        with pytest.raises(ValueError):
            fit_lasso(s, "full", 0.5, rule="median")

    def test_mse_recomputable(self):
        from intreg import mean_squared_dtau

        s = random_sample(16, n=18, k=2)
        res = fit_lasso(s, "full", 0.5, lambda_mid=0.2, lambda_spr=0.02)
        assert res.mse == pytest.approx(mean_squared_dtau(s.y_list(), res.fitted, 0.5), abs=1e-10)
