"""L1-penalized estimation of both coefficient blocks with cross-validated
penalty selection.

The midpoint block is a plain Lasso solved by cyclic coordinate descent with
soft thresholding.  The spread block keeps the same inequality constraints as
the least-squares fit; on that feasible cone every coefficient is
nonnegative, so the L1 penalty is a linear term and the penalized problem is
solved exactly by the same complementary-pivoting QP machinery.

The two blocks are penalized and cross-validated independently.  This is
sound because the weighted squared error splits into a midpoint part that
depends only on the midpoint block and a spread part that depends only on
the spread block, so the two validation curves can be minimized separately.
When scanning one block, the other block is held at its unpenalized
least-squares solution on the same training fold, which only shifts that
block's validation curve by a constant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .design import Coefficients, DesignSystem, build_design, regressor_blocks
from .errors import FoldTooSmall, InfeasibleConstraints, InfeasibleQp
from .intervals import DEFAULT_TAU, Interval, IntervalSample, validate_tau
from .least_squares import (
    METHOD_LASSO,
    FitResult,
    _msd_arrays,
    estimate_intercept,
    fitted_intervals,
    ols_mid,
    solve_spread_block,
)

RULE_MSE = "mse"
RULE_ONE_SE = "1se"
RULES = (RULE_MSE, RULE_ONE_SE)

BLOCK_MID = "mid"
BLOCK_SPR = "spr"

DEFAULT_GRID_SIZE = 100
DEFAULT_GRID_RATIO = 1e-3


def soft_threshold(x: np.ndarray, t: float) -> np.ndarray:
    return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)


def lasso_cd(F: np.ndarray, v: np.ndarray, lam: float, max_sweeps: int = 50_000, tol: float = 1e-13) -> np.ndarray:
    """Cyclic coordinate descent for ``1/2 ||v - F a||^2 + lam ||a||_1``.

    Columns with zero norm keep a zero coefficient.  Iterates until the
    largest coordinate update falls below ``tol`` relative to the coefficient
    scale.
    """
    F = np.asarray(F, dtype=float)
    v = np.asarray(v, dtype=float)
    col_sq = np.sum(F * F, axis=0)
    a = np.zeros(F.shape[1])
    resid = v.copy()
    for _ in range(max_sweeps):
        biggest = 0.0
        for j in range(F.shape[1]):
            if col_sq[j] <= 0.0:
                continue
            old = a[j]
            rho = F[:, j] @ resid + col_sq[j] * old
            new = float(soft_threshold(np.asarray(rho), lam)) / col_sq[j]
            if new != old:
                resid -= (new - old) * F[:, j]
                a[j] = new
                biggest = max(biggest, abs(new - old))
        if biggest <= tol * (1.0 + float(np.max(np.abs(a), initial=0.0))):
            break
    return a


def mid_kkt_gap(F: np.ndarray, v: np.ndarray, lam: float, a: np.ndarray) -> float:
    """Worst violation of the subgradient optimality condition.

    Zero coordinates need ``|F_j'(v - Fa)| <= lam``; active coordinates need
    the correlation to sit exactly at ``lam`` with the matching sign.
    """
    g = F.T @ (v - F @ a)
    gap = 0.0
    for j in range(a.size):
        if a[j] != 0.0:
            gap = max(gap, abs(g[j] - lam * np.sign(a[j])))
        else:
            gap = max(gap, max(0.0, abs(g[j]) - lam))
    return float(gap)


def fit_lasso_mid(design: DesignSystem, lam: float) -> np.ndarray:
    """Midpoint-block Lasso solution, certified by its subgradient condition.

    Coefficients below working precision are snapped to exact zeros, so a
    penalty at or above the zeroing threshold returns the zero vector
    exactly.
    """
    lam = float(lam)
    if lam < 0.0:
        raise ValueError("the penalty must be nonnegative")
    a = lasso_cd(design.fm, design.vm, lam)
    gap = mid_kkt_gap(design.fm, design.vm, lam, a)
    scale = 1.0 + float(np.max(np.abs(design.fm.T @ design.vm), initial=0.0))
    if gap > 1e-8 * scale:
        raise ArithmeticError(f"coordinate descent left a subgradient gap of {gap}")
    a[np.abs(a) <= 1e-12 * (1.0 + float(np.max(np.abs(a))))] = 0.0
    return a


def fit_lasso_spr(design: DesignSystem, lam: float, tau: float = DEFAULT_TAU) -> np.ndarray:
    """Spread-block Lasso under the feasibility cone.

    Solved exactly as a QP because the cone forces nonnegative coefficients,
    making the penalty linear.  The minimizer does not depend on ``tau``;
    the argument is accepted for interface symmetry with the fit entry
    points.
    """
    lam = float(lam)
    if lam < 0.0:
        raise ValueError("the penalty must be nonnegative")
    validate_tau(tau)
    try:
        a_s, _ = solve_spread_block(design, tau, lam)
    except InfeasibleQp as exc:
        raise InfeasibleConstraints("spread constraint system is empty") from exc
    return a_s


def lambda_grid(design: DesignSystem, count: int = DEFAULT_GRID_SIZE, ratio: float = DEFAULT_GRID_RATIO, block: str = BLOCK_MID) -> np.ndarray:
    """Log-spaced decreasing penalty grid from the smallest all-zero penalty.

    For the midpoint block the threshold is ``max |F_m' v_m|``; for the
    spread block the cone makes it one-sided, ``max(F_s' v_s)`` clipped at
    zero.
    """
    if count < 2:
        raise ValueError("need at least two grid points")
    if not (0.0 < ratio < 1.0):
        raise ValueError("ratio must lie strictly between 0 and 1")
    if block == BLOCK_MID:
        lam_max = float(np.max(np.abs(design.fm.T @ design.vm), initial=0.0))
    elif block == BLOCK_SPR:
        lam_max = max(0.0, float(np.max(design.fs.T @ design.vs, initial=0.0)))
    else:
        raise ValueError(f"block must be {BLOCK_MID!r} or {BLOCK_SPR!r}")
    if lam_max <= 0.0:
        # no signal: any penalty gives the zero solution, keep a tiny grid
        lam_max = 1e-12
    return np.geomspace(lam_max, ratio * lam_max, count)


@dataclass
class LassoPath:
    """Cross-validation results for one coefficient block.

    ``coefs`` holds the full-sample refit at every grid penalty (one row per
    penalty).  The two blocks have different zeroing thresholds, hence
    separate path objects rather than one shared grid.
    """

    block: str
    lambdas: np.ndarray
    coefs: np.ndarray
    cv_mean: np.ndarray
    cv_stderr: np.ndarray
    lambda_mse: float
    lambda_1se: float


def _fold_partition(n: int, folds: int, seed: int) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    return [np.sort(part) for part in np.array_split(rng.permutation(n), folds)]


def _holdout_error(
    train_design: DesignSystem,
    a_m: np.ndarray,
    a_s: np.ndarray,
    test: IntervalSample,
    tau: float,
) -> float:
    mid_side, spr_side = regressor_blocks(test, train_design.variant)
    delta_mid = train_design.mean_y.mid - float(train_design.mean_mid_xebl @ a_m)
    delta_spr = train_design.mean_y.spr - float(train_design.mean_spr_xebl @ a_s)
    mid_hat = mid_side @ a_m + delta_mid
    spr_hat = spr_side @ a_s + delta_spr
    return _msd_arrays(test.mid_y - mid_hat, test.spr_y - spr_hat, tau)


def cross_validate(
    sample: IntervalSample,
    variant: str = "full",
    tau: float = DEFAULT_TAU,
    folds: int = 5,
    seed: int = 0,
    block: str = BLOCK_MID,
    count: int = DEFAULT_GRID_SIZE,
    ratio: float = DEFAULT_GRID_RATIO,
) -> LassoPath:
    """K-fold cross-validation of one block's penalty.

    Fold assignment is a seeded pseudorandom partition, so identical seeds
    give identical paths.  Per penalty, ``cv_mean`` is the mean held-out
    weighted squared error and ``cv_stderr`` its standard error across
    folds; the selected penalties are the error minimizer and the largest
    penalty within one standard error of it.
    """
    tau = validate_tau(tau)
    if block not in (BLOCK_MID, BLOCK_SPR):
        raise ValueError(f"block must be {BLOCK_MID!r} or {BLOCK_SPR!r}")
    n = sample.n
    if folds < 2 or folds > n:
        raise ValueError(f"folds must lie between 2 and {n}, got {folds}")
    full_design = build_design(sample, variant)
    lambdas = lambda_grid(full_design, count, ratio, block)
    parts = _fold_partition(n, folds, seed)
    errors = np.empty((folds, lambdas.size))
    all_rows = np.arange(n)
    for f, held in enumerate(parts):
        train_rows = np.setdiff1d(all_rows, held)
        if train_rows.size < 2:
            raise FoldTooSmall(f"fold {f} leaves only {train_rows.size} training rows")
        train_design = build_design(sample.subset(train_rows), variant)
        test = sample.subset(held)
        if block == BLOCK_MID:
            a_s, _ = solve_spread_block(train_design, tau)
            for i, lam in enumerate(lambdas):
                a_m = fit_lasso_mid(train_design, lam)
                errors[f, i] = _holdout_error(train_design, a_m, a_s, test, tau)
        else:
            a_m, _ = ols_mid(train_design)
            for i, lam in enumerate(lambdas):
                a_s = fit_lasso_spr(train_design, lam, tau)
                errors[f, i] = _holdout_error(train_design, a_m, a_s, test, tau)
    cv_mean = errors.mean(axis=0)
    cv_stderr = errors.std(axis=0, ddof=1) / np.sqrt(folds)
    best = int(np.argmin(cv_mean))
    threshold = cv_mean[best] + cv_stderr[best]
    one_se = int(np.flatnonzero(cv_mean <= threshold)[0])
    if block == BLOCK_MID:
        coefs = np.array([fit_lasso_mid(full_design, lam) for lam in lambdas])
    else:
        coefs = np.array([fit_lasso_spr(full_design, lam, tau) for lam in lambdas])
    return LassoPath(
        block=block,
        lambdas=lambdas,
        coefs=coefs,
        cv_mean=cv_mean,
        cv_stderr=cv_stderr,
        lambda_mse=float(lambdas[best]),
        lambda_1se=float(lambdas[one_se]),
    )


def fit_lasso(
    sample: IntervalSample,
    variant: str = "full",
    tau: float = DEFAULT_TAU,
    rule: str = RULE_MSE,
    folds: int = 5,
    seed: int = 0,
    lambda_mid: Optional[float] = None,
    lambda_spr: Optional[float] = None,
    count: int = DEFAULT_GRID_SIZE,
    ratio: float = DEFAULT_GRID_RATIO,
) -> FitResult:
    """Lasso fit with independently selected per-block penalties.

    Explicit ``lambda_mid`` / ``lambda_spr`` values skip cross-validation
    for that block.  The intercept is never penalized; it is recovered from
    the refit exactly as in the least-squares fit.
    """
    tau = validate_tau(tau)
    if rule not in RULES:
        raise ValueError(f"rule must be one of {RULES}, got {rule!r}")
    design = build_design(sample, variant)
    diagnostics: dict[str, float] = {}
    if lambda_mid is None:
        path = cross_validate(sample, variant, tau, folds, seed, BLOCK_MID, count, ratio)
        lambda_mid = path.lambda_mse if rule == RULE_MSE else path.lambda_1se
        diagnostics["cv_mid_min_error"] = float(np.min(path.cv_mean))
    if lambda_spr is None:
        path = cross_validate(sample, variant, tau, folds, seed, BLOCK_SPR, count, ratio)
        lambda_spr = path.lambda_mse if rule == RULE_MSE else path.lambda_1se
        diagnostics["cv_spr_min_error"] = float(np.min(path.cv_mean))
    lambda_mid = float(lambda_mid)
    lambda_spr = float(lambda_spr)
    a_m = fit_lasso_mid(design, lambda_mid)
    a_s = fit_lasso_spr(design, lambda_spr, tau)
    coefs = Coefficients.from_blocks(a_m, a_s, Interval(0.0, 0.0), design.variant, design.k)
    coefs = coefs.with_delta(estimate_intercept(design, coefs))
    diagnostics["mid_kkt_gap"] = mid_kkt_gap(design.fm, design.vm, lambda_mid, a_m)
    mse = _msd_arrays(design.vm - design.fm @ a_m, design.vs - design.fs @ a_s, tau)
    return FitResult(
        coefficients=coefs,
        method=METHOD_LASSO,
        lambda_mid=lambda_mid,
        lambda_spr=lambda_spr,
        fitted=fitted_intervals(design, a_m, a_s),
        mse=mse,
        diagnostics=diagnostics,
    )
