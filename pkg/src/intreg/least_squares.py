"""Least-squares estimation of the interval regression model.

The centered objective separates: the midpoint block is an ordinary
least-squares problem, while the spread block is a convex quadratic program
over the feasible cone (nonnegative coefficients, fitted spreads dominated
by observed spreads) solved exactly through the complementarity machinery.
The interval intercept is recovered last as the Hukuhara difference between
the mean response and the mean fitted part.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .design import Coefficients, DesignSystem
from .errors import LengthMismatch
from .intervals import DEFAULT_TAU, Interval, hukuhara_diff, validate_tau
from .lcp import Qp, _solve_qp_full

METHOD_LS = "ls"
METHOD_LASSO = "lasso"
METHOD_LASSO_IR = "lasso-ir"

# spread coefficients within this relative distance of zero are snapped to
# exact zeros; complementary pivoting resolves active bounds to far better
# than this
_ZERO_SNAP = 1e-10


@dataclass
class FitResult:
    """A fitted model: coefficients, selection parameters and diagnostics."""

    coefficients: Coefficients
    method: str
    lambda_mid: float = 0.0
    lambda_spr: float = 0.0
    t_budget: float = 0.0
    fitted: list[Interval] = field(default_factory=list)
    mse: float = 0.0
    diagnostics: dict[str, float] = field(default_factory=dict)


def _msd_arrays(dm: np.ndarray, ds: np.ndarray, tau: float) -> float:
    return float(np.mean((1.0 - tau) * dm**2 + tau * ds**2))


def mean_squared_dtau(y: Sequence[Interval], y_hat: Sequence[Interval], tau: float = DEFAULT_TAU) -> float:
    """Mean squared weighted distance between observed and fitted intervals."""
    tau = validate_tau(tau)
    if len(y) != len(y_hat):
        raise LengthMismatch(f"got {len(y)} observed but {len(y_hat)} fitted intervals")
    dm = np.array([a.mid - b.mid for a, b in zip(y, y_hat)])
    ds = np.array([a.spr - b.spr for a, b in zip(y, y_hat)])
    return _msd_arrays(dm, ds, tau)


def mean_squared_unweighted(y: Sequence[Interval], y_hat: Sequence[Interval]) -> float:
    """Mean of squared midpoint plus squared spread residuals (no weights)."""
    if len(y) != len(y_hat):
        raise LengthMismatch(f"got {len(y)} observed but {len(y_hat)} fitted intervals")
    dm = np.array([a.mid - b.mid for a, b in zip(y, y_hat)])
    ds = np.array([a.spr - b.spr for a, b in zip(y, y_hat)])
    return float(np.mean(dm**2 + ds**2))


def ols_mid(design: DesignSystem) -> tuple[np.ndarray, int]:
    """Minimum-norm least squares for the midpoint block; returns (coefs, rank)."""
    a, _, rank, _ = np.linalg.lstsq(design.fm, design.vm, rcond=None)
    return a, int(rank)


def spread_qp(design: DesignSystem, tau: float, lam: float = 0.0) -> Qp:
    """The spread-block QP at weight ``tau`` with an optional linear L1 term.

    On the feasible cone every coefficient is nonnegative, so an L1 penalty
    is the linear term ``lam * sum(a)``; with ``lam = 0`` this is the plain
    least-squares spread problem scaled by ``2 tau``.
    """
    fs = design.fs
    scale = 2.0 * tau if lam == 0.0 else 1.0
    Q = scale * (fs.T @ fs)
    c = -scale * (fs.T @ design.vs) + lam
    R, r = design.spread_constraints()
    return Qp(Q, c, R, r)


def _snap_spread(a_s: np.ndarray) -> np.ndarray:
    tol = _ZERO_SNAP * (1.0 + float(np.max(np.abs(a_s), initial=0.0)))
    out = a_s.copy()
    out[np.abs(out) <= tol] = 0.0
    return np.maximum(out, 0.0)


def solve_spread_block(design: DesignSystem, tau: float, lam: float = 0.0) -> tuple[np.ndarray, dict]:
    """Spread-block solution under the feasibility cone, with diagnostics."""
    qp = spread_qp(design, tau, lam)
    if float(np.trace(qp.Q)) == 0.0:
        # no spread signal at all: the objective is constant (or linear with
        # nonnegative slope) over the cone, and zero is always feasible
        w = design.block_width
        return np.zeros(w), {"ridge_used": 0.0, "lemke_pivots": 0.0,
                             "kkt_stationarity": 0.0, "kkt_feasibility": 0.0,
                             "kkt_complementarity": 0.0}
    a_s, _, info = _solve_qp_full(qp)
    return _snap_spread(a_s), info


def estimate_intercept(design: DesignSystem, coefs: Coefficients) -> Interval:
    """Hukuhara difference between the mean response and the mean fitted part.

    Exists whenever the spread constraints hold on average, which every
    feasible fit guarantees.
    """
    a_m = coefs.mid_stack(design.variant)
    a_s = coefs.spread_stack(design.variant)
    mean_fitted = Interval(
        float(design.mean_mid_xebl @ a_m),
        max(0.0, float(design.mean_spr_xebl @ a_s)),
    )
    return hukuhara_diff(design.mean_y, mean_fitted)


def fitted_intervals(design: DesignSystem, a_m: np.ndarray, a_s: np.ndarray) -> list[Interval]:
    """Fitted intervals over the training rows, intercept included."""
    mid_hat = design.fm @ a_m + design.mean_y.mid
    spr_hat = design.fs @ a_s + design.mean_y.spr
    return [Interval(m, max(0.0, s)) for m, s in zip(mid_hat, spr_hat)]


def fit_ls(design: DesignSystem, tau: float = DEFAULT_TAU) -> FitResult:
    """Least-squares fit of both blocks plus the interval intercept.

    A rank-deficient midpoint design is absorbed by the minimum-norm
    solution and reported through the ``degenerate_design`` diagnostic.
    """
    tau = validate_tau(tau)
    a_m, rank = ols_mid(design)
    a_s, info = solve_spread_block(design, tau)
    diagnostics = dict(info)
    diagnostics["fm_rank"] = float(rank)
    diagnostics["degenerate_design"] = float(rank < design.block_width)
    coefs = Coefficients.from_blocks(a_m, a_s, Interval(0.0, 0.0), design.variant, design.k)
    coefs = coefs.with_delta(estimate_intercept(design, coefs))
    fitted = fitted_intervals(design, a_m, a_s)
    mse = _msd_arrays(design.vm - design.fm @ a_m, design.vs - design.fs @ a_s, tau)
    return FitResult(
        coefficients=coefs,
        method=METHOD_LS,
        fitted=fitted,
        mse=mse,
        diagnostics=diagnostics,
    )
