"""Lemke complementary pivoting for linear complementarity problems and the
reduction of inequality-constrained convex quadratic programs to LCP form.

A quadratic program

    min 1/2 z'Qz + c'z   subject to   Rz >= r

with positive definite Q has Karush-Kuhn-Tucker conditions that are exactly
the complementarity system

    w = M lam + q,   w >= 0,  lam >= 0,  w'lam = 0,

with M = R Q^{-1} R' and q = -R Q^{-1} c - r.  Given the multipliers, the
primal solution is z = Q^{-1}(R' lam - c).

Pivot selection is lexicographic, which rules out cycling on degenerate
tableaus.  A solved basis is re-solved directly against (M, q) before the
solution is returned, so the reported values do not carry accumulated
elimination error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import solve_triangular

from .errors import InfeasibleQp, PivotLimitExceeded, SingularQ

# relative ridge added to Q before factorization; reported in diagnostics
RIDGE_EPS = 1e-10

# smallest tableau entry accepted as a pivot
PIVOT_EPS = 1e-11

SOLVED = "solved"
RAY_TERMINATION = "ray-termination"


@dataclass(frozen=True)
class Qp:
    """min 1/2 z'Qz + c'z subject to Rz >= r."""

    Q: np.ndarray
    c: np.ndarray
    R: np.ndarray
    r: np.ndarray

    def __post_init__(self):
        Q = np.atleast_2d(np.asarray(self.Q, dtype=float))
        c = np.atleast_1d(np.asarray(self.c, dtype=float))
        R = np.asarray(self.R, dtype=float)
        if R.size == 0:
            R = R.reshape(0, Q.shape[0])
        R = np.atleast_2d(R)
        rr = np.atleast_1d(np.asarray(self.r, dtype=float))
        if rr.size == 0:
            rr = rr.reshape(0)
        m = Q.shape[0]
        if Q.shape != (m, m) or c.shape != (m,):
            raise ValueError("Q must be square and c must match its size")
        if R.shape[1] != m or rr.shape != (R.shape[0],):
            raise ValueError("constraint system shapes are inconsistent")
        scale = max(1.0, float(np.max(np.abs(Q), initial=0.0)))
        if float(np.max(np.abs(Q - Q.T), initial=0.0)) > 1e-10 * scale:
            raise ValueError("Q must be symmetric")
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "r", rr)

    @property
    def num_vars(self) -> int:
        return self.Q.shape[0]

    @property
    def num_constraints(self) -> int:
        return self.R.shape[0]

    def objective(self, z: np.ndarray) -> float:
        z = np.asarray(z, dtype=float)
        return float(0.5 * z @ self.Q @ z + self.c @ z)


@dataclass(frozen=True)
class Lcp:
    """Find z, w >= 0 with w = M z + q and z'w = 0."""

    M: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        M = np.atleast_2d(np.asarray(self.M, dtype=float))
        q = np.atleast_1d(np.asarray(self.q, dtype=float))
        if M.shape != (q.size, q.size):
            raise ValueError("M must be square with one row per entry of q")
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "q", q)

    @property
    def dim(self) -> int:
        return self.q.size


@dataclass
class LcpSolution:
    z: np.ndarray
    w: np.ndarray
    status: str
    pivots: int
    visited_bases: Optional[list] = None


def _ridge_factor(Q: np.ndarray) -> tuple[np.ndarray, float]:
    """Cholesky factor of Q plus a tiny relative ridge; raises when singular."""
    m = Q.shape[0]
    ridge = RIDGE_EPS * float(np.trace(Q)) / m if m else 0.0
    try:
        L = np.linalg.cholesky(Q + ridge * np.eye(m))
    except np.linalg.LinAlgError:
        raise SingularQ("quadratic form is singular beyond the regularization threshold") from None
    return L, ridge


def _chol_solve(L: np.ndarray, b: np.ndarray) -> np.ndarray:
    y = solve_triangular(L, b, lower=True)
    return solve_triangular(L.T, y, lower=False)


def qp_to_lcp(qp: Qp) -> Lcp:
    """Reduce a constrained QP to its multiplier complementarity system."""
    L, _ = _ridge_factor(qp.Q)
    qiR = _chol_solve(L, qp.R.T)
    M = qp.R @ qiR
    M = 0.5 * (M + M.T)
    q = -(qp.R @ _chol_solve(L, qp.c)) - qp.r
    return Lcp(M, q)


def _lexico_min_row(T: np.ndarray, rows: np.ndarray, lex_cols: np.ndarray, piv: Optional[np.ndarray]) -> int:
    """Row whose (rhs, identity-block) vector is lexicographically smallest.

    When ``piv`` is given each row's vector is divided by its pivot entry
    first, which is the classic lexicographic minimum-ratio test.
    """
    vals = T[np.ix_(rows, lex_cols)]
    if piv is not None:
        vals = vals / piv[:, None]
    order = np.lexsort(tuple(vals[:, j] for j in range(vals.shape[1] - 1, -1, -1)))
    return int(rows[order[0]])


def _pivot(T: np.ndarray, row: int, col: int) -> None:
    T[row] = T[row] / T[row, col]
    col_vals = T[:, col].copy()
    col_vals[row] = 0.0
    T -= np.outer(col_vals, T[row])
    T[:, col] = 0.0
    T[row, col] = 1.0


def _candidate_score(M: np.ndarray, q: np.ndarray, z: np.ndarray) -> float:
    w = M @ z + q
    neg = max(0.0, -float(np.min(z, initial=0.0)), -float(np.min(w, initial=0.0)))
    comp = float(np.max(np.abs(z * w), initial=0.0))
    return max(neg, comp)


def _extract_solution(M: np.ndarray, q: np.ndarray, basis: np.ndarray, rhs_vals: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d = q.size
    z = np.zeros(d)
    for i, var in enumerate(basis):
        if var >= d:
            z[var - d] = rhs_vals[i]
    z = np.maximum(z, 0.0)
    # re-solve the complementary basis directly to purge elimination error
    active = np.flatnonzero(z > 0.0)
    if active.size:
        sub = M[np.ix_(active, active)]
        try:
            refined = np.linalg.solve(sub, -q[active])
        except np.linalg.LinAlgError:
            refined = None
        if refined is not None and np.all(np.isfinite(refined)) and np.min(refined) > -1e-9:
            cand = np.zeros(d)
            cand[active] = np.maximum(refined, 0.0)
            if _candidate_score(M, q, cand) <= _candidate_score(M, q, z):
                z = cand
    return z, M @ z + q


def lemke_solve(lcp: Lcp, max_pivots: Optional[int] = None, track_bases: bool = False) -> LcpSolution:
    """Solve an LCP by complementary pivoting with lexicographic tie-breaking.

    Returns a solution with status ``solved``, or ``ray-termination`` when
    the covering ray escapes (for the PSD systems produced by ``qp_to_lcp``
    this certifies an empty constraint set).  Raises
    :class:`PivotLimitExceeded` when the pivot budget, 50 per dimension by
    default, runs out.
    """
    M, q = lcp.M, lcp.q
    d = lcp.dim
    if max_pivots is None:
        max_pivots = 50 * max(d, 1)
    visited = [] if track_bases else None
    if d == 0 or float(np.min(q, initial=0.0)) >= 0.0:
        return LcpSolution(np.zeros(d), q.copy(), SOLVED, 0, visited)

    # column ids: w_i -> i, z_i -> d + i, artificial covering variable -> 2d
    art = 2 * d
    rhs = 2 * d + 1
    T = np.empty((d, 2 * d + 2))
    T[:, :d] = np.eye(d)
    T[:, d : 2 * d] = -M
    T[:, art] = -1.0
    T[:, rhs] = q
    basis = np.arange(d)
    lex_cols = np.concatenate(([rhs], np.arange(d)))

    # initial pivot: the artificial variable enters against the row with the
    # lexicographically smallest (most negative) right-hand side
    row = _lexico_min_row(T, np.arange(d), lex_cols, None)
    _pivot(T, row, art)
    leaving = int(basis[row])
    basis[row] = art
    if track_bases:
        visited.append(frozenset(basis.tolist()))
    entering = leaving + d if leaving < d else leaving - d
    pivots = 1

    while True:
        col = T[:, entering]
        eligible = np.flatnonzero(col > PIVOT_EPS)
        if eligible.size == 0:
            return LcpSolution(np.zeros(d), q.copy(), RAY_TERMINATION, pivots, visited)
        if pivots >= max_pivots:
            raise PivotLimitExceeded(f"no termination within {max_pivots} pivots")
        row = _lexico_min_row(T, eligible, lex_cols, col[eligible])
        _pivot(T, row, entering)
        pivots += 1
        leaving = int(basis[row])
        basis[row] = entering
        if track_bases:
            visited.append(frozenset(basis.tolist()))
        if leaving == art:
            z, w = _extract_solution(M, q, basis, T[:, rhs])
            return LcpSolution(z, w, SOLVED, pivots, visited)
        entering = leaving + d if leaving < d else leaving - d


def _constraints_feasible(R: np.ndarray, r: np.ndarray) -> bool:
    from scipy.optimize import linprog

    res = linprog(
        np.zeros(R.shape[1]),
        A_ub=-R,
        b_ub=-(r - 1e-9),
        bounds=[(None, None)] * R.shape[1],
        method="highs",
    )
    return res.status != 2


def _kkt_score(qp: Qp, z: np.ndarray, lam: np.ndarray) -> float:
    grad = qp.Q @ z + qp.c
    if qp.num_constraints:
        grad = grad - qp.R.T @ lam
        slack = qp.R @ z - qp.r
        feas = max(0.0, -float(np.min(slack, initial=0.0)))
        comp = float(np.max(np.abs(lam * slack), initial=0.0))
    else:
        feas = comp = 0.0
    neg = max(0.0, -float(np.min(lam, initial=0.0)))
    return max(float(np.max(np.abs(grad), initial=0.0)), feas, comp, neg)


def _polish_active_set(qp: Qp, lam: np.ndarray) -> Optional[tuple[np.ndarray, np.ndarray]]:
    """Re-solve the KKT equality system of the multiplier-identified active set.

    Pivoting works against the ridge-regularized Hessian; resolving the final
    active set against the original one removes both the ridge bias and any
    conditioning loss from the multiplier-space reduction.  Returns None when
    the system is inconsistent or the multiplier signs reject the active set.
    """
    scale = 1.0 + float(np.max(np.abs(lam), initial=0.0))
    active = np.flatnonzero(lam > 1e-10 * scale)
    m = qp.num_vars
    s = active.size
    kkt = np.zeros((m + s, m + s))
    kkt[:m, :m] = qp.Q
    if s:
        A = qp.R[active]
        kkt[:m, m:] = A.T
        kkt[m:, :m] = A
    rhs = np.concatenate([-qp.c, qp.r[active]])
    sol, _, _, _ = np.linalg.lstsq(kkt, rhs, rcond=None)
    if not np.all(np.isfinite(sol)):
        return None
    if float(np.max(np.abs(kkt @ sol - rhs))) > 1e-8 * (1.0 + float(np.max(np.abs(rhs), initial=0.0))):
        return None
    z = sol[:m]
    lam_full = np.zeros(qp.num_constraints)
    lam_full[active] = -sol[m:]
    if float(np.min(lam_full, initial=0.0)) < -1e-8 * scale:
        return None
    return z, np.maximum(lam_full, 0.0)


def _solve_qp_full(qp: Qp, max_pivots: Optional[int] = None) -> tuple[np.ndarray, np.ndarray, dict]:
    """Primal solution, multipliers and solver diagnostics for a QP."""
    L, ridge = _ridge_factor(qp.Q)
    info = {"ridge_used": float(ridge), "lemke_pivots": 0.0}
    if qp.num_constraints == 0:
        z = _chol_solve(L, -qp.c)
        lam = np.zeros(0)
    else:
        qiR = _chol_solve(L, qp.R.T)
        M = qp.R @ qiR
        M = 0.5 * (M + M.T)
        q = -(qp.R @ _chol_solve(L, qp.c)) - qp.r
        sol = lemke_solve(Lcp(M, q), max_pivots)
        info["lemke_pivots"] = float(sol.pivots)
        if sol.status != SOLVED:
            if not _constraints_feasible(qp.R, qp.r):
                raise InfeasibleQp("constraint system is empty")
            raise ArithmeticError("complementary pivoting ray-terminated on a feasible program")
        lam = sol.z
        z = _chol_solve(L, qp.R.T @ lam - qp.c)
        polished = _polish_active_set(qp, lam)
        if polished is not None and _kkt_score(qp, *polished) <= _kkt_score(qp, z, lam):
            z, lam = polished
    grad = qp.Q @ z + qp.c
    if qp.num_constraints:
        grad = grad - qp.R.T @ lam
        slack = qp.R @ z - qp.r
        info["kkt_feasibility"] = max(0.0, -float(np.min(slack, initial=0.0)))
        info["kkt_complementarity"] = float(np.max(np.abs(lam * slack), initial=0.0))
    else:
        info["kkt_feasibility"] = 0.0
        info["kkt_complementarity"] = 0.0
    info["kkt_stationarity"] = float(np.max(np.abs(grad), initial=0.0))
    return z, lam, info


def solve_qp(qp: Qp, max_pivots: Optional[int] = None) -> np.ndarray:
    """Minimizer of an inequality-constrained convex QP via Lemke pivoting.

    Raises :class:`InfeasibleQp` when pivoting ray-terminates and an
    independent linear-programming probe confirms the constraint set is
    empty.
    """
    return _solve_qp_full(qp, max_pivots)[0]
