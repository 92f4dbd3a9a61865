"""Interval values in midpoint/radius form, with the weighted L2 metric and
the sample moments the estimators are written in.

Every value is immutable after construction and every operation is a pure
function, so the whole module is safe for unrestricted concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptySample, LengthMismatch, NotHukuharaDecomposable

DEFAULT_TAU = 0.5

# slack for the radius precondition of the Hukuhara difference; absorbs
# roundoff carried in from solver output
_HUKUHARA_SLACK = 1e-12


def validate_tau(tau: float) -> float:
    """Return ``tau`` as a float, rejecting values outside the open unit interval."""
    tau = float(tau)
    if not (0.0 < tau < 1.0):
        raise ValueError(f"tau must lie strictly between 0 and 1, got {tau}")
    return tau


@dataclass(frozen=True)
class Interval:
    """A compact real interval parametrized by midpoint and spread (radius).

    The spread is never negative.  Endpoints are a derived view:
    ``inf = mid - spr`` and ``sup = mid + spr``.
    """

    mid: float
    spr: float

    def __post_init__(self):
        mid = float(self.mid)
        spr = float(self.spr)
        if not (math.isfinite(mid) and math.isfinite(spr)):
            raise ValueError("interval components must be finite")
        if spr < 0.0:
            raise ValueError(f"spread must be nonnegative, got {spr}")
        object.__setattr__(self, "mid", mid)
        object.__setattr__(self, "spr", spr)

    @classmethod
    def from_endpoints(cls, inf: float, sup: float) -> "Interval":
        inf = float(inf)
        sup = float(sup)
        if inf > sup:
            raise ValueError(f"lower endpoint {inf} exceeds upper endpoint {sup}")
        return cls((sup + inf) / 2.0, (sup - inf) / 2.0)

    @property
    def inf(self) -> float:
        return self.mid - self.spr

    @property
    def sup(self) -> float:
        return self.mid + self.spr

    def endpoints(self) -> tuple[float, float]:
        return self.inf, self.sup

    def __str__(self) -> str:
        return f"[{self.inf:.6g}, {self.sup:.6g}]"


def add_scaled(a: Interval, delta: float, b: Interval) -> Interval:
    """Minkowski combination ``a + delta * b``.

    The midpoints combine linearly while the spreads combine through the
    absolute scale factor, so the result is always a valid interval.
    """
    delta = float(delta)
    return Interval(a.mid + delta * b.mid, a.spr + abs(delta) * b.spr)


def hukuhara_diff(a: Interval, b: Interval) -> Interval:
    """The interval ``c`` with ``b + c = a``.

    Exists only when ``b`` is no wider than ``a``; otherwise the residual is
    ill-defined and :class:`NotHukuharaDecomposable` is raised.
    """
    slack = _HUKUHARA_SLACK * max(1.0, a.spr)
    if b.spr > a.spr + slack:
        raise NotHukuharaDecomposable(
            f"spread {b.spr} of the subtrahend exceeds spread {a.spr} of the minuend"
        )
    return Interval(a.mid - b.mid, max(0.0, a.spr - b.spr))


def dtau(a: Interval, b: Interval, tau: float = DEFAULT_TAU) -> float:
    """Weighted L2 distance between two intervals.

    Squared midpoint and spread differences are combined with weights
    ``1 - tau`` and ``tau``.
    """
    tau = validate_tau(tau)
    dm = a.mid - b.mid
    ds = a.spr - b.spr
    return math.sqrt((1.0 - tau) * dm * dm + tau * ds * ds)


def aumann_mean(intervals: Sequence[Interval]) -> Interval:
    """Componentwise sample mean: mean of midpoints, mean of spreads."""
    n = len(intervals)
    if n == 0:
        raise EmptySample("cannot average an empty sequence of intervals")
    mid = sum(iv.mid for iv in intervals) / n
    spr = sum(iv.spr for iv in intervals) / n
    return Interval(mid, spr)


def dtau_covariance(u: Sequence[Interval], v: Sequence[Interval], tau: float = DEFAULT_TAU) -> float:
    """Weighted covariance of two interval samples.

    Combines the classical covariance of the midpoints and the classical
    covariance of the spreads with weights ``1 - tau`` and ``tau``.  Sample
    covariances use divisor ``n``.
    """
    tau = validate_tau(tau)
    if len(u) != len(v):
        raise LengthMismatch(f"samples have lengths {len(u)} and {len(v)}")
    n = len(u)
    if n < 2:
        raise EmptySample("covariance needs at least two observations")
    mid_u = np.array([iv.mid for iv in u])
    mid_v = np.array([iv.mid for iv in v])
    spr_u = np.array([iv.spr for iv in u])
    spr_v = np.array([iv.spr for iv in v])
    cov_mid = float(np.mean((mid_u - mid_u.mean()) * (mid_v - mid_v.mean())))
    cov_spr = float(np.mean((spr_u - spr_u.mean()) * (spr_v - spr_v.mean())))
    return (1.0 - tau) * cov_mid + tau * cov_spr


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


class IntervalSample:
    """``n`` observations of a response interval and ``k`` regressor intervals.

    Data are held as read-only float arrays in mid/spr form; interval views
    are constructed on demand.
    """

    def __init__(self, mid_y, spr_y, mid_x, spr_x, variable_names=None):
        mid_y = _readonly(mid_y)
        spr_y = _readonly(spr_y)
        mid_x = _readonly(mid_x)
        spr_x = _readonly(spr_x)
        if mid_y.ndim != 1 or spr_y.shape != mid_y.shape:
            raise ValueError("response arrays must be 1-d and equally shaped")
        if mid_x.ndim != 2 or spr_x.shape != mid_x.shape:
            raise ValueError("regressor arrays must be 2-d and equally shaped")
        n, k = mid_x.shape
        if n != mid_y.size:
            raise ValueError(f"{mid_y.size} responses but {n} regressor rows")
        if n < 1 or k < 1:
            raise ValueError("need at least one observation and one regressor")
        if not (np.all(np.isfinite(mid_y)) and np.all(np.isfinite(mid_x))):
            raise ValueError("midpoints must be finite")
        if np.any(spr_y < 0.0) or np.any(spr_x < 0.0) or not (
            np.all(np.isfinite(spr_y)) and np.all(np.isfinite(spr_x))
        ):
            raise ValueError("spreads must be finite and nonnegative")
        if variable_names is None:
            variable_names = ["y"] + [f"x{i + 1}" for i in range(k)]
        variable_names = [str(s) for s in variable_names]
        if len(variable_names) != k + 1:
            raise ValueError(f"expected {k + 1} variable names, got {len(variable_names)}")
        self.mid_y = mid_y
        self.spr_y = spr_y
        self.mid_x = mid_x
        self.spr_x = spr_x
        self.variable_names = tuple(variable_names)

    @classmethod
    def from_intervals(cls, y: Sequence[Interval], x: Sequence[Sequence[Interval]], variable_names=None):
        if len(y) == 0:
            raise ValueError("need at least one observation")
        if len(x) != len(y):
            raise ValueError("response and regressor grids have different lengths")
        widths = {len(row) for row in x}
        if len(widths) != 1:
            raise ValueError("all regressor rows must have the same number of variables")
        mid_y = [iv.mid for iv in y]
        spr_y = [iv.spr for iv in y]
        mid_x = [[iv.mid for iv in row] for row in x]
        spr_x = [[iv.spr for iv in row] for row in x]
        return cls(mid_y, spr_y, mid_x, spr_x, variable_names)

    @property
    def n(self) -> int:
        return self.mid_y.size

    @property
    def k(self) -> int:
        return self.mid_x.shape[1]

    def y_list(self) -> list[Interval]:
        return [Interval(m, s) for m, s in zip(self.mid_y, self.spr_y)]

    def x_row(self, j: int) -> list[Interval]:
        return [Interval(m, s) for m, s in zip(self.mid_x[j], self.spr_x[j])]

    def subset(self, rows: Iterable[int]) -> "IntervalSample":
        idx = np.asarray(list(rows), dtype=int)
        return IntervalSample(
            self.mid_y[idx],
            self.spr_y[idx],
            self.mid_x[idx],
            self.spr_x[idx],
            self.variable_names,
        )

    def __repr__(self) -> str:
        return f"IntervalSample(n={self.n}, k={self.k})"
