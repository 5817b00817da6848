"""Base states about which the auxiliary potential is centred."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = ["PiecewiseLinear", "BaseState", "DynamicBaseState", "derivative_mismatch"]


class PiecewiseLinear:
    """Continuous piecewise-linear function given by breakpoints and values.

    Calling it evaluates the function; :meth:`slope` evaluates its derivative
    (right-continuous at breakpoints). Outside the breakpoint range the end
    segments are extended linearly.
    """

    def __init__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.ndim != 1 or x.shape != y.shape or x.size < 2:
            raise ValueError("need matching 1-D breakpoint and value arrays of length >= 2")
        if np.any(np.diff(x) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        self.x = x
        self.y = y
        self.slopes = np.diff(y) / np.diff(x)

    @classmethod
    def from_slopes(cls, breakpoints, slopes, y0=0.0):
        """Integrate piecewise-constant ``slopes`` on ``breakpoints`` starting from ``y0``."""
        breakpoints = np.asarray(breakpoints, dtype=float)
        slopes = np.asarray(slopes, dtype=float)
        if slopes.size != breakpoints.size - 1:
            raise ValueError("need one slope per segment")
        y = y0 + np.concatenate([[0.0], np.cumsum(slopes * np.diff(breakpoints))])
        return cls(breakpoints, y)

    def _segment(self, x):
        k = np.searchsorted(self.x, x, side="right") - 1
        return np.clip(k, 0, self.slopes.size - 1)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        k = self._segment(x)
        return self.y[k] + self.slopes[k] * (x - self.x[k])

    def slope(self, x):
        return self.slopes[self._segment(np.asarray(x, dtype=float))]


@dataclass
class BaseState:
    """Static base state: ``u_bar(x)`` and ``e_bar(x)``."""

    u_bar: Callable
    e_bar: Callable
    label: str = ""

    @classmethod
    def from_piecewise(cls, pl: PiecewiseLinear, label=""):
        return cls(u_bar=pl, e_bar=pl.slope, label=label)


@dataclass
class DynamicBaseState:
    """Space-time base state: ``v_bar(x, t)`` and ``e_bar(x, t)``."""

    v_bar: Callable
    e_bar: Callable
    label: str = ""

    @classmethod
    def steady(cls, e_of_x, v_of_x=None, label=""):
        """Base state constant in time."""
        if v_of_x is None:
            return cls(lambda x, t: np.zeros(np.broadcast(x, t).shape), lambda x, t: e_of_x(x) + 0.0 * t, label)
        return cls(lambda x, t: v_of_x(x) + 0.0 * t, lambda x, t: e_of_x(x) + 0.0 * t, label)


def derivative_mismatch(base: BaseState, x, h=1e-3):
    """Max of ``|e_bar - d u_bar / dx|`` at ``x`` by a 4th-order central stencil.

    Points within ``2 h`` of a kink of a :class:`PiecewiseLinear` ``u_bar``
    are skipped since the stencil straddles the kink there.
    """
    x = np.asarray(x, dtype=float)
    if isinstance(base.u_bar, PiecewiseLinear):
        kinks = base.u_bar.x
        keep = np.min(np.abs(x[:, None] - kinks[None, :]), axis=1) > 2 * h
        x = x[keep]
    u = base.u_bar
    du = (-u(x + 2 * h) + 8 * u(x + h) - 8 * u(x - h) + u(x - 2 * h)) / (12 * h)
    return float(np.max(np.abs(du - base.e_bar(x)))) if x.size else 0.0
