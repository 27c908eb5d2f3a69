"""Fixed-step integration and empirical convergence order.

The symbolic side never touches floating point; here every tableau entry
is converted to binary64 once, when the integration starts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from .tableau import ButcherTableau

ROUNDING_FLOOR = 1e-12


class DivergedError(ArithmeticError):
    """The numerical state became non-finite."""

    def __init__(self, step: int, value: float):
        self.step = step
        self.value = value
        super().__init__(f"integration diverged at step {step} (y = {value})")


@dataclass(frozen=True)
class TestProblem:
    name: str
    f: Callable[[float, float], float]
    x0: float
    y0: float
    x_end: float
    exact: Callable[[float], float]
    description: str = ""

    __test__ = False  # not a pytest class

    @property
    def span(self) -> float:
        return self.x_end - self.x0

    def check_exact(self, points: int = 5, eps: float = 1e-5, tol: float = 1e-6) -> float:
        """Largest central-difference defect of the exact solution (should be ~0)."""
        worst = 0.0
        for k in range(1, points + 1):
            x = self.x0 + self.span * k / (points + 1)
            dy = (self.exact(x + eps) - self.exact(x - eps)) / (2 * eps)
            worst = max(worst, abs(dy - self.f(x, self.exact(x))))
        if worst > tol:
            raise AssertionError(f"{self.name}: exact solution defect {worst:g}")
        return worst


PROBLEMS: Dict[str, TestProblem] = {
    "exp": TestProblem("exp", lambda x, y: y, 0.0, 1.0, 1.0, math.exp, "y' = y, y(0) = 1"),
    "linear": TestProblem("linear", lambda x, y: x + y, 0.0, 1.0, 1.0,
                          lambda x: 2 * math.exp(x) - x - 1, "y' = x + y, y(0) = 1"),
    "riccati": TestProblem("riccati", lambda x, y: -y * y, 0.0, 1.0, 1.0,
                           lambda x: 1 / (1 + x), "y' = -y^2, y(0) = 1"),
}


def get_problem(name: str) -> TestProblem:
    if name not in PROBLEMS:
        raise KeyError(f"unknown problem {name!r}; known: {', '.join(PROBLEMS)}")
    return PROBLEMS[name]


def _steps(prob: TestProblem, h) -> int:
    span = Fraction(prob.span).limit_denominator(10 ** 12)
    n = span / Fraction(h)
    if n.denominator != 1 or n <= 0:
        raise ValueError(f"step {h} does not divide the interval [{prob.x0}, {prob.x_end}]")
    return int(n)


def integrate(t: ButcherTableau, prob: TestProblem, h, weights: Optional[Tuple] = None) -> float:
    """Approximate ``y(x_end)`` with ``(x_end - x0)/h`` explicit RK steps.

    ``h`` may be a Fraction or a string ``"p/q"``; it must divide the
    interval exactly.
    """
    if isinstance(h, str):
        h = Fraction(h)
    n = _steps(prob, h)
    hf = float(h)
    s = t.s
    c = [float(x) for x in t.c]
    a = [[float(x) for x in row] for row in t.a]
    b = [float(x) for x in (weights if weights is not None else t.b)]
    f = prob.f
    x, y = prob.x0, prob.y0
    k = [0.0] * s
    for step in range(1, n + 1):
        for i in range(s):
            yi = y + hf * sum(a[i][j] * k[j] for j in range(i))
            k[i] = f(x + c[i] * hf, yi)
        y = y + hf * sum(bi * ki for bi, ki in zip(b, k))
        x = prob.x0 + step * hf
        if not math.isfinite(y):
            raise DivergedError(step, y)
    return y


@dataclass(frozen=True)
class ConvergenceReport:
    problem: str
    label: str
    levels: Tuple[Tuple[float, float], ...]
    observed: float
    nominal: Optional[int]
    floored: Tuple[bool, ...]
    rates: Tuple[float, ...]

    def __str__(self):
        lines = [f"problem {self.problem}, method {self.label or '?'}"
                 + (f", nominal order {self.nominal}" if self.nominal is not None else "")]
        lines.append(f"{'h':>12} {'error':>12} {'rate':>7}")
        for i, (h, e) in enumerate(self.levels):
            rate = f"{self.rates[i - 1]:7.3f}" if i and i - 1 < len(self.rates) else " " * 7
            flag = "  (rounding floor)" if self.floored[i] else ""
            lines.append(f"{h:12.6g} {e:12.4e} {rate}{flag}")
        lines.append(f"observed order {self.observed:.3f}")
        return "\n".join(lines)


def estimate_order(t: ButcherTableau, prob: TestProblem, h0, levels: int = 5,
                   weights: Optional[Tuple] = None) -> ConvergenceReport:
    """Global errors at ``h0 / 2**i`` for ``i < levels`` and the mean log2 ratio.

    Levels whose error is under the rounding floor are left out of the fit.
    """
    if levels < 3:
        raise ValueError("levels must be at least 3")
    h0 = Fraction(h0) if not isinstance(h0, float) else Fraction(h0).limit_denominator(10 ** 9)
    exact = prob.exact(prob.x_end)
    rows: List[Tuple[float, float]] = []
    for i in range(levels):
        h = h0 / 2 ** i
        rows.append((float(h), abs(integrate(t, prob, h, weights) - exact)))
    floored = tuple(e < ROUNDING_FLOOR for _, e in rows)
    rates = []
    for i in range(levels - 1):
        if not (floored[i] or floored[i + 1]):
            rates.append(math.log2(rows[i][1] / rows[i + 1][1]))
    observed = sum(rates) / len(rates) if rates else float("nan")
    return ConvergenceReport(prob.name, t.label, tuple(rows), observed, t.order, floored, tuple(rates))
