"""Central differences with Richardson extrapolation."""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConvergenceError

# relative steps for the omegaL derivative, in units of E/hbar
DEFAULT_STEPS = (1e-3, 5e-4, 2.5e-4)
DEFAULT_RTOL = 1e-7


@dataclass(frozen=True)
class DerivativeEstimate:
    value: float
    error: float
    table: list = field(default_factory=list, repr=False)

    def converged(self, rtol: float, atol: float = 0.0) -> bool:
        return self.error <= rtol * abs(self.value) + atol


def central_difference(f, x0: float, h: float) -> float:
    return (f(x0 + h) - f(x0 - h)) / (2.0 * h)


def richardson_derivative(f, x0: float = 0.0, steps=DEFAULT_STEPS) -> DerivativeEstimate:
    """Derivative of ``f`` at ``x0`` from central differences on ``steps``.

    ``steps`` must halve successively; each Richardson level removes the next
    even power of h.  ``error`` is the gap between the last two estimates at
    the second-highest level.
    """
    steps = list(steps)
    if len(steps) < 2:
        raise ValueError("need at least two steps")
    for a, b in zip(steps, steps[1:]):
        if abs(a / b - 2.0) > 1e-9:
            raise ValueError(f"steps must halve successively, got {steps}")
    rows = []
    for i, h in enumerate(steps):
        row = [central_difference(f, x0, h)]
        for j in range(1, i + 1):
            fac = 4.0 ** j
            row.append(row[j - 1] + (row[j - 1] - rows[i - 1][j - 1]) / (fac - 1.0))
        rows.append(row)
    best = rows[-1][-1]
    n = len(steps)
    err = abs(rows[-1][n - 2] - rows[-2][n - 2])
    return DerivativeEstimate(float(best), float(err), rows)


def checked_derivative(f, x0=0.0, steps=DEFAULT_STEPS, rtol=DEFAULT_RTOL, atol=0.0, what="derivative"):
    est = richardson_derivative(f, x0, steps)
    if not est.converged(rtol, atol):
        raise ConvergenceError(
            f"{what}: Richardson estimates disagree by {est.error:.3e} (value {est.value:.6e}, rtol {rtol:g})",
            [row[-1] for row in est.table])
    return est
