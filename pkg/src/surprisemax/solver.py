"""Closed-form surprise-maximizing schedules by backward induction.

Spreading one unit of probability over days ``1..m`` to maximize expected
realized surprise decomposes day by day.  With mass ``r`` still unassigned
at day ``j``, putting ``x`` on day ``j`` contributes ``x log x - x log r``
to the reduced score and leaves the subproblem on days ``j+1..m`` with mass
``r - x``.  Writing ``V_j(r)`` for the best (lowest) reduced score still
attainable from day ``j``, the recursion is

    V_j(r) = opt over 0 <= x <= r of  x log x - x log r + V_{j+1}(r - x),
    V_m(r) = 0,

where the selected ``x`` is the unique interior stationary point, the one
that maximizes the negated form, expected surprise to go.  Everything has a
closed form driven by one scalar sequence:

    gamma_m = 0,    gamma_{j-1} = gamma_j + exp(-gamma_j).

The chosen allocation is ``x* = r * exp(-gamma_j)``, so ``exp(-gamma_j)``
is the hazard of day ``j``, the fraction of the remaining mass it takes.
The last day has hazard 1 and absorbs whatever is left.  The value function
telescopes to ``V_j(r) = -r * (gamma_{j-1} - 1)``, so a full schedule
achieves reduced score ``1 - gamma_0`` and expected surprise ``gamma_0 - 1``.

The recursion is evaluated in exactly the order written above, one fused
step per day, which makes every gamma value bit-reproducible.  A direct
consequence worth knowing: ``gamma_{m-1} == 1.0`` exactly, so the next to
last day always has hazard ``exp(-1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .objective import ObjectiveValue, objective_values

__all__ = [
    "GammaSequence",
    "PolicyRow",
    "PolicyTable",
    "SolveResult",
    "gamma_sequence",
    "policy_single",
    "value_v",
    "bellman_rhs",
    "stationarity_residual",
    "telescope_residual",
    "rollout",
]


def _check_days(m) -> int:
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)):
        raise ValueError(f"number of days must be an integer, got {m!r}")
    m = int(m)
    if m < 1:
        raise ValueError(f"number of days must be at least 1, got {m}")
    return m


@dataclass(frozen=True, eq=False)
class GammaSequence:
    """Hazard exponents ``gamma_0 .. gamma_m`` for a fixed horizon.

    ``values[j]`` is ``gamma_j``; the array is read-only and strictly
    decreasing, with ``values[m] == 0`` and ``values[m-1] == 1`` exactly.
    """

    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=np.float64)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def m(self) -> int:
        return self.values.size - 1

    def __getitem__(self, j: int) -> float:
        return float(self.values[j])

    def __len__(self) -> int:
        return self.values.size

    def __repr__(self) -> str:
        return f"GammaSequence(m={self.m}, gamma0={self[0]!r})"


def gamma_sequence(m) -> GammaSequence:
    """The sequence ``gamma_m = 0``, ``gamma_{j-1} = gamma_j + exp(-gamma_j)``."""
    m = _check_days(m)
    g = np.empty(m + 1, dtype=np.float64)
    g[m] = 0.0
    for j in range(m, 0, -1):
        g[j - 1] = g[j] + math.exp(-g[j])
    return GammaSequence(g)


def _check_day_index(j, m: int, upper: int) -> int:
    if isinstance(j, bool) or not isinstance(j, (int, np.integer)):
        raise ValueError(f"day index must be an integer, got {j!r}")
    j = int(j)
    if not 1 <= j <= upper:
        raise ValueError(f"day index {j} out of range 1..{upper} for horizon {m}")
    return j


def _check_remaining(r) -> float:
    r = float(r)
    if not 0.0 <= r <= 1.0 or math.isnan(r):
        raise ValueError(f"remaining mass {r!r} out of range [0, 1]")
    return r


def policy_single(j, r, gamma: GammaSequence) -> float:
    """Mass the optimal schedule puts on day ``j`` given remaining mass ``r``.

    Equals ``r * exp(-gamma_j)``, hence exactly linear in ``r``.
    """
    j = _check_day_index(j, gamma.m, gamma.m)
    r = _check_remaining(r)
    return r * math.exp(-gamma[j])


def value_v(j, r, gamma: GammaSequence) -> float:
    """Best reduced score attainable from day ``j`` with remaining mass ``r``.

    The telescoped closed form ``-r * (gamma_{j-1} - 1)``; its negation is
    the expected surprise still obtainable.  Zero for ``j == m``.
    """
    j = _check_day_index(j, gamma.m, gamma.m)
    r = _check_remaining(r)
    return -r * (gamma[j - 1] - 1.0)


def bellman_rhs(j, r, x, gamma: GammaSequence) -> float:
    """One-step recursion value of allocating ``x`` at day ``j``.

    ``x log x - x log r + V_{j+1}(r - x)`` with the ``0 log 0 == 0``
    convention at ``x == 0``.  Needs ``1 <= j <= m-1``, ``r > 0``, and
    ``0 <= x <= r``.
    """
    if gamma.m < 2:
        raise ValueError("one-step recursion needs a horizon of at least 2 days")
    j = _check_day_index(j, gamma.m, gamma.m - 1)
    r = float(r)
    if not 0.0 < r <= 1.0 or math.isnan(r):
        raise ValueError(f"remaining mass {r!r} out of range (0, 1]")
    x = float(x)
    if not 0.0 <= x <= r or math.isnan(x):
        raise ValueError(f"allocation {x!r} out of range [0, {r!r}]")
    stage = 0.0 if x == 0.0 else x * (math.log(x) - math.log(r))
    return stage + value_v(j + 1, r - x, gamma)


def stationarity_residual(j, r, gamma: GammaSequence) -> float:
    """Derivative of the one-step recursion at its chosen allocation.

    The derivative in ``x`` of the stage term is ``log(x / r) + 1`` and the
    continuation contributes ``gamma_j - 1``, so the residual at the chosen
    ``x* = r * exp(-gamma_j)`` is ``log(x*/r) + gamma_j``.  Zero up to
    rounding; anything else would mean ``x*`` is not a critical point.
    """
    if gamma.m < 2:
        raise ValueError("one-step recursion needs a horizon of at least 2 days")
    j = _check_day_index(j, gamma.m, gamma.m - 1)
    r = float(r)
    if not 0.0 < r <= 1.0 or math.isnan(r):
        raise ValueError(f"remaining mass {r!r} out of range (0, 1]")
    x = r * math.exp(-gamma[j])
    return math.log(x / r) + gamma[j]


def telescope_residual(gamma: GammaSequence, k) -> float:
    """Gap in the identity ``sum_{i=k}^{m-1} exp(-gamma_i) == gamma_{k-1} - 1``.

    The sum on the left is the total hazard-weighted mass the policy spends
    strictly before the last day; summing the recursion steps makes it equal
    the right side exactly in real arithmetic.  Computed by direct summation.
    """
    m = gamma.m
    k = _check_day_index(k, m, m)
    tail = float(np.sum(np.exp(-gamma.values[k:m])))
    return tail - (gamma[k - 1] - 1.0)


@dataclass(frozen=True)
class PolicyRow:
    """One day of a rolled-out schedule."""

    day: int
    gamma: float
    hazard: float
    remaining_before: float
    allocation: float


@dataclass(frozen=True, eq=False)
class PolicyTable:
    """Full schedule, one row per day, in day order."""

    rows: tuple[PolicyRow, ...]

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def allocations(self) -> np.ndarray:
        return np.array([row.allocation for row in self.rows])


@dataclass(frozen=True, eq=False)
class SolveResult:
    """Schedule, hazard exponents, and achieved scores for one horizon."""

    policy: PolicyTable
    gamma: GammaSequence
    objective: ObjectiveValue
    value_at_root: float

    @property
    def m(self) -> int:
        return self.policy.m

    @property
    def p(self) -> np.ndarray:
        return self.policy.allocations


def rollout(m) -> SolveResult:
    """Solve horizon ``m`` and roll the policy forward from mass 1.

    Day ``j`` takes ``remaining * exp(-gamma_j)``; the last day has hazard 1
    and takes everything left, so the allocations form a strictly positive
    probability vector.  ``value_at_root`` is the closed form ``1 - gamma_0``
    and matches the reduced score of the rolled-out schedule.
    """
    m = _check_days(m)
    gamma = gamma_sequence(m)
    rows = []
    remaining = 1.0
    for j in range(1, m + 1):
        hazard = math.exp(-gamma[j])
        allocation = remaining * hazard
        rows.append(
            PolicyRow(
                day=j,
                gamma=gamma[j],
                hazard=hazard,
                remaining_before=remaining,
                allocation=allocation,
            )
        )
        remaining -= allocation
    table = PolicyTable(tuple(rows))
    return SolveResult(
        policy=table,
        gamma=gamma,
        objective=objective_values(table.allocations),
        value_at_root=1.0 - gamma[0],
    )
