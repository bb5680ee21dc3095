"""Bounds on stabilizing growth investment and the quadratic allocation
problem over sectors.

Upper bounds: arithmetic (tolerated deterioration), internal funding from the
repression dividend, and the safe-corridor margin.  Lower bounds: static
requirement, shock buffer, and demographic compensation.  The operational
envelope takes the most conservative of each side.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .core import EconState, RegimeParams
from .errors import DomainError

__all__ = [
    "InvestmentInputs",
    "AllocationProblem",
    "InvestmentBounds",
    "compute_bounds",
    "cumulative_upper_bound",
    "allocate",
]


@dataclass(frozen=True)
class InvestmentInputs:
    """Everything needed for the per-period bound map.

    mu         : aggregate efficiency (growth gain per unit of investment)
    lam        : dividend reinvestment share in (0, 1]
    m          : safety margin inside the corridor (fraction/yr, >= 0)
    delta_bar  : tolerated debt deterioration (fraction of GDP/yr)
    delta_demo : demographic drag range [lo, hi] as fractions/yr
    shock_size : spread deterioration the buffer must absorb (default 1 pp)
    """

    state: EconState
    regime: RegimeParams
    mu: float = 0.05
    lam: float = 0.5
    m: float = 0.0
    delta_bar: float = 0.0
    delta_demo: Tuple[float, float] = (0.005, 0.008)
    shock_size: float = 0.01

    def __post_init__(self):
        if self.mu <= 0:
            raise DomainError(f"mu must be > 0, got {self.mu}")
        if not (0 < self.lam <= 1):
            raise DomainError(f"lam must lie in (0, 1], got {self.lam}")
        if self.m < 0:
            raise DomainError(f"m must be >= 0, got {self.m}")
        lo, hi = self.delta_demo
        if lo > hi:
            raise DomainError("delta_demo range must satisfy lo <= hi")


@dataclass(frozen=True)
class AllocationProblem:
    """Quadratic sector-allocation problem.

    Objective: base_surplus + sum_j mu_j*x_j + sum_{j<k} gamma_jk*x_j*x_k,
    maximized over x >= 0 with sum(x) <= budget.  gamma_jk is supplied
    upper-triangular and treated symmetrically in evaluation.
    """

    mu_j: Tuple[float, ...]
    gamma_jk: Tuple[Tuple[float, ...], ...] = field(default=None)
    budget: float = 0.01
    base_surplus: float = 0.0

    def __post_init__(self):
        if len(self.mu_j) < 1:
            raise DomainError("need at least one sector")
        if self.budget < 0:
            raise DomainError(f"budget must be >= 0, got {self.budget}")
        J = len(self.mu_j)
        if self.gamma_jk is None:
            object.__setattr__(
                self, "gamma_jk", tuple(tuple(0.0 for _ in range(J)) for _ in range(J))
            )
        if len(self.gamma_jk) != J or any(len(row) != J for row in self.gamma_jk):
            raise DomainError("gamma_jk must be a JxJ array")

    @property
    def n_sectors(self) -> int:
        return len(self.mu_j)

    def objective(self, x: Sequence[float]) -> float:
        J = self.n_sectors
        val = self.base_surplus
        for j in range(J):
            val += self.mu_j[j] * x[j]
        for j in range(J):
            for k in range(j + 1, J):
                val += self.gamma_jk[j][k] * x[j] * x[k]
        return val


@dataclass(frozen=True)
class InvestmentBounds:
    """Per-period bound map; x_max_rd is None when the dividend is inactive
    (epsilon <= 0), reported as absent rather than zero."""

    x_max_arith: float
    x_max_rd: Optional[float]
    x_max_safe: float
    x_max_operational: float
    x_min_static: float
    x_min_shock: float
    x_min_demo_lo: float
    x_min_demo_hi: float
    x_min_operational: float
    feasible: bool


def compute_bounds(inp: InvestmentInputs) -> InvestmentBounds:
    """Evaluate all upper and lower bounds at one operating point.

    The operational upper bound is the minimum of the three uppers (the
    dividend bound drops out when inactive); the operational lower bound is
    the maximum of the static, shock, and high-end demographic requirements.
    """
    st, rg = inp.state, inp.regime
    spread = st.r_n - st.g_n
    burden = st.d - st.s
    corridor = rg.epsilon + rg.g_star + rg.pass_through() - st.pi

    x_max_arith = inp.delta_bar - spread * st.b_prev - st.d
    x_max_rd = inp.lam * rg.epsilon * st.b_prev if rg.epsilon > 0 else None
    x_max_safe = corridor * st.b_prev - burden - inp.m

    uppers = [x_max_arith, x_max_safe]
    if x_max_rd is not None:
        uppers.append(x_max_rd)
    x_max_op = min(uppers)

    x_min_static = max(
        0.0, (st.pi + burden / st.b_prev - (corridor + st.pi) + inp.m) / inp.mu
    )
    x_min_shock = inp.shock_size / inp.mu
    demo_lo = inp.delta_demo[0] / inp.mu
    demo_hi = inp.delta_demo[1] / inp.mu
    x_min_op = max(x_min_static, x_min_shock, demo_hi)

    return InvestmentBounds(
        x_max_arith=x_max_arith,
        x_max_rd=x_max_rd,
        x_max_safe=x_max_safe,
        x_max_operational=x_max_op,
        x_min_static=x_min_static,
        x_min_shock=x_min_shock,
        x_min_demo_lo=demo_lo,
        x_min_demo_hi=demo_hi,
        x_min_operational=x_min_op,
        feasible=x_min_op <= x_max_op,
    )


def cumulative_upper_bound(
    per_period_bounds: Sequence[InvestmentBounds], T_star: float
) -> float:
    """Cumulative envelope over the residual window: sum over the first
    floor(T_star) periods of the per-period operational maximum, floored at
    zero each period.  An inactive dividend bound does not constrain."""
    if len(per_period_bounds) == 0:
        raise DomainError("per-period bound list is empty")
    periods = int(math.floor(T_star)) if math.isfinite(T_star) else len(per_period_bounds)
    periods = min(periods, len(per_period_bounds))
    if math.isfinite(T_star) and len(per_period_bounds) < int(math.floor(T_star)):
        raise DomainError(
            f"need >= floor(T_star)={int(math.floor(T_star))} periods, "
            f"got {len(per_period_bounds)}"
        )
    total = 0.0
    for bnd in per_period_bounds[:periods]:
        rd = bnd.x_max_rd if bnd.x_max_rd is not None else math.inf
        total += max(0.0, min(bnd.x_max_arith, rd, bnd.x_max_safe))
    return total


def _project_capped_simplex(x: np.ndarray, budget: float) -> np.ndarray:
    """Euclidean projection onto {x >= 0, sum(x) <= budget}."""
    y = np.maximum(x, 0.0)
    if y.sum() <= budget:
        return y
    # project onto the simplex sum(x) = budget (sorting algorithm)
    u = np.sort(x)[::-1]
    css = np.cumsum(u) - budget
    idx = np.arange(1, len(x) + 1)
    cond = u - css / idx > 0
    rho = idx[cond][-1]
    theta = css[rho - 1] / rho
    return np.maximum(x - theta, 0.0)


def _ascent(problem: AllocationProblem, start: np.ndarray, iters: int = 2000) -> np.ndarray:
    """Projected gradient ascent with backtracking from one start point."""
    mu = np.asarray(problem.mu_j, dtype=float)
    J = problem.n_sectors
    G = np.zeros((J, J))
    for j in range(J):
        for k in range(j + 1, J):
            G[j, k] = problem.gamma_jk[j][k]
    G = G + G.T
    x = _project_capped_simplex(start.astype(float), problem.budget)
    obj = problem.objective(x)
    step = max(problem.budget, 1e-6)
    for _ in range(iters):
        grad = mu + G @ x
        moved = False
        s = step
        for _ in range(40):
            cand = _project_capped_simplex(x + s * grad, problem.budget)
            cand_obj = problem.objective(cand)
            if cand_obj > obj + 1e-15:
                x, obj, moved = cand, cand_obj, True
                break
            s *= 0.5
        if not moved:
            break
    return x


def allocate(problem: AllocationProblem, grid_resolution: int = 40) -> dict:
    """Solve the allocation problem.

    For J <= 3 an exhaustive simplex grid is the authority; ties resolve to
    the lexicographically smallest grid point, and a projected-ascent pass
    cross-checks the objective.  For J > 3 multi-start projected ascent is
    used directly.
    """
    if problem.budget < 0:
        raise DomainError("budget must be >= 0")
    J = problem.n_sectors
    if problem.budget == 0.0:
        x0 = [0.0] * J
        return {"allocation": x0, "objective": problem.objective(x0)}

    if J <= 3:
        if grid_resolution < 10:
            raise DomainError("grid_resolution must be >= 10 for J <= 3")
        levels = np.linspace(0.0, problem.budget, grid_resolution + 1)
        best_x, best_obj = None, -math.inf
        for combo in itertools.product(levels, repeat=J):
            if sum(combo) > problem.budget + 1e-15:
                continue
            val = problem.objective(combo)
            # strict improvement wins; exact ties keep the earlier
            # (lexicographically smaller) point from the ordered product
            if val > best_obj + 1e-15:
                best_x, best_obj = combo, val
        allocation = list(best_x)
        objective = best_obj
    else:
        starts = [np.zeros(J), np.full(J, problem.budget / J)]
        for j in range(J):
            e = np.zeros(J)
            e[j] = problem.budget
            starts.append(e)
        best_x, best_obj = None, -math.inf
        for s in starts:
            x = _ascent(problem, s)
            val = problem.objective(x)
            if val > best_obj:
                best_x, best_obj = x, val
        allocation = [float(v) for v in best_x]
        objective = best_obj
    return {"allocation": allocation, "objective": objective}


def allocate_ascent(problem: AllocationProblem) -> dict:
    """Multi-start projected-ascent solution (cross-check path for J <= 3)."""
    J = problem.n_sectors
    starts = [np.zeros(J), np.full(J, problem.budget / J)]
    for j in range(J):
        e = np.zeros(J)
        e[j] = problem.budget
        starts.append(e)
    best_x, best_obj = None, -math.inf
    for s in starts:
        x = _ascent(problem, s)
        val = problem.objective(x)
        if val > best_obj:
            best_x, best_obj = x, val
    return {"allocation": [float(v) for v in best_x], "objective": best_obj}
