"""Two-layer domestic bond demand and the complementarity pricing of the
sovereign premium, plus the hard-core law of motion, feedback-gain
diagnostics, forward simulation, and the stationary-point scan.

The premium rho solves 0 <= rho  _|_  demand(rho) - phi_req >= 0:
either zero-premium demand covers the requirement (rho = 0), or rho rises
until the contestable margin fills the gap, or no premium can (hard
de-captivation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .core import EconState
from .errors import ConfigError, DomainError, ScopeError

__all__ = [
    "MarginDistribution",
    "TwoLayerParams",
    "PremiumSolution",
    "ThetaLaw",
    "demand_at",
    "demand_derivative",
    "solve_premium",
    "solve_premium_bisection",
    "comparative_statics",
    "pe_sensitivities",
    "theta_step",
    "gamma_theta",
    "feedback_gain",
    "monotone_path",
    "perturbation_response",
    "fixed_point_scan",
    "phi_req_affine",
    "zero_premium_boundary_theta",
]

_BISECT_TOL = 1e-12
_BISECT_MAX_ITER = 200


@dataclass(frozen=True)
class MarginDistribution:
    """Captivity-benefit distribution G on [0, c_bar] within the contestable
    margin.  Either uniform or a piecewise-linear CDF through user knots;
    knots must start at c = 0 (an atom 0 <= G(0) < 1 there is allowed: the
    share of the margin with no captivity benefit at all), end at
    (c_bar, 1), and be strictly increasing in both coordinates.
    """

    kind: str = "uniform"
    knots: Optional[Tuple[Tuple[float, float], ...]] = None

    def validate(self, c_bar: float) -> None:
        if self.kind == "uniform":
            return
        if self.kind != "table":
            raise ConfigError(f"unknown margin distribution kind {self.kind!r}")
        if not self.knots or len(self.knots) < 2:
            raise ConfigError("table CDF needs at least two knots")
        cs = [k[0] for k in self.knots]
        gs = [k[1] for k in self.knots]
        if abs(cs[0]) > 1e-15 or not (0.0 <= gs[0] < 1.0):
            raise ConfigError("table CDF must start at c=0 with 0 <= G(0) < 1")
        if abs(cs[-1] - c_bar) > 1e-12 or abs(gs[-1] - 1.0) > 1e-12:
            raise ConfigError("table CDF must end at (c_bar, 1)")
        if any(c1 <= c0 for c0, c1 in zip(cs, cs[1:])):
            raise ConfigError("table CDF knot positions must be strictly increasing")
        if any(g1 <= g0 for g0, g1 in zip(gs, gs[1:])):
            raise ConfigError("table CDF values must be strictly increasing")

    def cdf(self, c: float, c_bar: float) -> float:
        if c < 0.0:
            return 0.0
        if c >= c_bar:
            return 1.0
        if self.kind == "uniform":
            return c / c_bar
        knots = self.knots
        for (c0, g0), (c1, g1) in zip(knots, knots[1:]):
            if c0 <= c <= c1:
                return g0 + (c - c0) / (c1 - c0) * (g1 - g0)
        return 1.0  # pragma: no cover

    def density(self, c: float, c_bar: float) -> float:
        if c < 0.0 or c > c_bar:
            return 0.0
        if self.kind == "uniform":
            return 1.0 / c_bar
        knots = self.knots
        for (c0, g0), (c1, g1) in zip(knots, knots[1:]):
            if c0 <= c <= c1:
                return (g1 - g0) / (c1 - c0)
        return 0.0  # pragma: no cover


@dataclass(frozen=True)
class TwoLayerParams:
    """State of the two-layer demand system.

    theta   : hard captive core share in [0, 1]
    psi     : control-rights index in (0, 1]
    z       : outside-option spread (fraction/yr, > 0)
    c_bar   : maximum margin captivity (fraction/yr, > 0)
    phi_req : required domestic absorption share in [0, 1]
    dist    : captivity distribution on the contestable margin
    """

    theta: float = 0.65
    psi: float = 0.97
    z: float = 0.02
    c_bar: float = 0.06
    phi_req: float = 0.85
    dist: MarginDistribution = field(default_factory=MarginDistribution)

    def __post_init__(self):
        if not (0.0 <= self.theta <= 1.0):
            raise DomainError(f"theta must lie in [0, 1], got {self.theta}")
        if not (0.0 < self.psi <= 1.0):
            raise DomainError(f"psi must lie in (0, 1], got {self.psi}")
        if self.z <= 0:
            raise DomainError(f"z must be > 0, got {self.z}")
        if self.c_bar <= 0:
            raise DomainError(f"c_bar must be > 0, got {self.c_bar}")
        if not (0.0 <= self.phi_req <= 1.0):
            raise DomainError(f"phi_req must lie in [0, 1], got {self.phi_req}")
        self.dist.validate(self.c_bar)

    def with_theta(self, theta: float) -> "TwoLayerParams":
        return TwoLayerParams(
            theta=theta, psi=self.psi, z=self.z, c_bar=self.c_bar,
            phi_req=self.phi_req, dist=self.dist,
        )


@dataclass(frozen=True)
class PremiumSolution:
    """Outcome of the complementarity problem.

    case: 'a_interior' (slack demand, rho = 0), 'b_boundary' (knife edge,
    rho = 0), 'c_stress' (rho in (0, z] clears the market), or
    'd_hard_failure' (no premium restores absorption; rho is None).
    """

    case: str
    rho: Optional[float]
    phi_d_at_zero: float
    phi_d_max: float
    slack: float


@dataclass(frozen=True)
class ThetaLaw:
    """Law of motion for the hard captive core.

    theta' = theta - kappa_theta + gamma_theta(eps), clamped to [0, 1].
    The maintenance response is capped-linear: gamma = g0*min(eps, eps_cap)
    for eps > 0 and exactly 0 for eps <= 0; `sensitivity` is the slope g0 on
    the uncapped branch.
    """

    kappa_theta: float = 0.0
    g0: float = 0.0
    eps_cap: float = math.inf

    def __post_init__(self):
        if self.kappa_theta < 0:
            raise DomainError("kappa_theta must be >= 0")
        if self.g0 < 0:
            raise DomainError("g0 must be >= 0")
        if self.eps_cap <= 0:
            raise DomainError("eps_cap must be > 0")

    @property
    def sensitivity(self) -> float:
        return self.g0


def gamma_theta(law: ThetaLaw, epsilon: float) -> float:
    """Policy-maintenance term; exactly zero for any epsilon <= 0."""
    if epsilon <= 0.0:
        return 0.0
    return law.g0 * min(epsilon, law.eps_cap)


def demand_at(rho: float, p: TwoLayerParams) -> float:
    """Aggregate domestic demand theta + (1-theta)*[1 - G((z-rho)/psi)].

    Continuous and weakly increasing in rho; the CDF argument is clamped to
    the distribution support.
    """
    if rho < 0:
        raise DomainError(f"rho must be >= 0, got {rho}")
    arg = (p.z - rho) / p.psi
    return p.theta + (1.0 - p.theta) * (1.0 - p.dist.cdf(arg, p.c_bar))


def demand_derivative(rho: float, p: TwoLayerParams) -> float:
    """d(demand)/d(rho) = (1-theta)*g((z-rho)/psi)/psi."""
    arg = (p.z - rho) / p.psi
    return (1.0 - p.theta) * p.dist.density(arg, p.c_bar) / p.psi


def solve_premium_bisection(p: TwoLayerParams) -> float:
    """Case-c premium by bisection on [0, z] to |demand - phi_req| <= 1e-12.

    Assumes demand_at(0) < phi_req <= demand_at(z); raises otherwise.
    """
    lo, hi = 0.0, p.z
    f_lo = demand_at(lo, p) - p.phi_req
    f_hi = demand_at(hi, p) - p.phi_req
    if f_lo >= 0 or f_hi < 0:
        raise ScopeError("bisection requires demand_at(0) < phi_req <= demand_at(z)")
    for _ in range(_BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        f_mid = demand_at(mid, p) - p.phi_req
        if abs(f_mid) <= _BISECT_TOL:
            return mid
        if f_mid < 0:
            lo = mid
        else:
            hi = mid
    return hi  # upper end: demand weakly above the requirement


def solve_premium(p: TwoLayerParams) -> PremiumSolution:
    """Classify and solve the complementarity problem for the premium.

    Uniform margins use the closed form
        rho* = z - psi*c_bar*(1 - (phi_req - theta)/(1 - theta)),
    table margins use bisection.  Hard failure (case d) is a valid outcome,
    not an error.
    """
    d0 = demand_at(0.0, p)
    dmax = demand_at(p.z, p)
    slack = d0 - p.phi_req
    if slack > 0.0:
        return PremiumSolution("a_interior", 0.0, d0, dmax, slack)
    if slack == 0.0:
        return PremiumSolution("b_boundary", 0.0, d0, dmax, slack)
    if p.phi_req > dmax:
        return PremiumSolution("d_hard_failure", None, d0, dmax, slack)
    if p.dist.kind == "uniform" and p.theta < 1.0:
        rho = p.z - p.psi * p.c_bar * (
            1.0 - (p.phi_req - p.theta) / (1.0 - p.theta)
        )
        rho = min(max(rho, 0.0), p.z)
    else:
        rho = solve_premium_bisection(p)
    return PremiumSolution("c_stress", rho, d0, dmax, slack)


def comparative_statics(p: TwoLayerParams) -> dict:
    """Analytic partials of the case-c premium (uniform margins).

    Using rho* = z - psi*c_bar*(1 - phi_req)/(1 - theta):
        d rho/d theta = -psi*c_bar*(1 - phi_req)/(1 - theta)^2
        d rho/d psi   = -c_bar*(1 - (phi_req - theta)/(1 - theta))
        d rho/d z     = 1
    Each matches central finite differences of solve_premium.
    """
    if p.dist.kind != "uniform":
        raise ScopeError("comparative statics require the uniform margin distribution")
    sol = solve_premium(p)
    if sol.case != "c_stress":
        raise ScopeError(f"comparative statics defined in case c, got {sol.case}")
    one_m_t = 1.0 - p.theta
    return {
        "d_rho_d_theta": -p.psi * p.c_bar * (1.0 - p.phi_req) / (one_m_t * one_m_t),
        "d_rho_d_psi": -p.c_bar * (1.0 - (p.phi_req - p.theta) / one_m_t),
        "d_rho_d_z": 1.0,
    }


def pe_sensitivities(p: TwoLayerParams) -> dict:
    """Partials of the zero-premium boundary score under uniform margins:
    dB/dtheta = z/(psi*c_bar), dB/dpsi = (1-theta)*z/(psi^2*c_bar),
    dB/dz = -(1-theta)/(psi*c_bar)."""
    if p.dist.kind != "uniform":
        raise ScopeError("sensitivities require the uniform margin distribution")
    denom = p.psi * p.c_bar
    return {
        "dB_dtheta": p.z / denom,
        "dB_dpsi": (1.0 - p.theta) * p.z / (p.psi * denom),
        "dB_dz": -(1.0 - p.theta) / denom,
    }


def theta_step(theta: float, law: ThetaLaw, epsilon: float) -> float:
    """Advance the hard core one period, clamped to [0, 1]."""
    if not (0.0 <= theta <= 1.0):
        raise DomainError(f"theta must lie in [0, 1], got {theta}")
    return min(1.0, max(0.0, theta - law.kappa_theta + gamma_theta(law, epsilon)))


def _abs_drho_dtheta(p: TwoLayerParams) -> float:
    """|d rho/d theta| at the stress boundary for the current theta.

    Closed form for uniform margins; two-sided finite difference of the
    solver otherwise.  Zero when the core alone covers the requirement.
    """
    if p.theta >= 1.0:
        return math.inf
    if p.phi_req <= p.theta:
        return 0.0
    if p.dist.kind == "uniform":
        one_m_t = 1.0 - p.theta
        return p.psi * p.c_bar * (1.0 - p.phi_req) / (one_m_t * one_m_t)
    h = 1e-6
    lo = max(0.0, p.theta - h)
    hi = min(1.0, p.theta + h)
    stressed = p.with_theta(lo), p.with_theta(hi)
    rhos = []
    for q in stressed:
        sol = solve_premium(q)
        if sol.case != "c_stress":
            return 0.0
        rhos.append(sol.rho)
    return abs(rhos[1] - rhos[0]) / (hi - lo)


def feedback_gain(p: TwoLayerParams, law: ThetaLaw) -> float:
    """One-period gain of the premium -> repression loss -> core erosion loop:
    eta = |d rho/d theta| * law.sensitivity.  theta = 1 returns +inf."""
    if p.theta >= 1.0:
        return math.inf
    return _abs_drho_dtheta(p) * law.sensitivity


def monotone_path(
    p: TwoLayerParams,
    law: ThetaLaw,
    econ: EconState,
    horizon: int,
    r_rep: Optional[float] = None,
) -> dict:
    """Forward-simulate the coupled premium/core system.

    Each period: solve the premium at the current core share, derive the
    repression bias eps = pi - r_rep - rho, evaluate the feedback gain, and
    step the core.  Reports the first period with eta >= 1 (contraction
    failure) and the first case-c period.
    """
    if horizon < 1:
        raise DomainError("horizon must be >= 1")
    r_rep = econ.r_n if r_rep is None else r_rep
    theta = p.theta
    periods: List[dict] = []
    first_eta_ge_1 = None
    first_case_c = None
    for t in range(horizon):
        pt = p.with_theta(theta)
        sol = solve_premium(pt)
        if sol.case == "d_hard_failure":
            rho = math.nan
            eps = math.nan
        else:
            rho = sol.rho
            eps = econ.pi - r_rep - rho
        eta = feedback_gain(pt, law)
        if first_eta_ge_1 is None and eta >= 1.0:
            first_eta_ge_1 = t
        if first_case_c is None and sol.case == "c_stress":
            first_case_c = t
        periods.append(
            {"t": t, "theta": theta, "rho": rho, "epsilon": eps,
             "eta": eta, "case": sol.case}
        )
        eps_for_step = eps if math.isfinite(eps) else 0.0
        theta = theta_step(theta, law, eps_for_step)
    return {
        "periods": periods,
        "first_eta_ge_1": first_eta_ge_1,
        "first_case_c": first_case_c,
    }


def perturbation_response(
    p: TwoLayerParams,
    law: ThetaLaw,
    econ: EconState,
    horizon: int,
    delta: float,
    r_rep: Optional[float] = None,
) -> dict:
    """Simulate a one-shot erosion of the initial core by delta and compare
    against the geometric amplification bound.

    The response is measured as the largest per-period displacement of the
    core and premium paths; the bounds are delta/(1 - max eta) and
    delta*max|d rho/d theta|/(1 - max eta), the geometric series of the
    one-period loop gain applied to the initial shock.  Time-summed
    deviations are also reported for diagnostics (they grow with the horizon
    whenever a displacement persists, so they are not what the geometric
    bound limits).
    """
    base = monotone_path(p, law, econ, horizon, r_rep)
    pert = monotone_path(
        p.with_theta(max(0.0, p.theta - delta)), law, econ, horizon, r_rep
    )
    max_theta = 0.0
    max_rho = 0.0
    cum_theta = 0.0
    cum_rho = 0.0
    max_eta = 0.0
    max_drho = 0.0
    for row_b, row_p in zip(base["periods"], pert["periods"]):
        dev_t = abs(row_p["theta"] - row_b["theta"])
        max_theta = max(max_theta, dev_t)
        cum_theta += dev_t
        if math.isfinite(row_b["rho"]) and math.isfinite(row_p["rho"]):
            dev_r = abs(row_p["rho"] - row_b["rho"])
            max_rho = max(max_rho, dev_r)
            cum_rho += dev_r
        eta = max(row_b["eta"], row_p["eta"])
        if math.isfinite(eta):
            max_eta = max(max_eta, eta)
        for row in (row_b, row_p):
            d = _abs_drho_dtheta(p.with_theta(row["theta"]))
            if math.isfinite(d):
                max_drho = max(max_drho, d)
    bound_theta = delta / (1.0 - max_eta) if max_eta < 1.0 else math.inf
    bound_rho = delta * max_drho / (1.0 - max_eta) if max_eta < 1.0 else math.inf
    return {
        "max_theta_dev": max_theta,
        "max_rho_dev": max_rho,
        "cum_theta_dev": cum_theta,
        "cum_rho_dev": cum_rho,
        "bound_theta": bound_theta,
        "bound_rho": bound_rho,
        "max_eta": max_eta,
        "max_abs_drho_dtheta": max_drho,
    }


def zero_premium_boundary_theta(p: TwoLayerParams) -> Optional[float]:
    """Core share at which zero-premium demand exactly meets the requirement.

    demand_at(0) is affine in theta for any margin distribution:
    demand0(theta) = 1 - q + q*theta with q = G(z/psi).  Returns None when
    demand0 exceeds the requirement for every theta in [0, 1].
    """
    q = p.dist.cdf(p.z / p.psi, p.c_bar)
    if q <= 0.0:
        return None
    theta_b = 1.0 - (1.0 - p.phi_req) / q
    if theta_b < 0.0 or theta_b > 1.0:
        return None
    return theta_b


def phi_req_affine(
    base: float,
    b: float,
    psi: float,
    z: float,
    d_b: float = 0.0,
    d_psi: float = 0.0,
    d_z: float = 0.0,
    anchor: Tuple[float, float, float] = (2.40, 0.97, 0.02),
) -> float:
    """Optional affine required-absorption schedule around an anchor point,
    clamped to [0, 1].  Signs are structural: d_b >= 0 (higher debt needs
    broader absorption), d_psi <= 0 (stronger institutions need less)."""
    if d_b < 0:
        raise ConfigError("phi_req debt coefficient must be >= 0")
    if d_psi > 0:
        raise ConfigError("phi_req psi coefficient must be <= 0")
    b0, psi0, z0 = anchor
    val = base + d_b * (b - b0) + d_psi * (psi - psi0) + d_z * (z - z0)
    return min(1.0, max(0.0, val))


def fixed_point_scan(
    p: TwoLayerParams,
    law: ThetaLaw,
    pi: float,
    r_rep: float,
    grid: int = 2000,
    sigma: float = 0.0,
) -> dict:
    """Scan the one-period core map Phi(theta) = theta - kappa + gamma(eps(rho(theta)))
    for stationary points.

    Interior fixed points are transversal zeros of Phi(theta) - theta found
    by sign-change bracketing on the grid and refined by bisection.  The
    upper corner theta = 1 is reported as a safe stationary point of the
    clamped dynamics when the unclamped map points upward there (maintenance
    saturates the share); a downward exit at theta = 0 is de-captivation,
    reported as a diagnostic rather than an equilibrium.

    Each fixed point carries the branch label (safe: rho = 0; stress:
    rho > 0), the local slope |dPhi/dtheta| by central differences, and, for
    safe points, the buffer to the zero-premium boundary less the
    shock-absorption allowance sigma*eta/(1 - eta).
    """
    if grid < 1000:
        raise DomainError("grid must be >= 1000 points")

    def rho_at(theta: float) -> float:
        sol = solve_premium(p.with_theta(theta))
        return sol.rho if sol.rho is not None else math.nan

    def G(theta: float) -> float:
        rho = rho_at(theta)
        if math.isnan(rho):
            return -law.kappa_theta  # maintenance off in hard failure
        return gamma_theta(law, pi - r_rep - rho) - law.kappa_theta

    n = grid
    thetas = [i / n for i in range(n + 1)]
    vals = [G(t) for t in thetas]

    diagnostics: List[str] = []
    if all(abs(v) <= 1e-12 for v in vals):
        return {"fixed_points": [], "diagnostics": ["degenerate_continuum"]}

    roots: List[float] = []
    for i in range(n):
        a, b = thetas[i], thetas[i + 1]
        fa, fb = vals[i], vals[i + 1]
        if abs(fa) <= 1e-12 and 0 < i:
            roots.append(a)
        if fa * fb < 0.0:
            lo, hi, flo = a, b, fa
            for _ in range(_BISECT_MAX_ITER):
                mid = 0.5 * (lo + hi)
                fm = G(mid)
                if abs(fm) <= _BISECT_TOL:
                    break
                if (fm < 0.0) == (flo < 0.0):
                    lo, flo = mid, fm
                else:
                    hi = mid
            roots.append(mid)
    # dedupe roots that landed within one grid cell of each other
    deduped: List[float] = []
    for r in sorted(roots):
        if not deduped or r - deduped[-1] > 1.0 / n:
            deduped.append(r)
    roots = deduped

    if vals[-1] > 1e-12 and (not roots or 1.0 - roots[-1] > 1.0 / n):
        roots.append(1.0)  # absorbing ceiling: clamped map is stationary at 1
    if vals[0] < -1e-12:
        diagnostics.append("exits_at_floor")
    if not roots:
        diagnostics.append(
            "above_diagonal" if vals[0] > 0 else "below_diagonal"
        )

    theta_b = zero_premium_boundary_theta(p)
    eta_b = None
    if theta_b is not None:
        eta_b = feedback_gain(p.with_theta(theta_b), law)

    h = 1.0 / n
    results = []
    for r in roots:
        rho = rho_at(r)
        kind = "safe" if (not math.isnan(rho) and rho == 0.0) else "stress"
        lo = max(0.0, r - h)
        hi = min(1.0, r + h)
        phi_lo = min(1.0, max(0.0, lo + G(lo)))
        phi_hi = min(1.0, max(0.0, hi + G(hi)))
        slope = abs(phi_hi - phi_lo) / (hi - lo)
        buffer = None
        if kind == "safe" and theta_b is not None:
            allowance = 0.0
            if eta_b is not None and math.isfinite(eta_b) and eta_b < 1.0:
                allowance = sigma * eta_b / (1.0 - eta_b)
            buffer = (r - theta_b) - allowance
        residual = abs(min(1.0, max(0.0, r + G(r))) - r)
        results.append(
            {"theta_star": r, "type": kind, "slope": slope,
             "buffer": buffer, "residual": residual}
        )
    return {"fixed_points": results, "diagnostics": diagnostics}
