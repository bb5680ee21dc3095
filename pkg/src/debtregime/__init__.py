"""Deterministic engine for debt-regime diagnostics under a captive domestic
bond market: debt recursion and stability accounting, closed-form dynamic
extensions, investment bounds, complementarity pricing of the sovereign
premium, transition-feasibility thresholds, and conservative set-valued
regime inference with a seeded Monte Carlo harness.
"""

from ._version import __version__
from .core import (
    EconState,
    FiscalResponse,
    RegimeParams,
    check_scope,
    effective_deficit,
    stability_surplus,
    step_debt,
    step_debt_stochastic,
)
from .extensions import (
    ClockSpec,
    PsiSpec,
    SprintSpec,
    captive_threshold_shift,
    clock,
    estimate_kappa,
    marginal_gain_sequence,
    paradox_test,
    psi_composite,
    ratchet_gap,
    repression_dividend,
    sprint_cumulative_improvement,
    timing_feasible,
)
from .investment import (
    AllocationProblem,
    InvestmentBounds,
    InvestmentInputs,
    allocate,
    compute_bounds,
    cumulative_upper_bound,
)
from .closure import (
    MarginDistribution,
    PremiumSolution,
    ThetaLaw,
    TwoLayerParams,
    comparative_statics,
    demand_at,
    feedback_gain,
    fixed_point_scan,
    monotone_path,
    pe_sensitivities,
    solve_premium,
    theta_step,
)
from .transition import (
    TransitionSpec,
    feasibility_label,
    joint_feasibility,
    required_growth_endogenous,
    required_growth_exogenous,
)
from .inference import (
    MeasurementVariant,
    SubsampleConfig,
    TierEnvelope,
    classify,
    detrend_local_linear,
    envelope,
    score_pe,
    score_tf,
    subsample_critical_value,
    trend_growth_estimate,
)
from .montecarlo import MCConfig, run_mc_pe, run_mc_tf
from .scenario import Scenario, load_scenario
from .tables import TableArtifact, build_table, emit_csv
