"""Set-valued regime inference: boundary scores, tiered envelopes,
local-linear detrending, block-subsampling critical values, and the
conservative sign-rule classification.

The target of inference is an interval of scores over an admissible family
of measurement readings, not a point.  Bands widen the interval; labels are
declared only when the widened band clears zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .closure import TwoLayerParams, demand_at
from .errors import ConfigError, DomainError, EstimationError
from .transition import TransitionSpec, required_growth_exogenous

__all__ = [
    "MeasurementVariant",
    "TierEnvelope",
    "SubsampleConfig",
    "score_pe",
    "score_tf",
    "apply_pe_variant",
    "apply_tf_variant",
    "tier_scores",
    "envelope",
    "detrend_local_linear",
    "subsample_critical_value",
    "classify",
    "trend_growth_estimate",
    "PE_LABELS",
    "TF_LABELS",
]

PE_LABELS = ("robustly-interior", "boundary-near", "robustly-premium-emergent")
TF_LABELS = ("feasible", "marginal", "infeasible")


@dataclass(frozen=True)
class MeasurementVariant:
    """One admissible measurement reading.

    `overrides` is a partial overlay: for premium-emergence scores it patches
    TwoLayerParams fields, for transition-feasibility scores it patches
    {b_concept, d, s}.  Tiers are nested: a tier-k variant belongs to every
    tier >= k.
    """

    id: str
    overrides: dict
    tier: int = 1


@dataclass(frozen=True)
class TierEnvelope:
    """Lower/upper score bounds over one tier's variants at one period."""

    t: int
    lower: float
    upper: float
    argmin_id: str
    argmax_id: str
    label: str = ""


@dataclass(frozen=True)
class SubsampleConfig:
    """Block-subsampling settings for the band half-width.

    window_h  : inference window in periods
    block_len : contiguous block length (3 <= block_len < window_h)
    alpha     : band level in (0, 1)
    block_grid: lengths for the sensitivity sweep
    statistic : fixed to the window mean (recorded in output metadata)
    """

    window_h: int = 24
    block_len: int = 6
    alpha: float = 0.10
    block_grid: Tuple[int, ...] = (4, 6, 8)
    statistic: str = "window_mean"

    def __post_init__(self):
        if not (3 <= self.block_len < self.window_h):
            raise ConfigError(
                f"need 3 <= block_len < window_h, got {self.block_len}, {self.window_h}"
            )
        if not (0.0 < self.alpha < 1.0):
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")


def score_pe(p: TwoLayerParams) -> float:
    """Premium-emergence boundary score: zero-premium demand minus the
    required absorption share.  Positive means interior regime."""
    return demand_at(0.0, p) - p.phi_req


def score_tf(spec: TransitionSpec) -> float:
    """Transition-feasibility margin score: proposed growth minus the
    threshold.  Positive means the exit condition holds with margin."""
    if spec.state.b_prev <= 0:
        raise DomainError("b_prev must be > 0")
    threshold = required_growth_exogenous(spec)["threshold"]
    return spec.g_new - threshold


_PE_FIELDS = ("theta", "psi", "z", "c_bar", "phi_req", "dist")
_TF_FIELDS = ("b_concept", "d", "s")


def apply_pe_variant(base: TwoLayerParams, variant: MeasurementVariant) -> float:
    """Score one admissible reading of the two-layer state."""
    fields = {f: getattr(base, f) for f in _PE_FIELDS}
    for key, value in variant.overrides.items():
        if key not in _PE_FIELDS:
            raise ConfigError(f"variant {variant.id!r}: unknown override {key!r}")
        fields[key] = value
    return score_pe(TwoLayerParams(**fields))


def apply_tf_variant(spec: TransitionSpec, variant: MeasurementVariant) -> float:
    """Score one admissible debt-concept / fiscal-burden reading."""
    st = spec.state
    b = st.b_prev
    d = st.d
    s = st.s
    for key, value in variant.overrides.items():
        if key == "b_concept":
            b = value
        elif key == "d":
            d = value
        elif key == "s":
            s = value
        else:
            raise ConfigError(f"variant {variant.id!r}: unknown override {key!r}")
    from .core import EconState

    patched = TransitionSpec(
        state=EconState(b_prev=b, r_n=st.r_n, g_n=st.g_n, pi=st.pi, d=d, s=s),
        g_new=spec.g_new, rho_bar=spec.rho_bar, m=spec.m,
        g_star_baseline=spec.g_star_baseline,
    )
    return score_tf(patched)


def tier_scores(base, variants: Sequence[MeasurementVariant], tier: int,
                mode: str = "PE") -> Dict[str, float]:
    """Evaluate every variant admissible at a tier (nesting is by
    construction: a tier-k variant belongs to all tiers >= k)."""
    apply = apply_pe_variant if mode == "PE" else apply_tf_variant
    out: Dict[str, float] = {}
    for v in variants:
        if v.tier <= tier:
            out[v.id] = apply(base, v)
    if not out:
        raise ConfigError(f"no variants admissible at tier {tier}")
    return out


def envelope(
    scores: Dict[str, float], t: int = 0, variant_order: Optional[Sequence[str]] = None
) -> TierEnvelope:
    """Min/max envelope over one tier's variant scores.

    `scores` maps variant id -> score.  Ties resolve to the earliest id in
    `variant_order` (insertion order by default) so the arg labels are
    deterministic.
    """
    if not scores:
        raise ConfigError("envelope requires at least one variant in the tier")
    order = list(variant_order) if variant_order is not None else list(scores)
    lo_id = min(order, key=lambda k: (scores[k], order.index(k)))
    hi_id = max(order, key=lambda k: (scores[k], -order.index(k)))
    return TierEnvelope(
        t=t,
        lower=scores[lo_id],
        upper=scores[hi_id],
        argmin_id=lo_id,
        argmax_id=hi_id,
    )


def detrend_local_linear(series: Sequence[float], window_h: int) -> dict:
    """Local-linear trend via moving least-squares line fits.

    Each point's trend value comes from the OLS line fit on the length-
    window_h window centered on it (clamped at the edges, so the first and
    last points reuse the end windows).  Fitting an exact line leaves a
    remainder at rounding level.
    """
    y = np.asarray(series, dtype=float)
    n = len(y)
    if window_h < 4:
        raise EstimationError(f"window_h must be >= 4, got {window_h}")
    if n < window_h:
        raise EstimationError(f"series length {n} shorter than window {window_h}")
    t = np.arange(n, dtype=float)
    trend = np.empty(n)
    half = window_h // 2
    for i in range(n):
        start = min(max(i - half, 0), n - window_h)
        tt = t[start : start + window_h]
        yy = y[start : start + window_h]
        X = np.column_stack([np.ones(window_h), tt])
        coef, *_ = np.linalg.lstsq(X, yy, rcond=None)
        trend[i] = coef[0] + coef[1] * t[i]
    return {"trend": trend, "remainder": y - trend}


def subsample_critical_value(
    remainder: Sequence[float], cfg: SubsampleConfig
) -> float:
    """Band half-width from block subsampling of a detrended remainder.

    Over the trailing window of length window_h: tau = window mean; for each
    of the h - l + 1 contiguous blocks, the deviation sqrt(l)*(block mean -
    tau); the half-width is the right-continuous (1 - alpha) empirical
    quantile of those deviations divided by sqrt(h), floored at zero.

    Fewer than 5 blocks triggers the maximally conservative fallback: the
    largest absolute remainder deviation in the window.
    """
    r = np.asarray(remainder, dtype=float)
    if len(r) < cfg.window_h:
        raise EstimationError(
            f"remainder length {len(r)} shorter than window {cfg.window_h}"
        )
    window = r[-cfg.window_h :]
    h = cfg.window_h
    ell = cfg.block_len
    tau = float(window.mean())
    n_blocks = h - ell + 1
    if n_blocks < 5:
        return float(np.max(np.abs(window - tau)))
    block_means = np.convolve(window, np.ones(ell) / ell, mode="valid")
    devs = math.sqrt(ell) * (block_means - tau)
    devs_sorted = np.sort(devs)
    k = math.ceil((1.0 - cfg.alpha) * n_blocks)  # type-1 (right-continuous) quantile
    q = devs_sorted[min(max(k, 1), n_blocks) - 1]
    return max(0.0, float(q) / math.sqrt(h))


def classify(env: TierEnvelope, c_lower: float, c_upper: float, mode: str) -> str:
    """Conservative sign-rule classification of a widened envelope.

    mode 'PE': robustly-interior when the widened lower bound clears zero,
    robustly-premium-emergent when the widened upper bound is below zero,
    boundary-near otherwise.  mode 'TF': feasible / infeasible / marginal by
    the same rule.
    """
    if mode not in ("PE", "TF"):
        raise DomainError(f"mode must be 'PE' or 'TF', got {mode!r}")
    positive = env.lower - c_lower > 0
    negative = env.upper + c_upper < 0
    if mode == "PE":
        if positive:
            return "robustly-interior"
        if negative:
            return "robustly-premium-emergent"
        return "boundary-near"
    if positive:
        return "feasible"
    if negative:
        return "infeasible"
    return "marginal"


def label_covers(label: str, truth_positive: bool) -> bool:
    """Whether a classification label's implied set contains the true regime."""
    if label in ("robustly-interior", "feasible"):
        return truth_positive
    if label in ("robustly-premium-emergent", "infeasible"):
        return not truth_positive
    return True  # set-valued labels cover both regimes


def trend_growth_estimate(
    gdp_series: Sequence[float], window_quarters: int
) -> float:
    """Annualized log-linear trend growth over the trailing window.

    OLS slope of log(GDP) on the quarter index, times 4.  Requires strictly
    positive values and a window of at least 8 quarters.
    """
    y = np.asarray(gdp_series, dtype=float)
    if window_quarters < 8:
        raise EstimationError(f"window_quarters must be >= 8, got {window_quarters}")
    if len(y) < window_quarters:
        raise EstimationError(
            f"series length {len(y)} shorter than window {window_quarters}"
        )
    tail = y[-window_quarters:]
    if np.any(tail <= 0):
        raise DomainError("GDP values must be strictly positive")
    logy = np.log(tail)
    t = np.arange(window_quarters, dtype=float)
    X = np.column_stack([np.ones(window_quarters), t])
    coef, *_ = np.linalg.lstsq(X, logy, rcond=None)
    return float(coef[1]) * 4.0
