"""Structured records of experiment runs.

Each report is a frozen dataclass whose ``asdict`` image is exactly the
JSON object written to disk.  Reports carry every parameter that went
into the run plus the measured values and pass/fail flags, so a report
file is reproducible from its own content together with the seed.
Timestamps never enter these records; the writer attaches them in a
separate metadata field so two runs with the same configuration and
seed serialise to identical bytes.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class SweepLevel:
    L: int            # concentric level, terms with 0 < |n - k| <= L summed
    residual: float   # || g e_k - S_L ||
    term_norm: float  # largest norm among the terms newly added at this level


@dataclass(frozen=True)
class SweepFlags:
    no_norm_convergence: bool
    hypothesis_notes: list[str]


@dataclass(frozen=True)
class SweepReport:
    grid_N: int
    window_W: int
    removed_k: int | None
    anchor_t0: float
    levels: list[SweepLevel]
    flags: SweepFlags


@dataclass(frozen=True)
class LadderReport:
    numerator: str
    denominator: str
    ladder: list[int]
    estimates: list[float]
    step_growth: list[float]        # relative change at each refinement step
    log_slope: float                # least squares slope of estimate against log M
    converges: bool                 # final step changed by less than the stabilisation threshold
    diverges: bool                  # every step grew by more than the growth threshold
    stabilization_threshold: float
    growth_threshold: float
    note: str


@dataclass(frozen=True)
class EnkBoundReport:
    n: int
    k: int
    base_n: int
    base_k: int
    center_x: float
    center_xi: float
    trials: int
    seed: int
    pointwise_max_slack: float      # max of |E_nk - 1| minus its bound, <= 0 when the bound holds
    pointwise_violations: int
    anchored_bound: float           # 2 pi sqrt((n-a)^2 + (k-b)^2) plus rounding allowance
    anchored_max_ratio: float       # max over samples of |E_nk + c E_ab| / rho
    anchored_violations: int
    passed: bool


@dataclass(frozen=True)
class ExcessReport:
    experiment: str                  # "excess_one" or "excess_n"
    ambient_dim: int
    n: int
    residuals: dict[str, float]      # partner_correction, head_reconstruction, final_chain
    margins: dict[str, float]
    seed: int
    head_sum_trajectory: list[float]
    notes: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class RpCheckReport:
    ambient_dim: int
    family_count: int
    pair_count: int
    trials_per_pair: int
    seed: int
    max_identity_deviation: float    # after canonical normalization by the inverse mixed operator
    max_adjoint_asymmetry: float     # relative, between the mixed operator and its partner's adjoint
    min_invertibility_margin: float
    passed: bool


@dataclass(frozen=True)
class ZakValidationReport:
    M: int
    J: int
    truncation_K: int
    gaussian_norm: float
    translated_norm: float
    translate_shift: float
    covariance_range: int
    covariance_max_dev: float
    theta_vs_series_max_dev: float
    center_zero_abs: float
    corner_value: float
    theta_prime_value: float
    theta_prime_oracle_rel_dev: float
    passed: bool


def report_payload(report: Any) -> dict:
    """Plain-dict image of a report, suitable for json.dumps."""
    return dataclasses.asdict(report)


def dump_report_json(report: Any, metadata: dict | None = None) -> str:
    """Serialise a report deterministically.

    The payload is key-sorted so byte equality only depends on the data.
    Anything run-specific (timestamps, host names) belongs in metadata,
    which comparers are expected to drop.
    """
    payload = report_payload(report)
    if metadata is not None:
        payload["metadata"] = metadata
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
