"""Zak transform diagnostics on the unit square.

The Zak transform used here is

    Zf(x, xi) = sum_j f(x - j) exp(2 pi i j xi),

sampled on the midpoint grid x_p = (p + 1/2)/M, xi_q = (q + 1/2)/M with
quadrature weight 1/M^2.  An even M keeps the point (1/2, 1/2), the
single zero of the Gaussian's Zak transform, strictly between nodes.

For the unit-normalised Gaussian atom phi(t) = 2^{1/4} exp(-pi t^2) the
transform has the closed theta form

    Z phi(x, xi) = -2^{1/4} i exp(-pi u^2 + i pi v) theta1(pi (v - i u))

with u = x - 1/2, v = xi - 1/2, nome q = exp(-pi), and

    theta1(z) = 2 sum_{k>=0} (-1)^k q^{(k+1/2)^2} sin((2k+1) z).

The quadratic-exponent prefactor sometimes quoted for this identity is
off by the unimodular factor exp(i pi (v^2 - v)); the linear-exponent
form above matches the defining series pointwise, which the tests check
against an independent direct summation.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import BoundViolated, ExcludedIndex, SingularNode, ThetaDomain
from .reports import EnkBoundReport, LadderReport

__all__ = [
    "GAUSSIAN_NOME",
    "ThetaParams",
    "GridFunction",
    "ConeParams",
    "midpoint_nodes",
    "midpoint_meshgrid",
    "gaussian_atom",
    "modulated_translate",
    "zak_transform",
    "theta1",
    "theta1_prime_zero",
    "gaussian_zak_theta",
    "theta_grid",
    "leading_coefficient",
    "center_slope",
    "cone",
    "enk",
    "enk_bound_check",
    "quotient_integral",
    "taylor_lower_bound",
    "save_grid_function",
    "load_grid_function",
]

GAUSSIAN_NOME = math.exp(-math.pi)

# Validated argument strip of the theta evaluator; wide enough for every
# Zak argument that arises here (|Im z| <= pi/2) with margin, narrow
# enough that the K = 8 default keeps the truncation tail negligible.
THETA_IM_LIMIT = 4.0

STABILIZATION_THRESHOLD = 0.01  # final refinement step must move less than 1%
GROWTH_THRESHOLD = 0.10         # every step must grow by more than 10% to call divergence


@dataclass(frozen=True)
class ThetaParams:
    """Nome and truncation order of the theta series."""

    q: float = GAUSSIAN_NOME
    truncation: int = 8   # K, the series keeps k = 0..K

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"nome must lie in (0, 1), got {self.q}")
        if self.truncation < 1:
            raise ValueError("truncation must be a positive integer")
        tail = self.q ** ((self.truncation + 0.5) ** 2)
        if tail >= 1e-30:
            raise ValueError(
                f"truncation {self.truncation} leaves tail {tail:.3e} >= 1e-30 for q={self.q}"
            )


@dataclass(frozen=True)
class ConeParams:
    """Centre of the distance function rho(x, xi)."""

    x0: float = 0.5
    xi0: float = 0.5


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Complex samples on the M x M midpoint grid of the unit square.

    samples[p, q] is the value at ((p + 1/2)/M, (q + 1/2)/M).
    """

    samples: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"samples must be square, got shape {arr.shape}")
        if arr.shape[0] < 2 or arr.shape[0] % 2 != 0:
            raise ValueError(f"M must be a positive even integer, got {arr.shape[0]}")
        object.__setattr__(self, "samples", arr)

    @property
    def M(self) -> int:
        return self.samples.shape[0]

    def norm(self) -> float:
        """L2 norm under the 1/M^2 quadrature weight."""
        return float(np.sqrt(np.sum(np.abs(self.samples) ** 2) / self.M**2))


def midpoint_nodes(M: int) -> np.ndarray:
    return (np.arange(M) + 0.5) / M


def midpoint_meshgrid(M: int) -> tuple[np.ndarray, np.ndarray]:
    g = midpoint_nodes(M)
    return np.meshgrid(g, g, indexing="ij")


def gaussian_atom(t):
    """phi(t) = 2^{1/4} exp(-pi t^2), unit L2 norm on the line."""
    return 2.0**0.25 * np.exp(-np.pi * np.square(t))


def modulated_translate(fn: Callable, n: int, k: int) -> Callable:
    """Sampler of exp(2 pi i n t) fn(t - k)."""

    def sampler(t):
        return np.exp(2j * np.pi * n * np.asarray(t)) * fn(np.asarray(t) - k)

    return sampler


def zak_transform(f: Callable, M: int, J: int) -> GridFunction:
    """Truncated Zak transform of a line sampler on the midpoint grid.

    Parameters
    ----------
    f : callable
        Evaluates the line function on float arrays.
    M : even int
        Grid resolution per axis.
    J : int
        Translation cutoff; the j-sum runs over |j| <= J.
    """
    if J < 1:
        raise ValueError("J must be at least 1")
    x = midpoint_nodes(M)
    xi = midpoint_nodes(M)
    out = np.zeros((M, M), dtype=complex)
    for j in range(-J, J + 1):
        out += np.outer(np.asarray(f(x - j), dtype=complex), np.exp(2j * np.pi * j * xi))
    return GridFunction(out)


def theta1(z, params: ThetaParams = ThetaParams()):
    """First Jacobi theta function, truncated odd sine series.

    Accepts scalars or arrays.  Arguments must satisfy |Im z| <= 4,
    which keeps every term of the default series within double range.
    """
    z = np.asarray(z, dtype=complex)
    if z.size and float(np.max(np.abs(z.imag))) > THETA_IM_LIMIT:
        raise ThetaDomain(f"|Im z| exceeds {THETA_IM_LIMIT}")
    ks = np.arange(params.truncation + 1)
    coef = ((-1.0) ** ks) * params.q ** ((ks + 0.5) ** 2)
    vals = 2.0 * np.einsum("k,...k->...", coef, np.sin(np.multiply.outer(z, 2 * ks + 1)))
    return vals if vals.ndim else complex(vals)


def theta1_prime_zero(params: ThetaParams = ThetaParams()) -> float:
    """theta1'(0) = 2 sum_{k>=0} (-1)^k (2k+1) q^{(k+1/2)^2}."""
    ks = np.arange(params.truncation + 1)
    return float(2.0 * np.sum(((-1.0) ** ks) * (2 * ks + 1) * params.q ** ((ks + 0.5) ** 2)))


def gaussian_zak_theta(x, xi, params: ThetaParams = ThetaParams()):
    """Closed theta form of the Gaussian's Zak transform.

    Vanishes exactly at (1/2, 1/2) and matches the direct j-sum of
    zak_transform(gaussian_atom, ...) to rounding everywhere else.
    """
    u = np.asarray(x, dtype=float) - 0.5
    v = np.asarray(xi, dtype=float) - 0.5
    pref = -(2.0**0.25) * 1j * np.exp(-np.pi * u * u + 1j * np.pi * v)
    vals = pref * theta1(np.pi * (v - 1j * u), params)
    return vals if np.ndim(vals) else complex(vals)


def theta_grid(M: int, params: ThetaParams = ThetaParams()) -> GridFunction:
    """Gaussian Zak transform sampled on the midpoint grid via the theta form."""
    X, XI = midpoint_meshgrid(M)
    return GridFunction(gaussian_zak_theta(X, XI, params))


def leading_coefficient(params: ThetaParams = ThetaParams()) -> float:
    """|gradient| of the Zak zero: 2^{1/4} pi |theta1'(0)|."""
    return float(2.0**0.25 * np.pi * abs(theta1_prime_zero(params)))


def center_slope(params: ThetaParams = ThetaParams(), radius: float = 1e-4) -> float:
    """Finite-difference slope of |Z phi| at the zero, averaged over four directions."""
    vals = [
        abs(gaussian_zak_theta(0.5 + radius, 0.5, params)),
        abs(gaussian_zak_theta(0.5 - radius, 0.5, params)),
        abs(gaussian_zak_theta(0.5, 0.5 + radius, params)),
        abs(gaussian_zak_theta(0.5, 0.5 - radius, params)),
    ]
    return float(np.mean(vals) / radius)


def cone(params: ConeParams, x, xi):
    """Euclidean distance rho(x, xi) from the configured centre."""
    return np.sqrt((np.asarray(x) - params.x0) ** 2 + (np.asarray(xi) - params.xi0) ** 2)


def enk(n: int, k: int, x, xi):
    """Plane wave E_nk(x, xi) = exp(2 pi i n x) exp(-2 pi i k xi)."""
    return np.exp(2j * np.pi * (n * np.asarray(x) - k * np.asarray(xi)))


def enk_bound_check(
    n: int,
    k: int,
    trials: int,
    seed: int = 0,
    base: tuple[int, int] = (0, 0),
    center: tuple[float, float] = (0.5, 0.5),
) -> EnkBoundReport:
    """Lipschitz bound checks for the plane waves E_nk.

    Verifies pointwise that |E_nk - 1| <= 2 pi sqrt(n^2 + k^2) rho_00
    and that the anchored combination E_nk + c E_ab, with the unimodular
    c chosen to vanish at the centre, stays below
    2 pi sqrt((n-a)^2 + (k-b)^2) rho relative to the centre distance.
    """
    if (n, k) == (0, 0):
        raise ExcludedIndex("the (0, 0) plane wave is constant and excluded")
    a, b = base
    if (n, k) == (a, b):
        raise ExcludedIndex(f"index pair {(n, k)} equals the base pair")
    if trials < 1:
        raise ValueError("trials must be positive")
    x0, xi0 = center

    rng = np.random.default_rng(seed)
    x = rng.random(trials)
    xi = rng.random(trials)

    # Rounding allowance: the inequalities are exact statements, the
    # samples are doubles.
    slack = 1e-12

    dev = np.abs(enk(n, k, x, xi) - 1.0)
    bound = 2.0 * np.pi * math.hypot(n, k) * np.sqrt(x**2 + xi**2)
    pointwise_slack = float(np.max(dev - bound))
    pointwise_violations = int(np.count_nonzero(dev - bound > slack))

    c = -enk(n, k, x0, xi0) / enk(a, b, x0, xi0)
    rho = np.sqrt((x - x0) ** 2 + (xi - xi0) ** 2)
    keep = rho > 1e-12  # the combination vanishes at the centre itself
    ratio = np.abs(enk(n, k, x, xi) + c * enk(a, b, x, xi))[keep] / rho[keep]
    anchored_bound = 2.0 * np.pi * math.hypot(n - a, k - b) + 1e-9
    anchored_max = float(np.max(ratio))
    anchored_violations = int(np.count_nonzero(ratio > anchored_bound))

    return EnkBoundReport(
        n=n,
        k=k,
        base_n=a,
        base_k=b,
        center_x=float(x0),
        center_xi=float(xi0),
        trials=trials,
        seed=seed,
        pointwise_max_slack=pointwise_slack,
        pointwise_violations=pointwise_violations,
        anchored_bound=float(anchored_bound),
        anchored_max_ratio=anchored_max,
        anchored_violations=anchored_violations,
        passed=(pointwise_violations == 0 and anchored_violations == 0),
    )


def quotient_integral(
    numerator: Callable,
    denominator: Callable,
    refinement_ladder: Sequence[int],
    numerator_name: str = "numerator",
    denominator_name: str = "denominator",
    max_workers: int | None = None,
) -> LadderReport:
    """Midpoint-rule ladder for the integral of |numerator|^2 / |denominator|^2.

    Both arguments are samplers over the unit square, evaluated on the
    midpoint grid at each ladder resolution.  The report flags
    ``converges`` when the final refinement moves the estimate by less
    than the stabilisation threshold and ``diverges`` when every step
    grows by more than the growth threshold.  Grid evidence cannot
    certify an infinite integral, so the report says so.

    ``max_workers`` above one evaluates ladder levels on a thread pool;
    each level's arithmetic is unchanged, so results do not depend on
    the worker count.
    """
    ladder = [int(M) for M in refinement_ladder]
    if len(ladder) < 2:
        raise ValueError("refinement ladder needs at least two resolutions")
    if any(M < 2 or M % 2 for M in ladder):
        raise ValueError("ladder entries must be positive even integers")

    def estimate(M: int) -> float:
        X, XI = midpoint_meshgrid(M)
        den = np.abs(np.asarray(denominator(X, XI), dtype=complex))
        if float(np.min(den)) < 1e-300:
            raise SingularNode(f"denominator vanishes at a node of the M={M} grid")
        num = np.abs(np.asarray(numerator(X, XI), dtype=complex))
        return float(np.sum((num / den) ** 2) / M**2)

    if max_workers is not None and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            estimates = list(pool.map(estimate, ladder))
    else:
        estimates = [estimate(M) for M in ladder]

    growth = [(b - a) / a for a, b in zip(estimates, estimates[1:])]
    converges = abs(growth[-1]) < STABILIZATION_THRESHOLD
    diverges = all(g > GROWTH_THRESHOLD for g in growth)
    log_slope = float(np.polyfit(np.log(np.asarray(ladder, dtype=float)), estimates, 1)[0])

    return LadderReport(
        numerator=numerator_name,
        denominator=denominator_name,
        ladder=ladder,
        estimates=estimates,
        step_growth=[float(g) for g in growth],
        log_slope=log_slope,
        converges=bool(converges),
        diverges=bool(diverges),
        stabilization_threshold=STABILIZATION_THRESHOLD,
        growth_threshold=GROWTH_THRESHOLD,
        note=(
            "midpoint-rule evidence on finite grids; growth flags are "
            "consistent with, but cannot certify, a divergent integral"
        ),
    )


def taylor_lower_bound(
    params: ThetaParams = ThetaParams(),
    delta: float = 0.1,
    radial: int = 1000,
    angular: int = 1000,
    off_grid: int = 1000,
) -> tuple[float, float]:
    """Empirical cone constants of |Z phi| around its zero.

    Returns (C, c) with C = min |Z phi| / rho over a dense polar
    sampling of the punctured ball of radius delta at (1/2, 1/2), and
    c = min |Z phi| over a dense midpoint sampling of the complement.
    Both minima are sampling estimates: fresh points can undershoot
    them by the local resolution, so comparisons should allow a small
    relative slack.
    """
    if not 0.0 < delta < 0.5:
        raise ValueError(f"delta must lie in (0, 1/2), got {delta}")
    r = delta * (np.arange(radial) + 0.5) / radial
    a = 2.0 * np.pi * (np.arange(angular) + 0.5) / angular
    R, A = np.meshgrid(r, a, indexing="ij")
    x = 0.5 + R * np.cos(A)
    xi = 0.5 + R * np.sin(A)
    cone_min = float(np.min(np.abs(gaussian_zak_theta(x, xi, params)) / R))

    X, XI = midpoint_meshgrid(off_grid)
    rho = np.sqrt((X - 0.5) ** 2 + (XI - 0.5) ** 2)
    mask = rho >= delta
    floor_min = float(np.min(np.abs(gaussian_zak_theta(X, XI, params))[mask]))

    if cone_min <= 0.0 or floor_min <= 0.0:
        raise BoundViolated(f"empirical constants must be positive, got C={cone_min}, c={floor_min}")
    return cone_min, floor_min


def save_grid_function(grid: GridFunction, path: str | Path) -> None:
    payload = {
        "M": grid.M,
        "grid": "midpoint",
        "domain": "unit_square",
        "samples": [[float(z.real), float(z.imag)] for z in grid.samples.ravel()],
    }
    Path(path).write_text(json.dumps(payload) + "\n")


def load_grid_function(path: str | Path) -> GridFunction:
    payload = json.loads(Path(path).read_text())
    if payload.get("grid") != "midpoint" or payload.get("domain") != "unit_square":
        raise ValueError("unsupported grid function header")
    M = int(payload["M"])
    flat = np.array([complex(re, im) for re, im in payload["samples"]])
    if flat.size != M * M:
        raise ValueError("sample count does not match declared M")
    return GridFunction(flat.reshape(M, M))
