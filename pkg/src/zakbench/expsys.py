"""Weighted exponential systems on the unit circle.

A system is built from a weight g sampled on the shifted uniform grid
t_i = (i + 1/2)/N, a symmetric frequency window |n| <= W, one removed
index k, and an anchor point t0.  The functions studied are

    (g e_n)(t) = g(t) * exp(2 pi i n t),        |n| <= W, n != k,

together with the closed-form biorthogonal family

    dual_n = (e_n + c_n e_k) / conj(g),   c_n = -exp(2 pi i (n - k) t0),

whose numerator vanishes at the anchor.  The shifted grid keeps weights
such as g(t) = t nonzero at every node, so the division is always
defined.  Sampled exponentials with in-window frequencies are exactly
orthonormal under the 1/N quadrature weight, which the tests exploit
as an oracle.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import IndexOutOfWindow, RemovedIndex, SpectrumFail, WeightVanishesOnGrid
from .reports import SweepFlags, SweepLevel, SweepReport

__all__ = [
    "PeriodicSignal",
    "ExpSystem",
    "NAMED_WEIGHTS",
    "shifted_nodes",
    "exponential",
    "weighted_exp",
    "dual_coefficient",
    "biorthogonal_dual",
    "biorthogonality_gram",
    "schauder_failure_sweep",
    "completeness_defect",
    "inverse_weight_energy",
    "save_signal",
    "load_signal",
]

# Weights selectable by name on the command line.  Each maps the node
# array to complex samples.
NAMED_WEIGHTS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "linear": lambda t: t.astype(complex),
    "one": lambda t: np.ones_like(t, dtype=complex),
    "sqrt": lambda t: np.sqrt(t).astype(complex),
}

# Ladder growth above this ratio per refinement step counts as "grows".
ENERGY_GROWTH_RATIO = 1.05


def shifted_nodes(N: int) -> np.ndarray:
    """Quadrature nodes t_i = (i + 1/2)/N."""
    return (np.arange(N) + 0.5) / N


def exponential(N: int, n: int) -> np.ndarray:
    """Samples of e_n(t) = exp(2 pi i n t) on the shifted grid."""
    return np.exp(2j * np.pi * n * shifted_nodes(N))


@dataclass(frozen=True, eq=False)
class PeriodicSignal:
    """Complex samples of a circle function on the shifted grid.

    ``sampler`` keeps the generating function when one is known, which
    lets hypothesis checks resample the weight on coarser grids.  A
    signal loaded from disk has no sampler.
    """

    samples: np.ndarray
    sampler: Callable[[np.ndarray], np.ndarray] | None = None

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=complex)
        if arr.ndim != 1:
            raise ValueError("samples must be a 1d array")
        if arr.size < 2 or arr.size % 2 != 0:
            raise ValueError(f"N must be a positive even integer, got {arr.size}")
        object.__setattr__(self, "samples", arr)

    @property
    def N(self) -> int:
        return self.samples.size

    def nodes(self) -> np.ndarray:
        return shifted_nodes(self.N)

    def norm(self) -> float:
        """L2 norm under the 1/N quadrature weight."""
        return float(np.sqrt(np.sum(np.abs(self.samples) ** 2) / self.N))

    @classmethod
    def from_function(cls, fn: Callable[[np.ndarray], np.ndarray], N: int) -> "PeriodicSignal":
        return cls(np.asarray(fn(shifted_nodes(N)), dtype=complex), sampler=fn)

    @classmethod
    def from_name(cls, name: str, N: int) -> "PeriodicSignal":
        try:
            fn = NAMED_WEIGHTS[name]
        except KeyError:
            raise ValueError(f"unknown weight name {name!r}, expected one of {sorted(NAMED_WEIGHTS)}")
        return cls.from_function(fn, N)


@dataclass(frozen=True, eq=False)
class ExpSystem:
    """Weighted exponentials over a finite window with one removed index."""

    weight: PeriodicSignal
    window: int              # W, active frequencies satisfy |n| <= W
    removed: int | None = None   # k, the dropped index; None keeps the full window
    anchor: float = 0.0      # t0, where the dual numerators vanish

    def __post_init__(self):
        if self.window < 1:
            raise ValueError("window must be at least 1")
        # Keep the window inside the alias-free band of the grid.
        if 2 * self.window + 1 > self.weight.N // 2:
            raise ValueError(
                f"window {self.window} too wide for N={self.weight.N}: need 2W+1 <= N/2"
            )
        if self.removed is not None and abs(self.removed) > self.window:
            raise ValueError(f"removed index {self.removed} outside window {self.window}")
        if not 0.0 <= self.anchor < 1.0:
            raise ValueError(f"anchor must lie in [0, 1), got {self.anchor}")

    @property
    def N(self) -> int:
        return self.weight.N

    def active_indices(self) -> list[int]:
        return [n for n in range(-self.window, self.window + 1) if n != self.removed]


def _check_in_window(system: ExpSystem, n: int) -> None:
    if abs(n) > system.window:
        raise IndexOutOfWindow(f"index {n} outside window |n| <= {system.window}")


def weighted_exp(system: ExpSystem, n: int) -> np.ndarray:
    """Samples of g(t) exp(2 pi i n t)."""
    _check_in_window(system, n)
    return system.weight.samples * exponential(system.N, n)


def dual_coefficient(system: ExpSystem, n: int) -> complex:
    """Unimodular coefficient c_n = -exp(2 pi i (n - k) t0).

    Chosen so that e_n + c_n e_k vanishes at the anchor t0.
    """
    if system.removed is None:
        raise ValueError("system has no removed index")
    _check_in_window(system, n)
    if n == system.removed:
        raise RemovedIndex(f"index {n} is the removed index")
    return complex(-np.exp(2j * np.pi * (n - system.removed) * system.anchor))


def biorthogonal_dual(system: ExpSystem, n: int) -> np.ndarray:
    """Samples of (e_n + c_n e_k) / conj(g), biorthogonal to the system."""
    c = dual_coefficient(system, n)  # validates the index
    g = system.weight.samples
    if np.min(np.abs(g)) < 1e-300:
        raise WeightVanishesOnGrid("weight vanishes at a grid node")
    numerator = exponential(system.N, n) + c * exponential(system.N, system.removed)
    return numerator / np.conj(g)


def biorthogonality_gram(system: ExpSystem) -> np.ndarray:
    """Matrix of <g e_m, dual_n> over the active indices.

    Equals the identity up to rounding: the weight cancels node by node
    and the leftover exponential sums are exact Kronecker deltas for
    in-window frequencies.
    """
    act = system.active_indices()
    primal = np.array([weighted_exp(system, m) for m in act])
    duals = np.array([biorthogonal_dual(system, n) for n in act])
    return primal @ duals.conj().T / system.N


def inverse_weight_energy(fn: Callable[[np.ndarray], np.ndarray], N: int) -> float:
    """Quadrature estimate of the integral of 1/|g|^2 at resolution N."""
    g = np.asarray(fn(shifted_nodes(N)), dtype=complex)
    return float(np.sum(1.0 / np.abs(g) ** 2) / N)


def _hypothesis_notes(system: ExpSystem) -> list[str]:
    """Refinement-ladder check of the integrability of 1/|g|^2.

    The construction needs 1/g outside L2; a bounded ladder means the
    hypothesis fails (for example g identically one) and is reported,
    not raised, because the duals stay biorthogonal regardless.
    """
    notes: list[str] = []
    fn = system.weight.sampler
    if fn is None:
        energy = float(np.sum(1.0 / np.abs(system.weight.samples) ** 2) / system.N)
        notes.append(
            f"weight given as samples only; inverse weight energy {energy:.6g} at N={system.N}, "
            "refinement ladder unavailable"
        )
        return notes
    ladder = [max(4, system.N // 4), max(4, system.N // 2), system.N]
    energies = [inverse_weight_energy(fn, n) for n in ladder]
    ratios = [b / a for a, b in zip(energies, energies[1:])]
    grows = all(r >= ENERGY_GROWTH_RATIO for r in ratios)
    detail = ", ".join(f"N={n}: {e:.6g}" for n, e in zip(ladder, energies))
    if grows:
        notes.append(f"inverse weight energy grows under refinement ({detail}): consistent with 1/g outside L2")
    else:
        notes.append(f"hypothesis 1/g not in L2 fails: inverse weight energy stays bounded ({detail})")
    return notes


def schauder_failure_sweep(system: ExpSystem, max_terms: int) -> SweepReport:
    """Partial sums of the dual expansion of the removed element.

    Levels are concentric in |n - k|.  Level L reports the residual
    || g e_k - S_L || of the partial sum

        S_L = sum over 0 < |n - k| <= L, |n| <= W of conj(c_n) g e_n

    and the largest norm among the newly added terms.  Every term has
    norm ||g|| because |c_n| = 1, so the terms cannot tend to zero and
    the expansion cannot converge in norm; the report flags this when
    the late-level term norms fail to decay.
    """
    if system.removed is None:
        raise ValueError("sweep needs a removed index to reconstruct")
    if not 1 <= max_terms <= system.window:
        raise ValueError(f"max_terms must lie in [1, {system.window}]")
    k = system.removed
    target = weighted_exp(system, k)
    g_norm = system.weight.norm()

    levels: list[SweepLevel] = []
    partial = np.zeros(system.N, dtype=complex)
    active = set(system.active_indices())
    for L in range(1, max_terms + 1):
        new_terms = [n for n in (k - L, k + L) if n in active]
        term_norm = 0.0
        for n in new_terms:
            term = np.conj(dual_coefficient(system, n)) * weighted_exp(system, n)
            partial = partial + term
            term_norm = max(term_norm, float(np.sqrt(np.sum(np.abs(term) ** 2) / system.N)))
        residual = float(np.sqrt(np.sum(np.abs(target - partial) ** 2) / system.N))
        levels.append(SweepLevel(L=L, residual=residual, term_norm=term_norm))

    late = [lv.term_norm for lv in levels[-5:]]
    no_norm_convergence = max(late) >= 0.99 * g_norm
    flags = SweepFlags(
        no_norm_convergence=bool(no_norm_convergence),
        hypothesis_notes=_hypothesis_notes(system),
    )
    return SweepReport(
        grid_N=system.N,
        window_W=system.window,
        removed_k=k,
        anchor_t0=float(system.anchor),
        levels=levels,
        flags=flags,
    )


def completeness_defect(system: ExpSystem) -> float:
    """Smallest singular value of the active weighted exponential family.

    Rows are scaled by sqrt(1/N) so singular values live on the L2
    scale: an orthonormal family scores exactly one, a numerically
    dependent truncation scores near zero.
    """
    act = system.active_indices()
    rows = np.array([weighted_exp(system, n) for n in act]) / np.sqrt(system.N)
    try:
        sv = np.linalg.svd(rows, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise SpectrumFail(f"svd did not converge: {exc}") from exc
    return float(sv[-1])


def save_signal(signal: PeriodicSignal, path: str | Path) -> None:
    payload = {
        "N": signal.N,
        "grid": "shifted_midpoint",
        "samples": [[float(z.real), float(z.imag)] for z in signal.samples],
    }
    Path(path).write_text(json.dumps(payload) + "\n")


def load_signal(path: str | Path) -> PeriodicSignal:
    payload = json.loads(Path(path).read_text())
    if payload.get("grid") != "shifted_midpoint":
        raise ValueError(f"unsupported grid {payload.get('grid')!r}")
    samples = np.array([complex(re, im) for re, im in payload["samples"]])
    if samples.size != payload["N"]:
        raise ValueError("sample count does not match declared N")
    return PeriodicSignal(samples)
