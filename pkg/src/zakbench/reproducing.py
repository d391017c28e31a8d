"""Reproducing pairs of finite vector families.

Two ordered families psi, phi in a weighted coordinate space form a
reproducing pair when the mixed operator

    S f = weight * sum_i <f, psi_i> phi_i

is the identity (after normalising by S^{-1} it always is, whenever S
is invertible).  The functions here quantify how the pair behaves when
phi splits into a head of n extra elements and a tail that is minimal
and complete on its own: the tail's biorthogonal family differs from
the psi tail by a correction through the head, the head is recoverable
from the tail expansion, and dropping the head entirely still leaves a
valid expansion of the inner product.  All identities are exact in
finite dimensions; the reports carry their rounding-level residuals.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import (
    FamilyMismatch,
    HeadDependent,
    NoDependence,
    NotMinimal,
    NotReproducingPair,
    TailNotExact,
)
from .linalg import gram_matrix, rank_and_span
from .reports import ExcessReport, RpCheckReport

logger = logging.getLogger(__name__)

__all__ = [
    "FiniteFamily",
    "ReproducingPairCheck",
    "s_operator",
    "reproducing_identity_check",
    "normalize_pair",
    "canonical_dual_frame",
    "in_span_biorthogonal",
    "partner_is_biorthogonal",
    "excess_one_identities",
    "excess_n_identities",
    "reduce_dependent_pair",
    "span_vectors",
    "random_spanning_family",
    "random_excess_pair",
    "random_pair_check",
]


@dataclass(frozen=True, eq=False)
class FiniteFamily:
    """Ordered family of vectors; the ordering is part of the identity.

    Rows of ``matrix`` are the vectors.  ``weight`` is the quadrature
    weight of the ambient inner product.
    """

    matrix: np.ndarray
    weight: float = 1.0

    def __post_init__(self):
        arr = np.asarray(self.matrix, dtype=complex)
        if arr.ndim != 2:
            raise ValueError("matrix must be 2d with vectors as rows")
        if arr.shape[0] == 0 or arr.shape[1] == 0:
            raise ValueError("family must contain at least one nonempty vector")
        if self.weight <= 0:
            raise ValueError("weight must be positive")
        object.__setattr__(self, "matrix", arr)

    def __len__(self) -> int:
        return self.matrix.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.matrix.shape[1]

    def head(self, n: int) -> "FiniteFamily":
        return FiniteFamily(self.matrix[:n], self.weight)

    def tail(self, n: int) -> "FiniteFamily":
        return FiniteFamily(self.matrix[n:], self.weight)

    def vector_norm(self, v: np.ndarray) -> float:
        return float(np.sqrt(self.weight) * np.linalg.norm(v))


@dataclass(frozen=True, eq=False)
class ReproducingPairCheck:
    s_matrix: np.ndarray
    identity_deviation: float     # worst normalised gap of the expansion over the trials
    invertibility_margin: float   # smallest singular value of the mixed operator


def _check_aligned(psi: FiniteFamily, phi: FiniteFamily) -> None:
    if len(psi) != len(phi):
        raise FamilyMismatch(f"family lengths differ: {len(psi)} vs {len(phi)}")
    if psi.ambient_dim != phi.ambient_dim:
        raise FamilyMismatch(
            f"ambient dimensions differ: {psi.ambient_dim} vs {phi.ambient_dim}"
        )
    if psi.weight != phi.weight:
        raise FamilyMismatch(f"weights differ: {psi.weight} vs {phi.weight}")


def s_operator(psi: FiniteFamily, phi: FiniteFamily) -> np.ndarray:
    """Matrix of f -> weight * sum_i <f, psi_i> phi_i on coordinates.

    The adjoint of s_operator(psi, phi) is s_operator(phi, psi); both
    are assembled from the same products, so the relation holds to
    entrywise rounding.
    """
    _check_aligned(psi, phi)
    return psi.weight * (phi.matrix.T @ psi.matrix.conj())


def _random_unit_vectors(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    v = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    return v


def reproducing_identity_check(
    psi: FiniteFamily,
    phi: FiniteFamily,
    trials: int = 32,
    seed: int = 0,
) -> ReproducingPairCheck:
    """Test <f, g> = weight * sum_i <f, psi_i> <phi_i, g> on random pairs.

    The deviation is |lhs - rhs| normalised by ||f|| ||g||, maximised
    over the trials, so it reads as an operator-norm-level gap.
    """
    _check_aligned(psi, phi)
    S = s_operator(psi, phi)
    sv = np.linalg.svd(S, compute_uv=False)
    rng = np.random.default_rng(seed)
    w = psi.weight
    worst = 0.0
    fs = _random_unit_vectors(rng, trials, psi.ambient_dim)
    gs = _random_unit_vectors(rng, trials, psi.ambient_dim)
    for f, g in zip(fs, gs):
        lhs = w * np.vdot(g, f)
        coeff_f = w * (psi.matrix.conj() @ f)        # <f, psi_i>
        coeff_g = w * (phi.matrix @ g.conj())        # <phi_i, g>
        rhs = np.sum(coeff_f * coeff_g)
        scale = w * np.linalg.norm(f) * np.linalg.norm(g)
        worst = max(worst, abs(lhs - rhs) / scale)
    return ReproducingPairCheck(
        s_matrix=S,
        identity_deviation=float(worst),
        invertibility_margin=float(sv[-1]),
    )


def normalize_pair(psi: FiniteFamily, phi: FiniteFamily) -> FiniteFamily:
    """Replace phi by S^{-1} phi so the mixed operator becomes the identity."""
    S = s_operator(psi, phi)
    sv = np.linalg.svd(S, compute_uv=False)
    if sv[-1] <= 1e-14 * sv[0]:
        raise NotReproducingPair("mixed operator is numerically singular")
    new_rows = np.linalg.solve(S, phi.matrix.T).T
    return FiniteFamily(new_rows, phi.weight)


def canonical_dual_frame(family: FiniteFamily) -> FiniteFamily:
    """Dual frame S_frame^{-1} applied to each vector.

    Pairing a spanning family with its canonical dual gives a mixed
    operator equal to the identity up to the linear solve's rounding.
    """
    frame_op = family.weight * (family.matrix.T @ family.matrix.conj())
    sv = np.linalg.svd(frame_op, compute_uv=False)
    if sv[-1] <= 1e-14 * sv[0]:
        raise ValueError("family does not span the ambient space")
    return FiniteFamily(np.linalg.solve(frame_op, family.matrix.T).T, family.weight)


def in_span_biorthogonal(family: FiniteFamily, tol: float = 1e-10) -> FiniteFamily:
    """Biorthogonal family inside the span, via the Gram inverse.

    Needs the family minimal: the Gram matrix must be invertible with
    smallest eigenvalue above tol.
    """
    gram = gram_matrix(family.matrix, family.weight)
    eigvals = np.linalg.eigvalsh(gram)
    if eigvals[0] <= tol:
        raise NotMinimal(f"gram margin {eigvals[0]:.3e} at or below tol {tol:.3e}")
    return FiniteFamily(np.linalg.solve(gram, family.matrix), family.weight)


def partner_is_biorthogonal(
    phi_exact: FiniteFamily, psi: FiniteFamily, tol: float = 1e-10
) -> bool:
    """Whether psi coincides with the biorthogonal dual of an exact family.

    For a minimal family whose mixed operator with psi is the identity,
    the partner has no freedom left: it must be the Gram-inverse dual.
    Returns True when the mixed operator is within tol of the identity
    and every psi_j is within tol of the dual vector.
    """
    _check_aligned(psi, phi_exact)
    dual = in_span_biorthogonal(phi_exact, tol)   # raises NotMinimal on margin failure
    S = s_operator(psi, phi_exact)
    s_dev = float(np.max(np.abs(S - np.eye(phi_exact.ambient_dim))))
    diff = psi.matrix - dual.matrix
    vec_dev = float(max(phi_exact.vector_norm(row) for row in diff)) if len(psi) else 0.0
    return s_dev <= tol and vec_dev <= tol


def _greedy_dependent_index(mat: np.ndarray, tol: float) -> int | None:
    """First row that adds nothing to the span of its predecessors."""
    for j in range(mat.shape[0]):
        r_with = rank_and_span(mat[: j + 1], tol)
        if r_with <= (rank_and_span(mat[:j], tol) if j else 0):
            return j
    return None


def _reduce_once(
    phi_mat: np.ndarray,
    psi_mat: np.ndarray,
    tol: float,
) -> tuple[np.ndarray, np.ndarray, str]:
    """Drop one dependent head element, correcting the other family.

    When psi_{last} = sum_j c_j psi_j the bilinear form
    sum <f, psi_k> <phi_k, g> is preserved by keeping psi_0..psi_{n-2}
    and replacing phi_k by phi_k + conj(c_k) phi_{last}.  The roles are
    symmetric.  The dependent element is moved to the last slot first;
    the permutation applies to both families so pairs stay matched.
    """
    n = phi_mat.shape[0]
    psi_rank = rank_and_span(psi_mat, tol)
    phi_rank = rank_and_span(phi_mat, tol)
    if psi_rank < n:
        dep_mat, other_mat, role = psi_mat, phi_mat, "psi"
    elif phi_rank < n:
        dep_mat, other_mat, role = phi_mat, psi_mat, "phi"
    else:
        raise NoDependence("both heads are linearly independent at the working tolerance")

    j = _greedy_dependent_index(dep_mat, tol)
    if j is None:
        raise NoDependence("rank deficiency detected but no single dependent element found")
    order = [i for i in range(n) if i != j] + [j]
    if order != list(range(n)):
        logger.info("reduce_dependent_pair: moved element %d to the end (order %s)", j, order)
    dep_mat = dep_mat[order]
    other_mat = other_mat[order]

    coeffs, *_ = np.linalg.lstsq(dep_mat[:-1].T, dep_mat[-1], rcond=None)
    fit_residual = np.linalg.norm(dep_mat[:-1].T @ coeffs - dep_mat[-1])
    if fit_residual > tol * (1.0 + np.linalg.norm(dep_mat[-1])):
        raise NoDependence(
            f"dependent element sits {fit_residual:.3e} away from the span of the others"
        )

    dep_red = dep_mat[:-1]
    other_red = other_mat[:-1] + np.conj(coeffs)[:, None] * other_mat[-1]
    note = f"eliminated {role} head element {j} (fit residual {fit_residual:.3e})"
    if role == "psi":
        return other_red, dep_red, note
    return dep_red, other_red, note


def reduce_dependent_pair(
    phi_head: FiniteFamily,
    psi_head: FiniteFamily,
    tol: float = 1e-10,
) -> tuple[FiniteFamily, FiniteFamily, str]:
    """Shorten a head pair with one dependent side by one element.

    The returned pair has length n - 1, spans subspaces of the original
    spans, and generates the same bilinear form
    sum_k <f, psi_k> <phi_k, g> for every f and g.  The third element
    describes which side was reduced and how.
    """
    _check_aligned(psi_head, phi_head)
    if len(phi_head) < 2:
        raise ValueError("reduction needs heads of length at least 2")
    phi_red, psi_red, note = _reduce_once(phi_head.matrix, psi_head.matrix, tol)
    logger.info("reduce_dependent_pair: %s", note)
    return (
        FiniteFamily(phi_red, phi_head.weight),
        FiniteFamily(psi_red, psi_head.weight),
        note,
    )


def span_vectors(psi_head: FiniteFamily, phi_tail: FiniteFamily) -> FiniteFamily:
    """Coordinate vectors v_m = (<psi_0, phi_m>, ..., <psi_{n-1}, phi_m>).

    With an independent head and a complete tail these vectors span all
    of C^n, which is what lets head coefficients be recovered from tail
    data.  The returned family lives in plain C^n with weight one.
    """
    if psi_head.ambient_dim != phi_tail.ambient_dim:
        raise FamilyMismatch(
            f"ambient dimensions differ: {psi_head.ambient_dim} vs {phi_tail.ambient_dim}"
        )
    n = len(psi_head)
    if n == 0:
        raise FamilyMismatch("psi head is empty")
    if rank_and_span(psi_head.matrix) < n:
        raise HeadDependent("psi head is linearly dependent")
    if rank_and_span(phi_tail.matrix) < phi_tail.ambient_dim:
        raise TailNotExact("phi tail does not span the ambient space")
    # rows: one vector per tail element m, entries <psi_j, phi_m>
    vecs = psi_head.weight * (phi_tail.matrix.conj() @ psi_head.matrix.T)
    return FiniteFamily(vecs, 1.0)


def _excess_engine(
    phi: FiniteFamily,
    psi: FiniteFamily,
    n: int,
    tol: float,
    trials: int,
    seed: int,
    experiment: str,
) -> ExcessReport:
    _check_aligned(psi, phi)
    if not 0 <= n < len(phi):
        raise ValueError(f"head length {n} must lie in [0, {len(phi)})")
    w = phi.weight
    dim = phi.ambient_dim
    notes: list[str] = []

    phi_mat = phi.matrix.copy()
    psi_mat = psi.matrix.copy()

    # Normalise away dependent heads first; each pass drops one element.
    # A length-one head never reduces: a zero vector there contributes
    # nothing and the identities hold as written (the trivial branch).
    while n > 1 and (
        rank_and_span(phi_mat[:n], tol) < n or rank_and_span(psi_mat[:n], tol) < n
    ):
        phi_head_red, psi_head_red, note = _reduce_once(phi_mat[:n], psi_mat[:n], tol)
        phi_mat = np.vstack([phi_head_red, phi_mat[n:]])
        psi_mat = np.vstack([psi_head_red, psi_mat[n:]])
        n -= 1
        notes.append(f"reduction: {note}; head length now {n}")

    tail_phi = phi_mat[n:]
    if tail_phi.shape[0] != dim:
        raise TailNotExact(
            f"tail length {tail_phi.shape[0]} != ambient dimension {dim}; "
            "the finite model of an exact sequence needs a minimal complete tail"
        )
    tail_gram = gram_matrix(tail_phi, w)
    tail_margin = float(np.linalg.eigvalsh(tail_gram)[0])
    if tail_margin <= tol:
        raise TailNotExact(f"tail gram margin {tail_margin:.3e} at or below tol {tol:.3e}")

    pair = reproducing_identity_check(
        FiniteFamily(psi_mat, w), FiniteFamily(phi_mat, w), trials=trials, seed=seed
    )
    if pair.identity_deviation > tol:
        raise NotReproducingPair(
            f"identity deviation {pair.identity_deviation:.3e} exceeds tol {tol:.3e}"
        )

    # Biorthogonal family of the tail, unique since the tail is a basis.
    tilde = np.linalg.solve(tail_gram, tail_phi)

    if n > 0 and np.max(np.abs(psi_mat[:n])) == 0.0:
        notes.append("trivial branch: psi head is zero, the tail duals equal the psi tail")

    # Partner correction: tilde_j = psi_j + sum_{k<n} <tilde_j, phi_k> psi_k.
    if n > 0:
        head_ip = w * (tilde @ phi_mat[:n].conj().T)      # <tilde_j, phi_k>
        predicted = psi_mat[n:] + head_ip @ psi_mat[:n]
    else:
        predicted = psi_mat[n:]
    partner_residual = float(
        max(np.sqrt(w) * np.linalg.norm(tilde - predicted, axis=1), default=0.0)
    )

    # Head reconstruction from the tail expansion:
    # phi_k = sum_j <phi_k, tilde_j> phi_j for k < n.
    if n > 0:
        coef = w * (phi_mat[:n] @ tilde.conj().T)          # <phi_k, tilde_j>
        recon = coef @ tail_phi
        head_residual = float(np.max(np.sqrt(w) * np.linalg.norm(phi_mat[:n] - recon, axis=1)))
    else:
        head_residual = 0.0

    # Final chain <f, g> = sum_j <f, tilde_j> <phi_j, g> plus the head
    # coefficient identity u = sum_j w_j on random probes.
    rng = np.random.default_rng(seed)
    fs = _random_unit_vectors(rng, trials, dim)
    gs = _random_unit_vectors(rng, trials, dim)
    chain_worst = 0.0
    vector_worst = 0.0
    trajectory: list[float] = []
    for idx, (f, g) in enumerate(zip(fs, gs)):
        lhs = w * np.vdot(g, f)
        cf = w * (tilde.conj() @ f)            # <f, tilde_j>
        cg = w * (tail_phi @ g.conj())         # <phi_j, g>
        rhs = np.sum(cf * cg)
        chain_worst = max(chain_worst, abs(lhs - rhs) / (w * np.linalg.norm(f) * np.linalg.norm(g)))
        if n > 0:
            u = w * (phi_mat[:n] @ g.conj())   # <phi_k, g>
            wk = (w * (phi_mat[:n] @ tilde.conj().T)) * cg[None, :]   # column j: w_j entries
            partial = np.cumsum(wk, axis=1)
            errs = np.linalg.norm(u[:, None] - partial, axis=0)
            vector_worst = max(vector_worst, float(errs[-1]) / max(np.linalg.norm(u), 1e-30))
            if idx == 0:
                trajectory = [float(e) for e in errs]
    residuals = {
        "partner_correction": partner_residual,
        "head_reconstruction": head_residual,
        "final_chain": float(chain_worst),
    }
    margins = {
        "tail_gram_margin": tail_margin,
        "pair_identity_deviation": float(pair.identity_deviation),
        "head_vector_identity": float(vector_worst),
    }
    return ExcessReport(
        experiment=experiment,
        ambient_dim=dim,
        n=n,
        residuals=residuals,
        margins=margins,
        seed=seed,
        head_sum_trajectory=trajectory,
        notes=notes,
    )


def excess_one_identities(
    phi: FiniteFamily,
    psi: FiniteFamily,
    tol: float = 1e-11,
    trials: int = 20,
    seed: int = 0,
) -> ExcessReport:
    """Identities for a family exceeding a minimal complete tail by one element.

    The tail duals absorb the head through a rank-one correction, the
    head element is recoverable from the tail expansion, and the inner
    product expands through the tail alone.  Residuals of all three are
    reported and should sit at rounding level (10 tol is the acceptance
    line) whenever the preconditions hold.
    """
    return _excess_engine(phi, psi, 1, tol, trials, seed, "excess_one")


def excess_n_identities(
    phi: FiniteFamily,
    psi: FiniteFamily,
    n: int,
    tol: float = 1e-11,
    trials: int = 20,
    seed: int = 0,
) -> ExcessReport:
    """Same identities for a head of n elements over a minimal complete tail.

    Dependent heads are reduced away pair by pair before the residuals
    are formed; the report notes record the reduction chain.  With
    n = 1 the output agrees with excess_one_identities field by field.
    """
    return _excess_engine(phi, psi, n, tol, trials, seed, "excess_n")


def random_spanning_family(
    dim: int,
    count: int,
    rng: np.random.Generator,
    weight: float = 1.0,
    singular_range: tuple[float, float] = (0.5, 2.0),
) -> FiniteFamily:
    """Random family with all singular values clipped into a fixed range.

    Clipping keeps every experiment away from accidental near-degeneracy
    while preserving the randomness of the singular subspaces, so rank
    and margin preconditions hold by construction for count >= dim.
    """
    if count < 1 or dim < 1:
        raise ValueError("count and dim must be positive")
    lo, hi = singular_range
    if not 0.0 < lo <= hi:
        raise ValueError("singular range must satisfy 0 < lo <= hi")
    raw = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    u, s, vh = np.linalg.svd(raw, full_matrices=False)
    return FiniteFamily(u @ (np.clip(s, lo, hi)[:, None] * vh), weight)


def random_excess_pair(
    dim: int,
    n: int,
    rng: np.random.Generator,
    weight: float = 1.0,
    dependent_head: bool = False,
) -> tuple[FiniteFamily, FiniteFamily]:
    """Reproducing pair with n head elements over a guaranteed-exact tail.

    phi stacks n random head vectors on a clipped random basis; psi is
    the dual frame, which makes the mixed operator the identity.  With
    dependent_head the last head vector copies twice the first, which
    forces the reduction path in the excess identities.
    """
    if n < 0:
        raise ValueError("head length must be nonnegative")
    tail = random_spanning_family(dim, dim, rng, weight)
    head = (rng.standard_normal((n, dim)) + 1j * rng.standard_normal((n, dim))) / np.sqrt(dim)
    if dependent_head:
        if n < 2:
            raise ValueError("a dependent head needs at least two elements")
        head[-1] = 2.0 * head[0]
    phi = FiniteFamily(np.vstack([head, tail.matrix]), weight)
    return phi, canonical_dual_frame(phi)


def random_pair_check(
    dim: int = 8,
    pairs: int = 20,
    trials: int = 8,
    seed: int = 0,
) -> RpCheckReport:
    """Normalisation experiment over random invertible mixed operators.

    Each round draws two clipped random bases, normalises phi by the
    inverse mixed operator, and records the worst identity deviation,
    the worst relative asymmetry between the mixed operator and the
    adjoint of its swapped partner, and the smallest margin of the raw
    operator.  Clipping bounds that margin below by the product of the
    smallest singular values, so no redraws are needed.
    """
    if pairs < 1:
        raise ValueError("pairs must be positive")
    rng = np.random.default_rng(seed)
    worst_dev = 0.0
    worst_asym = 0.0
    min_margin = float("inf")
    for _ in range(pairs):
        phi = random_spanning_family(dim, dim, rng)
        psi = random_spanning_family(dim, dim, rng)
        raw = s_operator(psi, phi)
        min_margin = min(min_margin, float(np.linalg.svd(raw, compute_uv=False)[-1]))
        normalized = normalize_pair(psi, phi)
        check = reproducing_identity_check(
            psi, normalized, trials=trials, seed=int(rng.integers(2**31))
        )
        worst_dev = max(worst_dev, check.identity_deviation)
        swapped = s_operator(normalized, psi)
        asym = float(
            np.max(np.abs(check.s_matrix - swapped.conj().T)) / np.max(np.abs(check.s_matrix))
        )
        worst_asym = max(worst_asym, asym)
    return RpCheckReport(
        ambient_dim=dim,
        family_count=dim,
        pair_count=pairs,
        trials_per_pair=trials,
        seed=seed,
        max_identity_deviation=float(worst_dev),
        max_adjoint_asymmetry=float(worst_asym),
        min_invertibility_margin=float(min_margin),
        passed=bool(worst_dev <= 1e-10 and worst_asym <= 1e-12),
    )
