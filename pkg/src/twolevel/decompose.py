"""Factor unitary matrices into ordered products of two-level factors.

Given a d x d unitary U and an elimination ordering P = (j1, ..., jd), the
engine sweeps the columns of U in P-order, zeroing each column below its
pivot with embedded 2 x 2 elimination blocks.  Each applied block E has a
unit-modulus determinant chosen by the caller (prescribed mode) or fixed to
1 except for a single residual phase (auto mode); the emitted factors are
the adjoints E^H, listed so that U = F1 F2 ... FN within roundoff.

Every factor is "two-level": it differs from the identity only in the 2 x 2
principal submatrix at a pair of P-adjacent indices.  The factor count never
exceeds d(d-1)/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, NotUnitaryError, PrescriptionError
from .linalg import (
    assert_unitary,
    default_unitarity_tol,
    determinant,
    frobenius_distance,
)

__all__ = [
    "ZERO_TOL",
    "TwoLevelFactor",
    "Decomposition",
    "EliminationPlan",
    "VerificationReport",
    "elimination_block",
    "phase_block",
    "sweep_schedule",
    "decompose",
    "decompose_restricted",
    "embed_factor",
    "reconstruct",
    "verify",
    "active_indices",
    "apply_elimination_plan",
]

# Pivot-skip threshold on u = sqrt(|a|^2 + |b|^2).  Entries of a unitary are
# at most 1 in modulus, so anything below this is numerically zero.
ZERO_TOL = 1e-12

_I2 = np.eye(2, dtype=np.complex128)


def reconstruction_tol(d: int) -> float:
    """Default residual tolerance 1e-10*d."""
    return 1e-10 * d


@dataclass(frozen=True, eq=False)
class TwoLevelFactor:
    """One two-level factor of a decomposition.

    ``rows`` is the 1-based index pair the 2 x 2 ``block`` occupies, in the
    logical order of the elimination sweep (which may descend numerically,
    e.g. (4, 3)).  ``type_k`` is the pair's position within the elimination
    ordering, or None for factors from a free-form elimination plan.
    ``det`` is the factor's determinant, always of modulus 1.
    """

    type_k: int | None
    rows: tuple[int, int]
    block: np.ndarray
    det: complex

    def is_identity(self, tol: float = ZERO_TOL) -> bool:
        return frobenius_distance(self.block, _I2) <= tol


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Ordered factorization U = F1 F2 ... FN of a d x d unitary.

    ``permutation`` is the elimination ordering that produced the factors; for
    restricted decompositions it lists only the swept subsequence.  ``residual``
    is the Frobenius distance of the reconstructed product from the input.
    """

    d: int
    permutation: tuple[int, ...]
    factors: tuple[TwoLevelFactor, ...]
    residual: float
    nonidentity_count: int
    mode: str  # "auto" | "prescribed"


@dataclass(frozen=True)
class EliminationPlan:
    """Free-form elimination directives: ((row_i, row_j), column) per step.

    Each step zeroes the (row_j, column) entry using a block on the stated
    row pair; the pair need not be adjacent in any single ordering.
    """

    steps: tuple[tuple[tuple[int, int], int], ...]


def elimination_block(a: complex, b: complex, mu: complex) -> np.ndarray:
    """2 x 2 unitary B with B (a, b)^T = (u, 0)^T, u = sqrt(|a|^2+|b|^2) > 0.

    B = (1/u) [[conj(a), conj(b)], [-conj(mu) b, conj(mu) a]], so det(B) is
    exactly conj(mu).  ``mu`` must have modulus 1; the pivot pair must not be
    numerically zero.  When b = 0 the formula degenerates continuously to the
    phase normalizer diag(conj(a)/|a|, conj(mu) a/|a|).
    """
    if abs(abs(mu) - 1.0) > 1e-10:
        raise ValueError(f"determinant prescription must have modulus 1, got |mu|={abs(mu)!r}")
    u = math.hypot(abs(a), abs(b))
    if u <= ZERO_TOL:
        raise ValueError("degenerate pivot: both entries numerically zero")
    mub = complex(mu).conjugate()
    return np.array(
        [
            [np.conj(a) / u, np.conj(b) / u],
            [-mub * b / u, mub * a / u],
        ],
        dtype=np.complex128,
    )


def phase_block(mu: complex) -> np.ndarray:
    """diag(1, conj(mu)): carries a prescribed determinant past a zero pivot pair."""
    if abs(abs(mu) - 1.0) > 1e-10:
        raise ValueError(f"determinant prescription must have modulus 1, got |mu|={abs(mu)!r}")
    return np.array([[1.0, 0.0], [0.0, complex(mu).conjugate()]], dtype=np.complex128)


def sweep_schedule(d: int) -> list[tuple[int, int]]:
    """Elimination order as (column_slot k, type t) pairs, both 1-based.

    Column slot k is cleared bottom-up: types d-1, d-2, ..., k.  Total length
    d(d-1)/2.
    """
    if d < 2:
        raise ValueError(f"schedule needs dimension >= 2, got {d}")
    return [(k, t) for k in range(1, d) for t in range(d - 1, k - 1, -1)]


def validate_permutation(perm, d: int) -> tuple[int, ...]:
    """Check that perm is a permutation of 1..d; returns it as a tuple."""
    p = tuple(int(j) for j in perm)
    if sorted(p) != list(range(1, d + 1)):
        raise ValueError(f"not a permutation of 1..{d}: {p}")
    return p


def _validate_prescription(mus, count: int, det_u: complex) -> list[complex]:
    mus = [complex(m) for m in mus]
    if len(mus) != count:
        raise PrescriptionError(f"prescription needs exactly {count} values, got {len(mus)}")
    for i, mu in enumerate(mus):
        if abs(abs(mu) - 1.0) > 1e-10:
            raise PrescriptionError(f"prescribed determinant {i + 1} has modulus {abs(mu)!r}, not 1")
    prod = complex(1.0)
    for mu in mus:
        prod *= mu
    if abs(prod - det_u) > 1e-8:
        raise PrescriptionError(
            f"prescribed determinants multiply to {prod!r}, expected det(U) = {det_u!r}"
        )
    return mus


def _sweep(work: np.ndarray, order: tuple[int, ...], mus: list[complex] | None) -> list[TwoLevelFactor]:
    """Run the elimination sweep over ``order`` in place; return emitted factors.

    ``mus`` is the full prescription (one value per schedule entry) or None
    for auto mode.  In auto mode all eliminations use determinant 1 except the
    final schedule entry, which absorbs the residual phase of the remaining
    2 x 2 block; steps whose block would be the identity emit nothing.  In
    prescribed mode every schedule entry emits exactly one factor, falling
    back to a phase block when the pivot pair is numerically zero.
    """
    m = len(order)
    prescribed = mus is not None
    factors: list[TwoLevelFactor] = []
    for i, (k, t) in enumerate(sweep_schedule(m)):
        col = order[k - 1] - 1
        r0 = order[t - 1] - 1
        r1 = order[t] - 1
        a = complex(work[r0, col])
        b = complex(work[r1, col])
        u = math.hypot(abs(a), abs(b))
        last = k == m - 1  # the single type-(d-1) step of the final column slot
        if prescribed:
            mu = mus[i]
        elif last:
            # Residual phase: determinant of the remaining active 2 x 2 block,
            # normalized so the closing diagonal entry lands exactly on 1.
            blk_det = complex(work[r0, r0] * work[r1, r1] - work[r0, r1] * work[r1, r0])
            mu = blk_det / abs(blk_det)
        else:
            mu = 1.0
        if u <= ZERO_TOL:
            # Nothing to eliminate.  Prescribed mode still owes a factor with
            # determinant mu; auto mode skips the step entirely.
            if prescribed:
                blk = phase_block(mu)
                work[r1, :] *= blk[1, 1]
                factors.append(TwoLevelFactor(t, (r0 + 1, r1 + 1), blk.conj().T, complex(mu)))
            continue
        blk = elimination_block(a, b, mu)
        if not prescribed and frobenius_distance(blk, _I2) <= ZERO_TOL:
            continue
        work[[r0, r1], :] = blk @ work[[r0, r1], :]
        factors.append(TwoLevelFactor(t, (r0 + 1, r1 + 1), blk.conj().T, complex(mu)))
    return factors


def decompose(u: np.ndarray, perm, mus=None, tol: float | None = None) -> Decomposition:
    """Factor a unitary into two-level factors along the ordering ``perm``.

    ``mus``: optional determinant prescription, one modulus-1 value per
    schedule entry (d(d-1)/2 of them) whose product must equal det(U) within
    1e-8; each emitted factor i then has determinant mus[i].  Without a
    prescription the factors all have determinant 1 except the last, which
    carries det(U).

    Raises NotUnitaryError for non-unitary input and PrescriptionError for an
    invalid prescription.
    """
    u = assert_unitary(u, tol)
    d = u.shape[0]
    if d < 2:
        raise DimensionError(f"decomposition needs dimension >= 2, got {d}")
    p = validate_permutation(perm, d)
    mode = "auto" if mus is None else "prescribed"
    prescription = None
    if mus is not None:
        prescription = _validate_prescription(mus, d * (d - 1) // 2, determinant(u))
    work = u.copy()
    factors = _sweep(work, p, prescription)
    residual = frobenius_distance(u, reconstruct_factors(factors, d))
    return Decomposition(
        d=d,
        permutation=p,
        factors=tuple(factors),
        residual=residual,
        nonidentity_count=sum(not f.is_identity() for f in factors),
        mode=mode,
    )


def active_indices(u: np.ndarray, tol: float) -> list[int]:
    """1-based indices whose row or column deviates from the identity's by more than tol.

    For U = I_a (+) V (+) I_b this is exactly the index range of the V block.
    """
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise DimensionError(f"expected a square matrix, got {u.shape}")
    delta = np.abs(u - np.eye(u.shape[0]))
    hot = (delta.max(axis=1) > tol) | (delta.max(axis=0) > tol)
    return [int(i) + 1 for i in np.flatnonzero(hot)]


def decompose_restricted(u: np.ndarray, sub_order, tol: float | None = None) -> Decomposition:
    """Sweep only the subsequence ``sub_order`` of row/column indices (auto phases).

    Valid whenever the input differs from the identity only inside the
    subsequence; raises ValueError when an active index falls outside it.
    """
    u = assert_unitary(u, tol)
    d = u.shape[0]
    sub = tuple(int(j) for j in sub_order)
    if len(set(sub)) != len(sub) or any(not 1 <= j <= d for j in sub):
        raise ValueError(f"subsequence must be distinct indices in 1..{d}: {sub}")
    if len(sub) < 2:
        raise DimensionError("subsequence must contain at least two indices")
    missing = [i for i in active_indices(u, ZERO_TOL) if i not in set(sub)]
    if missing:
        raise ValueError(f"active indices {missing} not covered by subsequence {sub}")
    work = u.copy()
    factors = _sweep(work, sub, None)
    residual = frobenius_distance(u, reconstruct_factors(factors, d))
    return Decomposition(
        d=d,
        permutation=sub,
        factors=tuple(factors),
        residual=residual,
        nonidentity_count=sum(not f.is_identity() for f in factors),
        mode="auto",
    )


def embed_factor(f: TwoLevelFactor, d: int) -> np.ndarray:
    """Expand a factor to the full d x d two-level matrix."""
    r0, r1 = f.rows
    if not (1 <= r0 <= d and 1 <= r1 <= d) or r0 == r1:
        raise DimensionError(f"factor rows {f.rows} out of range for dimension {d}")
    m = np.eye(d, dtype=np.complex128)
    idx = (r0 - 1, r1 - 1)
    m[np.ix_(idx, idx)] = f.block
    return m


def reconstruct_factors(factors, d: int) -> np.ndarray:
    """Product F1 F2 ... FN of embedded factors (identity for an empty list)."""
    out = np.eye(d, dtype=np.complex128)
    for f in factors:
        r0, r1 = f.rows[0] - 1, f.rows[1] - 1
        if not (0 <= r0 < d and 0 <= r1 < d) or r0 == r1:
            raise DimensionError(f"factor rows {f.rows} out of range for dimension {d}")
        # Right-multiplying by a two-level matrix only mixes two columns.
        out[:, [r0, r1]] = out[:, [r0, r1]] @ f.block
    return out


def reconstruct(dec: Decomposition, d: int) -> np.ndarray:
    """Rebuild the original matrix from a decomposition's factor list."""
    return reconstruct_factors(dec.factors, d)


@dataclass
class VerificationReport:
    """Recomputed-from-scratch health report for a decomposition."""

    d: int
    residual: float
    residual_tol: float
    factor_count: int
    nonidentity_count: int
    count_bound: int
    max_unitarity_error: float
    max_det_error: float
    det_product_error: float
    reconstruction_ok: bool = field(init=False)
    factors_unitary_ok: bool = field(init=False)
    dets_ok: bool = field(init=False)
    det_product_ok: bool = field(init=False)
    count_ok: bool = field(init=False)
    structure_ok: bool = True

    def __post_init__(self) -> None:
        self.reconstruction_ok = self.residual <= self.residual_tol
        self.factors_unitary_ok = self.max_unitarity_error <= 1e-13
        self.dets_ok = self.max_det_error <= 1e-13
        self.det_product_ok = self.det_product_error <= 1e-8
        self.count_ok = self.nonidentity_count <= self.count_bound

    @property
    def passed(self) -> bool:
        return (
            self.reconstruction_ok
            and self.factors_unitary_ok
            and self.dets_ok
            and self.det_product_ok
            and self.count_ok
            and self.structure_ok
        )

    def failures(self) -> list[str]:
        out = []
        if not self.reconstruction_ok:
            out.append(f"residual {self.residual:.3e} exceeds tol {self.residual_tol:.3e}")
        if not self.factors_unitary_ok:
            out.append(f"factor unitarity error {self.max_unitarity_error:.3e} exceeds 1e-13")
        if not self.dets_ok:
            out.append(f"factor det mismatch {self.max_det_error:.3e} exceeds 1e-13")
        if not self.det_product_ok:
            out.append(f"det product error {self.det_product_error:.3e} exceeds 1e-8")
        if not self.count_ok:
            out.append(f"{self.nonidentity_count} non-identity factors exceed bound {self.count_bound}")
        if not self.structure_ok:
            out.append("factor rows/types do not follow the sweep schedule")
        return out


def _schedule_structure_ok(dec: Decomposition) -> bool:
    """Factors must visit schedule entries in order, on the declared row pairs."""
    m = len(dec.permutation)
    if m < 2:
        return not dec.factors
    schedule = sweep_schedule(m)
    pos = 0
    for f in dec.factors:
        if f.type_k is None:
            return False
        while pos < len(schedule) and schedule[pos][1] != f.type_k:
            pos += 1
        if pos == len(schedule):
            return False
        t = f.type_k
        if f.rows != (dec.permutation[t - 1], dec.permutation[t]):
            return False
        pos += 1
    return True


def verify(u: np.ndarray, dec: Decomposition, tol: float | None = None) -> VerificationReport:
    """Recompute every decomposition invariant against the original matrix.

    Never raises on a bad decomposition; all violations land in the report.
    """
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (dec.d, dec.d):
        raise DimensionError(f"matrix shape {u.shape} does not match decomposition d={dec.d}")
    d = dec.d
    residual = frobenius_distance(u, reconstruct_factors(dec.factors, d))
    unit_errs = [frobenius_distance(f.block.conj().T @ f.block, _I2) for f in dec.factors]
    det_errs = [abs(determinant(f.block) - f.det) for f in dec.factors]
    det_errs += [abs(abs(f.det) - 1.0) for f in dec.factors]
    det_prod = complex(1.0)
    for f in dec.factors:
        det_prod *= f.det
    m = len(dec.permutation)
    report = VerificationReport(
        d=d,
        residual=residual,
        residual_tol=tol if tol is not None else reconstruction_tol(d),
        factor_count=len(dec.factors),
        nonidentity_count=sum(not f.is_identity() for f in dec.factors),
        count_bound=m * (m - 1) // 2,
        max_unitarity_error=max(unit_errs, default=0.0),
        max_det_error=max(det_errs, default=0.0),
        det_product_error=abs(det_prod - determinant(u)) if dec.factors else abs(determinant(u) - 1.0),
    )
    report.structure_ok = _schedule_structure_ok(dec)
    return report


def apply_elimination_plan(u: np.ndarray, plan: EliminationPlan, tol: float | None = None):
    """Run a free-form elimination plan; returns (factors, residual matrix).

    Each step zeroes the working matrix's (row_j, column) entry with a block
    on rows (row_i, row_j), all with determinant 1 (auto phases).  The caller
    judges whether the returned residual closed to the identity; the relation
    U = F1 ... Fm (+) residual drift always holds via the returned factors.
    """
    u = assert_unitary(u, tol)
    d = u.shape[0]
    work = u.copy()
    factors: list[TwoLevelFactor] = []
    for (ri, rj), col in plan.steps:
        if not (1 <= ri <= d and 1 <= rj <= d and 1 <= col <= d) or ri == rj:
            raise ValueError(f"plan step (({ri},{rj}),{col}) out of range for dimension {d}")
        r0, r1, c = ri - 1, rj - 1, col - 1
        a = complex(work[r0, c])
        b = complex(work[r1, c])
        if math.hypot(abs(a), abs(b)) <= ZERO_TOL:
            continue  # entry already zero and no pivot to normalize against
        blk = elimination_block(a, b, 1.0)
        if frobenius_distance(blk, _I2) <= ZERO_TOL:
            continue
        work[[r0, r1], :] = blk @ work[[r0, r1], :]
        factors.append(TwoLevelFactor(None, (ri, rj), blk.conj().T, complex(determinant(blk).conjugate())))
    return factors, work
