"""Fully controlled single-qubit gates from Gray-ordered two-level factors.

Rows of a 2^n x 2^n gate carry n-bit labels, most significant bit first;
qubit 1 is the leftmost label position.  A two-level factor whose row pair
differs in exactly one bit is a fully controlled gate: the differing bit is
the target qubit, the shared bits are the control values.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .decompose import (
    TwoLevelFactor,
    decompose,
    reconstruct_factors,
    reconstruction_tol,
)
from .errors import DimensionError
from .gray import gray_code, gray_to_permutation
from .linalg import determinant, frobenius_distance

__all__ = [
    "ControlledGate",
    "Circuit",
    "GateClass",
    "CircuitReport",
    "factor_to_gate",
    "gate_to_factor",
    "synthesize_circuit",
    "gate_classes",
    "apply_circuit",
    "verify_circuit",
]


@dataclass(frozen=True, eq=False)
class ControlledGate:
    """A 2 x 2 unitary ``v`` on one target qubit, conditioned on all others.

    ``controls`` lists (qubit, value) for every non-target qubit in qubit
    order.  Row/column 0 of ``v`` corresponds to target-bit 0.
    """

    n: int
    target: int
    controls: tuple[tuple[int, int], ...]
    v: np.ndarray

    def basis_pair(self) -> tuple[int, int]:
        """0-based basis indices (target bit 0, target bit 1) the gate acts on."""
        base = 0
        for qubit, value in self.controls:
            base |= value << (self.n - qubit)
        return base, base | (1 << (self.n - self.target))


@dataclass(frozen=True)
class Circuit:
    """Gate list in product order: the matrix is gates[0] gates[1] ... (last acts first)."""

    n: int
    gates: tuple[ControlledGate, ...]


@dataclass(frozen=True)
class GateClass:
    """The (target, control-pattern) family a gate belongs to; one per label pair."""

    rows_pair: tuple[int, int]  # 1-based indices, ascending
    target: int
    controls: tuple[tuple[int, int], ...]


def _label(index: int, n: int) -> str:
    return format(index, f"0{n}b")


def factor_to_gate(f: TwoLevelFactor, n: int) -> ControlledGate:
    """Interpret a two-level factor as a fully controlled single-qubit gate.

    The factor's 1-based row pair, read as 0-based n-bit labels, must differ
    in exactly one bit; that position becomes the target qubit.  The block is
    reindexed so v's first row/column corresponds to target-bit 0, swapping
    when the factor's logical pair lists the target-bit-1 label first.
    """
    r0, r1 = f.rows
    hi = 1 << n
    if not (1 <= r0 <= hi and 1 <= r1 <= hi):
        raise DimensionError(f"rows {f.rows} out of range for {n} qubits")
    x, y = r0 - 1, r1 - 1
    diff = x ^ y
    if diff == 0 or diff & (diff - 1):
        raise ValueError(
            f"labels {_label(x, n)} and {_label(y, n)} differ in more than one bit; "
            "not a controlled gate"
        )
    target = n - (diff.bit_length() - 1)
    controls = tuple(
        (q, (x >> (n - q)) & 1) for q in range(1, n + 1) if q != target
    )
    if x & diff:  # logical pair has target-bit 1 first: conjugate by the swap
        v = f.block[::-1, ::-1].copy()
    else:
        v = f.block.copy()
    return ControlledGate(n=n, target=target, controls=controls, v=v)


def gate_to_factor(g: ControlledGate) -> TwoLevelFactor:
    """Inverse of factor_to_gate, with rows normalized to target-bit order (0, 1)."""
    x0, x1 = g.basis_pair()
    return TwoLevelFactor(
        type_k=None,
        rows=(x0 + 1, x1 + 1),
        block=g.v.copy(),
        det=complex(determinant(g.v)),
    )


def synthesize_circuit(u: np.ndarray, n: int, tol: float | None = None) -> Circuit:
    """Express a 2^n x 2^n unitary as fully controlled single-qubit gates.

    Decomposes along the reflected Gray code ordering, under which every
    factor's row pair differs in one bit, so each maps to a gate.  At most
    2^{n-1} (2^n - 1) gates result, drawn from at most 2^n - 1 classes.
    """
    u = np.asarray(u)
    d = u.shape[0] if u.ndim == 2 else 0
    if d != 1 << n or u.shape != (d, d):
        raise DimensionError(f"expected a {1 << n} x {1 << n} matrix for n={n}, got {u.shape}")
    perm = gray_to_permutation(gray_code(n))
    dec = decompose(u, perm, tol=tol)
    return Circuit(n=n, gates=tuple(factor_to_gate(f, n) for f in dec.factors))


def gate_classes(c: Circuit) -> dict[GateClass, int]:
    """Group gates by shared label pair; returns each class with its gate count."""
    counts: Counter[GateClass] = Counter()
    for g in c.gates:
        x0, x1 = g.basis_pair()
        counts[GateClass(rows_pair=(x0 + 1, x1 + 1), target=g.target, controls=g.controls)] += 1
    return dict(counts)


@dataclass
class CircuitReport:
    """Recomputed health report for a circuit against its source matrix."""

    n: int
    residual: float
    residual_tol: float
    gate_count: int
    gate_bound: int
    class_count: int
    class_bound: int
    max_unitarity_error: float
    controls_ok: bool
    reconstruction_ok: bool = field(init=False)
    gates_unitary_ok: bool = field(init=False)
    count_ok: bool = field(init=False)
    classes_ok: bool = field(init=False)

    def __post_init__(self) -> None:
        self.reconstruction_ok = self.residual <= self.residual_tol
        self.gates_unitary_ok = self.max_unitarity_error <= 1e-13
        self.count_ok = self.gate_count <= self.gate_bound
        self.classes_ok = self.class_count <= self.class_bound

    @property
    def passed(self) -> bool:
        return (
            self.reconstruction_ok
            and self.gates_unitary_ok
            and self.count_ok
            and self.classes_ok
            and self.controls_ok
        )

    def failures(self) -> list[str]:
        out = []
        if not self.reconstruction_ok:
            out.append(f"residual {self.residual:.3e} exceeds tol {self.residual_tol:.3e}")
        if not self.gates_unitary_ok:
            out.append(f"gate unitarity error {self.max_unitarity_error:.3e} exceeds 1e-13")
        if not self.count_ok:
            out.append(f"{self.gate_count} gates exceed bound {self.gate_bound}")
        if not self.classes_ok:
            out.append(f"{self.class_count} classes exceed bound {self.class_bound}")
        if not self.controls_ok:
            out.append("some gate does not control every non-target qubit exactly once")
        return out


def verify_circuit(u: np.ndarray, c: Circuit, tol: float | None = None) -> CircuitReport:
    """Recompute circuit invariants and the reconstruction residual against ``u``."""
    u = np.asarray(u, dtype=np.complex128)
    d = 1 << c.n
    if u.shape != (d, d):
        raise DimensionError(f"matrix shape {u.shape} does not match {c.n}-qubit circuit")
    product = reconstruct_factors((gate_to_factor(g) for g in c.gates), d)
    unit_errs = [
        frobenius_distance(g.v.conj().T @ g.v, np.eye(2)) for g in c.gates
    ]
    controls_ok = all(
        sorted(q for q, _ in g.controls) == [q for q in range(1, c.n + 1) if q != g.target]
        for g in c.gates
    )
    return CircuitReport(
        n=c.n,
        residual=frobenius_distance(u, product),
        residual_tol=tol if tol is not None else reconstruction_tol(d),
        gate_count=len(c.gates),
        gate_bound=(1 << (c.n - 1)) * ((1 << c.n) - 1) if c.n >= 1 else 0,
        class_count=len(gate_classes(c)),
        class_bound=(1 << c.n) - 1,
        max_unitarity_error=max(unit_errs, default=0.0),
        controls_ok=controls_ok,
    )


def apply_circuit(c: Circuit, state) -> np.ndarray:
    """Apply the circuit to a state vector of length 2^n.

    Gates act right to left (the last list entry first), matching the matrix
    product convention.  Each fully controlled gate touches exactly the two
    amplitudes its label pair selects.
    """
    vec = np.asarray(state, dtype=np.complex128).copy()
    if vec.shape != (1 << c.n,):
        raise DimensionError(f"state length {vec.shape} does not match {1 << c.n} amplitudes")
    for g in reversed(c.gates):
        i0, i1 = g.basis_pair()
        s0, s1 = vec[i0], vec[i1]
        vec[i0] = g.v[0, 0] * s0 + g.v[0, 1] * s1
        vec[i1] = g.v[1, 0] * s0 + g.v[1, 1] * s1
    return vec
