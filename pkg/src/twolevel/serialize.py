"""JSON wire formats for matrices, decompositions, circuits, and states.

Complex scalars serialize as [re, im] pairs.  Floats go through Python's
shortest round-trip repr, so every double survives a write/read cycle
bit-exactly.  Readers validate structure and shapes only; numeric invariants
(unitarity, determinants, residuals) are the verifier's job, so tampered
files still load and can be reported on.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .decompose import Decomposition, TwoLevelFactor
from .qgate import Circuit, ControlledGate

__all__ = [
    "matrix_to_json",
    "matrix_from_json",
    "decomposition_to_json",
    "decomposition_from_json",
    "circuit_to_json",
    "circuit_from_json",
    "state_to_json",
    "state_from_json",
    "mus_from_json",
    "dump",
    "load",
]


def _pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _from_pair(p, what: str) -> complex:
    if not (isinstance(p, (list, tuple)) and len(p) == 2):
        raise ValueError(f"{what}: expected a [re, im] pair, got {p!r}")
    return complex(float(p[0]), float(p[1]))


def _block_to_json(m: np.ndarray) -> list:
    return [[_pair(z) for z in row] for row in np.asarray(m)]


def _block_from_json(rows, d: int, what: str) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != d or any(len(r) != d for r in rows):
        raise ValueError(f"{what}: expected {d} rows of {d} entries")
    return np.array([[_from_pair(z, what) for z in row] for row in rows], dtype=np.complex128)


def matrix_to_json(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=np.complex128)
    return {"d": int(m.shape[0]), "entries": _block_to_json(m)}


def matrix_from_json(doc: Any) -> np.ndarray:
    if not isinstance(doc, dict) or "d" not in doc or "entries" not in doc:
        raise ValueError("matrix document needs 'd' and 'entries' fields")
    d = int(doc["d"])
    if d < 1:
        raise ValueError(f"matrix dimension must be positive, got {d}")
    return _block_from_json(doc["entries"], d, "matrix entries")


def decomposition_to_json(dec: Decomposition) -> dict:
    return {
        "d": dec.d,
        "permutation": list(dec.permutation),
        "factors": [
            {
                "type": f.type_k,
                "rows": list(f.rows),
                "block": _block_to_json(f.block),
                "det": _pair(f.det),
            }
            for f in dec.factors
        ],
        "residual": dec.residual,
        "mode": dec.mode,
    }


def decomposition_from_json(doc: Any) -> Decomposition:
    try:
        d = int(doc["d"])
        perm = tuple(int(j) for j in doc["permutation"])
        mode = str(doc["mode"])
        residual = float(doc["residual"])
        raw_factors = doc["factors"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed decomposition document: {exc}") from exc
    factors = []
    for entry in raw_factors:
        rows = entry["rows"]
        if len(rows) != 2:
            raise ValueError(f"factor rows must be a pair, got {rows!r}")
        factors.append(
            TwoLevelFactor(
                type_k=None if entry.get("type") is None else int(entry["type"]),
                rows=(int(rows[0]), int(rows[1])),
                block=_block_from_json(entry["block"], 2, "factor block"),
                det=_from_pair(entry["det"], "factor det"),
            )
        )
    return Decomposition(
        d=d,
        permutation=perm,
        factors=tuple(factors),
        residual=residual,
        nonidentity_count=sum(not f.is_identity() for f in factors),
        mode=mode,
    )


def circuit_to_json(c: Circuit) -> dict:
    return {
        "n": c.n,
        "gates": [
            {
                "target": g.target,
                "controls": [{"qubit": q, "value": v} for q, v in g.controls],
                "v": _block_to_json(g.v),
            }
            for g in c.gates
        ],
    }


def circuit_from_json(doc: Any) -> Circuit:
    try:
        n = int(doc["n"])
        raw_gates = doc["gates"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed circuit document: {exc}") from exc
    gates = []
    for entry in raw_gates:
        controls = tuple(
            (int(cv["qubit"]), int(cv["value"])) for cv in entry["controls"]
        )
        if any(v not in (0, 1) for _, v in controls):
            raise ValueError("control values must be 0 or 1")
        gates.append(
            ControlledGate(
                n=n,
                target=int(entry["target"]),
                controls=controls,
                v=_block_from_json(entry["v"], 2, "gate v"),
            )
        )
    return Circuit(n=n, gates=tuple(gates))


def state_to_json(state) -> list:
    return [_pair(z) for z in np.asarray(state, dtype=np.complex128)]


def state_from_json(doc: Any) -> np.ndarray:
    if not isinstance(doc, list):
        raise ValueError("state document must be a JSON array of [re, im] pairs")
    return np.array([_from_pair(z, "state amplitude") for z in doc], dtype=np.complex128)


def mus_from_json(doc: Any) -> list[complex]:
    if not isinstance(doc, list):
        raise ValueError("prescription document must be a JSON array of [re, im] pairs")
    return [_from_pair(z, "prescribed determinant") for z in doc]


def dump(doc: Any, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load(path) -> Any:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON ({exc})") from exc
