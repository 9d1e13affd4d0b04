"""Reflected binary Gray codes and their induced elimination orderings.

Bit strings are plain ``str`` values of '0'/'1' characters, most significant
bit first, so the row labels of an 8 x 8 gate read 000, 001, ..., 111.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "GrayCode",
    "gray_code",
    "gray_to_permutation",
    "validate_gray_path",
    "hamming_distance",
]

MAX_QUBITS = 20  # 2**20 strings; the decomposition engine gives out far earlier


@dataclass(frozen=True)
class GrayCode:
    """An ordering of all n-bit strings with single-bit steps, cyclically closed."""

    n: int
    seq: tuple[str, ...]


def gray_code(n: int) -> GrayCode:
    """Build the reflected Gray code on n bits.

    Recursively: start from (0, 1); each level prefixes the previous sequence
    with 0, then appends the reversed sequence prefixed with 1.
    """
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"bit count must be in 1..{MAX_QUBITS}, got {n}")
    seq = ["0", "1"]
    for _ in range(n - 1):
        seq = ["0" + s for s in seq] + ["1" + s for s in reversed(seq)]
    return GrayCode(n=n, seq=tuple(seq))


def gray_to_permutation(g: GrayCode) -> tuple[int, ...]:
    """1-based row-index ordering induced by the code: entry k is 1 + int(seq[k], 2)."""
    return tuple(1 + int(s, 2) for s in g.seq)


def hamming_distance(x: str, y: str) -> int:
    """Number of differing positions between two equal-length bit strings."""
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    return sum(cx != cy for cx, cy in zip(x, y))


def validate_gray_path(seq) -> tuple[bool, int | None]:
    """Check that consecutive strings differ in exactly one bit.

    Accepts any nonempty sequence of equal-length bit strings; cyclic closure
    is not required, so Gray sub-paths validate too.  Returns ``(True, None)``
    or ``(False, i)`` where i is the first position whose predecessor is not
    at Hamming distance 1.
    """
    seq = list(seq)
    if not seq:
        raise ValueError("empty sequence")
    width = len(seq[0])
    if any(len(s) != width for s in seq):
        raise ValueError("bit strings must share one length")
    for i in range(1, len(seq)):
        if hamming_distance(seq[i - 1], seq[i]) != 1:
            return False, i
    return True, None
