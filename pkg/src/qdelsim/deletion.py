"""Quantum deletion errors as partial traces."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .state import SparseDensity, State, as_density, partial_trace


@dataclass(frozen=True)
class DeletionPattern:
    """Strictly increasing 1-based positions in a register of ``original_length`` qubits."""

    positions: tuple[int, ...]
    original_length: int

    def __init__(self, positions: Iterable[int], original_length: int):
        pos = tuple(int(p) for p in positions)
        if any(b <= a for a, b in zip(pos, pos[1:])):
            raise ValueError(f"deletion positions must be strictly increasing: {pos}")
        if pos and not (1 <= pos[0] and pos[-1] <= original_length):
            raise IndexError(f"deletion positions {pos} out of range 1..{original_length}")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "original_length", int(original_length))

    def __len__(self) -> int:
        return len(self.positions)


def delete(tau: State, i: int) -> SparseDensity:
    """Single deletion: trace out qubit ``i``."""
    return partial_trace(tau, [i])


def delete_multi(tau: State, pattern: DeletionPattern | Iterable[int]) -> SparseDensity:
    """Apply ``D_{i_1} ∘ ... ∘ D_{i_t}``, positions given in original coordinates.

    The rightmost map acts first; deleting from the highest index down keeps
    every remaining index valid in the original register.
    """
    tau = as_density(tau)
    if not isinstance(pattern, DeletionPattern):
        pattern = DeletionPattern(pattern, tau.num_qubits)
    if pattern.original_length != tau.num_qubits:
        raise ValueError(
            f"pattern is for {pattern.original_length} qubits, state has {tau.num_qubits}"
        )
    for i in reversed(pattern.positions):
        tau = delete(tau, i)
    return tau
