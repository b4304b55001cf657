"""Alternating sandwich mapping and the block error locator.

After :func:`asm` every ``E``-qubit block is followed by ``t`` qubits in
``|0>`` and ``t`` in ``|1>``. Up to ``t`` deletions shift the boundary
between those runs, and measuring the ``|0>`` window of block ``b`` in the
post-deletion register reveals how many deletions happened before it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import CapabilityError, IntegrityError
from .state import (
    MeasurementRecord,
    SparseDensity,
    State,
    as_density,
    insert_qubits,
    measure_computational,
    partial_trace,
    tensor,
)


@dataclass(frozen=True)
class AsmLayout:
    N: int
    E: int
    t: int

    def __post_init__(self):
        if self.N < 1 or self.E < 1 or self.t < 0:
            raise ValueError(f"invalid layout N={self.N}, E={self.E}, t={self.t}")

    @property
    def block_length(self) -> int:
        return self.E + 2 * self.t

    @property
    def total_qubits(self) -> int:
        return self.N * self.block_length

    def _start(self, b: int) -> int:
        if not 1 <= b <= self.N:
            raise IndexError(f"block {b} out of range 1..{self.N}")
        return (b - 1) * self.block_length

    def data_span(self, b: int) -> range:
        s = self._start(b)
        return range(s + 1, s + self.E + 1)

    def o_span(self, b: int) -> range:
        s = self._start(b) + self.E
        return range(s + 1, s + self.t + 1)

    def l_span(self, b: int) -> range:
        s = self._start(b) + self.E + self.t
        return range(s + 1, s + self.t + 1)


@dataclass(frozen=True)
class LocOutput:
    flagged_blocks: tuple[int, ...]
    reconstructed: SparseDensity
    weights: tuple[int, ...]  # w_0 .. w_N
    outcomes: tuple[str, ...]  # s_b for b = 1..N
    records: tuple[MeasurementRecord, ...] = field(repr=False, default=())


def asm(rho: State, t: int, E: int) -> State:
    """Append ``|0^t>|1^t>`` after each ``E``-qubit block."""
    if E < 1 or rho.num_qubits % E:
        raise ValueError(f"{rho.num_qubits} qubits do not split into blocks of {E}")
    layout = AsmLayout(rho.num_qubits // E, E, t)
    positions: list[int] = []
    for b in range(1, layout.N + 1):
        positions.extend(layout.o_span(b))
        positions.extend(layout.l_span(b))
    bits = ("0" * t + "1" * t) * layout.N
    return insert_qubits(rho, positions, bits)


def window_weight_measure(
    tau: State, a: int, t: int, seed: int | None = None
) -> tuple[int, MeasurementRecord, SparseDensity]:
    """Measure post-deletion positions ``a+1 .. a+t``; the weight counts deletions.

    For a register laid out as ``rho_1 (a qubits) ⊗ |0^t> ⊗ |1^t> ⊗ rho_4``
    that suffered at most ``t`` deletions, the Hamming weight of the outcome
    equals the number of deletions among the first ``a + t`` original qubits.
    """
    positions = range(a + 1, a + t + 1)
    if t and a + t > tau.num_qubits:
        raise IndexError(f"window {a + 1}..{a + t} exceeds {tau.num_qubits} qubits")
    record, post = measure_computational(tau, list(positions), seed)
    return record.hamming_weight, record, post


def _is_marker_pattern(s: str) -> bool:
    """True for outcomes of the form 0...01...1."""
    return "10" not in s


def loc(
    tau_prime: State,
    layout: AsmLayout,
    seed: int | None = None,
    *,
    offset_fault: int = 0,
) -> LocOutput:
    """Locate deleted blocks and rebuild an ``N*E``-qubit state with them zeroed.

    The number of deletions is never an input: it is read off the markers.
    ``offset_fault`` shifts the data extraction window and exists only so
    verification harnesses can prove they detect a broken decoder.
    """
    N, E, t = layout.N, layout.E, layout.t
    n_prime = tau_prime.num_qubits
    if n_prime < layout.total_qubits - t:
        raise CapabilityError(
            f"received {n_prime} qubits; more than t={t} deletions cannot be handled"
        )
    state = as_density(tau_prime)
    if t:
        state = tensor(state, SparseDensity.basis_state("1" * t))

    weights = [0]
    outcomes: list[str] = []
    records: list[MeasurementRecord] = []
    for b in range(1, N + 1):
        a = (b - 1) * layout.block_length + E
        sub_seed = None if seed is None else int(np.random.SeedSequence([seed, b]).generate_state(1)[0])
        w, record, state = window_weight_measure(state, a, t, sub_seed)
        if not _is_marker_pattern(record.outcomes):
            raise IntegrityError(f"block {b} window read {record.outcomes!r}, not 0...01...1")
        if w < weights[-1]:
            raise IntegrityError(f"deletion count decreased at block {b}: {weights[-1]} -> {w}")
        weights.append(w)
        outcomes.append(record.outcomes)
        records.append(record)

    flagged = tuple(b for b in range(1, N + 1) if weights[b] != weights[b - 1])
    if len(flagged) > t:
        raise IntegrityError(f"{len(flagged)} blocks flagged but at most t={t} deletions allowed")

    keep: list[int] = []
    for b in range(1, N + 1):
        if b in flagged:
            continue
        start = (b - 1) * layout.block_length - weights[b] + offset_fault
        keep.extend(range(start + 1, start + E + 1))
    if keep and (keep[0] < 1 or keep[-1] > state.num_qubits):
        raise IntegrityError("extraction window falls outside the received register")
    kept = set(keep)
    drop = [q for q in range(1, state.num_qubits + 1) if q not in kept]
    data = partial_trace(state, drop)
    zero_positions = [(b - 1) * E + e for b in flagged for e in range(1, E + 1)]
    rebuilt = insert_qubits(data, zero_positions, "0" * len(zero_positions))
    return LocOutput(flagged, as_density(rebuilt), tuple(weights), tuple(outcomes), tuple(records))


def window_positions(layout: AsmLayout, b: int) -> Sequence[int]:
    """Post-deletion positions measured for block ``b``."""
    a = (b - 1) * layout.block_length + layout.E
    return range(a + 1, a + layout.t + 1)
