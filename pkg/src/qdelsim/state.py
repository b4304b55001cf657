"""Sparse computational-basis states.

A state stores only the basis strings it is supported on, as a
``(m, n)`` ``uint8`` bit array, together with amplitudes (kets) or a dense
``m x m`` matrix over that support (densities). Code states in this package
touch a few hundred basis strings of 50-odd qubits, so this is the only
representation that fits.

Qubit positions in the public API are 1-based; the basis string of an
``n``-qubit state is ``x_1 x_2 ... x_n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import NumericalError

PRUNE = 1e-12
TOL = 1e-10
DETERMINISTIC = 1 - 1e-10


def _as_bits(strings: Iterable[str], n: int) -> np.ndarray:
    strings = list(strings)
    rows = [[1 if ch == "1" else 0 for ch in s] for s in strings]
    for s in strings:
        if len(s) != n or set(s) - {"0", "1"}:
            raise ValueError(f"basis string {s!r} is not an {n}-bit string")
    return np.asarray(rows, dtype=np.uint8).reshape(len(rows), n)


def _to_str(row: np.ndarray) -> str:
    return "".join("1" if b else "0" for b in row)


def _group(bits: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unique rows (sorted) and the inverse index of each input row."""
    if bits.shape[1] == 0:
        return bits[:1], np.zeros(bits.shape[0], dtype=np.int64)
    uniq, inverse = np.unique(bits, axis=0, return_inverse=True)
    return uniq, inverse.reshape(-1)


def _check_positions(positions: Iterable[int], n: int) -> list[int]:
    pos = [int(p) for p in positions]
    if any(not 1 <= p <= n for p in pos):
        raise IndexError(f"qubit positions {pos} out of range 1..{n}")
    if len(set(pos)) != len(pos):
        raise ValueError(f"duplicate qubit positions in {pos}")
    return pos


@dataclass(frozen=True)
class SparseKet:
    num_qubits: int
    basis: np.ndarray
    amplitudes: np.ndarray

    @classmethod
    def from_dict(cls, amplitudes: Mapping[str, complex], num_qubits: int | None = None) -> SparseKet:
        keys = list(amplitudes)
        n = num_qubits if num_qubits is not None else len(keys[0])
        amps = np.asarray([amplitudes[k] for k in keys], dtype=complex)
        return cls(n, _as_bits(keys, n), amps).pruned()

    @classmethod
    def basis_state(cls, bits: str) -> SparseKet:
        return cls.from_dict({bits: 1.0}, len(bits))

    def pruned(self) -> SparseKet:
        keep = np.abs(self.amplitudes) >= PRUNE
        uniq, inv = _group(self.basis)
        if len(uniq) != len(self.basis):
            amps = np.zeros(len(uniq), dtype=complex)
            np.add.at(amps, inv, self.amplitudes)
            return SparseKet(self.num_qubits, uniq, amps).pruned()
        return SparseKet(self.num_qubits, self.basis[keep], self.amplitudes[keep])

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def normalized(self) -> SparseKet:
        return SparseKet(self.num_qubits, self.basis, self.amplitudes / self.norm)

    def to_dict(self) -> dict[str, complex]:
        return {_to_str(r): complex(a) for r, a in zip(self.basis, self.amplitudes)}

    def inner(self, other: SparseKet) -> complex:
        """``<self|other>``."""
        mine = {r.tobytes(): a for r, a in zip(self.basis, self.amplitudes)}
        return complex(
            sum(np.conj(mine[r.tobytes()]) * b for r, b in zip(other.basis, other.amplitudes)
                if r.tobytes() in mine)
        )

    def density(self) -> SparseDensity:
        a = self.amplitudes
        return SparseDensity(self.num_qubits, self.basis, np.outer(a, np.conj(a)))

    def validate(self) -> None:
        if abs(self.norm - 1) > TOL:
            raise NumericalError(f"ket norm {self.norm} differs from 1")


@dataclass(frozen=True)
class SparseDensity:
    num_qubits: int
    basis: np.ndarray
    matrix: np.ndarray

    @classmethod
    def from_entries(cls, entries: Mapping[tuple[str, str], complex], num_qubits: int | None = None) -> SparseDensity:
        keys = sorted({k for pair in entries for k in pair})
        n = num_qubits if num_qubits is not None else len(keys[0])
        index = {k: i for i, k in enumerate(keys)}
        mat = np.zeros((len(keys), len(keys)), dtype=complex)
        for (x, y), v in entries.items():
            mat[index[x], index[y]] += v
        return cls(n, _as_bits(keys, n), mat).pruned()

    @classmethod
    def basis_state(cls, bits: str) -> SparseDensity:
        return SparseKet.basis_state(bits).density()

    @classmethod
    def maximally_mixed(cls, num_qubits: int) -> SparseDensity:
        dim = 1 << num_qubits
        keys = [format(i, f"0{num_qubits}b") if num_qubits else "" for i in range(dim)]
        bits = _as_bits(keys, num_qubits)
        return cls(num_qubits, bits, np.eye(dim, dtype=complex) / dim)

    @property
    def entries(self) -> dict[tuple[str, str], complex]:
        labels = [_to_str(r) for r in self.basis]
        out = {}
        for i, j in zip(*np.nonzero(np.abs(self.matrix) >= PRUNE)):
            out[(labels[i], labels[j])] = complex(self.matrix[i, j])
        return out

    def entry(self, x: str, y: str) -> complex:
        return self.entries.get((x, y), 0j)

    def labels(self) -> list[str]:
        return [_to_str(r) for r in self.basis]

    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    def purity(self) -> float:
        return float(np.real(np.vdot(self.matrix, self.matrix)))

    def pruned(self) -> SparseDensity:
        if self.matrix.size == 0:
            return self
        mag = np.abs(self.matrix)
        keep = (mag.max(axis=0) >= PRUNE) | (mag.max(axis=1) >= PRUNE)
        if keep.all():
            return self
        return SparseDensity(self.num_qubits, self.basis[keep], self.matrix[np.ix_(keep, keep)])

    def validate(self, tol: float = TOL) -> None:
        """Check trace, hermiticity and positivity on the spanned subspace."""
        if abs(self.trace() - 1) > tol:
            raise NumericalError(f"trace {self.trace()} differs from 1")
        if np.abs(self.matrix - self.matrix.conj().T).max(initial=0) > tol:
            raise NumericalError("matrix is not Hermitian")
        if self.matrix.size and np.linalg.eigvalsh(self.matrix).min() < -tol:
            raise NumericalError("matrix is not positive semidefinite")

    def index_of(self) -> dict[bytes, int]:
        return {r.tobytes(): i for i, r in enumerate(self.basis)}


@dataclass(frozen=True)
class SparseOperator:
    """Linear operator restricted to ``span{|basis_i>}``."""

    num_qubits: int
    basis: np.ndarray
    matrix: np.ndarray

    def apply(self, ket: SparseKet) -> SparseKet:
        index = {r.tobytes(): i for i, r in enumerate(self.basis)}
        vec = np.zeros(len(self.basis), dtype=complex)
        for r, a in zip(ket.basis, ket.amplitudes):
            i = index.get(r.tobytes())
            if i is None:
                # component outside the operator's domain maps to zero
                continue
            vec[i] += a
        return SparseKet(self.num_qubits, self.basis, self.matrix @ vec).pruned()

    def rank(self, tol: float = 1e-8) -> int:
        return int(np.linalg.matrix_rank(self.matrix, tol=tol))


@dataclass(frozen=True)
class MeasurementRecord:
    positions: tuple[int, ...]
    outcomes: str
    probability: float
    rng_seed_used: int | None  # None when the outcome was certain

    @property
    def hamming_weight(self) -> int:
        return self.outcomes.count("1")


State = SparseKet | SparseDensity


def as_density(state: State) -> SparseDensity:
    return state.density() if isinstance(state, SparseKet) else state


def tensor(a: State, b: State) -> State:
    """``a ⊗ b`` with ``a``'s qubits first."""
    na, nb = len(a.basis), len(b.basis)
    bits = np.concatenate(
        [np.repeat(a.basis, nb, axis=0), np.tile(b.basis, (na, 1))], axis=1
    )
    n = a.num_qubits + b.num_qubits
    if isinstance(a, SparseKet) and isinstance(b, SparseKet):
        return SparseKet(n, bits, np.kron(a.amplitudes, b.amplitudes))
    a, b = as_density(a), as_density(b)
    return SparseDensity(n, bits, np.kron(a.matrix, b.matrix))


def insert_qubits(state: State, positions: Sequence[int], bits: str) -> State:
    """Tensor in fresh basis qubits so they end up at the given final positions.

    ``positions`` are 1-based indices in the *output* register, and
    ``bits[k]`` is the computational-basis value placed at ``positions[k]``.
    """
    n_out = state.num_qubits + len(positions)
    pos = _check_positions(positions, n_out)
    if len(bits) != len(pos):
        raise ValueError("need one bit per inserted position")
    new = np.zeros((len(state.basis), n_out), dtype=np.uint8)
    fresh = np.zeros(n_out, dtype=bool)
    for p, b in zip(pos, bits):
        fresh[p - 1] = True
        new[:, p - 1] = 1 if b == "1" else 0
    new[:, ~fresh] = state.basis
    if isinstance(state, SparseKet):
        return SparseKet(n_out, new, state.amplitudes)
    return SparseDensity(n_out, new, state.matrix)


def permute_qubits(state: State, order: Sequence[int]) -> State:
    """Reorder qubits: output qubit ``k`` is input qubit ``order[k]`` (1-based)."""
    order = _check_positions(order, state.num_qubits)
    if len(order) != state.num_qubits:
        raise ValueError("order must list every qubit once")
    bits = state.basis[:, [p - 1 for p in order]]
    if isinstance(state, SparseKet):
        return SparseKet(state.num_qubits, bits, state.amplitudes)
    return SparseDensity(state.num_qubits, bits, state.matrix)


def partial_trace(tau: State, positions: int | Iterable[int]) -> SparseDensity:
    """Trace out the given 1-based positions; the others keep their order."""
    tau = as_density(tau)
    if isinstance(positions, (int, np.integer)):
        positions = [int(positions)]
    pos = _check_positions(positions, tau.num_qubits)
    if not pos:
        return tau
    traced = np.zeros(tau.num_qubits, dtype=bool)
    traced[[p - 1 for p in pos]] = True
    _, t_key = _group(tau.basis[:, traced])
    kept_bits, k_key = _group(tau.basis[:, ~traced])
    m = len(kept_bits)
    same = t_key[:, None] == t_key[None, :]
    flat = (k_key[:, None] * m + k_key[None, :])[same]
    vals = tau.matrix[same]
    re = np.bincount(flat, weights=vals.real, minlength=m * m)
    im = np.bincount(flat, weights=vals.imag, minlength=m * m)
    mat = (re + 1j * im).reshape(m, m)
    return SparseDensity(tau.num_qubits - len(pos), kept_bits, mat).pruned()


def outcome_distribution(tau: State, positions: Sequence[int]) -> dict[str, float]:
    tau = as_density(tau)
    pos = _check_positions(positions, tau.num_qubits)
    cols = [p - 1 for p in pos]
    patterns, key = _group(tau.basis[:, cols])
    diag = np.real(np.diag(tau.matrix))
    probs = np.bincount(key, weights=diag, minlength=len(patterns))
    return {_to_str(p): float(v) for p, v in zip(patterns, probs)}


def measure_computational(
    tau: State, positions: Sequence[int], seed: int | None = None
) -> tuple[MeasurementRecord, SparseDensity]:
    """Projective computational-basis measurement of the given qubits.

    If one outcome has probability at least ``1 - 1e-10`` it is returned
    without touching the RNG and the record's ``rng_seed_used`` is None.
    """
    tau = as_density(tau)
    pos = _check_positions(positions, tau.num_qubits)
    cols = [p - 1 for p in pos]
    patterns, key = _group(tau.basis[:, cols])
    diag = np.real(np.diag(tau.matrix))
    probs = np.bincount(key, weights=diag, minlength=len(patterns))
    total = probs.sum()
    if total < TOL:
        raise NumericalError("state has vanishing trace; no outcome can be sampled")
    probs = probs / total
    best = int(np.argmax(probs))
    seed_used = None
    if probs[best] >= DETERMINISTIC:
        choice = best
    else:
        if seed is None:
            raise ValueError("a seed is required for a non-deterministic measurement")
        choice = int(np.random.default_rng(seed).choice(len(probs), p=probs))
        seed_used = int(seed)
    rows = key == choice
    record = MeasurementRecord(tuple(pos), _to_str(patterns[choice]), float(probs[choice]), seed_used)
    if rows.all():
        post = SparseDensity(tau.num_qubits, tau.basis, tau.matrix / total)
    else:
        sub = tau.matrix[np.ix_(rows, rows)]
        post = SparseDensity(tau.num_qubits, tau.basis[rows], sub / np.real(np.trace(sub)))
    return record, post


def _joint(a: SparseDensity, b: SparseDensity) -> tuple[np.ndarray, np.ndarray]:
    if a.num_qubits != b.num_qubits:
        raise ValueError(f"qubit counts differ: {a.num_qubits} vs {b.num_qubits}")
    union, inv = _group(np.concatenate([a.basis, b.basis], axis=0))
    ia, ib = inv[: len(a.basis)], inv[len(a.basis):]
    ma = np.zeros((len(union), len(union)), dtype=complex)
    mb = np.zeros_like(ma)
    np.add.at(ma, (ia[:, None], ia[None, :]), a.matrix)
    np.add.at(mb, (ib[:, None], ib[None, :]), b.matrix)
    return ma, mb


def trace_distance(a: State, b: State) -> float:
    """``||a - b||_1 / 2`` on the joint support."""
    ma, mb = _joint(as_density(a), as_density(b))
    diff = ma - mb
    diff = (diff + diff.conj().T) / 2
    return float(0.5 * np.abs(np.linalg.eigvalsh(diff)).sum())


def mix(states: Sequence[State], weights: Sequence[float]) -> SparseDensity:
    """Convex (or general linear) combination of same-size states."""
    dens = [as_density(s) for s in states]
    n = dens[0].num_qubits
    union, inv = _group(np.concatenate([d.basis for d in dens], axis=0))
    mat = np.zeros((len(union), len(union)), dtype=complex)
    start = 0
    for d, w in zip(dens, weights):
        idx = inv[start : start + len(d.basis)]
        np.add.at(mat, (idx[:, None], idx[None, :]), w * d.matrix)
        start += len(d.basis)
    return SparseDensity(n, union, mat).pruned()
