"""Quantum Reed-Solomon (CSS) code: encoder, projector and erasure decoder.

Logical basis state ``|x>`` encodes to the uniform superposition over the
coset ``rep(x) + D⊥``; every symbol occupies ``E`` consecutive qubits in the
big-endian bit convention of :mod:`qdelsim.finite_field`.

Erasure recovery is built numerically from the Knill-Laflamme conditions,
restricted to the few hundred basis strings the code actually touches.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import CapabilityError, ConstructionError, DecodeFailure
from .reed_solomon import RSCodePair, build_pair, coset_representatives
from .state import (
    SparseDensity,
    SparseKet,
    SparseOperator,
    State,
    as_density,
    insert_qubits,
    partial_trace,
)

KL_TOL = 1e-8
DECODE_TOL = 1e-9
MAX_CODE_SUPPORT = 4096


def symbols_to_bits(words: np.ndarray, E: int) -> np.ndarray:
    """Expand an ``(m, N)`` symbol array into an ``(m, N*E)`` bit array."""
    words = np.asarray(words, dtype=np.int64)
    shifts = np.arange(E - 1, -1, -1)
    bits = (words[:, :, None] >> shifts[None, None, :]) & 1
    return bits.reshape(len(words), -1).astype(np.uint8)


def bits_to_index(bits: np.ndarray) -> np.ndarray:
    """Big-endian integer value of each row of a bit array."""
    bits = np.asarray(bits, dtype=np.int64)
    if bits.shape[1] == 0:
        return np.zeros(len(bits), dtype=np.int64)
    weights = 1 << np.arange(bits.shape[1] - 1, -1, -1, dtype=np.int64)
    return bits @ weights


def block_qubits(blocks: Iterable[int], E: int) -> list[int]:
    """1-based qubit positions of the given 1-based symbol blocks."""
    return [(b - 1) * E + e for b in sorted(blocks) for e in range(1, E + 1)]


def erase_blocks(tau: State, blocks: Iterable[int], E: int) -> SparseDensity:
    """Block erasure channel: replace each listed block by ``|0...0>``."""
    positions = block_qubits(blocks, E)
    if not positions:
        return as_density(tau)
    reduced = partial_trace(tau, positions)
    return insert_qubits(reduced, positions, "0" * len(positions))


@dataclass(frozen=True)
class ErasureRecovery:
    """Recovery channel for one erased-block set.

    ``kraus_operators[l]`` maps the damaged subspace spanned by
    ``damaged_basis`` onto the logical space.
    """

    erased_blocks: tuple[int, ...]
    kraus_operators: np.ndarray  # (r, logical_dim, len(damaged_basis))
    damaged_basis: np.ndarray
    kl_residual: float
    kl_coefficients: np.ndarray

    @cached_property
    def _index(self) -> dict[bytes, int]:
        return {row.tobytes(): i for i, row in enumerate(self.damaged_basis)}

    def completeness(self) -> np.ndarray:
        """``sum_l R_l^† R_l`` on the damaged subspace."""
        R = self.kraus_operators
        return np.einsum("lxu,lxv->uv", R.conj(), R)

    def apply(self, damaged: State) -> np.ndarray:
        """Return the logical density matrix (dense, ``logical_dim`` square)."""
        damaged = as_density(damaged)
        index = self._index
        idx = np.array([index.get(row.tobytes(), -1) for row in damaged.basis], dtype=np.int64)
        outside = idx < 0
        if outside.any():
            leak = float(np.real(np.diag(damaged.matrix)[outside]).sum())
            if leak > DECODE_TOL:
                raise DecodeFailure(
                    f"damaged state has weight {leak:.3e} outside the reachable subspace"
                )
        inside = ~outside
        rho = damaged.matrix[np.ix_(inside, inside)]
        R = self.kraus_operators[:, :, idx[inside]]
        out = np.einsum("lxm,lym->xy", R @ rho, R.conj())
        lost = damaged.trace() - float(np.real(np.trace(out)))
        if abs(lost) > DECODE_TOL:
            raise DecodeFailure(f"recovery lost trace {lost:.3e}; input is not a damaged codeword")
        return out


class QRSCode:
    """Quantum RS code from a classical pair ``C ⊇ D⊥``."""

    def __init__(self, pair: RSCodePair):
        self.pair = pair
        p = pair.params
        self.E = p.E
        self.N = p.N
        self.block_size = p.E
        self.logical_qubits = p.E * (p.K_C + p.K_D - p.N)
        self.logical_dim = 1 << self.logical_qubits
        self.d_R_bound = min(pair.d_C, pair.d_D)
        self.representatives = coset_representatives(pair)
        if len(self.representatives) != self.logical_dim:
            raise ConstructionError(
                f"{len(self.representatives)} cosets, expected {self.logical_dim}"
            )
        self._recovery_cache: dict[tuple[int, ...], ErasureRecovery] = {}
        self._lock = threading.Lock()

    @classmethod
    def from_params(cls, params) -> QRSCode:
        return cls(build_pair(params))

    @property
    def num_qubits(self) -> int:
        return self.N * self.E

    @property
    def rep_map(self) -> dict[int, tuple[int, ...]]:
        return dict(enumerate(self.representatives))

    @cached_property
    def _dperp_size(self) -> int:
        return len(self.pair.codewords_Dperp)

    @cached_property
    def codeword_bits(self) -> tuple[np.ndarray, np.ndarray]:
        """Bit rows of every coset element and the logical label of each row."""
        size = self.logical_dim * self._dperp_size
        if size > MAX_CODE_SUPPORT:
            raise CapabilityError(f"code space touches {size} basis strings (limit {MAX_CODE_SUPPORT})")
        dperp = self.pair.codewords_Dperp
        reps = np.asarray(self.representatives, dtype=np.int64).reshape(self.logical_dim, self.N)
        words = (reps[:, None, :] ^ dperp[None, :, :]).reshape(-1, self.N)
        labels = np.repeat(np.arange(self.logical_dim), len(dperp))
        bits = symbols_to_bits(words, self.E)
        # sort inside each coset so encoded kets have a canonical layout
        order = np.lexsort(np.column_stack([bits, labels[:, None]]).T[::-1])
        return bits[order], labels[order]

    def _logical_index(self, state: SparseKet | SparseDensity) -> np.ndarray:
        if state.num_qubits != self.logical_qubits:
            raise ValueError(
                f"logical state has {state.num_qubits} qubits, code expects {self.logical_qubits}"
            )
        return bits_to_index(state.basis)

    def enc_r(self, logical: State) -> State:
        bits, labels = self.codeword_bits
        amp = 1 / np.sqrt(self._dperp_size)
        xs = self._logical_index(logical)
        pos = {int(x): i for i, x in enumerate(xs)}
        rows = np.flatnonzero(np.isin(labels, xs))
        src = np.array([pos[int(x)] for x in labels[rows]], dtype=np.int64)
        if isinstance(logical, SparseKet):
            return SparseKet(self.num_qubits, bits[rows], logical.amplitudes[src] * amp)
        mat = logical.matrix[np.ix_(src, src)] * amp**2
        return SparseDensity(self.num_qubits, bits[rows], mat)

    def encoded_basis_state(self, x: int) -> SparseKet:
        label = format(x, f"0{self.logical_qubits}b") if self.logical_qubits else ""
        return self.enc_r(SparseKet.basis_state(label))

    @cached_property
    def encoder_matrix(self) -> np.ndarray:
        """Isometry ``V`` (code support x logical_dim) with ``V|x> = enc_r(|x>)``."""
        bits, labels = self.codeword_bits
        V = np.zeros((len(bits), self.logical_dim), dtype=complex)
        V[np.arange(len(bits)), labels] = 1 / np.sqrt(self._dperp_size)
        return V

    def code_projector(self) -> SparseOperator:
        bits, _ = self.codeword_bits
        V = self.encoder_matrix
        return SparseOperator(self.num_qubits, bits, V @ V.conj().T)

    # -- erasures ---------------------------------------------------------

    def _normalize_blocks(self, erased_blocks: Iterable[int]) -> tuple[int, ...]:
        blocks = tuple(sorted(int(b) for b in erased_blocks))
        if len(set(blocks)) != len(blocks) or any(not 1 <= b <= self.N for b in blocks):
            raise ValueError(f"erased blocks {blocks} must be distinct and within 1..{self.N}")
        if len(blocks) > self.d_R_bound - 1:
            raise CapabilityError(
                f"{len(blocks)} erased blocks exceed the capability d_R - 1 = {self.d_R_bound - 1}"
            )
        return blocks

    def erasure_operators(self, erased_blocks: Iterable[int]) -> tuple[np.ndarray, np.ndarray]:
        """Erasure Kraus operators restricted to the code: ``A[k] = K_k V``.

        ``K_k = |0><k|`` on the erased qubits (identity elsewhere); values of
        ``k`` never seen on the code support give ``K_k V = 0`` and are omitted.
        Returns ``(A, damaged_basis)``.
        """
        blocks = tuple(sorted(int(b) for b in erased_blocks))
        bits, labels = self.codeword_bits
        cols = [q - 1 for q in block_qubits(blocks, self.E)]
        if cols:
            _, k_of = np.unique(bits[:, cols], axis=0, return_inverse=True)
            k_of = k_of.reshape(-1)
        else:
            k_of = np.zeros(len(bits), dtype=np.int64)
        zeroed = bits.copy()
        zeroed[:, cols] = 0
        damaged_basis, u_of = np.unique(zeroed, axis=0, return_inverse=True)
        u_of = u_of.reshape(-1)
        A = np.zeros((int(k_of.max()) + 1, len(damaged_basis), self.logical_dim), dtype=complex)
        A[k_of, u_of, labels] = 1 / np.sqrt(self._dperp_size)
        return A, damaged_basis

    def knill_laflamme(self, erased_blocks: Iterable[int]) -> tuple[np.ndarray, float]:
        """Coefficients ``alpha_jk`` and the worst residual ``||V†K_j†K_k V - alpha_jk I||``."""
        A, _ = self.erasure_operators(erased_blocks)
        return _kl_from_operators(A)

    def build_erasure_recovery(self, erased_blocks: Iterable[int]) -> ErasureRecovery:
        blocks = self._normalize_blocks(erased_blocks)
        with self._lock:
            cached = self._recovery_cache.get(blocks)
            if cached is not None:
                return cached
            recovery = self._construct_recovery(blocks)
            self._recovery_cache[blocks] = recovery
            return recovery

    def _construct_recovery(self, blocks: tuple[int, ...]) -> ErasureRecovery:
        A, damaged_basis = self.erasure_operators(blocks)
        alpha, residual = _kl_from_operators(A)
        if residual > KL_TOL:
            raise ConstructionError(
                f"Knill-Laflamme residual {residual:.3e} for erased blocks {blocks}"
            )
        # rotate the error basis so the errors act orthogonally on the code
        weights, W = np.linalg.eigh(alpha)
        keep = weights > 1e-12
        F = np.einsum("kl,kux->lux", W[:, keep], A) / np.sqrt(weights[keep])[:, None, None]
        kraus = F.conj().transpose(0, 2, 1)
        return ErasureRecovery(blocks, kraus, damaged_basis, residual, alpha)

    def dec_r(self, erased_blocks: Iterable[int], damaged: State) -> SparseDensity:
        recovery = self.build_erasure_recovery(erased_blocks)
        if damaged.num_qubits != self.num_qubits:
            raise ValueError(f"damaged state has {damaged.num_qubits} qubits, expected {self.num_qubits}")
        out = recovery.apply(damaged)
        labels = [format(x, f"0{self.logical_qubits}b") if self.logical_qubits else "" for x in range(self.logical_dim)]
        basis = np.array([[int(c) for c in s] for s in labels], dtype=np.uint8).reshape(
            self.logical_dim, self.logical_qubits
        )
        return SparseDensity(self.logical_qubits, basis, out).pruned()


def _kl_from_operators(A: np.ndarray) -> tuple[np.ndarray, float]:
    K, U, L = A.shape
    B = A.transpose(1, 0, 2).reshape(U, K * L)
    G = (B.conj().T @ B).reshape(K, L, K, L).transpose(0, 2, 1, 3)
    alpha = np.trace(G, axis1=2, axis2=3) / L
    resid = G - alpha[:, :, None, None] * np.eye(L)[None, None, :, :]
    residual = float(np.sqrt((np.abs(resid) ** 2).sum(axis=(2, 3))).max()) if K else 0.0
    return alpha, residual
