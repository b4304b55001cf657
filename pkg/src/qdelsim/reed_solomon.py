"""Classical (shortened) Reed-Solomon pairs ``C ⊇ D⊥`` over GF(2^E).

``D⊥`` has the ``K_D x N`` parity-check matrix ``h[i][j] = alpha**(i*j)``
(0-based indices) and ``C`` is checked by its first ``N - K_C`` rows.
Symbol positions in the public API are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import CapabilityError, ConfigurationError, DecodeFailure
from .finite_field import FieldSpec, gf

MAX_ENUMERATION = 1 << 20


@dataclass(frozen=True)
class RSParams:
    N: int
    K_C: int
    K_D: int
    t: int
    E: int

    def __post_init__(self):
        for name in ("N", "K_C", "K_D", "E"):
            if getattr(self, name) < 1:
                raise ConfigurationError(f"{name} must be a positive integer")
        if self.t < 0:
            raise ConfigurationError("t must be non-negative")
        if self.E > 16:
            raise ConfigurationError("E must be at most 16")
        if not self.t <= self.K_C:
            raise ConfigurationError(f"constraint t <= K_C violated ({self.t} > {self.K_C})")
        if not self.K_C <= self.N - self.t:
            raise ConfigurationError(
                f"constraint K_C <= N - t violated ({self.K_C} > {self.N - self.t})"
            )
        if not self.N - self.K_C <= self.K_D:
            raise ConfigurationError(
                f"constraint N - K_C <= K_D violated ({self.N - self.K_C} > {self.K_D})"
            )
        if self.K_D > self.N:
            raise ConfigurationError(f"K_D must not exceed N ({self.K_D} > {self.N})")
        if not self.N <= (1 << self.E) - 1:
            raise ConfigurationError(
                f"constraint N <= 2^E - 1 violated ({self.N} > {(1 << self.E) - 1})"
            )

    @property
    def spec(self) -> FieldSpec:
        return gf(self.E)


# -- linear algebra over GF(2^E) -------------------------------------------


def rref(rows: Sequence[Sequence[int]], spec: FieldSpec) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(map(int, r)) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = spec.inv(m[r][c])
        m[r] = [spec.mul(inv, v) for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a ^ spec.mul(f, b) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows: Sequence[Sequence[int]], ncols: int, spec: FieldSpec) -> list[list[int]]:
    """Basis of ``{x : rows @ x = 0}``, one vector per free column."""
    red, pivots = rref(rows, spec)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, p in zip(red, pivots):
            v[p] = row[f]  # char 2: -row[f] == row[f]
        basis.append(v)
    return basis


def matvec(h: Sequence[Sequence[int]], x: Sequence[int], spec: FieldSpec) -> list[int]:
    out = []
    for row in h:
        acc = 0
        for a, b in zip(row, x):
            acc ^= spec.mul(a, b)
        out.append(acc)
    return out


def enumerate_code(generators: Sequence[Sequence[int]], spec: FieldSpec, length: int) -> np.ndarray:
    """All ``q**k`` codewords spanned by ``generators`` as a ``(q**k, length)`` array."""
    size = spec.order ** len(generators)
    if size > MAX_ENUMERATION:
        raise CapabilityError(f"code has {size} codewords, above the {MAX_ENUMERATION} limit")
    words = np.zeros((1, length), dtype=np.int64)
    scalars = np.arange(spec.order, dtype=np.int64)
    for g in generators:
        multiples = spec.mul_array(scalars[:, None], np.asarray(g, dtype=np.int64)[None, :])
        words = (words[None, :, :] ^ multiples[:, None, :]).reshape(-1, length)
    return words


def min_distance_bruteforce(
    generators: Sequence[Sequence[int]], spec: FieldSpec, length: int
) -> int:
    """Minimum Hamming weight over nonzero codewords; ``length + 1`` for the zero code."""
    words = enumerate_code(generators, spec, length)
    weights = np.count_nonzero(words, axis=1)
    nonzero = weights[weights > 0]
    return int(nonzero.min()) if nonzero.size else length + 1


# -- the code pair ----------------------------------------------------------


@dataclass(frozen=True)
class RSCodePair:
    params: RSParams
    H_Dperp: list[list[int]]
    H_C: list[list[int]]
    basis_C: list[list[int]]
    basis_Dperp: list[list[int]]
    d_C: int
    d_D: int
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def spec(self) -> FieldSpec:
        return self.params.spec

    @property
    def N(self) -> int:
        return self.params.N

    def in_C(self, word: Sequence[int]) -> bool:
        return not any(matvec(self.H_C, word, self.spec))

    def in_Dperp(self, word: Sequence[int]) -> bool:
        return not any(matvec(self.H_Dperp, word, self.spec))

    @cached_property
    def codewords_C(self) -> np.ndarray:
        return enumerate_code(self.basis_C, self.spec, self.N)

    @cached_property
    def codewords_Dperp(self) -> np.ndarray:
        return enumerate_code(self.basis_Dperp, self.spec, self.N)

    @cached_property
    def _dperp_echelon(self) -> tuple[np.ndarray, list[int]]:
        red, pivots = rref(self.basis_Dperp, self.spec)
        arr = np.asarray(red, dtype=np.int64).reshape(len(red), self.N)
        return arr, pivots

    def coset_keys(self, words: np.ndarray) -> np.ndarray:
        """Canonical label of ``w + D⊥``: ``w`` reduced to zero on the echelon pivots."""
        red, pivots = self._dperp_echelon
        words = np.array(words, dtype=np.int64, copy=True).reshape(-1, self.N)
        for row, p in zip(red, pivots):
            words ^= self.spec.mul_array(words[:, p : p + 1], row[None, :])
        return words


def build_pair(params: RSParams) -> RSCodePair:
    spec = params.spec
    alpha = spec.alpha
    H_Dperp = [
        [spec.pow(alpha, i * j) for j in range(params.N)] for i in range(params.K_D)
    ]
    H_C = [row[:] for row in H_Dperp[: params.N - params.K_C]]
    basis_Dperp = nullspace(H_Dperp, params.N, spec)
    basis_C = nullspace(H_C, params.N, spec)
    if len(basis_C) != params.K_C or len(basis_Dperp) != params.N - params.K_D:
        raise ConfigurationError("parity-check matrices are rank deficient")
    for v in basis_Dperp:
        if any(matvec(H_C, v, spec)):
            raise ConfigurationError("D-perp is not contained in C")
    return RSCodePair(
        params=params,
        H_Dperp=H_Dperp,
        H_C=H_C,
        basis_C=basis_C,
        basis_Dperp=basis_Dperp,
        d_C=params.N - params.K_C + 1,
        d_D=params.N - params.K_D + 1,
    )


def coset_representatives(pair: RSCodePair) -> list[tuple[int, ...]]:
    """One codeword of C per coset of D⊥, the lexicographically smallest.

    The list is sorted lexicographically, so the zero codeword is always
    first; list index doubles as the logical basis label.
    """
    key = ("reps",)
    if key not in pair._cache:
        words = pair.codewords_C
        keys = pair.coset_keys(words)
        # lexsort on all columns: first column most significant
        order = np.lexsort(words.T[::-1])
        reps: dict[bytes, tuple[int, ...]] = {}
        for idx in order:
            k = keys[idx].tobytes()
            if k not in reps:
                reps[k] = tuple(int(v) for v in words[idx])
        pair._cache[key] = sorted(reps.values())
    return list(pair._cache[key])


def erasure_decode_classical(
    word: Sequence[int | None], erased: Iterable[int], pair: RSCodePair
) -> list[int]:
    """Fill the 1-based ``erased`` positions so that the word lies in C."""
    spec = pair.spec
    N = pair.N
    erased = sorted(set(erased))
    if any(not 1 <= p <= N for p in erased):
        raise ValueError(f"erased positions must lie in 1..{N}")
    if len(erased) > pair.d_C - 1:
        raise CapabilityError(
            f"{len(erased)} erasures exceed the capability d_C - 1 = {pair.d_C - 1}"
        )
    if len(word) != N:
        raise ValueError(f"word must have length {N}")
    known = [0 if (j + 1) in erased else int(word[j]) for j in range(N)]
    if not erased:
        if not pair.in_C(known):
            raise DecodeFailure("word is not a codeword of C")
        return known
    cols = [p - 1 for p in erased]
    rhs = matvec(pair.H_C, known, spec)
    # augmented system H_C[:, cols] x = rhs
    aug = [[row[c] for c in cols] + [r] for row, r in zip(pair.H_C, rhs)]
    red, pivots = rref(aug, spec)
    if len(cols) in pivots:
        raise DecodeFailure("unerased symbols are inconsistent with every codeword")
    if len(pivots) < len(cols):
        raise DecodeFailure("erased positions are not uniquely determined")
    out = known[:]
    for row, p in zip(red, pivots):
        out[cols[p]] = row[-1]
    return out
