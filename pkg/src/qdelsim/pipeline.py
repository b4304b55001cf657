"""The composed deletion code: ``Enc = Asm ∘ Enc_R`` and ``Dec = Dec_R ∘ Loc``.

Also holds the exhaustive verification harness and the exact-rational
code-rate analysis.
"""

from __future__ import annotations

import itertools
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .css_qrs import QRSCode
from .deletion import DeletionPattern, delete_multi
from .errors import ConfigurationError, QDelSimError
from .reed_solomon import RSParams, build_pair
from .sandwich import AsmLayout, LocOutput, asm, loc
from .state import SparseDensity, SparseKet, State, trace_distance

log = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9


class DeletionCode:
    """Quantum RS code wrapped in the alternating sandwich layout."""

    def __init__(self, params: RSParams):
        if params.t > min(params.N - params.K_C, params.N - params.K_D):
            raise ConfigurationError(
                "constraint t <= min(N - K_C, N - K_D) violated: "
                f"the inner code corrects only {min(params.N - params.K_C, params.N - params.K_D)}"
                f" block erasures but t = {params.t}"
            )
        self.params = params
        self.t = params.t
        self.inner = QRSCode(build_pair(params))
        self.layout = AsmLayout(params.N, params.E, params.t)

    @property
    def logical_qubits(self) -> int:
        return self.inner.logical_qubits

    @property
    def num_qubits(self) -> int:
        return self.layout.total_qubits

    def enc(self, sigma: State) -> State:
        return enc(sigma, self.inner, self.t)

    def dec(self, tau_prime: State, seed: int | None = None) -> SparseDensity:
        return dec(tau_prime, self.inner, self.t, seed)


def enc(sigma: State, code: QRSCode, t: int) -> State:
    return asm(code.enc_r(sigma), t, code.E)


def dec_with_trace(
    tau_prime: State, code: QRSCode, t: int, seed: int | None = None, *, offset_fault: int = 0
) -> tuple[LocOutput, SparseDensity]:
    layout = AsmLayout(code.N, code.E, t)
    located = loc(tau_prime, layout, seed, offset_fault=offset_fault)
    return located, code.dec_r(located.flagged_blocks, located.reconstructed)


def dec(tau_prime: State, code: QRSCode, t: int, seed: int | None = None) -> SparseDensity:
    """Decode a received state; how many qubits were deleted is never asked for."""
    return dec_with_trace(tau_prime, code, t, seed)[1]


# -- logical states and deletion patterns -----------------------------------


def logical_state(spec: str, num_qubits: int) -> State:
    """Parse a logical state specifier.

    ``"0101"`` basis state, ``"ghz"`` for ``(|0..0> + |1..1>)/sqrt 2``,
    ``"mixed"`` for the maximally mixed state, ``"random:<seed>"`` for a
    seeded Haar-like random pure state.
    """
    if spec == "mixed":
        return SparseDensity.maximally_mixed(num_qubits)
    if spec == "ghz":
        if num_qubits == 0:
            return SparseKet.basis_state("")
        s = 1 / math.sqrt(2)
        return SparseKet.from_dict({"0" * num_qubits: s, "1" * num_qubits: s}, num_qubits)
    if spec.startswith("random:"):
        rng = np.random.default_rng(int(spec.split(":", 1)[1]))
        dim = 1 << num_qubits
        vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        vec /= np.linalg.norm(vec)
        labels = [format(i, f"0{num_qubits}b") for i in range(dim)]
        return SparseKet.from_dict(dict(zip(labels, vec)), num_qubits)
    if len(spec) == num_qubits and set(spec) <= {"0", "1"}:
        return SparseKet.basis_state(spec)
    raise ConfigurationError(f"unknown logical state {spec!r} for {num_qubits} logical qubits")


def exhaustive_patterns(n: int, t: int) -> Iterator[DeletionPattern]:
    """Every pattern of at most ``t`` deletions: by size, then lexicographically."""
    for size in range(t + 1):
        for combo in itertools.combinations(range(1, n + 1), size):
            yield DeletionPattern(combo, n)


def random_patterns(n: int, t: int, count: int, seed: int) -> list[DeletionPattern]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        size = int(rng.integers(0, t + 1))
        combo = sorted(int(p) + 1 for p in rng.choice(n, size=size, replace=False))
        out.append(DeletionPattern(combo, n))
    return out


# -- verification harness ---------------------------------------------------


@dataclass
class ExperimentConfig:
    params: RSParams
    logical_states: list[str]
    deletion_mode: str = "exhaustive"  # exhaustive | explicit | random
    patterns: list[Sequence[int]] = field(default_factory=list)
    random_count: int = 0
    master_seed: int = 0
    tolerance: float = DEFAULT_TOLERANCE
    offset_fault: int = 0  # fault injection for harness self-tests

    def deletion_patterns(self) -> list[DeletionPattern]:
        n = self.params.N * (self.params.E + 2 * self.params.t)
        if self.deletion_mode == "exhaustive":
            return list(exhaustive_patterns(n, self.params.t))
        if self.deletion_mode == "explicit":
            return [DeletionPattern(p, n) for p in self.patterns]
        if self.deletion_mode == "random":
            return random_patterns(n, self.params.t, self.random_count, self.master_seed)
        raise ConfigurationError(f"unknown deletion mode {self.deletion_mode!r}")


@dataclass
class TrialReport:
    state: str
    pattern: DeletionPattern
    flagged_blocks: tuple[int, ...]
    weights: tuple[int, ...]
    recovery_trace_distance: float
    passed: bool
    wall_time: float
    error: str | None = None

    def record(self) -> dict:
        """Deterministic JSON-ready view (wall time excluded)."""
        return {
            "state": self.state,
            "pattern": list(self.pattern.positions),
            "flagged_blocks": list(self.flagged_blocks),
            "weights": list(self.weights),
            "trace_distance": float(f"{self.recovery_trace_distance:.3e}"),
            "passed": self.passed,
            "error": self.error,
        }


def run_trial(
    code: DeletionCode,
    label: str,
    sigma: State,
    encoded: State,
    pattern: DeletionPattern,
    seed: int,
    tolerance: float,
    offset_fault: int = 0,
) -> TrialReport:
    start = time.perf_counter()
    try:
        received = delete_multi(encoded, pattern)
        located, recovered = dec_with_trace(
            received, code.inner, code.t, seed, offset_fault=offset_fault
        )
        dist = trace_distance(recovered, sigma)
        flagged, weights, error = located.flagged_blocks, located.weights, None
    except QDelSimError as exc:
        dist, flagged, weights, error = float("inf"), (), (), f"{type(exc).__name__}: {exc}"
    return TrialReport(
        label, pattern, flagged, weights, dist, dist < tolerance, time.perf_counter() - start, error
    )


def _trial_seed(master_seed: int, state_index: int, pattern_index: int) -> int:
    return int(np.random.SeedSequence([master_seed, state_index, pattern_index]).generate_state(1)[0])


_WORKER: dict = {}


def _worker_init(config: ExperimentConfig) -> None:
    code = DeletionCode(config.params)
    states = [logical_state(s, code.logical_qubits) for s in config.logical_states]
    _WORKER.update(
        config=config, code=code, states=states, encoded=[code.enc(s) for s in states]
    )


def _worker_run(task: tuple[int, int, DeletionPattern]) -> TrialReport:
    si, pi, pattern = task
    cfg = _WORKER["config"]
    return run_trial(
        _WORKER["code"],
        cfg.logical_states[si],
        _WORKER["states"][si],
        _WORKER["encoded"][si],
        pattern,
        _trial_seed(cfg.master_seed, si, pi),
        cfg.tolerance,
        cfg.offset_fault,
    )


def resolve_jobs(jobs: int | None) -> int:
    if jobs is None:
        jobs = int(os.environ.get("QDELSIM_JOBS", "1"))
    return max(1, jobs)


def verify_recovery(
    config: ExperimentConfig, jobs: int | None = None
) -> tuple[list[TrialReport], dict]:
    """Run ``Dec ∘ D_i ∘ Enc`` for every (state, pattern) pair.

    Reports come back in (state, pattern) order whatever the parallelism.
    """
    patterns = config.deletion_patterns()
    tasks = [
        (si, pi, p) for si in range(len(config.logical_states)) for pi, p in enumerate(patterns)
    ]
    jobs = resolve_jobs(jobs)
    start = time.perf_counter()
    if jobs == 1:
        _worker_init(config)
        reports = [_worker_run(task) for task in tasks]
    else:
        with ProcessPoolExecutor(jobs, initializer=_worker_init, initargs=(config,)) as pool:
            reports = list(pool.map(_worker_run, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    failures = sum(not r.passed for r in reports)
    summary = {
        "trials": len(reports),
        "passed": len(reports) - failures,
        "failed": failures,
        "max_trace_distance": max((r.recovery_trace_distance for r in reports), default=0.0),
        "wall_time": time.perf_counter() - start,
    }
    log.info("verified %d trials, %d failures", len(reports), failures)
    return reports, summary


# -- code rates -------------------------------------------------------------


def qrs_rate(params: RSParams) -> Fraction:
    """Rate of the bare quantum RS code, ``(K_C + K_D - N) / N``."""
    return Fraction(params.K_C + params.K_D - params.N, params.N)


def code_rate(params: RSParams, t: int | None = None) -> Fraction:
    """Rate of the sandwiched code, ``E (K_C + K_D - N) / (N (E + 2t))``."""
    t = params.t if t is None else t
    return Fraction(params.E * (params.K_C + params.K_D - params.N), params.N * (params.E + 2 * t))


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x))


@dataclass(frozen=True)
class RateQuery:
    gamma: Fraction
    t: int
    E_min: int
    E_max: int

    def __init__(self, gamma, t: int, E_min: int, E_max: int):
        g = _as_fraction(gamma)
        if not 0 <= g <= 1:
            raise ConfigurationError(f"gamma must lie in [0, 1], got {gamma}")
        if t < 0 or E_min < 1 or E_max < E_min:
            raise ConfigurationError("need t >= 0 and 1 <= E_min <= E_max")
        bad = [E for E in range(E_min, E_max + 1) if not (1 << E) - 1 > 2 * t]
        if bad:
            raise ConfigurationError(f"2^E - 1 > 2t fails for E in {bad}")
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "t", int(t))
        object.__setattr__(self, "E_min", int(E_min))
        object.__setattr__(self, "E_max", int(E_max))


@dataclass(frozen=True)
class RateRow:
    E: int
    N: int
    K_C: int
    K_D: int
    rate: Fraction
    lower: Fraction
    upper: Fraction
    feasible: bool

    @property
    def within_bounds(self) -> bool:
        return self.lower <= self.rate <= self.upper


def rate_bounds(gamma, t: int, E: int) -> tuple[Fraction, Fraction]:
    """Floor-sandwich bounds on the rate for ``N = 2^E - 1``."""
    g = _as_fraction(gamma)
    N = (1 << E) - 1
    denom = N * (E + 2 * t)
    return (g * N - 1 - t) * E / denom, (g * N - t) * E / denom


def rate_table(query: RateQuery) -> list[RateRow]:
    rows = []
    t = query.t
    for E in range(query.E_min, query.E_max + 1):
        N = (1 << E) - 1
        K_C = math.floor(query.gamma * N)
        K_D = N - t
        rate = Fraction((K_C - t) * E, N * (E + 2 * t))
        lower, upper = rate_bounds(query.gamma, t, E)
        feasible = t <= K_C <= N - t
        row = RateRow(E, N, K_C, K_D, rate, lower, upper, feasible)
        if not row.within_bounds:
            raise AssertionError(f"rate {rate} escapes its floor bounds at E={E}")
        rows.append(row)
    return rows
