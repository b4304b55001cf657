import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import dense_oracle as dense
from conftest import sparse_from_dense
from qdelsim.errors import NumericalError
from qdelsim.state import (
    SparseDensity,
    SparseKet,
    insert_qubits,
    measure_computational,
    mix,
    outcome_distribution,
    partial_trace,
    permute_qubits,
    tensor,
    trace_distance,
)

BELL = SparseKet.from_dict({"00": 1 / math.sqrt(2), "11": 1 / math.sqrt(2)})


def random_sparse_density(n, seed, rank=2, support=None):
    """Random density on a random subset of basis strings."""
    rng = np.random.default_rng(seed)
    dim = 1 << n
    size = support or int(rng.integers(1, dim + 1))
    idx = np.sort(rng.choice(dim, size=size, replace=False))
    g = rng.normal(size=(size, rank)) + 1j * rng.normal(size=(size, rank))
    rho = np.zeros((dim, dim), dtype=complex)
    rho[np.ix_(idx, idx)] = g @ g.conj().T
    rho /= np.trace(rho)
    return sparse_from_dense(rho, n), rho


def test_tensor_kets():
    assert tensor(SparseKet.basis_state("0"), SparseKet.basis_state("1")).to_dict() == {"01": 1}
    out = tensor(BELL, SparseKet.basis_state("0")).to_dict()
    assert out.keys() == {"000", "110"}
    assert np.allclose(list(out.values()), 1 / math.sqrt(2))


def test_tensor_densities_trace_multiplies():
    a, _ = random_sparse_density(2, 1)
    b, _ = random_sparse_density(3, 2)
    ab = tensor(a, b)
    assert ab.num_qubits == 5
    assert ab.trace() == pytest.approx(1, abs=1e-12)
    assert np.allclose(dense.to_dense(ab), np.kron(dense.to_dense(a), dense.to_dense(b)))


def test_partial_trace_examples():
    rho = partial_trace(SparseDensity.basis_state("01"), 1)
    assert rho.entries == {("1", "1"): 1}
    marg = partial_trace(BELL, 1)
    assert marg.entries == pytest.approx({("0", "0"): 0.5, ("1", "1"): 0.5})


def test_partial_trace_out_of_range():
    with pytest.raises(IndexError):
        partial_trace(SparseDensity.basis_state("01"), 3)
    with pytest.raises(IndexError):
        partial_trace(SparseDensity.basis_state("01"), 0)


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(1, 6),
    seed=st.integers(0, 2**32 - 1),
    data=st.data(),
)
def test_partial_trace_matches_dense(n, seed, data):
    positions = data.draw(st.lists(st.integers(1, n), unique=True, max_size=n))
    sparse, rho = random_sparse_density(n, seed)
    got = partial_trace(sparse, positions)
    want = dense.partial_trace(rho, n, positions)
    assert np.abs(dense.to_dense(got) - want).max() < 1e-10
    assert got.trace() == pytest.approx(1, abs=1e-10)


def test_multi_position_trace_is_composition():
    # tracing (i1 < i2 < i3) at once equals tracing i3, then i2, then i1
    sparse, _ = random_sparse_density(6, 7, rank=3)
    once = partial_trace(sparse, [2, 4, 5])
    stepwise = partial_trace(partial_trace(partial_trace(sparse, 5), 4), 2)
    assert trace_distance(once, stepwise) < 1e-12


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), a=st.floats(0.05, 0.95))
def test_partial_trace_is_linear(seed, a):
    r1, _ = random_sparse_density(4, seed)
    r2, _ = random_sparse_density(4, seed + 1)
    lhs = partial_trace(mix([r1, r2], [a, 1 - a]), [2, 3])
    rhs = mix([partial_trace(r1, [2, 3]), partial_trace(r2, [2, 3])], [a, 1 - a])
    assert trace_distance(lhs, rhs) < 1e-12


def test_measure_examples():
    zero = SparseDensity.basis_state("0")
    rec, post = measure_computational(zero, [1], seed=5)
    assert (rec.outcomes, rec.probability, rec.rng_seed_used) == ("0", 1.0, None)
    assert trace_distance(post, zero) == 0

    half = SparseDensity.maximally_mixed(1)
    seen = set()
    for seed in range(20):
        rec, post = measure_computational(half, [1], seed=seed)
        assert rec.probability == pytest.approx(0.5)
        assert rec.rng_seed_used == seed
        assert trace_distance(post, SparseDensity.basis_state(rec.outcomes)) < 1e-12
        seen.add(rec.outcomes)
    assert seen == {"0", "1"}


def test_bell_collapse():
    for seed in range(10):
        rec, post = measure_computational(BELL, [1], seed=seed)
        assert trace_distance(post, SparseDensity.basis_state(rec.outcomes * 2)) < 1e-12
    rec, post = next(
        (r, p) for r, p in (measure_computational(BELL, [1], seed=s) for s in range(50)) if r.outcomes == "0"
    )
    assert post.entries == pytest.approx({("00", "00"): 1})


def test_measure_requires_seed_only_when_random():
    measure_computational(SparseDensity.basis_state("10"), [1, 2])
    with pytest.raises(ValueError):
        measure_computational(SparseDensity.maximally_mixed(1), [1])


def test_measure_zero_state():
    empty = SparseDensity(1, np.zeros((1, 1), dtype=np.uint8), np.zeros((1, 1), dtype=complex))
    with pytest.raises(NumericalError):
        measure_computational(empty, [1], seed=0)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 6), seed=st.integers(0, 2**32 - 1), data=st.data())
def test_measurement_matches_dense(n, seed, data):
    positions = data.draw(st.lists(st.integers(1, n), unique=True, min_size=1, max_size=n))
    sparse, rho = random_sparse_density(n, seed)
    probs = outcome_distribution(sparse, positions)
    want = {k: v for k, v in dense.probabilities(rho, n, positions).items() if v > 1e-14}
    assert probs.keys() == want.keys()
    assert sum(probs.values()) == pytest.approx(1, abs=1e-10)
    for k in want:
        assert probs[k] == pytest.approx(want[k], abs=1e-10)
    rec, post = measure_computational(sparse, positions, seed=seed)
    assert rec.probability == pytest.approx(want[rec.outcomes], abs=1e-10)
    assert np.abs(dense.to_dense(post) - dense.project(rho, n, positions, rec.outcomes)).max() < 1e-10


def test_trace_distance_examples():
    r, _ = random_sparse_density(3, 3)
    assert trace_distance(r, r) == pytest.approx(0, abs=1e-14)
    assert trace_distance(SparseDensity.basis_state("0"), SparseDensity.basis_state("1")) == pytest.approx(1)
    plus = SparseKet.from_dict({"0": 1 / math.sqrt(2), "1": 1 / math.sqrt(2)})
    # eigenvalues of |0><0| - |+><+| are +-1/sqrt(2)
    assert trace_distance(SparseDensity.basis_state("0"), plus) == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    with pytest.raises(ValueError):
        trace_distance(SparseDensity.basis_state("0"), SparseDensity.basis_state("00"))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 5))
def test_trace_distance_matches_dense(seed, n):
    a, ra = random_sparse_density(n, seed)
    b, rb = random_sparse_density(n, seed ^ 0xABCDEF)
    assert trace_distance(a, b) == pytest.approx(dense.trace_distance(ra, rb), abs=1e-10)


def test_validate_catches_bad_states():
    SparseDensity.maximally_mixed(2).validate()
    bad = SparseDensity.from_entries({("0", "0"): 1.5, ("1", "1"): -0.5})
    with pytest.raises(NumericalError):
        bad.validate()
    with pytest.raises(NumericalError):
        SparseDensity.from_entries({("0", "0"): 0.5}).validate()


def test_insert_and_permute():
    k = insert_qubits(SparseKet.basis_state("11"), [1, 3], "01")
    assert k.to_dict() == {"0111": 1}
    assert permute_qubits(SparseKet.basis_state("100"), [3, 1, 2]).to_dict() == {"010": 1}


def test_ket_prunes_tiny_amplitudes():
    k = SparseKet.from_dict({"0": 1.0, "1": 1e-14})
    assert k.to_dict() == {"0": 1}
