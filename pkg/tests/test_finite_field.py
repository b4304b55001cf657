import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdelsim.finite_field import (
    MODULI,
    bits_to_symbol,
    ff_inv,
    ff_mul,
    ff_pow,
    gf,
    is_irreducible,
    symbol_to_bits,
)


def poly_mulmod(a, b, modulus):
    """Schoolbook carry-less product followed by long division."""
    prod = 0
    for i in range(b.bit_length()):
        if (b >> i) & 1:
            prod ^= a << i
    deg = modulus.bit_length() - 1
    for shift in range(prod.bit_length() - 1 - deg, -1, -1):
        if (prod >> (shift + deg)) & 1:
            prod ^= modulus << shift
    return prod


def test_identity():
    F = gf(4)
    for x in F.elements():
        assert ff_mul(1, x, F) == x


def test_e2_examples():
    F = gf(2)
    assert F.modulus == 0b111
    a = F.alpha
    assert ff_mul(a, a, F) == 3
    assert ff_mul(a, ff_mul(a, a, F), F) == 1
    assert ff_pow(a, 2, F) == 3
    assert ff_pow(a, 0, F) == 1


def test_e3_alpha_order_seven():
    F = gf(3)
    assert F.modulus == 0b1011
    assert ff_pow(F.alpha, 7, F) == 1
    assert all(ff_pow(F.alpha, k, F) != 1 for k in range(1, 7))


def test_inverse_examples():
    F = gf(2)
    assert ff_inv(1, F) == 1
    # exhaustive search over the three nonzero elements
    brute = [y for y in range(1, 4) if poly_mulmod(F.alpha, y, F.modulus) == 1]
    assert brute == [ff_pow(F.alpha, 2, F)] == [ff_inv(F.alpha, F)]
    with pytest.raises(ZeroDivisionError):
        ff_inv(0, F)


def test_zero_negative_power():
    with pytest.raises(ZeroDivisionError):
        ff_pow(0, -1, gf(3))
    assert ff_pow(0, 3, gf(3)) == 0


@pytest.mark.parametrize("E", range(1, 7))
def test_tables_match_polynomial_arithmetic(E):
    F = gf(E)
    for a, b in itertools.product(F.elements(), repeat=2):
        assert F.mul(a, b) == poly_mulmod(a, b, F.modulus)


@pytest.mark.parametrize("E", sorted(MODULI))
def test_every_tabulated_field_is_valid(E):
    F = gf(E)
    assert is_irreducible(F.modulus)
    q1 = F.order - 1
    assert sorted(int(v) for v in F.antilog_table) == list(range(1, F.order))
    for x in {1, q1, q1 // 2 + 1} | ({2} if F.order > 2 else set()):
        assert F.antilog_table[F.log_table[x]] == x
    assert F.pow(F.alpha, q1) == 1


def test_reducible_modulus_detected():
    assert not is_irreducible(0b101)  # x^2 + 1 = (x + 1)^2
    assert is_irreducible(0b111)


def test_symbol_bits_convention():
    assert symbol_to_bits(0, gf(2)) == "00"
    assert symbol_to_bits(gf(2).alpha, gf(2)) == "10"
    assert symbol_to_bits(gf(3).alpha ^ 1, gf(3)) == "011"
    with pytest.raises(ValueError):
        bits_to_symbol("0110", gf(3))


@pytest.mark.parametrize("E", [1, 2, 3, 5])
def test_bits_round_trip(E):
    F = gf(E)
    for bits in itertools.product("01", repeat=E):
        s = "".join(bits)
        assert symbol_to_bits(bits_to_symbol(s, F), F) == s


@st.composite
def triples(draw):
    E = draw(st.integers(1, 8))
    q = 1 << E
    return E, draw(st.integers(0, q - 1)), draw(st.integers(0, q - 1)), draw(st.integers(0, q - 1))


@settings(max_examples=300, deadline=None)
@given(triples())
def test_field_axioms(args):
    E, a, b, c = args
    F = gf(E)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.mul(a, b ^ c) == F.mul(a, b) ^ F.mul(a, c)
    if a:
        assert F.mul(a, F.inv(a)) == 1


def test_field_element_operators():
    F = gf(3)
    a = F(F.alpha)
    assert a * a * a == F(0b011)  # alpha^3 = alpha + 1 under x^3 + x + 1
    assert (a + a).value == 0
    assert a * a.inverse() == 1
    assert (a**7).value == 1
    assert a.bits() == "010"
