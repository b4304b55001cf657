"""Arithmetic in GF(2^E) with log/antilog tables.

Elements are plain ints in ``[0, 2**E)``; bit ``j`` is the coefficient of
``alpha**j`` where ``alpha`` is the class of ``x`` modulo the field's
modulus. :class:`FieldElement` wraps an int for operator-style use.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

# Primitive polynomials (bit masks, leading term included) for which x is a
# generator of the multiplicative group.
MODULI = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}


def _poly_mod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a and a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def is_irreducible(modulus: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2 over GF(2)."""
    deg = modulus.bit_length() - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for p in range(1 << d, 1 << (d + 1)):
            if _poly_mod(modulus, p) == 0:
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """GF(2^E) with a fixed modulus and primitive element ``alpha = x``."""

    extension_degree: int
    modulus: int
    log_table: np.ndarray = field(repr=False, compare=False)
    antilog_table: np.ndarray = field(repr=False, compare=False)

    @property
    def order(self) -> int:
        return 1 << self.extension_degree

    @property
    def primitive_element(self) -> int:
        # class of x; for E = 1 the field is GF(2) and alpha is 1
        return 2 if self.extension_degree > 1 else 1

    @property
    def alpha(self) -> int:
        return self.primitive_element

    def elements(self) -> range:
        return range(self.order)

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        q1 = self.order - 1
        return int(self.antilog_table[(self.log_table[a] + self.log_table[b]) % q1])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        q1 = self.order - 1
        return int(self.antilog_table[(-self.log_table[a]) % q1])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if k == 0:
            return 1
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("0 raised to a negative power")
            return 0
        q1 = self.order - 1
        return int(self.antilog_table[(int(self.log_table[a]) * k) % q1])

    def mul_array(self, a: np.ndarray, b: np.ndarray | int) -> np.ndarray:
        """Elementwise product of integer arrays (broadcasting)."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        q1 = self.order - 1
        prod = self.antilog_table[(self.log_table[a] + self.log_table[b]) % q1]
        return np.where((a == 0) | (b == 0), 0, prod)

    def symbol_to_bits(self, a: int) -> str:
        return symbol_to_bits(a, self)

    def bits_to_symbol(self, bits: str) -> int:
        return bits_to_symbol(bits, self)

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(value, self)


@lru_cache(maxsize=None)
def gf(extension_degree: int) -> FieldSpec:
    """Return the (cached) field GF(2^E) built on the tabulated modulus."""
    if extension_degree not in MODULI:
        raise ValueError(f"extension degree must be in 1..16, got {extension_degree}")
    modulus = MODULI[extension_degree]
    if not is_irreducible(modulus):
        raise ValueError(f"modulus {modulus:#x} is reducible")
    order = 1 << extension_degree
    q1 = order - 1
    log_table = np.full(order, -1, dtype=np.int64)
    antilog_table = np.zeros(q1, dtype=np.int64)
    x = 1
    generator = 2 if extension_degree > 1 else 1
    for k in range(q1):
        if log_table[x] != -1:
            raise ValueError(f"alpha has order {k} < {q1} for modulus {modulus:#x}")
        antilog_table[k] = x
        log_table[x] = k
        x = _poly_mod(_clmul(x, generator), modulus)
    if x != 1:
        raise ValueError(f"alpha does not have order {q1}")
    # log(0) is undefined; 0 keeps table lookups in-bounds for masked entries
    log_table[0] = 0
    log_table.setflags(write=False)
    antilog_table.setflags(write=False)
    return FieldSpec(extension_degree, modulus, log_table, antilog_table)


def _clmul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def _check(a: int, spec: FieldSpec) -> int:
    a = int(a)
    if not 0 <= a < spec.order:
        raise ValueError(f"{a} is not an element of GF(2^{spec.extension_degree})")
    return a


def ff_add(a: int, b: int, spec: FieldSpec) -> int:
    return _check(a, spec) ^ _check(b, spec)


def ff_mul(a: int, b: int, spec: FieldSpec) -> int:
    return spec.mul(_check(a, spec), _check(b, spec))


def ff_inv(a: int, spec: FieldSpec) -> int:
    return spec.inv(_check(a, spec))


def ff_pow(a: int, k: int, spec: FieldSpec) -> int:
    return spec.pow(_check(a, spec), k)


def symbol_to_bits(a: int, spec: FieldSpec) -> str:
    """Big-endian bit string: the coefficient of alpha^(E-1) comes first."""
    return format(_check(a, spec), f"0{spec.extension_degree}b")


def bits_to_symbol(bits: str, spec: FieldSpec) -> int:
    if len(bits) != spec.extension_degree or set(bits) - {"0", "1"}:
        raise ValueError(
            f"expected a {spec.extension_degree}-bit string, got {bits!r}"
        )
    return int(bits, 2)


@dataclass(frozen=True)
class FieldElement:
    """An element of a :class:`FieldSpec` supporting ``+ * / **``."""

    value: int
    spec: FieldSpec = field(repr=False)

    def __post_init__(self):
        _check(self.value, self.spec)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec.modulus != self.spec.modulus:
                raise ValueError("elements belong to different fields")
            return other.value
        return _check(other, self.spec)

    def __add__(self, other):
        return FieldElement(self.value ^ self._other(other), self.spec)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __mul__(self, other):
        return FieldElement(self.spec.mul(self.value, self._other(other)), self.spec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.spec.div(self.value, self._other(other)), self.spec)

    def __pow__(self, k: int):
        return FieldElement(self.spec.pow(self.value, k), self.spec)

    def inverse(self) -> FieldElement:
        return FieldElement(self.spec.inv(self.value), self.spec)

    def bits(self) -> str:
        return symbol_to_bits(self.value, self.spec)

    def __int__(self):
        return self.value

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.value == other.value and self.spec.modulus == other.spec.modulus
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.spec.modulus))
