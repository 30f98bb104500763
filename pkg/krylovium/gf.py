import contextlib
import contextvars
from dataclasses import dataclass

import numpy as np
from sympy import isprime

__all__ = ('PrimeModulus', 'FieldElement', 'ModulusMismatchError', 'count_field_ops', 'tally',
           'FieldOpCounter')

# Products of two residues below this bound fit in a signed 64 bit integer.
INT64_BOUND = 2**31
MAX_PRIME = 2**62


class ModulusMismatchError(ValueError):
    """Raised when two operands live over different prime fields."""


@dataclass(frozen=True)
class PrimeModulus:
    """The prime field GF(p).

    Besides scalar arithmetic, the modulus decides how coefficient arrays are stored: residues of
    primes below 2**31 are kept in int64 numpy arrays, larger primes use object arrays of Python
    integers so that products never overflow.

    Args:
        p: a prime with 2 <= p < 2**62. Primality is checked deterministically with sympy.
    """
    p: int

    def __post_init__(self):
        p = int(self.p)
        if p < 2 or p >= MAX_PRIME:
            raise ValueError("modulus {0} outside the supported range [2, 2**62)".format(p))
        if not isprime(p):
            raise ValueError("modulus {0} is not prime".format(p))
        object.__setattr__(self, 'p', p)

    @property
    def dtype(self):
        return np.int64 if self.p < INT64_BOUND else object

    def __call__(self, value):
        return FieldElement(value, self)

    def check(self, other):
        if self.p != other.p:
            raise ModulusMismatchError("operands over GF({0}) and GF({1})".format(self.p, other.p))

    def reduce(self, arr):
        """Canonical residues of an integer array, stored with this modulus' dtype."""
        arr = np.asarray(arr)
        if self.dtype is object:
            if arr.dtype != object:
                arr = arr.astype(object)
            return arr % self.p
        if arr.dtype == object:
            arr = arr % self.p
            return arr.astype(np.int64)
        return np.mod(arr.astype(np.int64, copy=False), self.p)

    def zeros(self, shape):
        return np.zeros(shape, dtype=self.dtype)

    def identity(self, n):
        out = self.zeros((n, n))
        out[np.arange(n), np.arange(n)] = 1
        return out

    def inv(self, a):
        """Inverse of the integer residue a."""
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in GF({0})".format(self.p))
        return pow(a, -1, self.p)

    def __repr__(self):
        return "GF({0})".format(self.p)


class FieldElement:
    """A residue in [0, p)."""
    __slots__ = ('value', 'modulus')

    def __init__(self, value, modulus):
        self.modulus = modulus
        self.value = int(value) % modulus.p

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            self.modulus.check(other.modulus)
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.value + b, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.value - b, self.modulus)

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(b - self.value, self.modulus)

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.value * b, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.modulus)

    def inv(self):
        return FieldElement(self.modulus.inv(self.value), self.modulus)

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.value * self.modulus.inv(b), self.modulus)

    def __pow__(self, k):
        if k < 0:
            return self.inv() ** (-k)
        return FieldElement(pow(self.value, k, self.modulus.p), self.modulus)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other) % self.modulus.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return "{0} mod {1}".format(self.value, self.modulus.p)


class FieldOpCounter:
    """Running count of multiply-add operations in the field."""

    def __init__(self):
        self.ops = 0


_active_counter = contextvars.ContextVar('krylovium_field_ops', default=None)


@contextlib.contextmanager
def count_field_ops():
    """Count field operations performed by the arithmetic kernels inside the block.

    Example:
        with count_field_ops() as counter:
            max_krylov_basis(spec)
        print(counter.ops)
    """
    counter = FieldOpCounter()
    token = _active_counter.set(counter)
    try:
        yield counter
    finally:
        _active_counter.reset(token)


def tally(k):
    counter = _active_counter.get()
    if counter is not None:
        counter.ops += int(k)
