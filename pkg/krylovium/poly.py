import numpy as np

from krylovium.gf import PrimeModulus, tally

__all__ = ('Poly', 'NEG_INF', 'KARATSUBA_THRESHOLD', 'mul_coeffs', 'divrem', 'gcd', 'powmod',
           'truncate', 'reverse', 'trim_coeffs')

# Degree of the zero polynomial.
NEG_INF = float('-inf')

# Operand length from which products go through Karatsuba's recursion.
KARATSUBA_THRESHOLD = 32


def trim_coeffs(c):
    nz = np.nonzero(c)[0]
    if nz.size == 0:
        return c[:0]
    return c[:int(nz[-1]) + 1]


def _padded_add(x, y, p):
    if len(x) < len(y):
        x, y = y, x
    out = x.copy()
    out[:len(y)] = (out[:len(y)] + y) % p
    return out


def _schoolbook(a, b, modulus):
    p = modulus.p
    if len(a) > len(b):
        a, b = b, a
    out = modulus.zeros(len(a) + len(b) - 1)
    lb = len(b)
    for i, ai in enumerate(a):
        if ai:
            out[i:i + lb] = (out[i:i + lb] + ai * b) % p
    tally(len(a) * len(b))
    return out


def _karatsuba(a, b, modulus, threshold):
    la, lb = len(a), len(b)
    if min(la, lb) < threshold:
        return _schoolbook(a, b, modulus)
    p = modulus.p
    if la > lb:
        a, b, la, lb = b, a, lb, la
    out = modulus.zeros(la + lb - 1)
    if 2 * la <= lb:
        # unbalanced: cut the long operand into pieces as long as the short one
        for start in range(0, lb, la):
            piece = _karatsuba(a, b[start:start + la], modulus, threshold)
            out[start:start + len(piece)] = (out[start:start + len(piece)] + piece) % p
        return out
    h = lb // 2
    a0, a1 = a[:h], a[h:]
    b0, b1 = b[:h], b[h:]
    z0 = _karatsuba(a0, b0, modulus, threshold)
    z2 = _karatsuba(a1, b1, modulus, threshold)
    z1 = _karatsuba(_padded_add(a0, a1, p), _padded_add(b0, b1, p), modulus, threshold)
    z1[:len(z0)] = (z1[:len(z0)] - z0) % p
    z1[:len(z2)] = (z1[:len(z2)] - z2) % p
    out[:len(z0)] = z0
    out[2 * h:2 * h + len(z2)] = (out[2 * h:2 * h + len(z2)] + z2) % p
    z1 = trim_coeffs(z1)
    out[h:h + len(z1)] = (out[h:h + len(z1)] + z1) % p
    return out


def mul_coeffs(a, b, modulus, threshold=None):
    """Product of two coefficient arrays (low to high), reduced mod p."""
    if len(a) == 0 or len(b) == 0:
        return modulus.zeros(0)
    if threshold is None:
        threshold = KARATSUBA_THRESHOLD
    return _karatsuba(a, b, modulus, max(threshold, 2))


class Poly:
    """Univariate polynomial over GF(p), coefficients stored low to high in a numpy array.

    The coefficient array is always normalized: empty for the zero polynomial, otherwise with a
    nonzero last entry. The zero polynomial has degree NEG_INF.

    Args:
        coeffs: iterable of integers, low to high.
        modulus: PrimeModulus or prime integer.
    """
    __slots__ = ('coeffs', 'modulus')

    def __init__(self, coeffs, modulus):
        if not isinstance(modulus, PrimeModulus):
            modulus = PrimeModulus(modulus)
        if not isinstance(coeffs, np.ndarray):
            coeffs = np.array([int(c) for c in coeffs], dtype=object)
        self.modulus = modulus
        self.coeffs = trim_coeffs(modulus.reduce(coeffs.reshape(-1)))

    @classmethod
    def zero(cls, modulus):
        return cls([], modulus)

    @classmethod
    def one(cls, modulus):
        return cls([1], modulus)

    @classmethod
    def x(cls, modulus):
        return cls([0, 1], modulus)

    @classmethod
    def constant(cls, c, modulus):
        return cls([c], modulus)

    @classmethod
    def monomial(cls, k, modulus, c=1):
        coeffs = [0] * k + [c]
        return cls(coeffs, modulus)

    @property
    def degree(self):
        return len(self.coeffs) - 1 if len(self.coeffs) else NEG_INF

    @property
    def lc(self):
        return int(self.coeffs[-1]) if len(self.coeffs) else 0

    def is_zero(self):
        return len(self.coeffs) == 0

    def coeff(self, k):
        return int(self.coeffs[k]) if 0 <= k < len(self.coeffs) else 0

    def tolist(self):
        return [int(c) for c in self.coeffs]

    def _lift(self, other):
        if isinstance(other, Poly):
            self.modulus.check(other.modulus)
            return other
        if isinstance(other, (int, np.integer)):
            return Poly([int(other)], self.modulus)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return Poly(_padded_add(self.coeffs, other.coeffs, self.modulus.p), self.modulus)

    __radd__ = __add__

    def __neg__(self):
        return Poly(-self.coeffs, self.modulus)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return Poly(mul_coeffs(self.coeffs, other.coeffs, self.modulus), self.modulus)

    __rmul__ = __mul__

    def __divmod__(self, other):
        return divrem(self, self._lift(other))

    def __floordiv__(self, other):
        return divrem(self, self._lift(other))[0]

    def __mod__(self, other):
        return divrem(self, self._lift(other))[1]

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = Poly([int(other)], self.modulus)
        if not isinstance(other, Poly):
            return NotImplemented
        return (self.modulus == other.modulus and len(self.coeffs) == len(other.coeffs)
                and bool(np.all(self.coeffs == other.coeffs)))

    __hash__ = None

    def __call__(self, value):
        """Horner evaluation at a field value."""
        p = self.modulus.p
        acc = 0
        for c in reversed(self.tolist()):
            acc = (acc * int(value) + c) % p
        return acc

    def monic(self):
        if self.is_zero():
            return self
        return Poly(self.coeffs * self.modulus.inv(self.lc), self.modulus)

    def shift(self, k):
        """Multiply by x**k."""
        if self.is_zero() or k == 0:
            return self
        return Poly(np.concatenate([self.modulus.zeros(k), self.coeffs]), self.modulus)

    def truncate(self, d):
        return truncate(self, d)

    def reverse(self, d):
        return reverse(self, d)

    def __repr__(self):
        if self.is_zero():
            return "Poly(0 mod {0})".format(self.modulus.p)
        terms = []
        for k, c in enumerate(self.tolist()):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                mono = "x" if k == 1 else "x^{0}".format(k)
                terms.append(mono if c == 1 else "{0}*{1}".format(c, mono))
        return "Poly({0} mod {1})".format(" + ".join(terms), self.modulus.p)


def divrem(f, g):
    """Euclidean division f = q*g + r with deg r < deg g.

    Raises:
        ZeroDivisionError: g is the zero polynomial.
    """
    f.modulus.check(g.modulus)
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    mod = f.modulus
    p = mod.p
    dg = len(g.coeffs) - 1
    if len(f.coeffs) <= dg:
        return Poly.zero(mod), f
    r = f.coeffs.copy()
    q = mod.zeros(len(r) - dg)
    inv = mod.inv(g.lc)
    gc = g.coeffs
    for k in range(len(r) - 1 - dg, -1, -1):
        c = r[k + dg] * inv % p
        q[k] = c
        if c:
            r[k:k + dg + 1] = (r[k:k + dg + 1] - c * gc) % p
    tally(len(q) * (dg + 1))
    return Poly(q, mod), Poly(r[:dg], mod)


def gcd(f, g):
    """Monic greatest common divisor; zero when both inputs are zero."""
    while not g.is_zero():
        f, g = g, divrem(f, g)[1]
    return f.monic()


def powmod(k, f):
    """x**k rem f, by binary exponentiation.

    Args:
        k: natural number, arbitrarily large.
        f: monic polynomial of degree at least 1.
    """
    k = int(k)
    if k < 0:
        raise ValueError("exponent must be a natural number, got {0}".format(k))
    if f.degree == NEG_INF or f.degree < 1:
        raise ValueError("powmod needs a modulus polynomial of degree >= 1")
    if f.lc != 1:
        raise ValueError("powmod needs a monic modulus polynomial")
    mod = f.modulus
    result = Poly.one(mod)
    if k == 0:
        return divrem(result, f)[1]
    for bit in bin(k)[2:]:
        result = divrem(result * result, f)[1]
        if bit == '1':
            result = divrem(result.shift(1), f)[1]
    return result


def truncate(f, d):
    """f rem x**d."""
    if d < 0:
        raise ValueError("truncation order must be >= 0")
    return Poly(f.coeffs[:d], f.modulus)


def reverse(f, d):
    """x**d * f(1/x); requires deg f <= d."""
    if f.degree > d:
        raise ValueError("cannot reverse a polynomial of degree {0} at order {1}".format(f.degree, d))
    if f.is_zero():
        return f
    c = f.modulus.zeros(d + 1)
    c[:len(f.coeffs)] = f.coeffs
    return Poly(c[::-1].copy(), f.modulus)
