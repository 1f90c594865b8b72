"""Exact commutative ring and field arithmetic for path-sum amplitudes.

Five carriers are provided: arbitrary-precision integers, rationals, the
dyadic cyclotomic ring Z[1/2, w] with w a primitive 8th root of unity,
the degree-4 cyclotomic field Q(w), and odd prime fields.  All values are
canonical on construction so equality is structural; there is no floating
point anywhere in the arithmetic (complex embeddings exist only for
display).
"""

from __future__ import annotations

import cmath
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

RingElem = Union[int, Fraction, "DOmega", "QOmega", "ModInt"]

_OMEGA_C = cmath.exp(1j * cmath.pi / 4)


class UnsupportedConstantError(ValueError):
    """The requested constant does not exist in the chosen ring."""


class RingMismatchError(TypeError):
    """Operands belong to different rings."""


def _omega_mul(u: tuple, v: tuple):
    """Multiply coordinate vectors over basis (1, w, w^2, w^3), w^4 = -1."""
    out = [u[0] * 0] * 4
    for s in range(4):
        if not u[s]:
            continue
        for t in range(4):
            if s + t < 4:
                out[s + t] += u[s] * v[t]
            else:
                out[s + t - 4] -= u[s] * v[t]
    return tuple(out)


@dataclass(frozen=True)
class DOmega:
    """Element (a + b*w + c*w^2 + d*w^3) / 2^k of Z[1/2, w], k minimal."""

    coeffs: tuple[int, int, int, int]
    k: int

    @staticmethod
    def make(a: int, b: int, c: int, d: int, k: int = 0) -> DOmega:
        if k < 0:
            a, b, c, d = (x << -k for x in (a, b, c, d))
            k = 0
        while k > 0 and not ((a | b | c | d) & 1):
            a, b, c, d, k = a >> 1, b >> 1, c >> 1, d >> 1, k - 1
        if a == b == c == d == 0:
            k = 0
        return DOmega((a, b, c, d), k)

    @staticmethod
    def from_int(n: int) -> DOmega:
        return DOmega((n, 0, 0, 0), 0)

    def __add__(self, other: object) -> DOmega:
        if isinstance(other, int):
            other = DOmega.from_int(other)
        if not isinstance(other, DOmega):
            return NotImplemented
        k = max(self.k, other.k)
        u = [x << (k - self.k) for x in self.coeffs]
        v = [x << (k - other.k) for x in other.coeffs]
        return DOmega.make(*(a + b for a, b in zip(u, v)), k=k)

    __radd__ = __add__

    def __neg__(self) -> DOmega:
        return DOmega(tuple(-x for x in self.coeffs), self.k)

    def __sub__(self, other: object) -> DOmega:
        if isinstance(other, int):
            other = DOmega.from_int(other)
        if not isinstance(other, DOmega):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> DOmega:
        return (-self) + other

    def __mul__(self, other: object) -> DOmega:
        if isinstance(other, int):
            other = DOmega.from_int(other)
        if not isinstance(other, DOmega):
            return NotImplemented
        return DOmega.make(*_omega_mul(self.coeffs, other.coeffs), k=self.k + other.k)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = DOmega.from_int(other)
        if not isinstance(other, DOmega):
            return NotImplemented
        return self.coeffs == other.coeffs and self.k == other.k

    def __hash__(self) -> int:
        return hash((self.coeffs, self.k))

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (0, 0, 0, 0)

    def to_complex(self) -> complex:
        a, b, c, d = self.coeffs
        return (a + b * _OMEGA_C + c * 1j + d * _OMEGA_C**3) / 2**self.k

    def __str__(self) -> str:
        a, b, c, d = self.coeffs
        return f"({a},{b},{c},{d})/2^{self.k}"


@dataclass(frozen=True)
class QOmega:
    """Element of the cyclotomic field Q(w) with rational coordinates."""

    coeffs: tuple[Fraction, Fraction, Fraction, Fraction]

    @staticmethod
    def make(a, b, c, d) -> QOmega:
        return QOmega((Fraction(a), Fraction(b), Fraction(c), Fraction(d)))

    @staticmethod
    def from_int(n: int) -> QOmega:
        return QOmega.make(n, 0, 0, 0)

    @staticmethod
    def from_dyadic(x: DOmega) -> QOmega:
        scale = Fraction(1, 2**x.k)
        return QOmega(tuple(scale * c for c in x.coeffs))

    def __add__(self, other: object) -> QOmega:
        if isinstance(other, int):
            other = QOmega.from_int(other)
        if not isinstance(other, QOmega):
            return NotImplemented
        return QOmega(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> QOmega:
        return QOmega(tuple(-x for x in self.coeffs))

    def __sub__(self, other: object) -> QOmega:
        if isinstance(other, int):
            other = QOmega.from_int(other)
        if not isinstance(other, QOmega):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> QOmega:
        return (-self) + other

    def __mul__(self, other: object) -> QOmega:
        if isinstance(other, int):
            other = QOmega.from_int(other)
        if not isinstance(other, QOmega):
            return NotImplemented
        return QOmega(_omega_mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = QOmega.from_int(other)
        if not isinstance(other, QOmega):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def galois(self, j: int) -> QOmega:
        """Apply the automorphism w -> w^j for odd j."""
        out = [Fraction(0)] * 4
        for t, c in enumerate(self.coeffs):
            s = (j * t) % 8
            if s < 4:
                out[s] += c
            else:
                out[s - 4] -= c
        return QOmega(tuple(out))

    def inverse(self) -> QOmega:
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero")
        y = self.galois(3) * self.galois(5) * self.galois(7)
        norm = self * y
        # The product over all conjugates is rational.
        assert norm.coeffs[1] == norm.coeffs[2] == norm.coeffs[3] == 0
        q = norm.coeffs[0]
        return QOmega(tuple(c / q for c in y.coeffs))

    def to_complex(self) -> complex:
        a, b, c, d = self.coeffs
        return float(a) + float(b) * _OMEGA_C + float(c) * 1j + float(d) * _OMEGA_C**3

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coeffs) + ")"


@dataclass(frozen=True)
class ModInt:
    """Residue modulo an odd prime."""

    value: int
    p: int

    @staticmethod
    def make(v: int, p: int) -> ModInt:
        return ModInt(v % p, p)

    def _check(self, other: object) -> ModInt:
        if isinstance(other, int):
            return ModInt.make(other, self.p)
        if isinstance(other, ModInt):
            if other.p != self.p:
                raise RingMismatchError(f"F{self.p} vs F{other.p}")
            return other
        return NotImplemented

    def __add__(self, other: object):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return ModInt.make(self.value + other.value, self.p)

    __radd__ = __add__

    def __neg__(self) -> ModInt:
        return ModInt.make(-self.value, self.p)

    def __sub__(self, other: object):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return ModInt.make(self.value - other.value, self.p)

    def __rsub__(self, other: object):
        return (-self) + other

    def __mul__(self, other: object):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return ModInt.make(self.value * other.value, self.p)

    __rmul__ = __mul__

    def inverse(self) -> ModInt:
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero")
        return ModInt(pow(self.value, self.p - 2, self.p), self.p)

    def to_complex(self) -> complex:
        return complex(self.value)

    def __str__(self) -> str:
        return f"{self.value} mod {self.p}"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Ring:
    """Descriptor for one exact coefficient ring.

    Concrete subclasses supply construction, parsing, formatting and the
    optional constants (omega, i, sqrt(2), 1/2) that gates may require.
    """

    name: str
    is_field: bool = False
    char: int = 0
    has_half: bool = False
    has_omega: bool = False

    @property
    def zero(self) -> RingElem:
        return self.from_int(0)

    @property
    def one(self) -> RingElem:
        return self.from_int(1)

    def from_int(self, n: int) -> RingElem:
        raise NotImplementedError

    def half(self) -> RingElem:
        raise UnsupportedConstantError(f"1/2 does not exist in {self.name}")

    def omega(self) -> RingElem:
        raise UnsupportedConstantError(f"omega does not exist in {self.name}")

    def imag_unit(self) -> RingElem:
        return self.pow(self.omega(), 2)

    def sqrt2(self) -> RingElem:
        w = self.omega()
        return w - self.pow(w, 3)

    def inv_sqrt2(self) -> RingElem:
        return self.sqrt2() * self.half()

    def inv(self, a: RingElem) -> RingElem:
        raise UnsupportedConstantError(f"{self.name} is not a field")

    def pow(self, a: RingElem, n: int) -> RingElem:
        if n < 0:
            return self.pow(self.inv(a), -n)
        acc, base = self.one, a
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def is_element(self, x: object) -> bool:
        raise NotImplementedError

    def check(self, x: RingElem) -> RingElem:
        if not self.is_element(x):
            raise RingMismatchError(f"{x!r} is not an element of {self.name}")
        return x

    def parse(self, text: str) -> RingElem:
        raise NotImplementedError

    def format(self, a: RingElem) -> str:
        return str(a)

    def to_complex(self, a: RingElem) -> complex:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<ring {self.name}>"


class IntegerRing(Ring):
    name = "int"

    def from_int(self, n: int) -> int:
        return n

    def is_element(self, x: object) -> bool:
        return isinstance(x, int) and not isinstance(x, bool)

    def parse(self, text: str) -> int:
        return int(text.strip())

    def to_complex(self, a: int) -> complex:
        return complex(a)


class RationalRing(Ring):
    name = "rational"
    is_field = True
    has_half = True

    def from_int(self, n: int) -> Fraction:
        return Fraction(n)

    def half(self) -> Fraction:
        return Fraction(1, 2)

    def inv(self, a: Fraction) -> Fraction:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def is_element(self, x: object) -> bool:
        return isinstance(x, (Fraction, int)) and not isinstance(x, bool)

    def parse(self, text: str) -> Fraction:
        return Fraction(text.strip())

    def to_complex(self, a: Fraction) -> complex:
        return complex(float(a))


_TUPLE_RE = re.compile(
    r"^\(\s*([^,()]+)\s*,\s*([^,()]+)\s*,\s*([^,()]+)\s*,\s*([^,()]+)\s*\)"
    r"(?:\s*/\s*2\^(\d+))?$"
)


class DyadicCyclotomicRing(Ring):
    name = "dyadic-cyc8"
    has_half = True
    has_omega = True

    def from_int(self, n: int) -> DOmega:
        return DOmega.from_int(n)

    def half(self) -> DOmega:
        return DOmega((1, 0, 0, 0), 1)

    def omega(self) -> DOmega:
        return DOmega((0, 1, 0, 0), 0)

    def is_element(self, x: object) -> bool:
        return isinstance(x, DOmega)

    def parse(self, text: str) -> DOmega:
        text = text.strip()
        m = _TUPLE_RE.match(text)
        if m:
            a, b, c, d = (int(g) for g in m.groups()[:4])
            k = int(m.group(5) or 0)
            return DOmega.make(a, b, c, d, k)
        return DOmega.from_int(int(text))

    def to_complex(self, a: DOmega) -> complex:
        return a.to_complex()


class CyclotomicField(Ring):
    name = "cyc8-field"
    is_field = True
    has_half = True
    has_omega = True

    def from_int(self, n: int) -> QOmega:
        return QOmega.from_int(n)

    def half(self) -> QOmega:
        return QOmega.make(Fraction(1, 2), 0, 0, 0)

    def omega(self) -> QOmega:
        return QOmega.make(0, 1, 0, 0)

    def inv(self, a: QOmega) -> QOmega:
        return a.inverse()

    def embed_dyadic(self, x: DOmega) -> QOmega:
        return QOmega.from_dyadic(x)

    def is_element(self, x: object) -> bool:
        return isinstance(x, QOmega)

    def parse(self, text: str) -> QOmega:
        text = text.strip()
        m = _TUPLE_RE.match(text)
        if m:
            a, b, c, d = (Fraction(g.strip()) for g in m.groups()[:4])
            if m.group(5):
                scale = Fraction(1, 2 ** int(m.group(5)))
                a, b, c, d = a * scale, b * scale, c * scale, d * scale
            return QOmega.make(a, b, c, d)
        return QOmega.make(Fraction(text), 0, 0, 0)

    def to_complex(self, a: QOmega) -> complex:
        return a.to_complex()


class PrimeField(Ring):
    is_field = True
    has_half = True

    def __init__(self, p: int) -> None:
        if not _is_prime(p) or p == 2:
            raise ValueError(f"prime field modulus must be an odd prime, got {p}")
        self.p = p
        self.char = p
        self.name = f"fp:{p}"

    def from_int(self, n: int) -> ModInt:
        return ModInt.make(n, self.p)

    def half(self) -> ModInt:
        return self.from_int(2).inverse()

    def inv(self, a: ModInt) -> ModInt:
        return a.inverse()

    def is_element(self, x: object) -> bool:
        return isinstance(x, ModInt) and x.p == self.p

    def parse(self, text: str) -> ModInt:
        text = text.strip()
        m = re.match(r"^(-?\d+)(?:\s+mod\s+(\d+))?$", text)
        if not m:
            raise ValueError(f"cannot parse {text!r} as element of {self.name}")
        if m.group(2) and int(m.group(2)) != self.p:
            raise RingMismatchError(f"modulus {m.group(2)} differs from {self.p}")
        return self.from_int(int(m.group(1)))

    def to_complex(self, a: ModInt) -> complex:
        return a.to_complex()


INT = IntegerRing()
RATIONAL = RationalRing()
DYADIC_CYC8 = DyadicCyclotomicRing()
CYC8_FIELD = CyclotomicField()


def ring_by_name(name: str) -> Ring:
    """Resolve a CLI ring name: int, rational, dyadic-cyc8, cyc8-field, fp:<p>."""
    lowered = name.strip().lower()
    fixed = {
        "int": INT,
        "rational": RATIONAL,
        "dyadic-cyc8": DYADIC_CYC8,
        "cyc8-field": CYC8_FIELD,
    }
    if lowered in fixed:
        return fixed[lowered]
    if lowered.startswith("fp:"):
        return PrimeField(int(lowered[3:]))
    raise ValueError(f"unknown ring {name!r}")
