"""Scalar arithmetic for the two computation modes.

Exact mode works over the Gaussian rationals: numbers (a + b*i)/d held as
normalized integer triples, so equality is literal and every operation is
closed. Float mode wraps a complex double together with a comparison
tolerance. The two modes never mix inside one computation; combining them
raises ScalarModeError rather than silently promoting.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

EXACT = "exact"
FLOAT = "float"

DEFAULT_TOL = 1e-9


class ScalarModeError(TypeError):
    """Raised when exact and float scalars meet in one operation."""


def _gcd3(a: int, b: int, c: int) -> int:
    return math.gcd(math.gcd(abs(a), abs(b)), abs(c))


class QQi:
    """Gaussian rational (a + b*i)/d with d > 0 and gcd(a, b, d) = 1."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a: int, b: int = 0, d: int = 1, _normalized: bool = False):
        if not _normalized:
            if d == 0:
                raise ZeroDivisionError("zero denominator")
            if d < 0:
                a, b, d = -a, -b, -d
            g = _gcd3(a, b, d)
            if g > 1:
                a //= g
                b //= g
                d //= g
        self.a = a
        self.b = b
        self.d = d

    # ---- constructors ----

    @staticmethod
    def from_rational(re, im=0) -> "QQi":
        """Build from Fractions, ints, or (num, den) behaviour of Fraction."""
        fre = Fraction(re)
        fim = Fraction(im)
        d = fre.denominator * fim.denominator // math.gcd(fre.denominator, fim.denominator)
        return QQi(fre.numerator * (d // fre.denominator), fim.numerator * (d // fim.denominator), d)

    # ---- views ----

    @property
    def re(self) -> Fraction:
        return Fraction(self.a, self.d)

    @property
    def im(self) -> Fraction:
        return Fraction(self.b, self.d)

    @property
    def mode(self) -> str:
        return EXACT

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_real(self) -> bool:
        return self.b == 0

    def to_complex(self) -> complex:
        return complex(self.a / self.d, self.b / self.d)

    # ---- arithmetic ----

    def __add__(self, other):
        if not isinstance(other, QQi):
            return self._coerce_add(other)
        return QQi(self.a * other.d + other.a * self.d,
                   self.b * other.d + other.b * self.d,
                   self.d * other.d)

    def __radd__(self, other):
        return self._coerce_add(other)

    def _coerce_add(self, other):
        if isinstance(other, int):
            return QQi(self.a + other * self.d, self.b, self.d)
        if isinstance(other, CF):
            raise ScalarModeError("cannot mix exact and float scalars")
        return NotImplemented

    def __neg__(self):
        return QQi(-self.a, -self.b, self.d, _normalized=True)

    def __sub__(self, other):
        if not isinstance(other, QQi):
            if isinstance(other, int):
                return QQi(self.a - other * self.d, self.b, self.d)
            if isinstance(other, CF):
                raise ScalarModeError("cannot mix exact and float scalars")
            return NotImplemented
        return QQi(self.a * other.d - other.a * self.d,
                   self.b * other.d - other.b * self.d,
                   self.d * other.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QQi):
            if isinstance(other, int):
                return QQi(self.a * other, self.b * other, self.d)
            if isinstance(other, CF):
                raise ScalarModeError("cannot mix exact and float scalars")
            return NotImplemented
        return QQi(self.a * other.a - self.b * other.b,
                   self.a * other.b + self.b * other.a,
                   self.d * other.d)

    def __rmul__(self, other):
        return self.__mul__(other)

    def inverse(self) -> "QQi":
        n = self.a * self.a + self.b * self.b
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return QQi(self.a * self.d, -self.b * self.d, n)

    def __truediv__(self, other):
        if isinstance(other, int):
            return QQi(self.a, self.b, self.d * other)
        if isinstance(other, QQi):
            return self * other.inverse()
        if isinstance(other, CF):
            raise ScalarModeError("cannot mix exact and float scalars")
        return NotImplemented

    def conj(self) -> "QQi":
        return QQi(self.a, -self.b, self.d, _normalized=True)

    def norm_sq(self) -> Fraction:
        """|z|^2 as an exact nonnegative rational."""
        return Fraction(self.a * self.a + self.b * self.b, self.d * self.d)

    # ---- comparison ----

    def __eq__(self, other):
        if isinstance(other, QQi):
            return self.a == other.a and self.b == other.b and self.d == other.d
        if isinstance(other, int):
            return self.b == 0 and self.d == 1 and self.a == other
        if isinstance(other, CF):
            raise ScalarModeError("cannot compare exact and float scalars")
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(Fraction(self.a, self.d))
        return hash((self.a, self.b, self.d))

    def __repr__(self):
        if self.b == 0:
            return f"QQi({self.a}/{self.d})" if self.d != 1 else f"QQi({self.a})"
        return f"QQi(({self.a}{self.b:+}i)/{self.d})"


class CF:
    """Complex double with an attached comparison tolerance."""

    __slots__ = ("z", "tol")

    def __init__(self, z, tol: float = DEFAULT_TOL):
        self.z = complex(z)
        if tol <= 0:
            raise ValueError("tol must be positive")
        self.tol = tol

    @property
    def re(self) -> float:
        return self.z.real

    @property
    def im(self) -> float:
        return self.z.imag

    @property
    def mode(self) -> str:
        return FLOAT

    def is_zero(self) -> bool:
        return abs(self.z) <= self.tol

    def is_real(self) -> bool:
        return abs(self.z.imag) <= self.tol

    def to_complex(self) -> complex:
        return self.z

    def _lift(self, other):
        if isinstance(other, CF):
            return other
        if isinstance(other, (int, float)):
            return CF(other, self.tol)
        if isinstance(other, QQi):
            raise ScalarModeError("cannot mix exact and float scalars")
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return CF(self.z + o.z, max(self.tol, o.tol))

    __radd__ = __add__

    def __neg__(self):
        return CF(-self.z, self.tol)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return CF(self.z - o.z, max(self.tol, o.tol))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return CF(self.z * o.z, max(self.tol, o.tol))

    __rmul__ = __mul__

    def inverse(self) -> "CF":
        return CF(1.0 / self.z, self.tol)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return CF(self.z / o.z, max(self.tol, o.tol))

    def conj(self) -> "CF":
        return CF(self.z.conjugate(), self.tol)

    def norm_sq(self) -> float:
        return abs(self.z) ** 2

    def __eq__(self, other):
        # Single comparator for float mode: |z - w| <= tol.
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return abs(self.z - o.z) <= max(self.tol, o.tol)

    __hash__ = None  # tolerant equality is not hash-compatible

    def __repr__(self):
        return f"CF({self.z!r})"


# Shared constants for the exact mode.
ZERO = QQi(0)
ONE = QQi(1)
IUNIT = QQi(0, 1)


def qi(re, im=0) -> QQi:
    """Shorthand exact scalar from rational data."""
    return QQi.from_rational(re, im)


def scalar_mode(x) -> str:
    if isinstance(x, QQi):
        return EXACT
    if isinstance(x, CF):
        return FLOAT
    raise TypeError(f"not a scalar: {x!r}")


def zero_of(mode: str, tol: float = DEFAULT_TOL):
    return ZERO if mode == EXACT else CF(0.0, tol)


def one_of(mode: str, tol: float = DEFAULT_TOL):
    return ONE if mode == EXACT else CF(1.0, tol)


def ensure_same_mode(*items) -> str:
    """Return the common mode of the given scalar carriers, or raise."""
    modes = {getattr(x, "mode") for x in items if x is not None}
    if len(modes) > 1:
        raise ScalarModeError(f"mixed scalar modes: {sorted(modes)}")
    if not modes:
        return EXACT
    return modes.pop()


def close(x, y) -> bool:
    """Mode-aware equality; the only comparator float mode routes through."""
    if isinstance(x, QQi) and isinstance(y, QQi):
        return x == y
    if isinstance(x, CF) or isinstance(y, CF):
        if isinstance(x, QQi) or isinstance(y, QQi):
            raise ScalarModeError("cannot compare exact and float scalars")
        return abs(x.z - y.z) <= max(x.tol, y.tol)
    raise TypeError("not scalars")


def parse_phase(z: complex, tol: float = DEFAULT_TOL) -> CF:
    """Normalize a float scalar onto the unit circle within tol."""
    r = abs(z)
    if abs(r - 1.0) > tol:
        raise ValueError(f"not a phase within tol: |z| = {r}")
    return CF(z / r, tol)
