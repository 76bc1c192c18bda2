"""
Exact scalar arithmetic and exact linear algebra.

Rationals are ``fractions.Fraction``; quaternions and Gaussian rationals are small
immutable value types; cyclotomic numbers are kept in a canonical basis so that
equality is coefficient comparison. Rank and nullspace go through sympy's
``DomainMatrix`` over ``QQ``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, TypeVar, Union

import numpy as np
from sympy import QQ, factorint, mobius, totient
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)

Rational = Fraction
Scalar = Union[int, Fraction]
T = TypeVar("T")


def to_fraction(value) -> Fraction:
    """
    Convert ints, strings, Fractions and sympy/gmpy rationals to a Fraction
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        num, den = value.numerator, value.denominator
        num = num() if callable(num) else num
        den = den() if callable(den) else den
        return Fraction(int(num), int(den))
    if hasattr(value, "p") and hasattr(value, "q"):
        return Fraction(int(value.p), int(value.q))
    raise TypeError(f"cannot convert {value!r} to an exact rational")


# ---------------------------------------------------------------------------
# Quaternions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Quaternion:
    """
    Rational quaternion a + b i + c j + d k
    """
    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)
    c: Fraction = Fraction(0)
    d: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, to_fraction(getattr(self, name)))

    @classmethod
    def unit(cls, name: str) -> "Quaternion":
        table = {"1": (1, 0, 0, 0), "i": (0, 1, 0, 0), "j": (0, 0, 1, 0), "k": (0, 0, 0, 1)}
        return cls(*table[name])

    @property
    def components(self) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(*(x + y for x, y in zip(self.components, other.components)))

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(*(x - y for x, y in zip(self.components, other.components)))

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return quaternion_mul(self, other)
        s = to_fraction(other)
        return Quaternion(self.a * s, self.b * s, self.c * s, self.d * s)

    __rmul__ = __mul__

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def norm(self) -> Fraction:
        return self.a ** 2 + self.b ** 2 + self.c ** 2 + self.d ** 2

    def inverse(self) -> "Quaternion":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero quaternion has no inverse")
        return self.conjugate() * (1 / n)

    def right_matrix(self) -> List[List[Fraction]]:
        """Real 4x4 matrix of x -> x*self on the basis 1, i, j, k (columns are images)."""
        cols = [quaternion_mul(Quaternion.unit(u), self).components for u in "1ijk"]
        return [[cols[c][r] for c in range(4)] for r in range(4)]

    def __str__(self) -> str:
        parts = []
        for coeff, label in zip(self.components, ("", "i", "j", "k")):
            if coeff == 0:
                continue
            if label and abs(coeff) == 1:
                text = label
            else:
                text = f"{abs(coeff)}{label}"
            parts.append(("-" if coeff < 0 else "+") + text)
        if not parts:
            return "0"
        out = "".join(parts)
        return out[1:] if out.startswith("+") else out


def quaternion_mul(x: Quaternion, y: Quaternion) -> Quaternion:
    """
    Hamilton product with exact coefficients
    """
    a1, b1, c1, d1 = x.components
    a2, b2, c2, d2 = y.components
    return Quaternion(
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussianRational:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", to_fraction(self.re))
        object.__setattr__(self, "im", to_fraction(self.im))

    @staticmethod
    def coerce(value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        return GaussianRational(to_fraction(value), 0)

    def __add__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return self * o.conjugate() * GaussianRational(1 / n, 0)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re ** 2 + self.im ** 2

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        return f"{self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i"


I = GaussianRational(0, 1)


# ---------------------------------------------------------------------------
# Cyclotomic numbers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _prime_power_parts(order: int) -> Tuple[Tuple[int, int], ...]:
    return tuple(sorted((p, a) for p, a in factorint(order).items()))


def _reduce_coefficients(order: int, coeffs: Dict[int, Fraction]) -> Dict[int, Fraction]:
    current = {k % order: c for k, c in coeffs.items() if c != 0}
    for p, a in _prime_power_parts(order):
        q = p ** a
        step = order // p
        reduced: Dict[int, Fraction] = {}
        for k, c in current.items():
            component = k % q
            if p == 2:
                if component >= q // 2:
                    target = (k + step) % order
                    reduced[target] = reduced.get(target, Fraction(0)) - c
                else:
                    reduced[k] = reduced.get(k, Fraction(0)) + c
            elif component // (q // p) == 0:
                for t in range(1, p):
                    target = (k + t * step) % order
                    reduced[target] = reduced.get(target, Fraction(0)) - c
            else:
                reduced[k] = reduced.get(k, Fraction(0)) + c
        current = {k: c for k, c in reduced.items() if c != 0}
    return current


class Cyclotomic:
    """
    Element of the cyclotomic field Q(zeta_e), zeta_e = exp(2 pi i / e).

    Coefficients live on a fixed basis of powers of zeta: for each prime power
    p^a exactly dividing e, the exponent's residue mod p^a must avoid the slice
    eliminated by the relation sum_{t mod p} zeta^(k + t e/p) = 0.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Optional[Dict[int, Scalar]] = None):
        if order <= 0:
            raise ValueError("cyclotomic order must be positive")
        raw = {int(k): to_fraction(v) for k, v in (coeffs or {}).items()}
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", _reduce_coefficients(order, raw))

    def __setattr__(self, key, value):
        raise AttributeError("Cyclotomic values are immutable")

    # constructors
    @classmethod
    def rational(cls, value: Scalar, order: int = 1) -> "Cyclotomic":
        return cls(order, {0: to_fraction(value)})

    @classmethod
    def root(cls, order: int, exponent: int = 1) -> "Cyclotomic":
        return cls(order, {exponent % order: 1})

    @classmethod
    def coerce(cls, value, order: int = 1) -> "Cyclotomic":
        if isinstance(value, Cyclotomic):
            return value
        return cls.rational(value, order)

    # field structure
    def lift(self, order: int) -> "Cyclotomic":
        if order % self.order:
            raise ValueError(f"cannot lift order {self.order} into order {order}")
        if order == self.order:
            return self
        factor = order // self.order
        return Cyclotomic(order, {k * factor: c for k, c in self.coeffs.items()})

    def _common(self, other) -> Tuple["Cyclotomic", "Cyclotomic"]:
        other = Cyclotomic.coerce(other, self.order)
        if other.order == self.order:
            return self, other
        e = self.order * other.order // gcd(self.order, other.order)
        return self.lift(e), other.lift(e)

    def __add__(self, other):
        x, y = self._common(other)
        merged = dict(x.coeffs)
        for k, c in y.coeffs.items():
            merged[k] = merged.get(k, Fraction(0)) + c
        return Cyclotomic(x.order, merged)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.order, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-Cyclotomic.coerce(other, self.order))

    def __rsub__(self, other):
        return Cyclotomic.coerce(other, self.order) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            s = to_fraction(other)
            return Cyclotomic(self.order, {k: c * s for k, c in self.coeffs.items()})
        x, y = self._common(other)
        e = x.order
        product: Dict[int, Fraction] = {}
        for k1, c1 in x.coeffs.items():
            for k2, c2 in y.coeffs.items():
                k = (k1 + k2) % e
                product[k] = product.get(k, Fraction(0)) + c1 * c2
        return Cyclotomic(e, product)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / to_fraction(other))
        return self * Cyclotomic.coerce(other, self.order).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = Cyclotomic.rational(1, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def galois(self, a: int) -> "Cyclotomic":
        """Image under the automorphism zeta -> zeta^a (a coprime to the order)."""
        if gcd(a, self.order) != 1:
            raise ValueError(f"{a} is not coprime to {self.order}")
        return Cyclotomic(self.order, {(k * a) % self.order: c for k, c in self.coeffs.items()})

    def conjugate(self) -> "Cyclotomic":
        return Cyclotomic(self.order, {(-k) % self.order: c for k, c in self.coeffs.items()})

    def norm(self) -> Fraction:
        """Field norm down to Q, the product of all Galois conjugates."""
        result = Cyclotomic.rational(1, self.order)
        for a in range(1, self.order + 1):
            if gcd(a, self.order) == 1:
                result = result * self.galois(a)
        return result.to_fraction()

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise ZeroDivisionError("zero cyclotomic has no inverse")
        others = Cyclotomic.rational(1, self.order)
        for a in range(2, self.order + 1):
            if gcd(a, self.order) == 1:
                others = others * self.galois(a)
        return others * (1 / self.norm())

    def average_trace(self) -> Fraction:
        """Trace to Q divided by the field degree; independent of the order used."""
        total = Fraction(0)
        for k, c in self.coeffs.items():
            n = self.order // gcd(k, self.order)
            total += c * Fraction(int(mobius(n)), int(totient(n)))
        return total

    # predicates and conversions
    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        return self == Cyclotomic.rational(self.average_trace(), self.order)

    def is_real(self) -> bool:
        return self == self.conjugate()

    def to_fraction(self) -> Fraction:
        value = self.average_trace()
        if self != Cyclotomic.rational(value, self.order):
            raise ValueError(f"{self} is not rational")
        return value

    def __complex__(self) -> complex:
        return complex(sum(complex(float(c), 0) * np.exp(2j * np.pi * k / self.order)
                           for k, c in self.coeffs.items()))

    def __eq__(self, other):
        if not isinstance(other, (Cyclotomic, int, Fraction)):
            return NotImplemented
        x, y = self._common(other)
        return x.coeffs == y.coeffs

    def __hash__(self):
        return hash(self.average_trace())

    def sort_key(self) -> Tuple[float, float]:
        z = complex(self)
        return (round(z.real, 9), round(z.imag, 9))

    def to_json(self) -> Dict:
        return {"order": self.order,
                "coeffs": {str(k): str(c) for k, c in sorted(self.coeffs.items())}}

    @classmethod
    def from_json(cls, data: Dict) -> "Cyclotomic":
        return cls(int(data["order"]), {int(k): Fraction(v) for k, v in data["coeffs"].items()})

    def __repr__(self):
        return f"Cyclotomic({self.order}, {self.coeffs})"

    def __str__(self):
        if self.is_rational():
            return str(self.average_trace())
        terms = []
        for k, c in sorted(self.coeffs.items()):
            terms.append(f"{c}*E({self.order})^{k}")
        return " + ".join(terms)


def cyclotomic_reduce(x: Cyclotomic) -> Cyclotomic:
    """
    Canonical form of x; construction already reduces, so this re-reduces the raw coefficients.

    Args:
        x: cyclotomic value

    Returns:
        An equal value whose coefficients sit on the canonical basis
    """
    return Cyclotomic(x.order, dict(x.coeffs))


# ---------------------------------------------------------------------------
# Finite fields
# ---------------------------------------------------------------------------

_QUADRATIC_MODULI = {2: (1, 1), 3: (1, 0)}  # x^2 = c1*x + c0 : GF(4) x^2 = x + 1, GF(9) x^2 = -1


class FiniteField:
    """
    GF(p) or GF(p^2) with precomputed addition and multiplication tables.

    Elements are encoded as integers 0..q-1; for GF(p^2) the integer a + p*b
    stands for a + b*x. GF(4) uses x^2 + x + 1 (so v = 2, w = 3) and GF(9)
    adjoins a square root of -1 (i = 3).
    """

    def __init__(self, order: int):
        factors = factorint(order)
        if len(factors) != 1:
            raise ValueError(f"{order} is not a prime power")
        (p, k), = factors.items()
        if k > 2 or (k == 2 and p not in _QUADRATIC_MODULI):
            raise ValueError(f"GF({order}) is not supported")
        self.order = order
        self.characteristic = p
        self.degree = k
        self.name = f"GF({order})"
        q = order
        self.add_table = np.zeros((q, q), dtype=np.int64)
        self.mul_table = np.zeros((q, q), dtype=np.int64)
        for x in range(q):
            for y in range(q):
                self.add_table[x, y] = self._add(x, y)
                self.mul_table[x, y] = self._mul(x, y)
        self.neg_table = np.array([int(np.where(self.add_table[x] == 0)[0][0]) for x in range(q)])
        self.inv_table = np.zeros(q, dtype=np.int64)
        for x in range(1, q):
            self.inv_table[x] = int(np.where(self.mul_table[x] == 1)[0][0])

    def _split(self, x: int) -> Tuple[int, int]:
        return x % self.characteristic, x // self.characteristic

    def _join(self, a: int, b: int) -> int:
        p = self.characteristic
        return (a % p) + p * (b % p)

    def _add(self, x: int, y: int) -> int:
        if self.degree == 1:
            return (x + y) % self.order
        a1, b1 = self._split(x)
        a2, b2 = self._split(y)
        return self._join(a1 + a2, b1 + b2)

    def _mul(self, x: int, y: int) -> int:
        if self.degree == 1:
            return (x * y) % self.order
        c1, c0 = _QUADRATIC_MODULI[self.characteristic]
        a1, b1 = self._split(x)
        a2, b2 = self._split(y)
        # (a1 + b1 x)(a2 + b2 x) with x^2 = c1 x + c0
        sq = b1 * b2
        return self._join(a1 * a2 + sq * c0, a1 * b2 + b1 * a2 + sq * c1)

    def add(self, x: int, y: int) -> int:
        return int(self.add_table[x, y])

    def sub(self, x: int, y: int) -> int:
        return int(self.add_table[x, self.neg_table[y]])

    def mul(self, x: int, y: int) -> int:
        return int(self.mul_table[x, y])

    def neg(self, x: int) -> int:
        return int(self.neg_table[x])

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self.name}")
        return int(self.inv_table[x])

    def power(self, x: int, n: int) -> int:
        result = 1
        for _ in range(n):
            result = self.mul(result, x)
        return result

    def frobenius(self, x: int) -> int:
        return self.power(x, self.characteristic)

    def elements(self) -> range:
        return range(self.order)

    def det(self, m: np.ndarray) -> int:
        n = m.shape[0]
        if n == 1:
            return int(m[0, 0])
        total = 0
        for col in range(n):
            minor = np.delete(np.delete(m, 0, axis=0), col, axis=1)
            term = self.mul(int(m[0, col]), self.det(minor))
            total = self.add(total, term if col % 2 == 0 else self.neg(term))
        return total

    def __repr__(self):
        return self.name


@lru_cache(maxsize=None)
def get_field(order: int) -> FiniteField:
    return FiniteField(order)


@dataclass(frozen=True)
class GFElement:
    """
    A finite field element bound to its field
    """
    field_order: int
    value: int

    @property
    def field(self) -> FiniteField:
        return get_field(self.field_order)

    def _check(self, other: "GFElement"):
        if other.field_order != self.field_order:
            raise ValueError(f"mixing GF({self.field_order}) with GF({other.field_order})")

    def __add__(self, other: "GFElement") -> "GFElement":
        self._check(other)
        return GFElement(self.field_order, self.field.add(self.value, other.value))

    def __sub__(self, other: "GFElement") -> "GFElement":
        self._check(other)
        return GFElement(self.field_order, self.field.sub(self.value, other.value))

    def __mul__(self, other: "GFElement") -> "GFElement":
        self._check(other)
        return GFElement(self.field_order, self.field.mul(self.value, other.value))

    def __neg__(self) -> "GFElement":
        return GFElement(self.field_order, self.field.neg(self.value))

    def __pow__(self, n: int) -> "GFElement":
        return GFElement(self.field_order, self.field.power(self.value, n))

    def inverse(self) -> "GFElement":
        return GFElement(self.field_order, self.field.inv(self.value))


GF4_NAMES = {0: "0", 1: "1", 2: "v", 3: "w"}
GF4_CODES = {name: code for code, name in GF4_NAMES.items()}


# ---------------------------------------------------------------------------
# Exact matrices and linear algebra
# ---------------------------------------------------------------------------

class ExactMatrix:
    """
    Rectangular matrix of exact scalars (Fraction, GaussianRational, Quaternion or Cyclotomic)
    """

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(r) for r in rows)
        if data and any(len(r) != len(data[0]) for r in data):
            raise ValueError("ExactMatrix rows must have equal length")
        object.__setattr__(self, "rows", data)

    def __setattr__(self, key, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def identity(cls, n: int, one=Fraction(1), zero=Fraction(0)) -> "ExactMatrix":
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int, m: int, zero=Fraction(0)) -> "ExactMatrix":
        return cls([[zero] * m for _ in range(n)])

    @property
    def shape(self) -> Tuple[int, int]:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, idx):
        r, c = idx
        return self.rows[r][c]

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        return ExactMatrix([[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return ExactMatrix([[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix([[-x for x in r] for r in self.rows])

    def scale(self, s) -> "ExactMatrix":
        return ExactMatrix([[s * x for x in r] for r in self.rows])

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows))
        out = []
        for row in self.rows:
            out_row = []
            for col in cols:
                acc = None
                for x, y in zip(row, col):
                    term = x * y
                    acc = term if acc is None else acc + term
                out_row.append(acc)
            out.append(out_row)
        return ExactMatrix(out)

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix(zip(*self.rows))

    def map(self, fn: Callable) -> "ExactMatrix":
        return ExactMatrix([[fn(x) for x in r] for r in self.rows])

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def trace(self):
        total = self.rows[0][0]
        for i in range(1, self.shape[0]):
            total = total + self.rows[i][i]
        return total

    def __eq__(self, other):
        return isinstance(other, ExactMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "ExactMatrix(" + "; ".join(" ".join(str(x) for x in r) for r in self.rows) + ")"


def _as_rows(matrix) -> List[List[Fraction]]:
    rows = matrix.rows if isinstance(matrix, ExactMatrix) else matrix
    return [[to_fraction(x) for x in r] for r in rows]


def to_domain_matrix(rows: Sequence[Sequence], ncols: Optional[int] = None) -> DomainMatrix:
    data = _as_rows(rows)
    width = ncols if ncols is not None else (len(data[0]) if data else 0)
    return DomainMatrix([[QQ(x.numerator, x.denominator) for x in r] for r in data], (len(data), width), QQ)


def rank(rows: Sequence[Sequence], ncols: Optional[int] = None) -> int:
    data = _as_rows(rows)
    if not data:
        return 0
    return int(to_domain_matrix(data, ncols).rank())


def nullspace(rows: Sequence[Sequence], ncols: int) -> List[List[Fraction]]:
    """
    Basis of {x : rows . x = 0} over Q

    Args:
        rows: coefficient rows, each of length ncols
        ncols: number of unknowns

    Returns:
        List of basis vectors (possibly empty)
    """
    data = _as_rows(rows)
    if not data:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    basis = to_domain_matrix(data, ncols).nullspace().to_list()
    return [[to_fraction(x) for x in r] for r in basis if any(x != 0 for x in r)]


def signature(form) -> Tuple[int, int, int]:
    """
    Inertia (p, q, r) of a symmetric rational matrix by symmetric elimination

    Args:
        form: square symmetric matrix (ExactMatrix or nested sequences)

    Returns:
        Counts of positive, negative and zero squares
    """
    a = _as_rows(form)
    n = len(a)
    if any(len(r) != n for r in a) or any(a[i][j] != a[j][i] for i in range(n) for j in range(i)):
        raise ValueError("signature requires a square symmetric matrix")
    remaining = list(range(n))
    p = q = 0
    while remaining:
        pivot = next((i for i in remaining if a[i][i] != 0), None)
        if pivot is None:
            pair = next(((i, j) for i in remaining for j in remaining if i != j and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # congruence e_i -> e_i + e_j makes the (i, i) entry 2 a[i][j]
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            continue
        d = a[pivot][pivot]
        if d > 0:
            p += 1
        else:
            q += 1
        remaining.remove(pivot)
        for j in remaining:
            factor = a[j][pivot] / d
            if factor == 0:
                continue
            for k in remaining:
                a[j][k] -= factor * a[pivot][k]
    return p, q, n - p - q


class EchelonBasis:
    """
    Incrementally maintained reduced row echelon basis over Q.

    Rows are kept fully reduced (every row vanishes on the other rows' pivot
    columns), so coordinates of a member vector are its entries on the pivots.
    """

    def __init__(self, dimension: int):
        self.dimension = dimension
        self.pivots: List[int] = []
        self.rows: List[List[Fraction]] = []

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, vector: Sequence) -> List[Fraction]:
        v = [to_fraction(x) for x in vector]
        for col, row in zip(self.pivots, self.rows):
            c = v[col]
            if c != 0:
                v = [x - c * y for x, y in zip(v, row)]
        return v

    def add(self, vector: Sequence) -> bool:
        v = self.reduce(vector)
        col = next((i for i, x in enumerate(v) if x != 0), None)
        if col is None:
            return False
        lead = v[col]
        v = [x / lead for x in v]
        for idx, row in enumerate(self.rows):
            c = row[col]
            if c != 0:
                self.rows[idx] = [x - c * y for x, y in zip(row, v)]
        self.pivots.append(col)
        self.rows.append(v)
        return True

    def contains(self, vector: Sequence) -> bool:
        return all(x == 0 for x in self.reduce(vector))

    def coordinates(self, vector: Sequence) -> List[Fraction]:
        """Coordinates of a member vector with respect to ``self.rows``."""
        v = [to_fraction(x) for x in vector]
        if not self.contains(v):
            raise ValueError("vector is not in the span")
        return [v[col] for col in self.pivots]


@dataclass
class SpanResult:
    dimension: int
    basis: List


def span_dimension(vectors: Sequence[T],
                   to_coords: Optional[Callable[[T], Sequence]] = None,
                   product: Optional[Callable[[T, T], T]] = None,
                   generators: Optional[Sequence[T]] = None,
                   cap: int = 4096) -> SpanResult:
    """
    Exact dimension of the span of vectors, optionally closed under a product

    When ``product`` is given the span is closed under left multiplication by
    ``generators`` (the input vectors by default), which for an associative
    product yields the subalgebra they generate.

    Args:
        vectors: starting vectors
        to_coords: maps an item to its coordinate list (identity by default)
        product: bilinear product used for closure
        generators: multipliers used in the closure
        cap: maximal number of candidate items examined

    Returns:
        SpanResult with the dimension and a list of independent items
    """
    coords = to_coords or (lambda v: v)
    items = list(vectors)
    if not items:
        return SpanResult(0, [])
    basis = EchelonBasis(len(coords(items[0])))
    kept: List[T] = []
    multipliers = list(generators) if generators is not None else list(items)
    queue = list(items)
    examined = 0
    while queue:
        item = queue.pop(0)
        examined += 1
        if examined > cap:
            raise ValueError(f"span closure examined more than {cap} items")
        if basis.add(coords(item)):
            kept.append(item)
            if product is not None:
                queue.extend(product(g, item) for g in multipliers)
    return SpanResult(len(kept), kept)


def lie_span(elements: Sequence[T], to_coords: Callable[[T], Sequence],
             bracket: Callable[[T, T], T], cap: int = 4096) -> SpanResult:
    """Closure of a span under a bracket until it stabilizes."""
    if not elements:
        return SpanResult(0, [])
    basis = EchelonBasis(len(to_coords(elements[0])))
    kept: List[T] = []
    queue = list(elements)
    examined = 0
    while queue:
        item = queue.pop(0)
        examined += 1
        if examined > cap:
            raise ValueError(f"Lie closure examined more than {cap} items")
        if basis.add(to_coords(item)):
            queue.extend(bracket(item, other) for other in kept)
            kept.append(item)
    return SpanResult(len(kept), kept)


def sum_of_two_squares(value: Fraction, search: int = 200) -> Optional[Tuple[Fraction, Fraction]]:
    """
    Find rationals (x, y) with x^2 + y^2 = value by a bounded search over small denominators
    """
    value = to_fraction(value)
    if value < 0:
        return None
    for den in range(1, search + 1):
        target = value * den * den
        if target.denominator != 1:
            continue
        t = target.numerator
        x = 0
        while x * x <= t:
            rest = t - x * x
            y = isqrt(rest)
            if y * y == rest:
                return Fraction(x, den), Fraction(y, den)
            x += 1
    return None
