"""
Clifford algebra engine.

Two ambient algebras are supported: the 64-dimensional gamma-quaternion algebra
Cl(1,3) (x) H, whose blades are (gamma subset, quaternion unit), and an abstract
Cl(p,q) on at most six generators, whose blades are generator subsets. Both
expose the same ``blade_mul`` interface so that ``MultiVector`` and all the
verification operations are shared.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import isqrt
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import sympy
from sympy.parsing.sympy_parser import parse_expr

from app.core.exceptions import CliffordRelationError, FixtureError, NotIdempotentError
from app.services.exactmath import (EchelonBasis, lie_span, nullspace, span_dimension,
                                    to_fraction)

logger = logging.getLogger(__name__)

# quaternion unit products: UNIT_TABLE[x][y] = (sign, unit) for units 0=1, 1=i, 2=j, 3=k
UNIT_TABLE = (
    ((1, 0), (1, 1), (1, 2), (1, 3)),
    ((1, 1), (-1, 0), (1, 3), (-1, 2)),
    ((1, 2), (-1, 3), (-1, 0), (1, 1)),
    ((1, 3), (1, 2), (-1, 1), (-1, 0)),
)
UNIT_NAMES = ("", "i", "j", "k")
GAMMA_SQUARES = (1, -1, -1, -1)


class Blade(NamedTuple):
    """Basis element: bitmask of gamma (or generator) indices and a quaternion unit."""
    mask: int
    unit: int = 0


def _reorder_sign(a: int, b: int) -> int:
    """Sign of moving the generators of b past those of a into ascending order."""
    a >>= 1
    swaps = 0
    while a:
        swaps += bin(a & b).count("1")
        a >>= 1
    return -1 if swaps & 1 else 1


def _square_sign(common: int, squares: Sequence[int]) -> int:
    sign = 1
    idx = 0
    while common:
        if common & 1:
            sign *= squares[idx]
        common >>= 1
        idx += 1
    return sign


def blade_mul(x: Blade, y: Blade) -> Tuple[int, Blade]:
    """
    Product of two gamma-quaternion blades

    Args:
        x: left blade
        y: right blade

    Returns:
        (sign, blade) with x*y = sign * blade
    """
    sign = _reorder_sign(x.mask, y.mask) * _square_sign(x.mask & y.mask, GAMMA_SQUARES)
    unit_sign, unit = UNIT_TABLE[x.unit][y.unit]
    return sign * unit_sign, Blade(x.mask ^ y.mask, unit)


class GammaQuaternionAlgebra:
    """
    Cl(1,3) with quaternion coefficients; i, j, k commute with every gamma
    """
    name = "gamma-quaternion"
    size = 64

    def blade_mul(self, x: Blade, y: Blade) -> Tuple[int, Blade]:
        return blade_mul(x, y)

    def index(self, blade: Blade) -> int:
        return blade.mask * 4 + blade.unit

    def blades(self) -> List[Blade]:
        return [Blade(mask, unit) for mask in range(16) for unit in range(4)]

    def label(self, blade: Blade) -> str:
        gammas = "".join(f"g{i}" for i in range(4) if blade.mask >> i & 1)
        text = UNIT_NAMES[blade.unit] + gammas
        return text or "1"

    def symbols(self) -> Dict[str, "MultiVector"]:
        table = {f"g{i}": MultiVector.blade(self, Blade(1 << i, 0)) for i in range(4)}
        table.update({u: MultiVector.blade(self, Blade(0, n)) for n, u in enumerate(UNIT_NAMES) if u})
        table["G"] = MultiVector.blade(self, Blade(0b1111, 0))
        table["g5"] = MultiVector.blade(self, Blade(0b1111, 1))
        return table


class AbstractClifford:
    """
    Cl(p,q) on n <= 6 anticommuting generators with declared squares
    """

    def __init__(self, squares: Sequence[int], names: Optional[Sequence[str]] = None):
        if len(squares) > 6:
            raise ValueError("abstract Clifford algebras are limited to six generators")
        if any(s not in (1, -1) for s in squares):
            raise ValueError("generator squares must be +1 or -1")
        self.squares = tuple(squares)
        self.n = len(squares)
        self.names = tuple(names) if names else tuple("ABCDEF"[: self.n])
        self.size = 2 ** self.n
        self.name = "abstract-cl(" + ",".join("+" if s > 0 else "-" for s in self.squares) + ")"

    @property
    def signature(self) -> Tuple[int, int]:
        return (self.squares.count(1), self.squares.count(-1))

    def blade_mul(self, x: Blade, y: Blade) -> Tuple[int, Blade]:
        sign = _reorder_sign(x.mask, y.mask) * _square_sign(x.mask & y.mask, self.squares)
        return sign, Blade(x.mask ^ y.mask, 0)

    def index(self, blade: Blade) -> int:
        return blade.mask

    def blades(self) -> List[Blade]:
        return [Blade(mask, 0) for mask in range(self.size)]

    def label(self, blade: Blade) -> str:
        text = "".join(self.names[i] for i in range(self.n) if blade.mask >> i & 1)
        return text or "1"

    def symbols(self) -> Dict[str, "MultiVector"]:
        return {name: MultiVector.blade(self, Blade(1 << i, 0)) for i, name in enumerate(self.names)}


GAMMA_ALGEBRA = GammaQuaternionAlgebra()


@lru_cache(maxsize=None)
def abstract_algebra(squares: Tuple[int, ...]) -> AbstractClifford:
    return AbstractClifford(squares)


class MultiVector:
    """
    Sparse exact element of an ambient Clifford algebra
    """

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra, terms: Optional[Dict[Blade, Fraction]] = None):
        self.algebra = algebra
        self.terms = {b: to_fraction(c) for b, c in (terms or {}).items() if c != 0}

    @classmethod
    def scalar(cls, algebra, value=1) -> "MultiVector":
        return cls(algebra, {Blade(0, 0): to_fraction(value)})

    @classmethod
    def blade(cls, algebra, blade: Blade, coeff=1) -> "MultiVector":
        return cls(algebra, {blade: to_fraction(coeff)})

    def _coerce(self, other) -> "MultiVector":
        if isinstance(other, MultiVector):
            return other
        return MultiVector.scalar(self.algebra, other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for b, c in other.terms.items():
            terms[b] = terms.get(b, Fraction(0)) + c
        return MultiVector(self.algebra, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiVector(self.algebra, {b: -c for b, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiVector):
            s = to_fraction(other)
            return MultiVector(self.algebra, {b: c * s for b, c in self.terms.items()})
        terms: Dict[Blade, Fraction] = {}
        for b1, c1 in self.terms.items():
            for b2, c2 in other.terms.items():
                sign, b = self.algebra.blade_mul(b1, b2)
                terms[b] = terms.get(b, Fraction(0)) + sign * c1 * c2
        return MultiVector(self.algebra, terms)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, n: int) -> "MultiVector":
        result = MultiVector.scalar(self.algebra, 1)
        for _ in range(n):
            result = result * self
        return result

    def commutator(self, other: "MultiVector") -> "MultiVector":
        return self * other - other * self

    def anticommutator(self, other: "MultiVector") -> "MultiVector":
        return self * other + other * self

    def is_zero(self) -> bool:
        return not self.terms

    def scalar_part(self) -> Fraction:
        return self.terms.get(Blade(0, 0), Fraction(0))

    def is_scalar(self) -> bool:
        return all(b == Blade(0, 0) for b in self.terms)

    def coords(self) -> List[Fraction]:
        vec = [Fraction(0)] * self.algebra.size
        for b, c in self.terms.items():
            vec[self.algebra.index(b)] = c
        return vec

    def ratio_to(self, other: "MultiVector") -> Optional[Fraction]:
        """The rational r with self = r * other, if one exists."""
        if other.is_zero():
            return None
        b0, c0 = next(iter(other.terms.items()))
        r = self.terms.get(b0, Fraction(0)) / c0
        return r if self == other * r else None

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiVector.scalar(self.algebra, other)
        if not isinstance(other, MultiVector):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for b in sorted(self.terms, key=self.algebra.index):
            c = self.terms[b]
            label = self.algebra.label(b)
            if label == "1":
                text = str(abs(c))
            elif abs(c) == 1:
                text = label
            else:
                text = f"{abs(c)}*{label}"
            parts.append(("-" if c < 0 else "+") + text)
        out = "".join(parts)
        return out[1:] if out.startswith("+") else out

    __repr__ = __str__


def parse_element(algebra, text: str) -> MultiVector:
    """
    Parse an expression such as ``(1 + g1*g2*g3)/2`` or ``A*B*C*D`` into a MultiVector

    Symbols are non-commutative so products keep their written order.
    """
    table = algebra.symbols()
    local = {name: sympy.Symbol(name, commutative=False) for name in table}
    try:
        expr = parse_expr(text, local_dict=local, evaluate=True)
    except Exception as e:
        raise FixtureError(f"cannot parse Clifford expression {text!r}: {str(e)}")

    def evaluate(node) -> MultiVector:
        if node.is_Symbol:
            if node.name not in table:
                raise FixtureError(f"unknown symbol {node.name!r} in {text!r}")
            return table[node.name]
        if node.is_Number:
            if not node.is_Rational:
                raise FixtureError(f"non-rational coefficient in {text!r}")
            return MultiVector.scalar(algebra, Fraction(int(node.p), int(node.q)))
        if node.is_Add:
            total = MultiVector(algebra)
            for arg in node.args:
                total = total + evaluate(arg)
            return total
        if node.is_Mul:
            commutative, ordered = node.args_cnc()
            result = MultiVector.scalar(algebra, 1)
            for arg in commutative + ordered:
                result = result * evaluate(arg)
            return result
        if node.is_Pow and node.exp.is_Integer and int(node.exp) >= 0:
            return evaluate(node.base) ** int(node.exp)
        raise FixtureError(f"unsupported expression {node} in {text!r}")

    return evaluate(expr)


# ---------------------------------------------------------------------------
# Fixtures and reports
# ---------------------------------------------------------------------------

@dataclass
class GeneratorFixture:
    name: str
    algebra: object
    generators: List[MultiVector]
    generator_text: List[str]
    claimed_signature: Optional[Tuple[int, int]] = None
    claimed_pseudoscalar: Optional[MultiVector] = None
    pseudoscalar_sign: Optional[int] = None
    expected_dimension: Optional[int] = None
    label: str = ""
    claim: str = ""


@dataclass
class GeneratorReport:
    pairwise_anticommute: bool
    squares: List[Optional[int]]
    signature: Tuple[int, int]
    generated_dimension: int
    failures: List[str] = field(default_factory=list)
    passed: bool = False


def verify_generators(fix: GeneratorFixture) -> GeneratorReport:
    """
    Check the Clifford relations of a generator set and the dimension it generates

    Args:
        fix: generator fixture

    Returns:
        GeneratorReport; ``passed`` needs the claimed signature and expected dimension

    Raises:
        FixtureError: a set of other than 5 or 6 generators that does not state its expected dimension
    """
    gens = fix.generators
    if len(gens) not in (5, 6) and fix.expected_dimension is None:
        raise FixtureError(f"{fix.name}: {len(gens)} generators need an explicit expected dimension")
    failures: List[str] = []
    squares: List[Optional[int]] = []
    for text, g in zip(fix.generator_text, gens):
        sq = g * g
        if sq.is_scalar() and sq.scalar_part() in (1, -1):
            squares.append(int(sq.scalar_part()))
        else:
            squares.append(None)
            failures.append(f"{text} squares to {sq}, not a scalar +-1")
    anticommute = True
    for (ta, a), (tb, b) in combinations(list(zip(fix.generator_text, gens)), 2):
        if not a.anticommutator(b).is_zero():
            anticommute = False
            failures.append(f"{ta} and {tb} do not anticommute")
    sig = (squares.count(1), squares.count(-1))
    dim = generated_dimension(gens)
    if fix.claimed_signature is not None and tuple(fix.claimed_signature) != sig:
        failures.append(f"signature {sig} differs from claimed {tuple(fix.claimed_signature)}")
    expected = fix.expected_dimension if fix.expected_dimension is not None else 2 ** len(gens)
    if dim != expected:
        failures.append(f"generated dimension {dim} differs from expected {expected}")
    report = GeneratorReport(anticommute, squares, sig, dim, failures, passed=not failures)
    logger.info(f"Verified fixture {fix.name}: signature {sig}, dimension {dim}")
    return report


def generated_dimension(gens: Sequence[MultiVector]) -> int:
    return generated_subalgebra(gens).dimension


def generated_subalgebra(gens: Sequence[MultiVector]):
    if not gens:
        return span_dimension([])
    return span_dimension(gens, to_coords=MultiVector.coords, product=lambda g, x: g * x,
                          cap=20000)


def pseudoscalar(gens: Sequence[MultiVector]) -> MultiVector:
    """Ordered product of the generators."""
    result = MultiVector.scalar(gens[0].algebra, 1)
    for g in gens:
        result = result * g
    return result


def pseudoscalar_invariance(gens: Sequence[MultiVector]) -> bool:
    """
    True iff the pseudoscalar commutes with every bivector g_a g_b (a < b)
    """
    omega = pseudoscalar(gens)
    return all(omega.commutator(a * b).is_zero() for a, b in combinations(gens, 2))


def commuting_subalgebras(gens_a: Sequence[MultiVector], gens_b: Sequence[MultiVector]) -> bool:
    """
    True iff the associative closures of the two generator lists commute elementwise
    """
    basis_a = generated_subalgebra(gens_a).basis
    basis_b = generated_subalgebra(gens_b).basis
    return all(x.commutator(y).is_zero() for x in basis_a for y in basis_b)


def lie_closure(elements: Sequence[MultiVector]):
    """
    Close the rational span of elements under the commutator

    Returns:
        SpanResult with the dimension and a basis of the Lie algebra
    """
    return lie_span(list(elements), MultiVector.coords, lambda x, y: x.commutator(y))


@dataclass
class QuaternionCheck:
    relations: bool
    sign: Optional[int]
    scales: List[Optional[Fraction]]


def _rational_sqrt(value: Fraction) -> Optional[Fraction]:
    rn, rd = isqrt(value.numerator), isqrt(value.denominator)
    if rn * rn == value.numerator and rd * rd == value.denominator:
        return Fraction(rn, rd)
    return None


def quaternion_relations(triple: Sequence[MultiVector], unit: MultiVector) -> QuaternionCheck:
    """
    Rescale a triple so each squares to -unit and test q1 q2 = s q3 cyclically
    """
    scaled: List[MultiVector] = []
    scales: List[Optional[Fraction]] = []
    for t in triple:
        ratio = (t * t).ratio_to(unit)
        root = _rational_sqrt(-ratio) if ratio is not None and ratio < 0 else None
        scales.append(root)
        if root is None:
            return QuaternionCheck(False, None, scales)
        scaled.append(t * (1 / root))
    q1, q2, q3 = scaled
    sign = None
    for x, y, z in ((q1, q2, q3), (q2, q3, q1), (q3, q1, q2)):
        r = (x * y).ratio_to(z)
        if r not in (1, -1) or (sign is not None and r != sign):
            return QuaternionCheck(False, None, scales)
        sign = int(r)
        if not x.anticommutator(y).is_zero():
            return QuaternionCheck(False, None, scales)
    return QuaternionCheck(True, sign, scales)


@dataclass
class IdempotentReport:
    idempotent: bool
    corner_dimension: int
    projected_relations: bool
    relation_sign: Optional[int]
    triple_in_corner: bool


def idempotent_split(e: MultiVector, gens: Sequence[MultiVector],
                     triple: Optional[Sequence[MultiVector]] = None) -> IdempotentReport:
    """
    Corner algebra e A e of the algebra generated by gens, and quaternion relations of a projected triple

    Args:
        e: candidate idempotent
        gens: generators of the ambient subalgebra A
        triple: elements whose projections e t e should satisfy quaternion relations

    Returns:
        IdempotentReport
    """
    if e * e != e:
        raise NotIdempotentError(f"{e} is not idempotent")
    basis = generated_subalgebra(gens).basis
    corner = span_dimension([e * a * e for a in basis], to_coords=MultiVector.coords)
    relations, sign, in_corner = True, None, True
    if triple:
        projected = [e * t * e for t in triple]
        in_corner = all(p == t for p, t in zip(projected, triple))
        check = quaternion_relations(projected, e)
        relations, sign = check.relations, check.sign
    return IdempotentReport(True, corner.dimension, relations, sign, in_corner)


@dataclass
class GradeReport:
    dimensions: List[int]
    eigenvalue_labels: Tuple[str, str]
    omega_square: int


def grade_decomposition(gens: Sequence[MultiVector]) -> GradeReport:
    """
    Grade dimensions of the algebra on six generators, grade 3 split by the pseudoscalar

    Raises:
        CliffordRelationError: when there are not six generators or the pseudoscalar squares to a non-scalar
    """
    if len(gens) != 6:
        raise CliffordRelationError("grade decomposition needs six generators")
    omega = pseudoscalar(gens)
    square = omega * omega
    if not square.is_scalar() or square.scalar_part() not in (1, -1):
        raise CliffordRelationError(f"pseudoscalar squares to {square}, grade 3 cannot be split")
    dims: List[int] = []
    for k in range(7):
        elements = [pseudoscalar(list(sub)) if sub else MultiVector.scalar(gens[0].algebra, 1)
                    for sub in combinations(gens, k)]
        span = span_dimension(elements, to_coords=MultiVector.coords)
        if k != 3:
            dims.append(span.dimension)
            continue
        basis = EchelonBasis(gens[0].algebra.size)
        for el in span.basis:
            basis.add(el.coords())
        algebra = gens[0].algebra
        row_elements = [MultiVector(algebra, _from_row(algebra, row)) for row in basis.rows]
        # column c holds the echelon coordinates of omega * (basis row c)
        cols = [basis.coordinates((omega * el).coords()) for el in row_elements]
        m = [[cols[c][r] for c in range(len(cols))] for r in range(len(cols))]
        n = len(m)
        s = int(square.scalar_part())
        if s == 1:
            plus = len(nullspace([[m[r][c] - (1 if r == c else 0) for c in range(n)] for r in range(n)], n))
            minus = len(nullspace([[m[r][c] + (1 if r == c else 0) for c in range(n)] for r in range(n)], n))
            labels = ("+1", "-1")
        else:
            plus = _complex_eigenspace_dimension(m, 1)
            minus = _complex_eigenspace_dimension(m, -1)
            labels = ("+i", "-i")
        dims.extend(sorted([plus, minus]))
    return GradeReport(dims, labels, int(square.scalar_part()))


def _from_row(algebra, row: Sequence[Fraction]) -> Dict[Blade, Fraction]:
    blades = algebra.blades()
    lookup = {algebra.index(b): b for b in blades}
    return {lookup[i]: c for i, c in enumerate(row) if c != 0}


def _complex_eigenspace_dimension(m: List[List[Fraction]], sign: int) -> int:
    """Complex dimension of ker(M - sign*i) via the realified 2n x 2n block matrix."""
    n = len(m)
    big = []
    for r in range(n):
        big.append([m[r][c] for c in range(n)] + [Fraction(sign) if r == c else Fraction(0) for c in range(n)])
    for r in range(n):
        big.append([Fraction(-sign) if r == c else Fraction(0) for c in range(n)] + [m[r][c] for c in range(n)])
    return len(nullspace(big, 2 * n)) // 2


def even_subalgebra(gens: Sequence[MultiVector]):
    """Span of all even-length products of the generators."""
    elements = []
    for k in range(0, len(gens) + 1, 2):
        for sub in combinations(gens, k):
            elements.append(pseudoscalar(list(sub)) if sub else MultiVector.scalar(gens[0].algebra, 1))
    return span_dimension(elements, to_coords=MultiVector.coords)
