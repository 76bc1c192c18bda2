"""
Exact character theory of the registry groups.

Character tables come from the Dixon construction: common eigenvectors of the
class-multiplication matrices over a prime field GF(p) with p = 1 mod the group
exponent, lifted to cyclotomic values by discrete Fourier inversion on each cyclic
subgroup.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import nextprime, primitive_root, sqrt_mod
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

from app.core.config import settings
from app.core.exceptions import CharacterTableError
from app.services.exactmath import Cyclotomic
from app.services.permgroup import (
    ConjugacyData, GroupAction, PermGroup, format_cycles, perm_inverse, perm_mul, perm_power,
)

logger = logging.getLogger(__name__)

Values = List[Cyclotomic]

DIVISION_WIDTH = {"R": 1, "C": 2, "H": 4}


@dataclass
class Character:
    name: str
    values: Values

    @property
    def degree(self) -> int:
        return int(self.values[0].to_fraction())

    def is_real(self) -> bool:
        return all(v.is_real() for v in self.values)

    def conjugate(self) -> Values:
        return [v.conjugate() for v in self.values]

    def galois(self, a: int) -> Values:
        return [v.galois(a) for v in self.values]


@dataclass
class CharacterTable:
    """
    Irreducible complex characters on the deterministic class order of the group
    """
    group: PermGroup
    classes: ConjugacyData
    characters: List[Character]
    prime: int

    def __len__(self) -> int:
        return len(self.characters)

    def __getitem__(self, name: str) -> Character:
        for ch in self.characters:
            if ch.name == name:
                return ch
        raise KeyError(f"{self.group.name} has no character named {name!r}")

    @property
    def names(self) -> List[str]:
        return [ch.name for ch in self.characters]

    @property
    def degrees(self) -> List[int]:
        return [ch.degree for ch in self.characters]

    def inner(self, a: Values, b: Values) -> Fraction:
        """(1/|G|) sum over g of a(g) conj(b(g))."""
        total = Cyclotomic.rational(0)
        for size, x, y in zip(self.classes.sizes, a, b):
            total = total + x * y.conjugate() * size
        return (total * Fraction(1, self.group.order)).to_fraction()

    def decompose(self, values: Values) -> Dict[str, int]:
        """
        Multiplicities of the irreducibles in a class function

        Raises:
            CharacterTableError: when a multiplicity is not a nonnegative integer
        """
        out: Dict[str, int] = {}
        for ch in self.characters:
            m = self.inner(values, ch.values)
            if m.denominator != 1 or m < 0:
                raise CharacterTableError(f"multiplicity {m} of {ch.name} in {self.group.name} is not a natural number")
            if m:
                out[ch.name] = int(m)
        return out

    def power_values(self, values: Values, k: int) -> Values:
        """Class function g -> values(g^k)."""
        return [values[j] for j in self.classes.power_map(k)]

    def find(self, values: Values) -> Optional[str]:
        for ch in self.characters:
            if ch.values == list(values):
                return ch.name
        return None

    def check_orthogonality(self, columns: bool = False) -> bool:
        """Row relations, optionally column relations, checked exactly."""
        for i, a in enumerate(self.characters):
            for j, b in enumerate(self.characters[i:], start=i):
                if self.inner(a.values, b.values) != (1 if i == j else 0):
                    return False
        if columns:
            k = len(self.classes)
            for s in range(k):
                for t in range(s, k):
                    total = Cyclotomic.rational(0)
                    for ch in self.characters:
                        total = total + ch.values[s] * ch.values[t].conjugate()
                    expected = self.classes.centralizer_order(s) if s == t else 0
                    if total != expected:
                        return False
        return sum(d * d for d in self.degrees) == self.group.order

    def to_json(self, format_element=format_cycles) -> Dict:
        return {
            "group": self.group.name,
            "order": self.group.order,
            "prime": self.prime,
            "classes": [{"order": o, "size": s, "representative": format_element(r)}
                        for o, s, r in zip(self.classes.orders, self.classes.sizes, self.classes.representatives)],
            "characters": [{"name": ch.name, "degree": ch.degree, "values": [v.to_json() for v in ch.values]}
                           for ch in self.characters],
        }

    @classmethod
    def from_json(cls, group: PermGroup, data: Dict) -> "CharacterTable":
        chars = [Character(c["name"], [Cyclotomic.from_json(v) for v in c["values"]]) for c in data["characters"]]
        return cls(group, group.classes, chars, int(data["prime"]))


# ---------------------------------------------------------------------------
# Dixon construction
# ---------------------------------------------------------------------------

def dixon_prime(order: int, exponent: int) -> int:
    """Smallest prime p = 1 mod exponent with p > 2 sqrt(order)."""
    p = 2 * isqrt(order)
    while True:
        p = int(nextprime(p))
        if p % exponent == 1 and p * p > 4 * order:
            return p


def class_matrix(classes: ConjugacyData, r: int) -> List[List[int]]:
    """
    M[s][t] = #{x in C_r : x^-1 z_t in C_s}; the vector of central character values is a right eigenvector
    """
    k = len(classes)
    reps = classes.representatives
    m = [[0] * k for _ in range(k)]
    for x in classes.classes[r]:
        x_inv = perm_inverse(x)
        for t in range(k):
            m[classes.class_of(perm_mul(x_inv, reps[t]))][t] += 1
    return m


def _roots_mod_p(coeffs: Sequence[int], p: int) -> List[int]:
    roots = []
    for z in range(p):
        acc = 0
        for c in coeffs:
            acc = (acc * z + c) % p
        if acc == 0:
            roots.append(z)
    return roots


def _split_space(space: DomainMatrix, A: DomainMatrix, Fp, p: int) -> List[DomainMatrix]:
    m = space.shape[0]
    if m == 1:
        return [space]
    space, pivots = space.rref()
    restricted = (A * space.transpose()).extract(list(pivots), list(range(m)))
    coeffs = [int(c) % p for c in restricted.charpoly()]
    parts = []
    for z in _roots_mod_p(coeffs, p):
        shifted = restricted - DomainMatrix.diag([Fp(z)] * m, Fp)
        kernel = shifted.nullspace()
        if kernel.shape[0]:
            parts.append(kernel * space)
    if sum(part.shape[0] for part in parts) != m:
        raise CharacterTableError("class matrix is not diagonalizable on a common eigenspace")
    return parts


def _eigenvectors(classes: ConjugacyData, p: int) -> List[List[int]]:
    k = len(classes)
    Fp = GF(p)
    spaces = [DomainMatrix.eye(k, Fp)]
    for r in range(1, k):
        if len(spaces) == k:
            break
        A = DomainMatrix([[Fp(x) for x in row] for row in class_matrix(classes, r)], (k, k), Fp)
        spaces = [part for space in spaces for part in _split_space(space, A, Fp, p)]
    if len(spaces) != k:
        raise CharacterTableError(f"class matrices separate only {len(spaces)} of {k} eigenspaces")
    return [[int(x) % p for x in space.to_Matrix().row(0)] for space in spaces]


def _modular_character(w: List[int], classes: ConjugacyData, order: int, p: int) -> Tuple[int, List[int]]:
    scale = pow(w[0], -1, p)
    w = [x * scale % p for x in w]
    inverse = classes.inverse_map()
    sizes = classes.sizes
    total = sum(w[s] * w[inverse[s]] * pow(sizes[s], -1, p) for s in range(len(w))) % p
    if total == 0:
        raise CharacterTableError("degenerate central character")
    d2 = order * pow(total, -1, p) % p
    root = sqrt_mod(d2, p)
    if root is None:
        raise CharacterTableError(f"squared degree {d2} has no root mod {p}")
    d = min(root, p - root)
    return d, [d * w[s] * pow(sizes[s], -1, p) % p for s in range(len(w))]


def _lift(chi_p: List[int], degree: int, classes: ConjugacyData, p: int, g: int) -> Values:
    values = []
    half = p // 2
    for s, rep in enumerate(classes.representatives):
        o = classes.orders[s]
        z = pow(g, (p - 1) // o, p)
        powers = [classes.class_of(perm_power(rep, j)) for j in range(o)]
        inv_o = pow(o, -1, p)
        coeffs: Dict[int, int] = {}
        for k in range(o):
            acc = sum(chi_p[powers[j]] * pow(z, (-j * k) % o, p) for j in range(o)) * inv_o % p
            m = acc - p if acc > half else acc
            if m < 0 or m > degree:
                raise CharacterTableError(f"eigenvalue multiplicity {m} out of range on class {s}")
            if m:
                coeffs[k] = m
        values.append(Cyclotomic(o, coeffs))
    return values


def _sort_and_name(rows: List[Values]) -> List[Character]:
    def key(values: Values):
        trivial = all(v == 1 for v in values)
        return (not trivial, int(values[0].to_fraction()), tuple(v.sort_key() for v in values))

    rows = sorted(rows, key=key)
    degrees = [int(r[0].to_fraction()) for r in rows]
    chars = []
    for i, values in enumerate(rows):
        d = degrees[i]
        same = [j for j, e in enumerate(degrees) if e == d]
        name = str(d) if len(same) == 1 else f"{d}{chr(ord('a') + same.index(i))}"
        chars.append(Character(name, values))
    return chars


def character_table(G: PermGroup) -> CharacterTable:
    """
    Character table of G by the Dixon construction

    Raises:
        CharacterTableError: group above the configured order, separation or lifting failure,
            or a table that fails the orthogonality relations
    """
    if G.order > settings.character_table_max_order:
        raise CharacterTableError(f"{G.name} has order {G.order}, above {settings.character_table_max_order}")
    classes = G.classes
    p = dixon_prime(G.order, G.exponent)
    g = int(primitive_root(p))
    rows = []
    for w in _eigenvectors(classes, p):
        degree, chi_p = _modular_character(w, classes, G.order, p)
        rows.append(_lift(chi_p, degree, classes, p, g))
    table = CharacterTable(G, classes, _sort_and_name(rows), p)
    if not table.check_orthogonality():
        raise CharacterTableError(f"table of {G.name} fails the orthogonality relations")
    logger.info(f"Computed character table of {G.name}: {len(table)} characters, prime {p}")
    return table


# ---------------------------------------------------------------------------
# Indicators and real structure
# ---------------------------------------------------------------------------

def fs_indicator(T: CharacterTable) -> Dict[str, int]:
    """Frobenius-Schur indicator (1/|G|) sum chi(g^2) of every character."""
    squares = T.classes.power_map(2)
    out = {}
    for ch in T.characters:
        total = Cyclotomic.rational(0)
        for size, j in zip(T.classes.sizes, squares):
            total = total + ch.values[j] * size
        value = (total * Fraction(1, T.group.order)).to_fraction()
        if value not in (-1, 0, 1):
            raise CharacterTableError(f"indicator {value} of {ch.name} is not -1, 0 or 1")
        out[ch.name] = int(value)
    return out


@dataclass(frozen=True)
class WedderburnSummand:
    division: str
    size: int

    @property
    def real_dimension(self) -> int:
        return self.size * self.size * DIVISION_WIDTH[self.division]

    @property
    def module_dimension(self) -> int:
        return self.size * DIVISION_WIDTH[self.division]

    @property
    def label(self) -> str:
        return self.division if self.size == 1 else f"M{self.size}({self.division})"

    def sort_key(self):
        return (self.module_dimension, self.real_dimension, "RCH".index(self.division))


@dataclass
class RealCharacter:
    """A real irreducible character: chi, chi + conj(chi) or 2 chi."""
    name: str
    components: List[str]
    values: Values
    indicator: int

    @property
    def degree(self) -> int:
        return int(self.values[0].to_fraction())


def _partner(T: CharacterTable, ch: Character) -> str:
    name = T.find(ch.conjugate())
    if name is None:
        raise CharacterTableError(f"complex conjugate of {ch.name} missing from the table")
    return name


def real_characters(T: CharacterTable, indicators: Optional[Dict[str, int]] = None) -> List[RealCharacter]:
    """Merge complex irreducibles into real ones by their indicators."""
    indicators = indicators or fs_indicator(T)
    seen = set()
    out = []
    for ch in T.characters:
        if ch.name in seen:
            continue
        ind = indicators[ch.name]
        if ind == 1:
            out.append(RealCharacter(ch.name, [ch.name], list(ch.values), 1))
            seen.add(ch.name)
        elif ind == 0:
            other = _partner(T, ch)
            values = [a + b for a, b in zip(ch.values, T[other].values)]
            out.append(RealCharacter(f"{ch.name}+{other}", [ch.name, other], values, 0))
            seen.update({ch.name, other})
        else:
            out.append(RealCharacter(f"2*{ch.name}", [ch.name], [v * 2 for v in ch.values], -1))
            seen.add(ch.name)
    return out


def real_wedderburn(T: CharacterTable, indicators: Optional[Dict[str, int]] = None) -> List[WedderburnSummand]:
    """
    Real group algebra as a sum of matrix algebras over R, C and H

    Raises:
        CharacterTableError: a quaternionic character of odd degree
    """
    indicators = indicators or fs_indicator(T)
    summands = []
    for real in real_characters(T, indicators):
        d = T[real.components[0]].degree
        if real.indicator == 1:
            summands.append(WedderburnSummand("R", d))
        elif real.indicator == 0:
            summands.append(WedderburnSummand("C", d))
        else:
            if d % 2:
                raise CharacterTableError(f"quaternionic character {real.components[0]} has odd degree {d}")
            summands.append(WedderburnSummand("H", d // 2))
    summands.sort(key=WedderburnSummand.sort_key)
    if sum(s.real_dimension for s in summands) != T.group.order:
        raise CharacterTableError(f"Wedderburn dimensions of {T.group.name} do not add up to the order")
    return summands


def wedderburn_label(summands: Sequence[WedderburnSummand]) -> str:
    """'R + C + M3(R) + ...' with repeated summands collected as 2M3(R)."""
    counts: Dict[str, int] = {}
    order: List[str] = []
    for s in summands:
        if s.label not in counts:
            order.append(s.label)
        counts[s.label] = counts.get(s.label, 0) + 1
    return " + ".join(label if counts[label] == 1 else f"{counts[label]}{label}" for label in order)


def complex_wedderburn(T: CharacterTable) -> List[str]:
    """Complex group algebra summands C or Mn(C), one per irreducible, in table order."""
    return ["C" if d == 1 else f"M{d}(C)" for d in T.degrees]


def lie_label(summands: Sequence[WedderburnSummand]) -> str:
    """
    Group of units of determinant one, summand by summand, with real scalars dropped
    """
    names = []
    for s in sorted(summands, key=WedderburnSummand.sort_key):
        if s.size == 1:
            if s.division == "C":
                names.append("U(1)")
            elif s.division == "H":
                names.append("SU(2)")
            continue
        names.append(f"SL({s.size},{s.division})")
    return " × ".join(names)


# ---------------------------------------------------------------------------
# Operations on characters
# ---------------------------------------------------------------------------

def tensor(a: Values, b: Values) -> Values:
    return [x * y for x, y in zip(a, b)]


def sym_alt_square(T: CharacterTable, values: Values) -> Tuple[Values, Values]:
    """(symmetric square, alternating square) of a character."""
    squares = T.power_values(values, 2)
    half = Fraction(1, 2)
    sym = [(x * x + y) * half for x, y in zip(values, squares)]
    alt = [(x * x - y) * half for x, y in zip(values, squares)]
    return sym, alt


@dataclass
class BranchingResult:
    subgroup: str
    multiplicities: Dict[str, int]
    degree: int
    fusion: List[int] = field(default_factory=list)

    def dimension_balanced(self, H: CharacterTable) -> bool:
        return sum(m * H[name].degree for name, m in self.multiplicities.items()) == self.degree

    def describe(self) -> str:
        return " + ".join(name if m == 1 else f"{m}*{name}" for name, m in self.multiplicities.items())


def class_fusion(T_G: CharacterTable, T_H: CharacterTable) -> List[int]:
    """G-class of each H-class, by locating the H representative among G's elements."""
    return [T_G.classes.class_of(rep) for rep in T_H.classes.representatives]


def restrict(T_G: CharacterTable, values: Values, T_H: CharacterTable) -> Values:
    return [values[j] for j in class_fusion(T_G, T_H)]


def branch(T_G: CharacterTable, values: Values, T_H: CharacterTable) -> BranchingResult:
    """
    Restriction of a character of G to the subgroup H, decomposed over H

    Raises:
        CharacterTableError: non-integer multiplicity or unbalanced dimensions
    """
    fusion = class_fusion(T_G, T_H)
    restricted = [values[j] for j in fusion]
    result = BranchingResult(T_H.group.name, T_H.decompose(restricted), int(values[0].to_fraction()), fusion)
    if not result.dimension_balanced(T_H):
        raise CharacterTableError(f"restriction to {T_H.group.name} loses dimension")
    return result


# ---------------------------------------------------------------------------
# Permutation characters
# ---------------------------------------------------------------------------

def permutation_character(act: GroupAction, T: CharacterTable) -> Values:
    return [Cyclotomic.rational(act.fixed_points(rep)) for rep in T.classes.representatives]


def real_multiplicities(T: CharacterTable, values: Values,
                        reals: Optional[List[RealCharacter]] = None) -> Dict[str, int]:
    """Multiplicity of each real irreducible: <psi, rho> / <rho, rho>."""
    reals = reals or real_characters(T)
    out = {}
    for real in reals:
        m = T.inner(values, real.values) / T.inner(real.values, real.values)
        if m.denominator != 1 or m < 0:
            raise CharacterTableError(f"real multiplicity {m} of {real.name} is not a natural number")
        if m:
            out[real.name] = int(m)
    return out


def decompose_permutation_character(act: GroupAction, T: CharacterTable, real_form: bool = False,
                                    reals: Optional[List[RealCharacter]] = None) -> Dict[str, int]:
    """
    Fixed-point character of an action, decomposed over complex or real irreducibles
    """
    values = permutation_character(act, T)
    if real_form:
        return real_multiplicities(T, values, reals)
    return T.decompose(values)


def name_real_characters(T: CharacterTable, reals: List[RealCharacter], classes: Sequence[int],
                         fixture_rows: Dict[str, Sequence[int]]) -> List[RealCharacter]:
    """
    Rename real characters whose values on the given classes match a fixture row
    """
    named = []
    for real in reals:
        observed = [real.values[c] for c in classes]
        match = next((name for name, row in fixture_rows.items() if observed == list(row)), None)
        named.append(RealCharacter(match or real.name, real.components, real.values, real.indicator))
    return named


def central_involution_class(T: CharacterTable) -> Optional[int]:
    for j, (o, s) in enumerate(zip(T.classes.orders, T.classes.sizes)):
        if o == 2 and s == 1:
            return j
    return None


def format_multiplicities(mult: Dict[str, int]) -> str:
    return " + ".join(name if m == 1 else f"{m}{name}" for name, m in mult.items())
