"""
Matrix groups over small finite fields and the particle models built on them.

Vectors are rows and matrices act on the right, v -> vM. Permutation images of
matrix groups are taken from that right action, so products of matrices and
products of their permutation images compose in the same order.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.core.exceptions import ToolkitError
from app.models.schemas import ClaimReport
from app.services.exactmath import GF4_CODES, GF4_NAMES, FiniteField, get_field
from app.services.permgroup import (
    GroupAction, Permutation, PermGroup, close_elements, coset_action, extend_homomorphism,
    find_isomorphism, format_cycles, from_cycles, is_even, perm_inverse, perm_mul, point_orbits,
    subgroup_classes, symmetric_group,
)

logger = logging.getLogger(__name__)

LETTERS = "ABCDEF"
ALL_ONES = 0b111111

Matrix = Tuple[Tuple[int, ...], ...]
Vector = Tuple[int, ...]


# ---------------------------------------------------------------------------
# Bit-strings of length 6
# ---------------------------------------------------------------------------

def bitstring(letters: str) -> int:
    """'AB' -> bits A and B set; '0' is the zero string."""
    value = 0
    for ch in letters.strip().upper():
        if ch == "0":
            continue
        if ch not in LETTERS:
            raise ValueError(f"unknown letter {ch!r} in bit-string {letters!r}")
        value |= 1 << LETTERS.index(ch)
    return value


def letters_of(x: int) -> str:
    return "".join(LETTERS[i] for i in range(6) if x >> i & 1) or "0"


def weight(x: int) -> int:
    return bin(x).count("1")


def permute_bits(g: Permutation, x: int) -> int:
    """Move the bit of letter i to letter g(i)."""
    out = 0
    for i in range(6):
        if x >> i & 1:
            out |= 1 << g[i]
    return out


def complement_class(x: int) -> int:
    """Representative of x modulo the all-ones string."""
    return min(x, x ^ ALL_ONES)


def quadratic_form(x: int) -> int:
    return (weight(x) // 2) % 2


def bilinear_form(x: int, y: int) -> int:
    return weight(x & y) % 2


@dataclass
class ParticleAssignment:
    """
    Particle name -> vectors, as loaded from a particle data file
    """
    model: str
    vectors: Dict[str, List]
    handedness: Dict[str, str]
    colours: Dict[str, List[str]] = field(default_factory=dict)
    rows: Dict[str, int] = field(default_factory=dict)
    generation_scalars: Dict[str, str] = field(default_factory=dict)
    column_orbit: List[str] = field(default_factory=list)

    LEPTONS = ("nu", "e_L", "e_R")

    def names(self, handedness: Optional[str] = None) -> List[str]:
        return [n for n in self.vectors if handedness is None or self.handedness[n] == handedness]

    def first(self, name: str):
        return self.vectors[name][0]


@dataclass
class GF2Model:
    group: PermGroup
    even: List[int]
    quotient: List[int]
    report: ClaimReport

    def act(self, g: Permutation, x: int) -> int:
        return permute_bits(g, x)

    def quotient_act(self, g: Permutation, x: int) -> int:
        return complement_class(permute_bits(g, x))

    def letter_permutation(self, *cycles: str) -> Permutation:
        return from_cycles([tuple(c) for c in cycles], LETTERS)


def build_gf2_model() -> GF2Model:
    """
    Sym(6) permuting the coordinates of the even-weight bit-strings and their quotient by 111111
    """
    group = symmetric_group(6, name="Sym(6)")
    even = [x for x in range(64) if weight(x) % 2 == 0]
    quotient = sorted({complement_class(x) for x in even})
    report = ClaimReport(subject="GF(2) model")
    linear = all(permute_bits(g, x ^ y) == permute_bits(g, x) ^ permute_bits(g, y)
                 for g in group.generators for x in even for y in even)
    report.add("linear-on-even-strings", linear, strings=len(even))
    fixed = all(permute_bits(g, ALL_ONES) == ALL_ONES for g in group.elements)
    report.add("fixed-string-111111", fixed, checked=group.order)
    well_defined = all(complement_class(permute_bits(g, x)) == complement_class(permute_bits(g, x ^ ALL_ONES))
                       for g in group.generators for x in even)
    report.add("quotient-action", well_defined and len(quotient) == 16, quotient_size=len(quotient))
    logger.info(f"Built GF(2) model: {len(even)} even strings, quotient of size {len(quotient)}")
    return GF2Model(group, even, quotient, report)


def _closed_under_sum(elements: Sequence[int], reduce=lambda x: x) -> bool:
    members = {reduce(x) for x in elements}
    return all(reduce(x ^ y) in members for x in members for y in members)


def verify_subspace_claims(model: GF2Model, particles: ParticleAssignment) -> ClaimReport:
    """
    Lepton and right-handed subspaces, the (B,C) doublet swap and the colour action of D, E, F
    """
    report = ClaimReport(subject="GF(2) particle subspaces")
    vec = particles.vectors
    leptons = [0] + [x for n in particles.LEPTONS for x in vec[n]]
    report.add("leptons-2-dimensional", len(set(leptons)) == 4 and _closed_under_sum(leptons),
               elements=[letters_of(x) for x in leptons])

    right = [0] + [x for n in particles.names("R") for x in vec[n]]
    right_classes = sorted({complement_class(x) for x in right})
    report.add("right-handed-3-dimensional",
               len(right_classes) == 8 and _closed_under_sum(right_classes, complement_class),
               elements=[letters_of(x) for x in right_classes],
               example=f"AD+BC = {letters_of(bitstring('AD') ^ bitstring('BC'))} ~ "
                       f"{letters_of(complement_class(bitstring('AD') ^ bitstring('BC')))}")

    swap = model.letter_permutation("BC")
    fixes_right = all(model.quotient_act(swap, x) == complement_class(x) for x in right)
    doublets = [("nu", "e_L"), ("d_L", "u_L")]
    swapped = all(model.act(swap, a) == b and model.act(swap, b) == a
                  for first, second in doublets for a, b in zip(vec[first], vec[second]))
    report.add("bc-weak-doublet", fixes_right and swapped,
               CD=letters_of(model.act(swap, bitstring("CD"))),
               AB=letters_of(model.act(swap, bitstring("AB"))))

    colour_group = model.group.subgroup([model.letter_permutation("DEF"), model.letter_permutation("DE")],
                                        name="Sym(D,E,F)")
    preserves = all(sorted(model.act(g, x) for x in vec[n]) == sorted(vec[n])
                    for g in colour_group.elements for n in vec)
    cycle = model.letter_permutation("DEF")
    shifts = all(model.act(cycle, xs[i]) == xs[(i + 1) % 3]
                 for n, xs in vec.items() if len(xs) == 3 for i in range(3))
    leptons_fixed = all(model.act(g, x) == x for g in colour_group.elements
                        for n in particles.LEPTONS for x in vec[n])
    report.add("def-permutes-colours", preserves and shifts and leptons_fixed,
               d_R=[letters_of(model.act(cycle, x)) for x in vec["d_R"]])
    return report


def verify_invariant_forms_gf2(model: GF2Model) -> ClaimReport:
    """
    Exhaustive invariance of Q(x) = wt(x)/2 mod 2 and of its polarization on the quotient
    """
    report = ClaimReport(subject="GF(2) invariant forms")
    even, quotient, elements = model.even, model.quotient, model.group.elements
    q_invariant = all(quadratic_form(permute_bits(g, x)) == quadratic_form(x) for g in elements for x in even)
    report.add("quadratic-form-invariant", q_invariant,
               Q_AB=quadratic_form(bitstring("AB")), Q_ABCD=quadratic_form(bitstring("ABCD")),
               permutations=len(elements))
    polar = all(quadratic_form(x ^ y) ^ quadratic_form(x) ^ quadratic_form(y) == bilinear_form(x, y)
                for x in even for y in even)
    report.add("polarization", polar, B_AB_AC=bilinear_form(bitstring("AB"), bitstring("AC")))
    descends = all(bilinear_form(x ^ ALL_ONES, y) == bilinear_form(x, y) for x in even for y in even)
    alternating = all(bilinear_form(x, x) == 0 for x in even)
    report.add("bilinear-descends-alternating", descends and alternating)
    nondegenerate = all(any(bilinear_form(x, y) for y in quotient) for x in quotient if x)
    b_invariant = all(bilinear_form(permute_bits(g, x), permute_bits(g, y)) == bilinear_form(x, y)
                      for g in elements for x in quotient for y in quotient)
    report.add("quotient-form-invariant-nondegenerate", nondegenerate and b_invariant,
               verified_forms=["Q on the 5-dimensional even-weight space",
                               "alternating B on the 4-dimensional quotient"],
               Q_of_111111=quadratic_form(ALL_ONES))
    return report


# ---------------------------------------------------------------------------
# Matrix groups
# ---------------------------------------------------------------------------

def parse_gf4_vector(text: str) -> Vector:
    """'(1,v,0)' -> (1, 2, 0)"""
    parts = text.strip().strip("()").split(",")
    try:
        return tuple(GF4_CODES[p.strip()] for p in parts)
    except KeyError as e:
        raise ValueError(f"bad GF(4) vector {text!r}") from e


def format_gf4_vector(v: Vector) -> str:
    return "(" + ",".join(GF4_NAMES[x] for x in v) + ")"


class GFMatrixGroup:
    """
    Group of invertible matrices over GF(q) generated by the given matrices
    """

    def __init__(self, field_order: int, generators: Sequence[Sequence[Sequence[int]]], name: str = "",
                 correspondence: Optional[List[Permutation]] = None, cap: Optional[int] = None):
        self.field: FiniteField = get_field(field_order)
        self.generators: List[Matrix] = [tuple(tuple(int(x) for x in row) for row in g) for g in generators]
        self.dimension = len(self.generators[0])
        self.name = name
        self.correspondence = correspondence
        self._add = self.field.add_table.tolist()
        self._mul = self.field.mul_table.tolist()
        n = self.dimension
        self.identity: Matrix = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        self.elements: List[Matrix] = close_elements(self.generators, self.mul, self.identity, cap, name)
        self._members = frozenset(self.elements)
        logger.info(f"Enumerated {name or 'matrix group'} over {self.field}: {len(self.elements)} elements")

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, m: Matrix) -> bool:
        return m in self._members

    def mul(self, a: Matrix, b: Matrix) -> Matrix:
        add, mul, n = self._add, self._mul, self.dimension
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = 0
                for k in range(n):
                    acc = add[acc][mul[a[i][k]][b[k][j]]]
                row.append(acc)
            out.append(tuple(row))
        return tuple(out)

    def act(self, m: Matrix, v: Vector) -> Vector:
        """Row vector times matrix."""
        add, mul, n = self._add, self._mul, self.dimension
        out = []
        for j in range(n):
            acc = 0
            for k in range(n):
                acc = add[acc][mul[v[k]][m[k][j]]]
            out.append(acc)
        return tuple(out)

    def act_left(self, m: Matrix, v: Vector) -> Vector:
        """Matrix times column vector, written as a row."""
        return self.act(transpose(m), v)

    def scale(self, s: int, v: Vector) -> Vector:
        return tuple(self._mul[s][x] for x in v)

    def det(self, m: Matrix) -> int:
        return self.field.det(np.array(m, dtype=np.int64))

    def scalar(self, s: int) -> Matrix:
        n = self.dimension
        return tuple(tuple(s if i == j else 0 for j in range(n)) for i in range(n))

    def nonzero_vectors(self) -> List[Vector]:
        return [v for v in product(range(self.field.order), repeat=self.dimension) if any(v)]

    def center(self) -> List[Matrix]:
        return sorted(m for m in self.elements
                      if all(self.mul(m, g) == self.mul(g, m) for g in self.generators))

    def frobenius(self, m: Matrix) -> Matrix:
        return tuple(tuple(self.field.frobenius(x) for x in row) for row in m)

    def conjugate_transpose(self, m: Matrix) -> Matrix:
        return transpose(self.frobenius(m)) if self.field.degree == 2 else transpose(m)

    @cached_property
    def vector_action(self) -> Tuple[PermGroup, Dict[Matrix, Permutation]]:
        """Permutation group on the nonzero vectors and the matrix -> permutation map."""
        points = self.nonzero_vectors()
        index = {v: i for i, v in enumerate(points)}
        image = {m: tuple(index[self.act(m, v)] for v in points) for m in self.elements}
        group = PermGroup([image[g] for g in self.generators], degree=len(points),
                          name=f"{self.name} on vectors", elements=image.values())
        return group, image

    def points(self) -> List[Vector]:
        return self.nonzero_vectors()

    def projective_points(self) -> List[Vector]:
        """Nonzero vectors whose first nonzero coordinate is 1."""
        return [v for v in self.nonzero_vectors() if next(x for x in v if x) == 1]

    def normalize(self, v: Vector) -> Vector:
        lead = next(x for x in v if x)
        return self.scale(self.field.inv(lead), v)

    def projective_action(self) -> Tuple[PermGroup, Dict[Matrix, Permutation]]:
        points = self.projective_points()
        index = {v: i for i, v in enumerate(points)}
        image = {m: tuple(index[self.normalize(self.act(m, v))] for v in points) for m in self.elements}
        group = PermGroup([image[g] for g in self.generators], degree=len(points),
                          name=f"{self.name} on projective points")
        return group, image


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m))


def vector_orbits(G: GFMatrixGroup, generators: Optional[Sequence[Matrix]] = None,
                  left: bool = False) -> List[List[Vector]]:
    """
    Orbits on the nonzero vectors, largest first

    Args:
        G: matrix group supplying the field and dimension
        generators: generators of the acting subgroup (default: the group's own)
        left: act on column vectors instead of rows
    """
    gens = G.generators if generators is None else list(generators)
    points = G.nonzero_vectors()
    index = {v: i for i, v in enumerate(points)}
    act = G.act_left if left else G.act
    perms = [tuple(index[act(g, v)] for v in points) for g in gens]
    orbits = [[points[i] for i in orbit] for orbit in point_orbits(perms, len(points))]
    return sorted(orbits, key=lambda o: (-len(o), o[0]))


def orbit_sizes(orbits: Sequence[Sequence]) -> List[int]:
    return sorted((len(o) for o in orbits), reverse=True)


# ---------------------------------------------------------------------------
# The triple cover over GF(4)
# ---------------------------------------------------------------------------

GF4_GENERATORS: List[List[List[str]]] = [
    [["0", "1", "0"], ["0", "0", "1"], ["1", "0", "0"]],
    [["1", "0", "0"], ["0", "w", "0"], ["0", "0", "v"]],
    [["0", "1", "0"], ["1", "0", "0"], ["0", "0", "1"]],
    [["1", "0", "1"], ["0", "1", "1"], ["0", "0", "1"]],
]
GF4_CORRESPONDENCE = [["ABC"], ["DEF"], ["BC", "EF"], ["AD", "EF"]]


@dataclass
class TripleCoverModel:
    group: GFMatrixGroup
    vector_group: PermGroup
    images: Dict[Matrix, Permutation]
    letters_map: Optional[Dict[Permutation, Permutation]]
    report: ClaimReport

    def letters_of(self, m: Matrix) -> Optional[Permutation]:
        if self.letters_map is None:
            return None
        return self.letters_map[self.images[m]]


def _letter_perm(cycles: Sequence[str]) -> Permutation:
    return from_cycles([tuple(c) for c in cycles], LETTERS)


def build_3alt6() -> TripleCoverModel:
    """
    Enumerate the group generated by the four GF(4) matrices and check its map onto Alt(6)

    Returns:
        TripleCoverModel whose report lists order, determinant, center and homomorphism claims
    """
    gens = [[[GF4_CODES[x] for x in row] for row in m] for m in GF4_GENERATORS]
    correspondence = [_letter_perm(c) for c in GF4_CORRESPONDENCE]
    G = GFMatrixGroup(4, gens, name="3.Alt(6)", correspondence=correspondence)
    report = ClaimReport(subject="3.Alt(6) over GF(4)")
    report.add("order-1080", G.order == 1080, order=G.order)
    report.add("determinant-one", all(G.det(m) == 1 for m in G.elements))
    scalars = sorted(G.scalar(s) for s in (1, 2, 3))
    center = G.center()
    report.add("center-is-scalars", center == scalars, center_order=len(center))

    P, images = G.vector_action
    phi = extend_homomorphism(P, correspondence, perm_mul, tuple(range(6)))
    if phi is None:
        report.add("generator-correspondence-homomorphism", False)
        return TripleCoverModel(G, P, images, None, report)
    image = set(phi.values())
    kernel = sorted(g for g, h in phi.items() if h == tuple(range(6)))
    report.add("generator-correspondence-homomorphism",
               len(image) == 360 and all(is_even(h) for h in image)
               and kernel == sorted(images[s] for s in scalars),
               image_order=len(image), kernel_order=len(kernel))
    odd = _letter_perm(["BC"])
    report.add("odd-bc-not-lifted", odd not in image and not is_even(odd))
    logger.info(f"Built 3.Alt(6) model: order {G.order}, center {len(center)}")
    return TripleCoverModel(G, P, images, phi, report)


def generation_action(model: TripleCoverModel, particles: ParticleAssignment) -> ClaimReport:
    """
    Scalar generations, the weak doublet and the 45-orbit of the GF(4) particle vectors
    """
    G = model.group
    report = ClaimReport(subject="GF(4) generations")
    colour_gen, doublet_gen = G.generators[1], G.generators[2]

    def scalar_of(v: Vector, w: Vector) -> Optional[int]:
        for s in (1, 2, 3):
            if G.scale(s, v) == w:
                return s
        return None

    shifts = {}
    for name in particles.LEPTONS:
        v = particles.first(name)
        shifts[name] = scalar_of(v, G.act(colour_gen, v))
    scalars = {n: GF4_NAMES[s] if s else None for n, s in shifts.items()}
    report.add("def-shifts-lepton-generations",
               bool(particles.generation_scalars) and scalars == particles.generation_scalars,
               scalars=scalars, expected=particles.generation_scalars,
               e_L=format_gf4_vector(G.act(colour_gen, particles.first("e_L"))))

    nu, e_l = particles.first("nu"), particles.first("e_L")
    u_l, d_l = particles.first("u_L"), particles.first("d_L")
    swapped = G.act(doublet_gen, nu) == e_l and G.act(doublet_gen, e_l) == nu \
        and G.act(doublet_gen, u_l) == d_l
    right_fixed = all(G.normalize(G.act(doublet_gen, particles.first(n))) == G.normalize(particles.first(n))
                      for n in particles.names("R"))
    moved_colours = [format_gf4_vector(v) for v in particles.vectors["d_R"]
                     if G.normalize(G.act(doublet_gen, v)) != G.normalize(v)]
    report.add("weak-doublet-swap", swapped and right_fixed and bool(moved_colours),
               nu_image=format_gf4_vector(G.act(doublet_gen, nu)), moved_colours=moved_colours)

    orbits = vector_orbits(G)
    sizes = orbit_sizes(orbits)
    report.add("vector-orbits-45-18", sizes == [45, 18], sizes=sizes)
    big = set(orbits[0])
    saturated = {G.scale(s, v) for vs in particles.vectors.values() for v in vs for s in (1, 2, 3)}
    classes = sum(len(vs) for vs in particles.vectors.values())
    report.add("particles-fill-45-orbit", saturated == big and classes == 15, classes=classes)
    displayed = {G.scale(s, particles.first(n)) for n in particles.vectors for s in (1, 2, 3)}
    report.add("displayed-vectors-in-45-orbit", displayed <= big, vectors=len(displayed))
    left_orbits = vector_orbits(G, left=True)
    left_small = set(next((o for o in left_orbits if len(o) == 18), []))
    in_small = sorted(n for n in particles.vectors if particles.first(n) in left_small)
    report.add("column-convention-orbit-membership",
               bool(left_small) and in_small == sorted(particles.column_orbit),
               in_18_orbit=in_small, left_sizes=orbit_sizes(left_orbits))

    rows = {r: [v for n, vs in particles.vectors.items() if particles.rows.get(n) == r for v in vs] for r in (1, 2)}
    block = sl24_block_subgroup(G)
    row_orbits = []
    for r in (1, 2):
        classes_r = {G.normalize(v) for v in rows[r]}
        closure = _projective_orbit_union(G, block, classes_r)
        row_orbits.append(len(classes_r) if closure == classes_r and _is_single_orbit(G, block, classes_r) else 0)
    report.add("rows-split-5-plus-10", row_orbits == [5, 10], block_order=len(block), row_orbits=row_orbits)
    return report


def _projective_orbit_union(G: GFMatrixGroup, elements: Sequence[Matrix], classes: set) -> set:
    return {G.normalize(G.act(m, v)) for m in elements for v in classes}


def _is_single_orbit(G: GFMatrixGroup, elements: Sequence[Matrix], classes: set) -> bool:
    start = next(iter(classes))
    return {G.normalize(G.act(m, start)) for m in elements} == classes


def sl24_block_subgroup(G: GFMatrixGroup) -> List[Matrix]:
    """Elements preserving the plane of the first two coordinates with a determinant-one block."""
    F = G.field
    out = []
    for m in G.elements:
        if m[0][2] or m[1][2]:
            continue
        block = F.sub(F.mul(m[0][0], m[1][1]), F.mul(m[0][1], m[1][0]))
        if block == 1:
            out.append(m)
    return out


def unitary_subgroup(G: GFMatrixGroup) -> List[Matrix]:
    """Elements preserving the standard Hermitian form sum x_i conj(y_i)."""
    return [m for m in G.elements if G.mul(m, G.conjugate_transpose(m)) == G.identity]


def frobenius_twist(model: TripleCoverModel) -> ClaimReport:
    """
    Entrywise Frobenius normalizes the group, inverts the scalars and induces an odd permutation
    """
    G = model.group
    report = ClaimReport(subject="Frobenius twist of 3.Alt(6)")
    twisted = [G.frobenius(g) for g in G.generators]
    report.add("normalizes", all(t in G for t in twisted))
    report.add("inverts-scalars", G.frobenius(G.scalar(2)) == G.scalar(3))
    induced = None
    if model.letters_map is not None and all(t in G for t in twisted):
        targets = [model.letters_of(t) for t in twisted]
        for tau in symmetric_group(6).elements:
            tau_inv = perm_inverse(tau)
            if all(perm_mul(perm_mul(tau, s), tau_inv) == t for s, t in zip(G.correspondence, targets)):
                induced = tau
                break
    report.add("induces-odd-permutation", induced is not None and not is_even(induced),
               permutation=_format_letters(induced) if induced else None)
    unitary = unitary_subgroup(G)
    report.add("unitary-subgroup-index-10", G.order == 10 * len(unitary), order=len(unitary))
    block = sl24_block_subgroup(G)
    report.add("sl24-block-order-60", len(block) == 60, order=len(block))
    return report


def _format_letters(p: Permutation) -> str:
    return format_cycles(p, LETTERS)


# ---------------------------------------------------------------------------
# SL(2,q)
# ---------------------------------------------------------------------------

GF9_I = 3


def special_linear_2(q: int) -> GFMatrixGroup:
    """SL(2,q) for q in {3, 9}, generated by elementary transvections."""
    F = get_field(q)
    if q == 3:
        gens = [((1, 1), (0, 1)), ((1, 0), (1, 1))]
    elif q == 9:
        gens = [((1, 1), (0, 1)), ((1, GF9_I), (0, 1)), ((1, 0), (1, 1)), ((1, 0), (GF9_I, 1))]
    else:
        raise ToolkitError(f"SL(2,{q}) is not provided")
    group = GFMatrixGroup(F.order, gens, name=f"SL(2,{q})")
    return group


@dataclass
class SL29Model:
    """SL(2,9) with its projective line and six-point quotient actions."""
    matrices: GFMatrixGroup
    vectors: PermGroup
    projective: PermGroup
    six_point: GroupAction
    to_letters: Dict[Permutation, Permutation]

    def preimage(self, letter_group: PermGroup, name: str) -> PermGroup:
        members = letter_group.members
        elements = [g for g, h in self.to_letters.items() if h in members]
        return self.vectors.subgroup_from_elements(elements, name=name)


def build_sl29() -> SL29Model:
    """
    SL(2,9) on its 80 nonzero vectors, mapped onto Alt(6) through PSL(2,9)

    The 6-point action comes from an index-6 subgroup of PSL(2,9) on the projective line.
    """
    G = special_linear_2(9)
    vectors, vec_images = G.vector_action
    projective, proj_images = G.projective_action()
    search = subgroup_classes(projective, 60)
    if not search.representatives:
        raise ToolkitError("no subgroup of index 6 found in PSL(2,9)")
    six = coset_action(projective, search.representatives[0])
    to_six = {vec_images[m]: six.permutation(proj_images[m]) for m in G.elements}
    logger.info(f"Built SL(2,9) model: {G.order} matrices, {projective.order} projective images")
    return SL29Model(G, vectors, projective, six, to_six)


def sl2q_isomorphisms(binary_tetrahedral: Optional[PermGroup] = None,
                      sl29: Optional[SL29Model] = None) -> ClaimReport:
    """
    SL(2,3) against the quaternion 2.Alt(4), and the structure of SL(2,9)
    """
    report = ClaimReport(subject="SL(2,q)")
    sl23 = special_linear_2(3)
    report.add("sl23-order-24", sl23.order == 24, order=sl23.order)
    if binary_tetrahedral is not None:
        sl23_perms, _ = sl23.vector_action
        iso = find_isomorphism(sl23_perms, binary_tetrahedral)
        report.add("sl23-isomorphic-to-binary-tetrahedral", iso is not None)

    model = sl29 or build_sl29()
    G = model.matrices
    report.add("sl29-order-720", G.order == 720, order=G.order)
    minus_one = G.scalar(G.field.neg(1))
    report.add("sl29-center", G.center() == sorted([G.identity, minus_one]))
    points = G.projective_points()
    P = model.projective
    _, proj_images = G.projective_action()
    kernel = sorted(m for m in G.elements if proj_images[m] == P.identity)
    pairs = [(a, b) for a in range(len(points)) for b in range(len(points)) if a != b]
    pair_action = GroupAction(P, pairs, lambda g, ab: (g[ab[0]], g[ab[1]]))
    report.add("projective-line-2-transitive",
               len(points) == 10 and len(pair_action.orbits()) == 1 and kernel == sorted([G.identity, minus_one]),
               points=len(points), quotient_order=P.order)
    six = model.six_point
    image = six.image("Alt(6)")
    report.add("six-point-quotient-action",
               six.degree == 6 and image.order == P.order == 360 and all(is_even(g) for g in image.generators),
               degree=six.degree, image_order=image.order)
    return report
