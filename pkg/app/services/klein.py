"""
Real forms of sl(4,C) acting on the 6-dimensional antisymmetric square.

Every matrix is an ExactMatrix of Gaussian rationals. Real and imaginary parts are
split before any linear solve, so all linear algebra runs over Q.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.core.exceptions import LieClosureError, RealStructureError
from app.models.schemas import ClaimReport
from app.services.clifford import (
    GeneratorFixture, MultiVector, even_subalgebra, pseudoscalar, quaternion_relations,
)
from app.services.exactmath import (
    EchelonBasis, ExactMatrix, GaussianRational, I, nullspace, signature, span_dimension, sum_of_two_squares,
)
from app.services.fixture_loader import fixture_loader

logger = logging.getLogger(__name__)

ZERO = GaussianRational(0)
ONE = GaussianRational(1)

PAIRS: Tuple[Tuple[int, int], ...] = tuple(combinations(range(4), 2))
PAIR_INDEX = {p: n for n, p in enumerate(PAIRS)}
PAIR_LABELS = tuple(f"{a + 1}{b + 1}" for a, b in PAIRS)

SparseMatrix = Dict[Tuple[int, int], GaussianRational]


# ---------------------------------------------------------------------------
# Matrix helpers
# ---------------------------------------------------------------------------

def _matrix(n: int, entries: SparseMatrix) -> ExactMatrix:
    return ExactMatrix([[entries.get((r, c), ZERO) for c in range(n)] for r in range(n)])


def _diag(values: Sequence, scale: GaussianRational = ONE) -> ExactMatrix:
    return _matrix(len(values), {(i, i): scale * v for i, v in enumerate(values) if v})


def conj(m: ExactMatrix) -> ExactMatrix:
    return m.map(lambda x: x.conjugate())


def dagger(m: ExactMatrix) -> ExactMatrix:
    return conj(m.T)


def bracket(x: ExactMatrix, y: ExactMatrix) -> ExactMatrix:
    return x @ y - y @ x


def realify(m: ExactMatrix) -> List[Fraction]:
    """Real parts row by row, then imaginary parts."""
    flat = [x for row in m.rows for x in row]
    return [x.re for x in flat] + [x.im for x in flat]


def _apply(m: ExactMatrix, v: Sequence[GaussianRational]) -> List[GaussianRational]:
    out = []
    for row in m.rows:
        acc = ZERO
        for x, y in zip(row, v):
            acc = acc + x * y
        out.append(acc)
    return out


def _hermitian_pairing(h: ExactMatrix, u: Sequence[GaussianRational], v: Sequence[GaussianRational]):
    acc = ZERO
    for x, y in zip(u, _apply(h, v)):
        acc = acc + x.conjugate() * y
    return acc


def _solve(unknowns: Sequence[SparseMatrix], n: int,
           equations: Callable[[ExactMatrix], List[Fraction]]) -> List[List[Fraction]]:
    """
    Real coefficient vectors c with equations(sum c_u U_u) = 0, for a real-linear equation map
    """
    columns = [equations(_matrix(n, u)) for u in unknowns]
    rows = [list(r) for r in zip(*columns)]
    return nullspace(rows, len(unknowns))


def _combine(unknowns: Sequence[SparseMatrix], n: int, coeffs: Sequence[Fraction]) -> ExactMatrix:
    total: SparseMatrix = {}
    for c, u in zip(coeffs, unknowns):
        if c == 0:
            continue
        for key, value in u.items():
            total[key] = total.get(key, ZERO) + value * GaussianRational(c)
    return _matrix(n, total)


def _all_complex_unknowns(n: int) -> List[SparseMatrix]:
    return [{(a, b): unit} for unit in (ONE, I) for a in range(n) for b in range(n)]


def _hermitian_unknowns(n: int) -> List[SparseMatrix]:
    out: List[SparseMatrix] = [{(a, a): ONE} for a in range(n)]
    out += [{(a, b): ONE, (b, a): ONE} for a, b in combinations(range(n), 2)]
    out += [{(a, b): I, (b, a): -I} for a, b in combinations(range(n), 2)]
    return out


def _antisymmetric_unknowns(n: int) -> List[SparseMatrix]:
    return [{(a, b): unit, (b, a): -unit} for unit in (ONE, I) for a, b in combinations(range(n), 2)]


def hermitian_signature(h: ExactMatrix) -> Tuple[int, int]:
    """Signature of a Hermitian matrix through its real symmetric 2n x 2n form [[S, -T], [T, S]]."""
    n = h.shape[0]
    s = [[h[r, c].re for c in range(n)] for r in range(n)]
    t = [[h[r, c].im for c in range(n)] for r in range(n)]
    big = [s[r] + [-x for x in t[r]] for r in range(n)] + [t[r] + s[r] for r in range(n)]
    p, q, _ = signature(big)
    return p // 2, q // 2


def unordered(sig: Tuple[int, int]) -> Tuple[int, int]:
    return tuple(sorted(sig, reverse=True))


# ---------------------------------------------------------------------------
# Real forms
# ---------------------------------------------------------------------------

@dataclass
class LieAlgebraBasis:
    """
    Real span of 4x4 complex matrices
    """
    name: str
    matrices: List[ExactMatrix]
    description: str = ""

    def __len__(self) -> int:
        return len(self.matrices)

    @property
    def is_real(self) -> bool:
        return all(x.im == 0 for m in self.matrices for row in m.rows for x in row)

    def dimension(self) -> int:
        return span_dimension([realify(m) for m in self.matrices]).dimension

    def is_traceless(self) -> bool:
        return all(m.trace() == 0 for m in self.matrices)

    def closure_failures(self) -> List[Tuple[int, int]]:
        basis = EchelonBasis(32)
        for m in self.matrices:
            basis.add(realify(m))
        return [(a, b) for a, b in combinations(range(len(self.matrices)), 2)
                if not basis.contains(realify(bracket(self.matrices[a], self.matrices[b])))]

    def conjugated(self, p: ExactMatrix, p_inv: ExactMatrix, name: str = "") -> "LieAlgebraBasis":
        return LieAlgebraBasis(name or f"{self.name}^P", [p @ m @ p_inv for m in self.matrices], self.description)


def _unit(i: int, j: int, c: GaussianRational = ONE) -> ExactMatrix:
    return _matrix(4, {(i, j): c})


def sl4r_basis() -> LieAlgebraBasis:
    mats = [_unit(i, j) for i in range(4) for j in range(4) if i != j]
    mats += [_diag(h) for h in ((1, -1, 0, 0), (0, 1, -1, 0), (0, 0, 1, -1))]
    return LieAlgebraBasis("sl4r", mats, "sl(4,R): traceless real matrices")


def _unitary_basis(name: str, eta: Sequence[int], description: str) -> LieAlgebraBasis:
    """X with X^dagger eta + eta X = 0 and trace zero, eta diagonal of signs."""
    mats = []
    for i, j in combinations(range(4), 2):
        if eta[i] == eta[j]:
            mats.append(_matrix(4, {(i, j): ONE, (j, i): -ONE}))
            mats.append(_matrix(4, {(i, j): I, (j, i): I}))
        else:
            mats.append(_matrix(4, {(i, j): ONE, (j, i): ONE}))
            mats.append(_matrix(4, {(i, j): I, (j, i): -I}))
    mats += [_diag(h, I) for h in ((1, -1, 0, 0), (0, 1, -1, 0), (0, 0, 1, -1))]
    return LieAlgebraBasis(name, mats, description)


def su4_basis() -> LieAlgebraBasis:
    return _unitary_basis("su4", (1, 1, 1, 1), "su(4): traceless anti-Hermitian matrices")


def su22_basis() -> LieAlgebraBasis:
    return _unitary_basis("su22", (1, 1, -1, -1), "su(2,2): traceless, skew for diag(1,1,-1,-1)")


QUATERNION_BLOCKS = {
    "1": ((ONE, ZERO), (ZERO, ONE)),
    "i": ((I, ZERO), (ZERO, -I)),
    "j": ((ZERO, ONE), (-ONE, ZERO)),
    "k": ((ZERO, I), (I, ZERO)),
}


def _quaternion_entry(r: int, c: int, unit: str, sign: int = 1) -> SparseMatrix:
    block = QUATERNION_BLOCKS[unit]
    return {(2 * r + a, 2 * c + b): block[a][b] * GaussianRational(sign)
            for a in range(2) for b in range(2) if not block[a][b].is_zero()}


def sl2h_basis() -> LieAlgebraBasis:
    """2x2 quaternion matrices with real trace zero, through a + bi + (c + di)j -> [[a+bi, c+di], [-c+di, a-bi]]."""
    mats = []
    for r in range(2):
        for c in range(2):
            for unit in "1ijk":
                if r == c and unit == "1":
                    continue
                mats.append(_matrix(4, _quaternion_entry(r, c, unit)))
    real_diag = {**_quaternion_entry(0, 0, "1"), **_quaternion_entry(1, 1, "1", -1)}
    mats.append(_matrix(4, real_diag))
    return LieAlgebraBasis("sl2h", mats, "sl(2,H): quaternion 2x2 matrices with real trace zero")


REAL_FORMS: Dict[str, Callable[[], LieAlgebraBasis]] = {
    "sl4r": sl4r_basis,
    "su4": su4_basis,
    "su22": su22_basis,
    "sl2h": sl2h_basis,
}


def get_real_form(name: str) -> LieAlgebraBasis:
    try:
        return REAL_FORMS[name]()
    except KeyError:
        raise RealStructureError(f"unknown real form {name!r}; known forms: {', '.join(REAL_FORMS)}")


def random_conjugator(rng: np.random.Generator, steps: int = 6) -> Tuple[ExactMatrix, ExactMatrix]:
    """
    Random product of elementary matrices I + cE_ij and its exact inverse
    """
    p = ExactMatrix.identity(4, ONE, ZERO)
    p_inv = ExactMatrix.identity(4, ONE, ZERO)
    for _ in range(steps):
        i, j = (int(x) for x in rng.choice(4, size=2, replace=False))
        c = int(rng.integers(-3, 4)) or 1
        e = _matrix(4, {(a, a): ONE for a in range(4)} | {(i, j): GaussianRational(c)})
        e_inv = _matrix(4, {(a, a): ONE for a in range(4)} | {(i, j): GaussianRational(-c)})
        p = e @ p
        p_inv = p_inv @ e_inv
    return p, p_inv


# ---------------------------------------------------------------------------
# Antisymmetric square
# ---------------------------------------------------------------------------

def wedge(x: ExactMatrix) -> ExactMatrix:
    """
    Action of X on the basis e_i ^ e_j (i < j): X e_i ^ e_j + e_i ^ X e_j
    """
    out = [[ZERO] * 6 for _ in range(6)]

    def add(a: int, b: int, col: int, c: GaussianRational):
        if a == b or c.is_zero():
            return
        if a < b:
            out[PAIR_INDEX[(a, b)]][col] = out[PAIR_INDEX[(a, b)]][col] + c
        else:
            out[PAIR_INDEX[(b, a)]][col] = out[PAIR_INDEX[(b, a)]][col] - c

    for col, (i, j) in enumerate(PAIRS):
        for k in range(4):
            add(k, j, col, x[k, i])
            add(i, k, col, x[k, j])
    return ExactMatrix(out)


@dataclass
class WedgeRep:
    algebra: LieAlgebraBasis
    matrices: List[ExactMatrix]
    compatible: bool


def wedge_rep(algebra: LieAlgebraBasis) -> WedgeRep:
    """
    Antisymmetric-square images of a basis, with bracket compatibility checked on every pair

    Raises:
        LieClosureError: the basis is not closed under the commutator
    """
    failures = algebra.closure_failures()
    if failures:
        raise LieClosureError(f"{algebra.name} is not closed under the commutator, e.g. pair {failures[0]}")
    images = [wedge(m) for m in algebra.matrices]
    n = len(images)
    compatible = all(wedge(bracket(algebra.matrices[a], algebra.matrices[b])) == bracket(images[a], images[b])
                     for a in range(n) for b in range(n))
    return WedgeRep(algebra, images, compatible)


# ---------------------------------------------------------------------------
# Invariant real structure and form
# ---------------------------------------------------------------------------

@dataclass
class RealFormReport:
    """
    Invariant Hermitian form on the complexified 6-space, normalized so that p >= q

    For complex-entry algebras ``structure`` is K with J(v) = K conj(v) an equivariant
    antilinear involution whose fixed space is the real 6-space.
    """
    name: str
    signature: Tuple[int, int]
    form: ExactMatrix
    form_space_dimension: int
    structure: Optional[ExactMatrix] = None
    structure_square: Optional[Fraction] = None
    wedge: Optional[WedgeRep] = None
    real_signature: Optional[Tuple[int, int]] = None

    @property
    def unordered(self) -> Tuple[int, int]:
        return unordered(self.signature)


def real_structure(rep: WedgeRep) -> Tuple[ExactMatrix, Fraction]:
    """
    Solve K conj(A) = A K over all images A; normalize K so that K conj(K) = 1

    Raises:
        RealStructureError: no solution, or the solution squares to a negative scalar
    """
    unknowns = _all_complex_unknowns(6)
    conj_images = [conj(a) for a in rep.matrices]

    def equations(k: ExactMatrix) -> List[Fraction]:
        out: List[Fraction] = []
        for a, ca in zip(rep.matrices, conj_images):
            out += realify(k @ ca - a @ k)
        return out

    solutions = _solve(unknowns, 6, equations)
    if not solutions:
        raise RealStructureError(f"{rep.algebra.name}: no equivariant antilinear map on the 6-space")
    k0 = _combine(unknowns, 6, solutions[0])
    square = k0 @ conj(k0)
    c = square[0, 0]
    if square != ExactMatrix.identity(6, c, ZERO) or c.im != 0 or c.re == 0:
        raise RealStructureError(f"{rep.algebra.name}: antilinear map does not square to a scalar")
    if c.re < 0:
        raise RealStructureError(f"{rep.algebra.name}: antilinear map squares to {c.re}, the 6-space is quaternionic")
    scale = sum_of_two_squares(1 / c.re)
    if scale is None:
        # only the sign of K conj(K) enters the signature
        logger.warning(f"Real structure for {rep.algebra.name} left unnormalized, K conj(K) = {c.re}")
        return k0, c.re
    lam = GaussianRational(*scale)
    k = k0.scale(lam)
    logger.info(f"Real structure for {rep.algebra.name}: K conj(K) = {c.re} before normalization")
    return k, c.re


def real_form_signature(algebra: LieAlgebraBasis) -> RealFormReport:
    """
    Signature of the invariant quadratic form on the real 6-space of a real form

    The form is solved for as an invariant Hermitian form on the complexified 6-space. Its
    signature equals that of the real symmetric form it induces on the fixed space of J, which
    is recorded as ``real_signature`` whenever that fixed space is 6-dimensional.

    Raises:
        RealStructureError: no real structure, or the invariant-form space is not 1-dimensional
    """
    rep = wedge_rep(algebra)
    structure, structure_square = None, None
    if not algebra.is_real:
        structure, structure_square = real_structure(rep)
    unknowns = _hermitian_unknowns(6)
    adjoints = [dagger(a) for a in rep.matrices]

    def equations(h: ExactMatrix) -> List[Fraction]:
        out: List[Fraction] = []
        for a, ad in zip(rep.matrices, adjoints):
            out += realify(ad @ h + h @ a)
        return out

    solutions = _solve(unknowns, 6, equations)
    if len(solutions) != 1:
        raise RealStructureError(f"{algebra.name}: invariant form space has dimension {len(solutions)}, expected 1")
    form = _combine(unknowns, 6, solutions[0])
    p, q = hermitian_signature(form)
    if p + q != 6:
        raise RealStructureError(f"{algebra.name}: invariant form is degenerate ({p},{q})")
    if p < q:
        form = -form
        p, q = q, p
    logger.info(f"Real form {algebra.name}: invariant form of signature ({p},{q})")
    return RealFormReport(algebra.name, (p, q), form, len(solutions), structure, structure_square, rep,
                          fixed_space_signature(form, structure))


def fixed_space_signature(form: ExactMatrix, structure: Optional[ExactMatrix] = None) -> Optional[Tuple[int, int]]:
    """
    Signature of Re h(u, v) on the fixed space of J(v) = K conj(v), K the identity when omitted

    Returns None when the fixed space is not n-dimensional, as happens when K conj(K) is not the identity.
    """
    n = form.shape[0]
    k = structure if structure is not None else ExactMatrix.identity(n, ONE, ZERO)
    columns = []
    for unit in (ONE, I):
        for a in range(n):
            v = [unit if i == a else ZERO for i in range(n)]
            image = _apply(k, [x.conjugate() for x in v])
            diff = [x - y for x, y in zip(image, v)]
            columns.append([x.re for x in diff] + [x.im for x in diff])
    coeffs = nullspace([list(r) for r in zip(*columns)], 2 * n)
    if len(coeffs) != n:
        logger.warning(f"Fixed space of the real structure has dimension {len(coeffs)}, expected {n}")
        return None
    basis = [[GaussianRational(c[a], c[n + a]) for a in range(n)] for c in coeffs]
    gram = [[_hermitian_pairing(form, u, v).re for v in basis] for u in basis]
    p, q, _ = signature(gram)
    return p, q


# ---------------------------------------------------------------------------
# Vector stabilizers
# ---------------------------------------------------------------------------

@dataclass
class StabilizerReport:
    name: str
    vector: List[str]
    norm_sign: int
    dimension: int
    restricted_signature: Tuple[int, int]
    symplectic_form_dimension: int
    symplectic_nondegenerate: bool
    basis: List[ExactMatrix] = field(default_factory=list, repr=False)

    @property
    def restricted_unordered(self) -> Tuple[int, int]:
        return unordered(self.restricted_signature)


def _real_vectors(report: RealFormReport) -> List[List[GaussianRational]]:
    """Candidate vectors of the real 6-space (up to a complex scalar)."""
    candidates = []
    for a in range(6):
        candidates.append([ONE if x == a else ZERO for x in range(6)])
        candidates.append([I if x == a else ZERO for x in range(6)])
    for a, b in combinations(range(6), 2):
        for s in (ONE, -ONE, I):
            candidates.append([ONE if x == a else s if x == b else ZERO for x in range(6)])
    if report.structure is None:
        return [v for v in candidates if all(x.im == 0 for x in v)]
    if report.structure @ conj(report.structure) != ExactMatrix.identity(6, ONE, ZERO):
        raise RealStructureError(f"{report.name}: real structure is not an involution, cannot pick real vectors")
    out = []
    for u in candidates:
        ju = _apply(report.structure, [x.conjugate() for x in u])
        w = [x + y for x, y in zip(u, ju)]
        if any(not x.is_zero() for x in w):
            out.append(w)
    return out


def _pfaffian(m: ExactMatrix) -> GaussianRational:
    return m[0, 1] * m[2, 3] - m[0, 2] * m[1, 3] + m[0, 3] * m[1, 2]


def choose_vector(report: RealFormReport, side: str = "majority") -> Tuple[List[GaussianRational], int]:
    """
    A real vector whose norm has the majority sign (positive) or the minority sign (negative)
    """
    want = 1 if side == "majority" else -1
    for v in _real_vectors(report):
        norm = _hermitian_pairing(report.form, v, v).re
        if norm * want > 0:
            return v, want
    raise RealStructureError(f"{report.name}: no real vector on the {side} side of the form")


def _format_vector(v: Sequence[GaussianRational]) -> List[str]:
    return [f"{str(x)}*e{label}" for x, label in zip(v, PAIR_LABELS) if not x.is_zero()]


def vector_stabilizer(report: RealFormReport, side: str = "majority",
                      vector: Optional[Sequence[GaussianRational]] = None) -> StabilizerReport:
    """
    Stabilizer of a non-isotropic vector of the real 6-space, the form on its complement,
    and the antisymmetric forms on the 4-space that the stabilizer preserves

    Raises:
        RealStructureError: isotropic vector or no suitable vector on the requested side
    """
    if report.wedge is None:
        raise RealStructureError(f"{report.name}: report carries no antisymmetric-square data")
    if vector is None:
        v, sign = choose_vector(report, side)
    else:
        v = list(vector)
        norm = _hermitian_pairing(report.form, v, v).re
        if norm == 0:
            raise RealStructureError(f"{report.name}: vector is isotropic")
        sign = 1 if norm > 0 else -1
    rep = report.wedge
    columns = [realify(ExactMatrix([[x] for x in _apply(a, v)])) for a in rep.matrices]
    coeffs = nullspace([list(r) for r in zip(*columns)], len(columns))
    stab = []
    for c in coeffs:
        total = ExactMatrix.zeros(4, 4, ZERO)
        for ci, m in zip(c, rep.algebra.matrices):
            if ci != 0:
                total = total + m.scale(GaussianRational(ci))
        stab.append(total)

    # complement of v for the Hermitian form
    row = [_hermitian_pairing(report.form, v, [ONE if x == b else ZERO for x in range(6)]) for b in range(6)]
    pivot = next(b for b in range(6) if not row[b].is_zero())
    complement = []
    for b in range(6):
        if b == pivot:
            continue
        z = [ZERO] * 6
        z[b] = ONE
        z[pivot] = -(row[b] / row[pivot])
        complement.append(z)
    gram = ExactMatrix([[_hermitian_pairing(report.form, x, y) for y in complement] for x in complement])
    restricted = hermitian_signature(gram)

    unknowns = _antisymmetric_unknowns(4)

    def equations(omega: ExactMatrix) -> List[Fraction]:
        out: List[Fraction] = []
        for y in stab:
            out += realify(y.T @ omega + omega @ y)
        return out

    forms = _solve(unknowns, 4, equations)
    nondegenerate = any(not _pfaffian(_combine(unknowns, 4, f)).is_zero() for f in forms)
    logger.info(f"Stabilizer in {report.name}: dimension {len(stab)}, complement signature {restricted}")
    return StabilizerReport(report.name, _format_vector(v), sign, len(stab), restricted,
                            len(forms), nondegenerate, stab)


# ---------------------------------------------------------------------------
# Spin(4) at algebra level
# ---------------------------------------------------------------------------

def spin4_split(fixture: GeneratorFixture) -> ClaimReport:
    """
    Even part of a 4-generator Clifford algebra split by the idempotents (1 +- omega)/2
    """
    report = ClaimReport(subject=f"even subalgebra of {fixture.name}")
    gens = fixture.generators
    if len(gens) != 4:
        report.add("four-generators", False, count=len(gens))
        return report
    algebra = gens[0].algebra
    even = even_subalgebra(gens)
    report.add("even-part-8-dimensional", even.dimension == 8, dimension=even.dimension)
    omega = pseudoscalar(gens)
    square = omega * omega
    report.add("pseudoscalar-squares-to-one", square == 1, square=str(square))
    central = all(omega.commutator(x).is_zero() for x in even.basis)
    report.add("pseudoscalar-central-in-even-part", central)
    one = MultiVector.scalar(algebra, 1)
    half = Fraction(1, 2)
    plus, minus = (one + omega) * half, (one - omega) * half
    orthogonal = plus * plus == plus and minus * minus == minus and (plus * minus).is_zero()
    report.add("complementary-idempotents", orthogonal and plus + minus == one)
    corners = []
    for label, e in (("plus", plus), ("minus", minus)):
        corner = span_dimension([e * x * e for x in even.basis], to_coords=MultiVector.coords)
        x1, x2, x3 = gens[0], gens[1], gens[2]
        triple = [e * (x2 * x3) * e, e * (x3 * x1) * e, e * (x1 * x2) * e]
        check = quaternion_relations(triple, e)
        corners.append(corner.dimension)
        report.add(f"{label}-corner-quaternions", corner.dimension == 4 and check.relations,
                   dimension=corner.dimension, relation_sign=check.sign)
    report.add("even-part-is-h-plus-h", sum(corners) == even.dimension, corners=corners)
    return report


def spin4_split_check(fixtures: Optional[Dict[str, GeneratorFixture]] = None,
                      names: Sequence[str] = ("split-cl04", "split-cl40")) -> List[ClaimReport]:
    """
    Spin(4) = SU(2) x SU(2) at algebra level, on the Cl(0,4) and Cl(4,0) generator fixtures
    """
    if fixtures is None:
        fixtures = fixture_loader.generator_fixtures()
    return [spin4_split(fixtures[name]) for name in names]
