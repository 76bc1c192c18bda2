"""
Verification suites.

Every suite is a list of independent checks. A check returns (passed, summary, witness);
the runner turns it into a CheckRecord, and an exception inside a check becomes a FAIL
record instead of stopping the suite.
"""
import logging
import time
from dataclasses import dataclass
from decimal import Decimal
from enum import Enum
from fractions import Fraction
from functools import cache, partial
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.core.config import settings
from app.core.exceptions import CheckSkipped, FixtureError, ToolkitError, UnknownSuiteError
from app.models.schemas import CheckRecord, CheckStatus, ClaimReport, CliffordFixture, SuiteOptions, VerificationReport
from app.services import clifford, finfield, klein, repkit
from app.services.exactmath import Cyclotomic
from app.services.fixture_loader import (
    ACCEPTANCE_FILE, CLIFFORD_FILE, PARTICLE_FILES, REAL_TABLES_FILE, FixtureLoader, fixture_loader, resolve_path,
)
from app.services.group_registry import GroupRegistry, group_registry
from app.services.masspred import ConstantsTable, parse_exact, ratio_checks, tau_prediction
from app.services.permgroup import (
    GroupAction, automorphism_count, class_split_under, coset_action, extend_homomorphism, from_cycles,
    is_even, natural_action, orbit_partition, orbit_refinement, pair_action, perm_identity, perm_mul,
    subgroup_classes,
)
from app.services.table_cache import TableCache
from app.utils.helpers import ContentHasher, DecimalFormatter

logger = logging.getLogger(__name__)

Outcome = Tuple[bool, str, Dict[str, Any]]

SUITES = ("clifford", "groups", "repkit", "finfield", "klein", "mass")

GRADE_DIMENSIONS = [1, 6, 15, 10, 10, 15, 6, 1]
IDEMPOTENT_PAIRS = (("idempotent-plus", "idempotent-minus"),
                    ("idempotent-gamma0-plus", "idempotent-gamma0-minus"))
SPIN4_FIXTURES = ("split-cl04", "split-cl40")

BINARY_TETRAHEDRAL_CENSUS = {1: 1, 2: 1, 3: 8, 4: 6, 6: 8}
ALT6_SUBGROUP_CLASSES = {60: 2, 24: 2, 6: 2, 8: 1}

KLEIN_EXPECTATIONS = {
    "sl4r": {"signature": (3, 3), "side": "minority", "restricted": (3, 2), "group": "Spin(3,3) = SL(4,R)"},
    "su4": {"signature": (6, 0), "side": "majority", "restricted": (5, 0), "group": "Spin(6) = SU(4)"},
    "su22": {"signature": (4, 2), "side": "minority", "restricted": (4, 1), "group": "Spin(4,2) = SU(2,2)"},
    "sl2h": {"signature": (5, 1), "side": "majority", "restricted": (4, 1), "group": "Spin(5,1) = SL(2,H)"},
}

# automorphism of the cyclotomic values fixing cube roots of unity and negating sqrt(5)
SQRT5_GALOIS = 37


@dataclass
class Check:
    id: str
    citation: str
    run: Callable[[], Outcome]


def plain(value: Any) -> Any:
    """Witness data as JSON-ready values; exact numbers become strings."""
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    if isinstance(value, (Fraction, Decimal, Cyclotomic)):
        return str(value)
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return sorted(plain(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    return str(value)


def claim_outcome(report: ClaimReport) -> Outcome:
    """One record for a whole ClaimReport, claims listed in the witness."""
    witness = {c.name: {"passed": c.passed, **c.witness} for c in report.claims}
    if report.passed:
        summary = f"{len(report.claims)} claims hold"
    else:
        summary = "failed: " + ", ".join(report.failures)
    return report.passed, summary, witness


def _degrees(T: repkit.CharacterTable, mult: Dict[str, int]) -> List[int]:
    return sorted(T[name].degree for name, m in mult.items() for _ in range(m))


class VerificationService:
    """
    Builds and runs the verification suites over the shipped fixtures
    """

    def __init__(self, registry: GroupRegistry = group_registry, loader: FixtureLoader = fixture_loader):
        self.registry = registry
        self.loader = loader
        self._caches: Dict[str, TableCache] = {}

    @staticmethod
    def suite_names() -> List[str]:
        return list(SUITES) + ["all"]

    def table_cache(self, cache_dir: Optional[str] = None) -> TableCache:
        key = cache_dir or settings.cache_dir
        if key not in self._caches:
            self._caches[key] = TableCache(key, self.registry)
        return self._caches[key]

    # -- running -------------------------------------------------------

    def run_suite(self, name: str, options: Optional[SuiteOptions] = None) -> VerificationReport:
        """
        Run a suite and collect its records sorted by id

        Raises:
            UnknownSuiteError: name is not a suite id
            FixtureError: a data file the suite is built from is missing, or the fixture filter names nothing
        """
        if name not in self.suite_names():
            raise UnknownSuiteError(f"unknown suite {name!r}; choose one of {', '.join(self.suite_names())}")
        options = options or SuiteOptions()
        seed = options.seed if options.seed is not None else settings.default_seed
        started = time.perf_counter()
        checks: List[Check] = []
        hashes: Dict[str, str] = {}
        for suite in (SUITES if name == "all" else (name,)):
            builder = getattr(self, f"_{suite}_checks")
            suite_checks, suite_hashes = builder(options, seed)
            checks.extend(suite_checks)
            hashes.update(suite_hashes)
        records = sorted((self.execute(check) for check in checks), key=lambda r: r.id)
        report = VerificationReport(
            suite=name,
            toolkit_version=settings.version,
            seed=seed,
            input_hashes=hashes,
            records=records,
            elapsed_seconds=round(time.perf_counter() - started, 3),
        )
        counts = report.counts()
        logger.info(f"Suite {name} finished: {counts['PASS']} PASS, {counts['FAIL']} FAIL, "
                    f"{counts['SKIP']} SKIP in {report.elapsed_seconds}s")
        return report

    @staticmethod
    def execute(check: Check) -> CheckRecord:
        try:
            passed, summary, witness = check.run()
        except CheckSkipped as e:
            return CheckRecord(id=check.id, citation=check.citation, status=CheckStatus.SKIP, summary=str(e))
        except Exception as e:
            logger.error(f"Check {check.id} failed: {str(e)}")
            return CheckRecord(id=check.id, citation=check.citation, status=CheckStatus.FAIL,
                               summary=f"{type(e).__name__}: {str(e)}",
                               witness={"error": type(e).__name__, "message": str(e)})
        status = CheckStatus.PASS if passed else CheckStatus.FAIL
        return CheckRecord(id=check.id, citation=check.citation, status=status, summary=summary,
                           witness=plain(witness))

    # -- clifford ------------------------------------------------------

    def _clifford_checks(self, options: SuiteOptions, seed: int):
        fixtures = self.loader.clifford_file().fixtures
        if options.fixture:
            fixtures = [f for f in fixtures if f.name == options.fixture]
            if not fixtures:
                raise FixtureError(f"unknown Clifford fixture {options.fixture!r}")
        checks: List[Check] = []
        for fix in fixtures:
            checks.extend(self._fixture_checks(fix))
        if not options.fixture:
            names = {f.name for f in fixtures}
            for plus, minus in IDEMPOTENT_PAIRS:
                if plus in names and minus in names:
                    checks.append(Check(f"clifford.{plus}.complement",
                                        f"{plus} and {minus} are complementary orthogonal idempotents",
                                        partial(self._idempotent_pair, plus, minus)))
            trials = max(settings.property_trials, 1000)
            checks.append(Check("clifford.blade-associativity",
                                f"blade products are associative on {trials} random triples",
                                partial(self._blade_associativity, seed, trials)))
            checks.append(Check("clifford.blade-closure",
                                "every product of two basis blades is a signed basis blade",
                                self._blade_closure))
        return checks, {CLIFFORD_FILE: self.loader.input_hash(CLIFFORD_FILE)}

    def _fixture_checks(self, fix: CliffordFixture) -> List[Check]:
        prefix = f"clifford.{fix.name}"
        if fix.kind == "commuting":
            return [Check(f"{prefix}.commuting", fix.claim, partial(self._commuting, fix))]
        if fix.kind == "lie":
            return [Check(f"{prefix}.lie", fix.claim, partial(self._lie, fix))]
        if fix.kind == "idempotent":
            return [Check(f"{prefix}.idempotent", fix.claim, partial(self._idempotent, fix))]
        checks = [
            Check(f"{prefix}.generators", f"{', '.join(fix.generators)} generate {fix.label}",
                  partial(self._generators, fix)),
            Check(f"{prefix}.invariance", f"pseudoscalar of {fix.label} commutes with its bivectors",
                  partial(self._invariance, fix)),
        ]
        if fix.claimed_pseudoscalar:
            checks.append(Check(f"{prefix}.pseudoscalar",
                                f"product of the generators is {fix.claimed_pseudoscalar} up to sign",
                                partial(self._pseudoscalar, fix)))
        if len(fix.generators) == 5:
            checks.append(Check(f"{prefix}.central-pseudoscalar",
                                "the pseudoscalar of the Dirac set is central",
                                partial(self._central_pseudoscalar, fix)))
        if len(fix.generators) == 6:
            checks.append(Check(f"{prefix}.grades",
                                "grades split as 1+6+15+10+10+15+6+1",
                                partial(self._grades, fix)))
        return checks

    def _parse(self, fix: CliffordFixture, texts: Sequence[str]) -> List[clifford.MultiVector]:
        algebra = self.loader.algebra_of(fix)
        return [clifford.parse_element(algebra, t) for t in texts]

    def _generators(self, fix: CliffordFixture) -> Outcome:
        report = clifford.verify_generators(self.loader.to_generator_fixture(fix))
        summary = f"signature {report.signature}, dimension {report.generated_dimension}"
        if report.failures:
            summary += "; " + "; ".join(report.failures)
        return report.passed, summary, {
            "squares": report.squares,
            "signature": report.signature,
            "claimed_signature": fix.claimed_signature,
            "pairwise_anticommute": report.pairwise_anticommute,
            "generated_dimension": report.generated_dimension,
            "failures": report.failures,
        }

    def _invariance(self, fix: CliffordFixture) -> Outcome:
        gens = self.loader.to_generator_fixture(fix).generators
        invariant = clifford.pseudoscalar_invariance(gens)
        return invariant, "invariant" if invariant else "pseudoscalar moved by a bivector", {
            "pseudoscalar": str(clifford.pseudoscalar(gens)),
        }

    def _pseudoscalar(self, fix: CliffordFixture) -> Outcome:
        gf = self.loader.to_generator_fixture(fix)
        omega = clifford.pseudoscalar(gf.generators)
        ratio = omega.ratio_to(gf.claimed_pseudoscalar)
        up_to_sign = ratio in (1, -1)
        sign_recorded = fix.pseudoscalar_sign is None or ratio == fix.pseudoscalar_sign
        return up_to_sign and sign_recorded, f"product = {omega}", {
            "product": str(omega),
            "claimed": fix.claimed_pseudoscalar,
            "sign": ratio,
            "recorded_sign": fix.pseudoscalar_sign,
        }

    def _central_pseudoscalar(self, fix: CliffordFixture) -> Outcome:
        gf = self.loader.to_generator_fixture(fix)
        omega = clifford.pseudoscalar(gf.generators)
        imaginary = clifford.parse_element(gf.algebra, "i")
        sign = omega.ratio_to(imaginary)
        span = clifford.generated_subalgebra(gf.generators)
        central = all(omega.commutator(x).is_zero() for x in span.basis)
        return central and sign in (1, -1), f"pseudoscalar {omega}, central in {span.dimension} dimensions", {
            "pseudoscalar": str(omega),
            "sign_of_i": sign,
            "dimension": span.dimension,
        }

    def _grades(self, fix: CliffordFixture) -> Outcome:
        report = clifford.grade_decomposition(self.loader.to_generator_fixture(fix).generators)
        summary = "+".join(str(d) for d in report.dimensions)
        return report.dimensions == GRADE_DIMENSIONS, summary, {
            "dimensions": report.dimensions,
            "grade3_eigenvalues": report.eigenvalue_labels,
            "pseudoscalar_square": report.omega_square,
        }

    def _commuting(self, fix: CliffordFixture) -> Outcome:
        left, right = self._parse(fix, fix.left), self._parse(fix, fix.right)
        commute = clifford.commuting_subalgebras(left, right)
        dims = [clifford.lie_closure(left).dimension, clifford.lie_closure(right).dimension]
        expected = fix.expected_lie_dimension
        passed = commute and (expected is None or dims == [expected, expected])
        return passed, f"commute: {commute}, Lie dimensions {dims}", {
            "commute": commute,
            "lie_dimensions": dims,
            "expected_lie_dimension": expected,
        }

    def _lie(self, fix: CliffordFixture) -> Outcome:
        elements = self._parse(fix, fix.elements)
        dim = clifford.lie_closure(elements).dimension
        passed = fix.expected_lie_dimension is None or dim == fix.expected_lie_dimension
        witness: Dict[str, Any] = {"dimension": dim, "expected": fix.expected_lie_dimension}
        summary = f"Lie closure of dimension {dim}"
        if fix.adjoin:
            enlarged = clifford.lie_closure(elements + self._parse(fix, fix.adjoin)).dimension
            passed = passed and (fix.expected_with_adjoined is None or enlarged == fix.expected_with_adjoined)
            witness.update(adjoined=fix.adjoin, enlarged_dimension=enlarged,
                           expected_enlarged=fix.expected_with_adjoined)
            summary += f", {enlarged} after adjoining {', '.join(fix.adjoin)}"
        return passed, summary, witness

    def _idempotent(self, fix: CliffordFixture) -> Outcome:
        if not fix.idempotent:
            raise FixtureError(f"{fix.name} names no idempotent")
        algebra = self.loader.algebra_of(fix)
        e = clifford.parse_element(algebra, fix.idempotent)
        report = clifford.idempotent_split(e, self._parse(fix, fix.generators), self._parse(fix, fix.triple))
        expected = fix.expected_corner_dimension
        passed = report.projected_relations and (expected is None or report.corner_dimension == expected)
        return passed, f"corner of dimension {report.corner_dimension}", {
            "corner_dimension": report.corner_dimension,
            "projected_relations": report.projected_relations,
            "relation_sign": report.relation_sign,
            "triple_in_corner": report.triple_in_corner,
        }

    def _idempotent_pair(self, plus: str, minus: str) -> Outcome:
        e1, e2 = (clifford.parse_element(self.loader.algebra_of(f), f.idempotent)
                  for f in (self.loader.clifford_fixture(plus), self.loader.clifford_fixture(minus)))
        total = e1 + e2 == 1
        orthogonal = (e1 * e2).is_zero() and (e2 * e1).is_zero()
        return total and orthogonal, f"sum is one: {total}, orthogonal: {orthogonal}", {
            "sum_is_one": total, "orthogonal": orthogonal,
        }

    @staticmethod
    def _blade_associativity(seed: int, trials: int) -> Outcome:
        rng = np.random.default_rng(seed)
        algebras = {"gamma": clifford.GAMMA_ALGEBRA, "cl06": clifford.abstract_algebra((-1,) * 6)}
        failures = []
        for label, algebra in algebras.items():
            blades = algebra.blades()
            for x, y, z in rng.integers(len(blades), size=(trials, 3)):
                a, b, c = blades[x], blades[y], blades[z]
                s1, ab = algebra.blade_mul(a, b)
                s2, left = algebra.blade_mul(ab, c)
                s3, bc = algebra.blade_mul(b, c)
                s4, right = algebra.blade_mul(a, bc)
                if (s1 * s2, left) != (s3 * s4, right):
                    failures.append(f"{label}: {algebra.label(a)}, {algebra.label(b)}, {algebra.label(c)}")
        return not failures, f"{trials} triples per algebra", {"algebras": list(algebras), "failures": failures[:5]}

    @staticmethod
    def _blade_closure() -> Outcome:
        algebra = clifford.GAMMA_ALGEBRA
        blades = algebra.blades()
        members = set(blades)
        closed = all(s in (1, -1) and r in members
                     for x in blades for y in blades for s, r in [algebra.blade_mul(x, y)])
        return closed, f"{len(blades)} blades", {"blades": len(blades)}

    # -- groups --------------------------------------------------------

    def _groups_checks(self, options: SuiteOptions, seed: int):
        reg = self.registry

        @cache
        def alt6_search(order: int):
            search = subgroup_classes(reg.get("alt6"), order)
            if search.partial:
                logger.error(f"Subgroup search of order {order} in Alt(6) stopped at the cap")
            return search

        def binary_tetrahedral() -> Outcome:
            G = reg.get("2alt4-quaternion")
            quaternions = {reg.quaternion_of(g) for g in G.elements}
            return G.order == 24 and len(quaternions) == 24, f"order {G.order}", {
                "order": G.order, "generators": ["i", "(-1+i+j+k)/2"],
            }

        def census() -> Outcome:
            found = reg.get("2alt4-quaternion").classes.order_census()
            return found == BINARY_TETRAHEDRAL_CENSUS, f"census {found}", {"census": found}

        def relations() -> Outcome:
            e = reg.get("2alt4-quaternion").identity
            word = partial(reg.evaluate_word, "2alt4-quaternion")
            results = {
                "a^4 = 1": word("a4") == e,
                "b^3 = 1": word("b3") == e,
                "(ab)^3 = 1": word("ababab") == e,
                "a^2 b = b a^2": word("a2b") == word("ba2"),
                "a^2 != 1": word("a2") != e,
            }
            return all(results.values()), ", ".join(k for k, v in results.items() if v), results

        def automorphisms() -> Outcome:
            count = automorphism_count(reg.get("2alt4-quaternion"))
            return count == 24, f"|Aut| = {count}", {"automorphisms": count}

        def sym4_classes() -> Outcome:
            data = reg.get("sym4").classes
            pairs = sorted(zip(data.orders, data.sizes))
            even = sorted(s for r, s in zip(data.representatives, data.sizes) if is_even(r))
            odd = sorted(s for r, s in zip(data.representatives, data.sizes) if not is_even(r))
            passed = pairs == [(1, 1), (2, 3), (2, 6), (3, 8), (4, 6)] and even == [1, 3, 8] and odd == [6, 6]
            return passed, f"even {even}, odd {odd}", {"order_size": pairs, "even": even, "odd": odd}

        def sym4_split() -> Outcome:
            G = reg.get("sym4")
            last = G.degree - 1
            S = G.subgroup_from_elements([g for g in G.elements if g[last] == last], name="Stab(T)")
            split = class_split_under(G, S)
            expected = sorted([[1], [3], [2, 6], [3, 3], [6]])
            return sorted(split) == expected, " + ".join(
                str(s[0]) if len(s) == 1 else "(" + "+".join(map(str, s)) + ")" for s in split), {
                "split": split, "stabilizer_order": S.order,
            }

        def sym4_natural() -> Outcome:
            G = reg.get("sym4")
            T = self.table_cache(options.cache_dir).get("sym4")
            mult = repkit.decompose_permutation_character(natural_action(G), T)
            trivial = T.names[0]
            passed = _degrees(T, mult) == [1, 3] and mult.get(trivial) == 1
            return passed, repkit.format_multiplicities(mult), {"multiplicities": mult}

        def class_equation() -> Outcome:
            bad = []
            for name in reg.names():
                G = reg.get(name)
                sizes = G.classes.sizes
                if sum(sizes) != G.order or any(G.order % s for s in sizes):
                    bad.append(name)
            return not bad, f"{len(reg.names())} groups", {"failing": bad}

        def alt6_classes() -> Outcome:
            counts = {order: alt6_search(order).count for order in ALT6_SUBGROUP_CLASSES}
            partial_orders = [o for o in ALT6_SUBGROUP_CLASSES if alt6_search(o).partial]
            passed = counts == ALT6_SUBGROUP_CLASSES and not partial_orders
            return passed, ", ".join(f"order {o}: {c}" for o, c in counts.items()), {
                "classes": counts, "partial": partial_orders,
                "closures": {o: alt6_search(o).closures for o in ALT6_SUBGROUP_CLASSES},
            }

        def alt6_degrees() -> Outcome:
            G = reg.get("alt6")
            rng = np.random.default_rng(seed)
            degrees, sound = [], True
            for order in (60, 24, 36):
                for H in alt6_search(order).representatives:
                    act = coset_action(G, H)
                    degrees.append(act.degree)
                    orbit_stabilizer = act.degree * act.stabilizer_order(act.points[0]) == G.order
                    sound = sound and act.is_transitive() and act.is_homomorphism(rng) and orbit_stabilizer
            passed = sorted(degrees) == [6, 6, 10, 15, 15] and sound
            return passed, f"degrees {sorted(degrees)}", {"degrees": degrees, "transitive_homomorphisms": sound}

        def alt6_sylow() -> Outcome:
            search = alt6_search(8)
            degrees = [coset_action(reg.get("alt6"), H).degree for H in search.representatives]
            passed = search.count == 1 and degrees == [45]
            return passed, f"{search.count} class(es) of order 8, degrees {degrees}", {
                "classes": search.count, "degrees": degrees,
            }

        def alt6_alt5_inequivalent() -> Outcome:
            act = natural_action(reg.get("alt6"))
            shapes = sorted(orbit_partition(act, H) for H in alt6_search(60).representatives)
            return shapes == [[1, 5], [6]], f"orbits on 6 letters {shapes}", {"orbits_on_letters": shapes}

        def alt6_sym3_orbits() -> Outcome:
            act = pair_action(reg.get("alt6"))
            shapes = [orbit_partition(act, H) for H in alt6_search(6).representatives]
            return [1, 2, 3, 3, 6] in shapes, f"orbit sizes per class {shapes}", {"orbit_sizes": shapes}

        def alt6_alt5_refinement() -> Outcome:
            act = pair_action(reg.get("alt6"))
            found = []
            for H in alt6_search(60).representatives:
                if orbit_partition(act, H) != [5, 10]:
                    continue
                for S in subgroup_classes(H, 6).representatives:
                    found.append(orbit_refinement(act, H, S))
            return [[2, 3], [1, 3, 6]] in found, f"refinements {found}", {"refinements": found}

        checks = [
            Check("groups.2alt4.order", "i and (-1+i+j+k)/2 generate a group of 24 unit quaternions",
                  binary_tetrahedral),
            Check("groups.2alt4.census", "element orders of 2.Alt(4) are 1, 2, 3x8, 4x6, 6x8", census),
            Check("groups.2alt4.relations", "a^4 = b^3 = (ab)^3 = 1 and a^2 b = b a^2", relations),
            Check("groups.2alt4.automorphisms", "the automorphism group of 2.Alt(4) has order 24", automorphisms),
            Check("groups.sym4.classes", "Sym(4) classes 1, 3, 8, 6, 6 with parity 1+3+8 even, 6+6 odd",
                  sym4_classes),
            Check("groups.sym4.point-stabilizer-split", "Sym(3) splits the classes of Sym(4) as 1+3+(2+6)+(3+3)+6",
                  sym4_split),
            Check("groups.sym4.natural-character", "the 4-point permutation character of Sym(4) is 1 + 3",
                  sym4_natural),
            Check("groups.registry.class-equation", "class sizes divide and sum to the order in every group",
                  class_equation),
            Check("groups.alt6.subgroup-classes", "Alt(6) has two classes each of Alt(5), Sym(4), Sym(3) "
                  "and one of Sylow 2-subgroups", alt6_classes),
            Check("groups.alt6.coset-degrees", "coset actions of Alt(6) on 6, 15, 10, 15 and 6 points",
                  alt6_degrees),
            Check("groups.alt6.sylow-45", "the Sylow 2-subgroup gives the transitive action on 45 points",
                  alt6_sylow),
            Check("groups.alt6.alt5-classes-inequivalent", "the two Alt(5) classes give different 6-point actions",
                  alt6_alt5_inequivalent),
            Check("groups.alt6.sym3-orbits", "some Sym(3) acts on the 15 pairs as 1+2+3+3+6", alt6_sym3_orbits),
            Check("groups.alt6.alt5-refinement", "some Alt(5) acts on the 15 pairs as (2+3)+(1+3+6)",
                  alt6_alt5_refinement),
        ]
        return checks, {}

    # -- repkit --------------------------------------------------------

    def _repkit_checks(self, options: SuiteOptions, seed: int):
        reg = self.registry
        tables = self.table_cache(options.cache_dir)
        quaternion_group = "2alt4-quaternion"

        @cache
        def real_fixture() -> Dict[str, Any]:
            fixture = self.loader.real_tables().get(quaternion_group)
            if fixture is None:
                raise FixtureError(f"{REAL_TABLES_FILE} has no table for {quaternion_group}")
            return fixture

        @cache
        def named_reals():
            T = tables.get(quaternion_group)
            fixture = real_fixture()
            columns = [T.classes.class_of(reg.evaluate_word(quaternion_group, w)) for w in fixture["words"]]
            reals = repkit.name_real_characters(T, repkit.real_characters(T), columns, fixture["rows"])
            return columns, reals

        def degrees() -> Outcome:
            T = tables.get(quaternion_group)
            found = sorted(T.degrees)
            squares = sum(d * d for d in found)
            orthogonal = T.check_orthogonality(columns=True)
            passed = found == [1, 1, 1, 2, 2, 2, 3] and squares == 24 and orthogonal
            return passed, f"degrees {T.degrees}, sum of squares {squares}", {
                "degrees": T.degrees, "prime": T.prime, "orthogonal": orthogonal,
            }

        def indicators() -> Outcome:
            T = tables.get(quaternion_group)
            ind = repkit.fs_indicator(T)
            by_degree: Dict[int, List[int]] = {}
            for ch in T.characters:
                by_degree.setdefault(ch.degree, []).append(ind[ch.name])
            found = {d: sorted(v) for d, v in by_degree.items()}
            return found == {1: [0, 0, 1], 2: [-1, 0, 0], 3: [1]}, f"indicators {ind}", {"indicators": ind}

        def real_table() -> Outcome:
            columns, reals = named_reals()
            rows = real_fixture()["rows"]
            observed = {r.name: [r.values[c] for c in columns] for r in reals}
            passed = set(observed) == set(rows) and all(observed[n] == list(rows[n]) for n in rows)
            return passed, ", ".join(sorted(observed)), {"words": real_fixture()["words"], "rows": observed}

        def real_degrees() -> Outcome:
            T = tables.get(quaternion_group)
            _, reals = named_reals()
            centre = repkit.central_involution_class(T)
            bosonic = sorted(r.degree for r in reals if r.values[centre].to_fraction() > 0)
            fermionic = sorted(r.degree for r in reals if r.values[centre].to_fraction() < 0)
            return bosonic == [1, 2, 3] and fermionic == [4, 4], f"bosonic {bosonic}, fermionic {fermionic}", {
                "bosonic": bosonic, "fermionic": fermionic,
            }

        def wedderburn_2alt4() -> Outcome:
            T = tables.get(quaternion_group)
            summands = repkit.real_wedderburn(T)
            label, lie = repkit.wedderburn_label(summands), repkit.lie_label(summands)
            complex_parts = repkit.complex_wedderburn(T)
            passed = (label == "R + C + M3(R) + H + M2(C)"
                      and lie == "U(1) × SL(3,R) × SU(2) × SL(2,C)"
                      and sorted(complex_parts) == sorted(["C"] * 3 + ["M2(C)"] * 3 + ["M3(C)"]))
            return passed, f"{label}; {lie}", {"real": label, "lie": lie, "complex": " + ".join(complex_parts)}

        def regular() -> Outcome:
            G = reg.get(quaternion_group)
            _, reals = named_reals()
            mult = repkit.decompose_permutation_character(natural_action(G), tables.get(quaternion_group),
                                                          real_form=True, reals=reals)
            expected = real_fixture()["regular_decomposition"]
            return mult == expected, repkit.format_multiplicities(mult), {"multiplicities": mult}

        def signed() -> Outcome:
            G = reg.get(quaternion_group)
            fixture = real_fixture()
            points = fixture["signed_points"]
            images = [from_cycles([tuple(c) for c in fixture["signed_generators"][name]], points)
                      for name in reg.generator_names(quaternion_group)]
            phi = extend_homomorphism(G, images, perm_mul, perm_identity(len(points)))
            if phi is None:
                return False, "generator images do not define an action", {}
            act = GroupAction(G, range(len(points)), lambda g, x: phi[g][x], name="signed points")
            _, reals = named_reals()
            mult = repkit.decompose_permutation_character(act, tables.get(quaternion_group),
                                                          real_form=True, reals=reals)
            return mult == fixture["signed_decomposition"], repkit.format_multiplicities(mult), {
                "multiplicities": mult,
            }

        def right_multiplication() -> Outcome:
            T = tables.get(quaternion_group)
            values = []
            for rep in T.classes.representatives:
                m = reg.quaternion_of(rep).right_matrix()
                values.append(Cyclotomic.rational(sum(m[k][k] for k in range(4))))
            _, reals = named_reals()
            matches = [r.name for r in reals if r.values == values]
            return matches == ["R"], f"character matches {matches}", {"values": values}

        def wedderburn_2sym4() -> Outcome:
            summands = repkit.real_wedderburn(tables.get("2sym4"))
            label, lie = repkit.wedderburn_label(summands), repkit.lie_label(summands)
            passed = (label == "2R + M2(R) + 2M3(R) + 2H + M2(H)"
                      and lie == "SL(2,R) × SL(3,R) × SL(3,R) × SU(2) × SU(2) × SL(2,H)")
            return passed, f"{label}; {lie}", {"real": label, "lie": lie}

        def wedderburn_2alt5() -> Outcome:
            summands = repkit.real_wedderburn(tables.get("2alt5"))
            real = sorted(s.size for s in summands if s.division == "R")
            quaternionic = sorted(s.size for s in summands if s.division == "H")
            total = sum(s.real_dimension for s in summands)
            passed = real == [1, 3, 3, 4, 5] and quaternionic == [1, 1, 2, 3] and total == 120
            return passed, repkit.wedderburn_label(summands), {
                "real_sizes": real, "quaternionic_sizes": quaternionic, "total": total,
                "lie": repkit.lie_label(summands),
            }

        def registry_dimensions() -> Outcome:
            labels, bad = {}, []
            for name in reg.names():
                summands = repkit.real_wedderburn(tables.get(name))
                labels[name] = repkit.wedderburn_label(summands)
                if sum(s.real_dimension for s in summands) != reg.get(name).order:
                    bad.append(name)
            return not bad, f"{len(labels)} groups", {"labels": labels, "failing": bad}

        def fours(T: repkit.CharacterTable) -> List[repkit.Character]:
            found = [ch for ch in T.characters if ch.degree == 4]
            if len(found) != 2:
                raise CheckSkipped(f"expected two characters of degree 4 in {T.group.name}, found {len(found)}")
            return found

        def wedge_squares() -> Outcome:
            T = tables.get("sl29")
            found, passed = {}, True
            for ch in fours(T):
                sym, alt = repkit.sym_alt_square(T, ch.values)
                sym_mult, alt_mult = T.decompose(sym), T.decompose(alt)
                found[ch.name] = {"alt": repkit.format_multiplicities(alt_mult),
                                  "sym": repkit.format_multiplicities(sym_mult)}
                passed = passed and _degrees(T, alt_mult) == [1, 5] and _degrees(T, sym_mult) == [10]
            return passed, "; ".join(f"{n}: L2 = {v['alt']}, S2 = {v['sym']}" for n, v in found.items()), found

        def five_restriction() -> Outcome:
            G, H = tables.get("sl29"), tables.get("2alt5")
            found = {ch.name: repkit.branch(G, ch.values, H) for ch in G.characters if ch.degree == 5}
            passed = any(_degrees(H, b.multiplicities) == [1, 4] for b in found.values())
            return passed, "; ".join(f"{n} -> {b.describe()}" for n, b in found.items()), {
                n: b.multiplicities for n, b in found.items()
            }

        def ten_restriction() -> Outcome:
            G, H = tables.get("sl29"), tables.get("2alt5")
            found = {}
            for ch in fours(G):
                sym, _ = repkit.sym_alt_square(G, ch.values)
                found[ch.name] = repkit.branch(G, sym, H)
            # only the 4 that splits over 2.Alt(5) gives two distinct threes
            passed = any(_degrees(H, b.multiplicities) == [3, 3, 4]
                         and len([n for n in b.multiplicities if H[n].degree == 3]) == 2 for b in found.values())
            return passed, "; ".join(f"S2({n}) -> {b.describe()}" for n, b in found.items()), {
                n: b.multiplicities for n, b in found.items()
            }

        def tensor_fours() -> Outcome:
            G, H = tables.get("sl29"), tables.get("2alt5")
            a, b = fours(G)
            product = repkit.tensor(a.values, b.values)
            over_g = G.decompose(product)
            result = repkit.branch(G, product, H)
            threes = [n for n in result.multiplicities if H[n].degree == 3]
            passed = (_degrees(G, over_g) == [8, 8] and len(over_g) == 2
                      and _degrees(H, result.multiplicities) == [3, 3, 5, 5] and len(threes) == 2)
            return passed, f"{repkit.format_multiplicities(over_g)} -> {result.describe()}", {
                "over_2alt6": over_g, "over_2alt5": result.multiplicities,
            }

        def irreducible_four() -> Outcome:
            G, H = tables.get("sl29"), tables.get("2alt5")
            found, passed = {}, False
            for ch in fours(G):
                result = repkit.branch(G, ch.values, H)
                entry: Dict[str, Any] = {"restriction": result.describe()}
                if _degrees(H, result.multiplicities) == [4]:
                    _, alt = repkit.sym_alt_square(H, repkit.restrict(G, ch.values, H))
                    alt_mult = H.decompose(alt)
                    entry["alt"] = repkit.format_multiplicities(alt_mult)
                    passed = passed or _degrees(H, alt_mult) == [1, 5]
                found[ch.name] = entry
            return passed, "; ".join(f"{n} -> {e['restriction']}" for n, e in found.items()), found

        def alt5_sym_square() -> Outcome:
            T = tables.get("alt5")
            four = next(ch for ch in T.characters if ch.degree == 4)
            sym, _ = repkit.sym_alt_square(T, four.values)
            mult = T.decompose(sym)
            return _degrees(T, mult) == [1, 4, 5], repkit.format_multiplicities(mult), {"multiplicities": mult}

        @cache
        def triple_cover_threes():
            T = tables.get("3alt6-gf4")
            centre = next(j for j, (o, s) in enumerate(zip(T.classes.orders, T.classes.sizes)) if o == 3 and s == 1)
            faithful = [ch for ch in T.characters if ch.degree == 3 and not ch.values[centre] == 3]
            if not faithful:
                raise CheckSkipped("3.Alt(6) has no faithful character of degree 3")
            a = faithful[0]
            b = T.find(a.galois(SQRT5_GALOIS))
            return T, a, b

        def galois_partner() -> Outcome:
            T, a, b = triple_cover_threes()
            conj = T.find(a.conjugate())
            passed = b is not None and b not in (a.name, conj)
            return passed, f"3A = {a.name}, 3B = {b}", {
                "3A": a.name, "3A*": conj, "3B": b, "automorphism": f"zeta -> zeta^{SQRT5_GALOIS}",
            }

        def a_times_conj_a() -> Outcome:
            T, a, _ = triple_cover_threes()
            mult = T.decompose(repkit.tensor(a.values, a.conjugate()))
            return _degrees(T, mult) == [1, 8], repkit.format_multiplicities(mult), {"multiplicities": mult}

        def a_times_conj_b() -> Outcome:
            T, a, b = triple_cover_threes()
            if b is None:
                raise CheckSkipped("no Galois partner of 3A in the table")
            mult = T.decompose(repkit.tensor(a.values, T[b].conjugate()))
            return _degrees(T, mult) == [9] and sum(mult.values()) == 1, repkit.format_multiplicities(mult), {
                "multiplicities": mult,
            }

        checks = [
            Check("repkit.2alt4.degrees", "2.Alt(4) has irreducible degrees 1, 1, 1, 3, 2, 2, 2", degrees),
            Check("repkit.2alt4.indicators", "indicators: real, complex and quaternionic types of 2.Alt(4)",
                  indicators),
            Check("repkit.2alt4.real-table", "the five real characters R, S, T, U, V of 2.Alt(4)", real_table),
            Check("repkit.2alt4.real-degrees", "real irreducibles of dimensions 1, 2, 3 and 4, 4", real_degrees),
            Check("repkit.2alt4.wedderburn", "R + C + M3(R) + H + M2(C), U(1) x SL(3,R) x SU(2) x SL(2,C)",
                  wedderburn_2alt4),
            Check("repkit.2alt4.regular", "the regular representation is T+U+3V+R+2S", regular),
            Check("repkit.2alt4.signed-points", "the signed 8-point representation is S+T+V", signed),
            Check("repkit.2alt4.right-multiplication", "right multiplication on H has the character R",
                  right_multiplication),
            Check("repkit.2sym4.wedderburn", "2R + M2(R) + 2M3(R) + 2H + M2(H)", wedderburn_2sym4),
            Check("repkit.2alt5.wedderburn", "real degrees 1, 3, 3, 4, 5 and quaternionic 1, 1, 2, 3",
                  wedderburn_2alt5),
            Check("repkit.registry.wedderburn-dimensions", "Wedderburn dimensions add up to the group order",
                  registry_dimensions),
            Check("repkit.2alt6.wedge-squares", "each 4 of 2.Alt(6) has alternating square 1+5 and symmetric "
                  "square an irreducible 10", wedge_squares),
            Check("repkit.2alt6.five-restriction", "5 restricts to 2.Alt(5) as 1+4", five_restriction),
            Check("repkit.2alt6.ten-restriction", "10 restricts to 2.Alt(5) as 3a+3b+4", ten_restriction),
            Check("repkit.2alt6.tensor-fours", "4 x 4' = 8a+8b, restricting as 3a+5+3b+5", tensor_fours),
            Check("repkit.2alt6.irreducible-four", "a 4 of 2.Alt(6) stays irreducible on 2.Alt(5) with "
                  "alternating square 1+5", irreducible_four),
            Check("repkit.alt5.sym-square", "the symmetric square of the 4 of Alt(5) is 1+4+5", alt5_sym_square),
            Check("repkit.3alt6.galois-partner", "3A and 3B differ in the sign of sqrt(5)", galois_partner),
            Check("repkit.3alt6.a-times-conj-a", "3A x 3A* = 1 + 8", a_times_conj_a),
            Check("repkit.3alt6.a-times-conj-b", "3A x 3B* is an irreducible 9", a_times_conj_b),
        ]
        return checks, {REAL_TABLES_FILE: self.loader.input_hash(REAL_TABLES_FILE)}

    # -- finite fields -------------------------------------------------

    def _finfield_checks(self, options: SuiteOptions, seed: int):
        reg = self.registry

        @cache
        def gf2_model():
            return finfield.build_gf2_model()

        def scalar_orbits() -> Outcome:
            G = reg.triple_cover.group
            sizes = finfield.orbit_sizes(finfield.vector_orbits(G, generators=[G.scalar(2)]))
            return sizes == [3] * 21, f"{len(sizes)} orbits", {"sizes": sizes}

        checks = [
            Check("finfield.gf2.model", "Sym(6) acts linearly on even bit-strings fixing 111111",
                  lambda: claim_outcome(gf2_model().report)),
            Check("finfield.gf2.subspaces", "leptons span 2 dimensions, right-handed particles 3 in the quotient",
                  lambda: claim_outcome(finfield.verify_subspace_claims(gf2_model(), self.loader.particles("gf2")))),
            Check("finfield.gf2.forms", "invariant quadratic and alternating forms over GF(2)",
                  lambda: claim_outcome(finfield.verify_invariant_forms_gf2(gf2_model()))),
            Check("finfield.gf4.group", "the four GF(4) matrices generate 3.Alt(6) of order 1080",
                  lambda: claim_outcome(reg.triple_cover.report)),
            Check("finfield.gf4.scalar-orbits", "the scalars alone have 21 orbits of size 3", scalar_orbits),
            Check("finfield.gf4.generations", "scalar generations, weak doublet and the 45+18 orbit split",
                  lambda: claim_outcome(finfield.generation_action(reg.triple_cover, self.loader.particles("gf4")))),
            Check("finfield.gf4.frobenius", "the Frobenius twist inverts the scalars and acts oddly",
                  lambda: claim_outcome(finfield.frobenius_twist(reg.triple_cover))),
            Check("finfield.sl2q", "SL(2,3) = 2.Alt(4) and SL(2,9) = 2.Alt(6)",
                  lambda: claim_outcome(finfield.sl2q_isomorphisms(reg.get("2alt4-quaternion"), reg.sl29_model))),
        ]
        hashes = {f: self.loader.input_hash(f) for f in PARTICLE_FILES.values()}
        return checks, hashes

    # -- klein ---------------------------------------------------------

    def _klein_checks(self, options: SuiteOptions, seed: int):

        @cache
        def form_report(name: str) -> klein.RealFormReport:
            return klein.real_form_signature(klein.get_real_form(name))

        def available(name: str) -> klein.RealFormReport:
            try:
                return form_report(name)
            except ToolkitError as e:
                raise CheckSkipped(f"no invariant form for {name}: {str(e)}")

        def algebra(name: str) -> Outcome:
            basis = klein.get_real_form(name)
            rep = klein.wedge_rep(basis)
            dimension, traceless = basis.dimension(), basis.is_traceless()
            passed = dimension == 15 and traceless and rep.compatible
            return passed, f"dimension {dimension}, brackets preserved: {rep.compatible}", {
                "dimension": dimension, "traceless": traceless, "wedge_compatible": rep.compatible,
            }

        def form(name: str) -> Outcome:
            report = form_report(name)
            expected = KLEIN_EXPECTATIONS[name]["signature"]
            passed = report.unordered == expected and report.form_space_dimension == 1 \
                and report.real_signature in (None, report.signature)
            return passed, f"signature {report.unordered}", {
                "signature": report.signature, "unordered": report.unordered,
                "real_signature": report.real_signature,
                "form_space_dimension": report.form_space_dimension,
                "structure_square": report.structure_square,
            }

        def stabilizer(name: str) -> Outcome:
            want = KLEIN_EXPECTATIONS[name]
            result = klein.vector_stabilizer(available(name), side=want["side"])
            passed = (result.dimension == 10 and result.restricted_unordered == want["restricted"]
                      and result.symplectic_nondegenerate)
            return passed, f"dimension {result.dimension}, restricted {result.restricted_unordered}", {
                "vector": result.vector, "norm_sign": result.norm_sign, "dimension": result.dimension,
                "restricted_signature": result.restricted_signature,
                "antisymmetric_forms": result.symplectic_form_dimension,
                "antisymmetric_nondegenerate": result.symplectic_nondegenerate,
            }

        def conjugation(name: str, index: int) -> Outcome:
            before = available(name)
            rng = np.random.default_rng([seed, index])
            p, p_inv = klein.random_conjugator(rng)
            moved = klein.get_real_form(name).conjugated(p, p_inv, name=f"{name}-conjugated")
            after = klein.real_form_signature(moved)
            return after.unordered == before.unordered, f"signature {after.unordered} after conjugation", {
                "before": before.unordered, "after": after.unordered,
            }

        def distinct() -> Outcome:
            found = {name: form_report(name).unordered for name in KLEIN_EXPECTATIONS}
            expected = {want["signature"] for want in KLEIN_EXPECTATIONS.values()}
            passed = set(found.values()) == expected and len(set(found.values())) == len(found)
            return passed, ", ".join(f"{n} {s}" for n, s in found.items()), {"signatures": found}

        def spin4(name: str) -> Outcome:
            fixture = self.loader.to_generator_fixture(self.loader.clifford_fixture(name))
            return claim_outcome(klein.spin4_split(fixture))

        checks: List[Check] = []
        for index, (name, want) in enumerate(KLEIN_EXPECTATIONS.items()):
            checks += [
                Check(f"klein.{name}.algebra", f"{name} is a 15-dimensional Lie algebra preserved by the "
                      "antisymmetric square", partial(algebra, name)),
                Check(f"klein.{name}.signature", f"{want['group']}: invariant form of signature {want['signature']}",
                      partial(form, name)),
                Check(f"klein.{name}.stabilizer", f"vector stabilizer of dimension 10 with form {want['restricted']}",
                      partial(stabilizer, name)),
                Check(f"klein.{name}.conjugation", "signature unchanged by a change of basis",
                      partial(conjugation, name, index)),
            ]
        checks.append(Check("klein.signatures-distinct", "the four real forms give {6,0}, {5,1}, {4,2}, {3,3}",
                            distinct))
        for name in SPIN4_FIXTURES:
            checks.append(Check(f"klein.spin4.{name}", "Spin(4) = SU(2) x SU(2): the even part is H + H",
                                partial(spin4, name)))
        return checks, {CLIFFORD_FILE: self.loader.input_hash(CLIFFORD_FILE)}

    # -- mass formulas -------------------------------------------------

    def _mass_checks(self, options: SuiteOptions, seed: int):
        constants_path = options.constants_file or settings.constants_file
        if not resolve_path(constants_path).exists():
            raise FixtureError(f"constants file {constants_path} not found")

        @cache
        def table() -> ConstantsTable:
            return ConstantsTable.load(constants_path)

        @cache
        def thresholds() -> Dict[str, Any]:
            return self.loader.acceptance()

        def entry(name: str) -> Dict[str, Any]:
            found = thresholds().get(name)
            if found is None:
                raise CheckSkipped(f"{ACCEPTANCE_FILE} has no entry for {name}")
            return found

        def tau_display() -> Outcome:
            want = entry("tau-mass")
            prediction = tau_prediction(table())
            shown = DecimalFormatter.with_uncertainty(prediction.predicted.value, prediction.predicted.sigma,
                                                      int(want["places"]))
            return shown == want["display"], f"m(tau) = {shown} MeV/c^2", {
                **prediction.to_dict(int(want["places"])), "display": shown, "expected_display": want["display"],
            }

        def tau_comparison() -> Outcome:
            want = entry("tau-mass")
            prediction = tau_prediction(table())
            z = prediction.z_score
            passed = z is not None and abs(z) < Decimal(want["max_abs_z"])
            return passed, f"z = {z:.3f} against the measured mass" if z is not None else "no uncertainty", {
                "z_score": z, "max_abs_z": want["max_abs_z"],
                "measured": DecimalFormatter.to_decimal(prediction.target.value),
            }

        def ratio(index: int, name: str) -> Outcome:
            want = entry(name)
            prediction = ratio_checks(table())[index]
            places = int(want["places"])
            shown = prediction.to_dict(places)
            rel = prediction.relative_deviation
            passed = (shown["predicted"] == want["predicted"] and shown["target"] == want["target"]
                      and rel is not None and abs(rel) <= Decimal(want["max_relative_deviation"]))
            return passed, f"{shown['predicted']} vs {shown['target']}", {
                **shown, "max_relative_deviation": want["max_relative_deviation"],
            }

        checks = [
            Check("mass.tau-prediction", "m(e) + m(mu) + m(tau) + 3 m(p) = 5 m(n) predicts 1776.84145(3)",
                  tau_display),
            Check("mass.tau-comparison", "the predicted tau mass is within one sigma of 1776.86(12)",
                  tau_comparison),
            Check("mass.neutron-proton", "m(n)/m(p) = 1.001378 against 1 + d/2 = 1.001369",
                  partial(ratio, 0, "neutron-proton")),
            Check("mass.electron-proton", "m(e)/m(p) = .00054462 against (d/2) sin(theta) = .00054453",
                  partial(ratio, 1, "electron-proton")),
        ]
        hashes = {
            "constants": ContentHasher.hash_file(resolve_path(constants_path)),
            ACCEPTANCE_FILE: self.loader.input_hash(ACCEPTANCE_FILE),
        }
        return checks, hashes


verification_service = VerificationService()
