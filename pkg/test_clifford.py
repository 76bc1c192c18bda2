from fractions import Fraction

import numpy as np
import pytest

from app.core.exceptions import CliffordRelationError, FixtureError, NotIdempotentError
from app.services import clifford
from app.services.clifford import GAMMA_ALGEBRA, GeneratorFixture, abstract_algebra, parse_element
from app.services.fixture_loader import fixture_loader

GENERATOR_FIXTURES = [f.name for f in fixture_loader.clifford_file().fixtures if f.kind == "generators"]
PSEUDOSCALAR_FIXTURES = [f.name for f in fixture_loader.clifford_file().fixtures if f.claimed_pseudoscalar]
DIRAC_FIXTURES = ["dirac-cl41", "dirac-cl23", "dirac-cl05"]


def generator_fixture(name: str) -> GeneratorFixture:
    return fixture_loader.to_generator_fixture(fixture_loader.clifford_fixture(name))


def parse_all(texts):
    return [parse_element(GAMMA_ALGEBRA, t) for t in texts]


@pytest.mark.parametrize("name", GENERATOR_FIXTURES)
def test_generator_fixture_relations(name):
    """Every shipped generator set has its claimed signature and generated dimension"""
    report = clifford.verify_generators(generator_fixture(name))
    assert report.passed, report.failures
    assert report.pairwise_anticommute


@pytest.mark.parametrize("name", PSEUDOSCALAR_FIXTURES)
def test_pseudoscalar_matches_claim_with_recorded_sign(name):
    fix = generator_fixture(name)
    ratio = clifford.pseudoscalar(fix.generators).ratio_to(fix.claimed_pseudoscalar)
    assert ratio in (1, -1)
    assert ratio == fix.pseudoscalar_sign


@pytest.mark.parametrize("name", DIRAC_FIXTURES)
def test_dirac_sets_have_central_imaginary_pseudoscalar(name):
    fix = generator_fixture(name)
    span = clifford.generated_subalgebra(fix.generators)
    omega = clifford.pseudoscalar(fix.generators)
    assert span.dimension == 32
    assert omega.ratio_to(parse_element(GAMMA_ALGEBRA, "i")) in (1, -1)
    assert all(omega.commutator(x).is_zero() for x in span.basis)


def test_pseudoscalar_commutes_with_bivectors():
    fix = generator_fixture("cl33-gamma-a")
    assert clifford.pseudoscalar_invariance(fix.generators)


@pytest.mark.parametrize("name", ["cl06-abstract", "cl33-from-cl06", "cl06-gamma"])
def test_grade_decomposition_of_six_generators(name):
    report = clifford.grade_decomposition(generator_fixture(name).generators)
    assert report.dimensions == [1, 6, 15, 10, 10, 15, 6, 1]


def test_grade_decomposition_needs_six_generators():
    with pytest.raises(CliffordRelationError):
        clifford.grade_decomposition(parse_all(["g1", "g2", "g3"]))


def test_non_anticommuting_pair_is_reported():
    fix = GeneratorFixture(
        name="broken",
        algebra=GAMMA_ALGEBRA,
        generators=parse_all(["g1", "g1*g2*g3"]),
        generator_text=["g1", "g1*g2*g3"],
        expected_dimension=4,
    )
    report = clifford.verify_generators(fix)
    assert not report.passed
    assert not report.pairwise_anticommute
    assert any("do not anticommute" in f for f in report.failures)


def test_generator_count_without_expected_dimension_is_rejected():
    fix = GeneratorFixture(
        name="three",
        algebra=GAMMA_ALGEBRA,
        generators=parse_all(["g1", "g2", "g3"]),
        generator_text=["g1", "g2", "g3"],
    )
    with pytest.raises(FixtureError):
        clifford.verify_generators(fix)
    fix.expected_dimension = 8
    assert clifford.verify_generators(fix).generated_dimension == 8


def test_non_scalar_square_is_reported():
    fix = GeneratorFixture(
        name="broken",
        algebra=GAMMA_ALGEBRA,
        generators=parse_all(["g1 + g0"]),
        generator_text=["g1 + g0"],
        expected_dimension=2,
    )
    report = clifford.verify_generators(fix)
    assert report.squares == [None]
    assert not report.passed


def test_spin13_copies_commute():
    fix = fixture_loader.clifford_fixture("spin13-second-copy")
    left, right = parse_all(fix.left), parse_all(fix.right)
    assert clifford.commuting_subalgebras(left, right)
    assert clifford.lie_closure(left).dimension == 6
    assert clifford.lie_closure(right).dimension == 6


def test_unbroken_and_broken_u2():
    assert clifford.lie_closure(parse_all(["i", "j", "k", "i*g5"])).dimension == 4
    broken = parse_all(["i*g0", "i*g5", "g0*g5"])
    assert clifford.lie_closure(broken).dimension == 3
    assert clifford.lie_closure(broken + parse_all(["i"])).dimension == 4


def test_idempotent_corner_is_quaternionic():
    fix = fixture_loader.clifford_fixture("idempotent-plus")
    e = parse_element(GAMMA_ALGEBRA, fix.idempotent)
    report = clifford.idempotent_split(e, parse_all(fix.generators), parse_all(fix.triple))
    assert report.corner_dimension == 4
    assert report.projected_relations
    assert report.relation_sign in (1, -1)


def test_idempotent_pair_is_complementary():
    plus = parse_element(GAMMA_ALGEBRA, "(1 + g1*g2*g3)/2")
    minus = parse_element(GAMMA_ALGEBRA, "(1 - g1*g2*g3)/2")
    assert plus + minus == 1
    assert (plus * minus).is_zero()


def test_non_idempotent_is_rejected():
    with pytest.raises(NotIdempotentError):
        clifford.idempotent_split(parse_element(GAMMA_ALGEBRA, "g0"), parse_all(["g1", "g2", "g3"]))


def test_parse_keeps_written_order():
    a = parse_element(GAMMA_ALGEBRA, "g1*g2")
    b = parse_element(GAMMA_ALGEBRA, "g2*g1")
    assert a == -b
    assert parse_element(GAMMA_ALGEBRA, "g0*g0") == 1
    assert parse_element(GAMMA_ALGEBRA, "g1**2") == -1


def test_parse_rejects_unknown_symbols():
    with pytest.raises(FixtureError):
        parse_element(GAMMA_ALGEBRA, "g7 + 1")


def test_ratio_to():
    g5 = parse_element(GAMMA_ALGEBRA, "g5")
    assert (g5 * Fraction(-3, 2)).ratio_to(g5) == Fraction(-3, 2)
    assert parse_element(GAMMA_ALGEBRA, "g0").ratio_to(g5) is None


def test_blade_products_are_associative():
    rng = np.random.default_rng(7)
    for algebra in (GAMMA_ALGEBRA, abstract_algebra((1, 1, 1, -1, -1, -1))):
        blades = algebra.blades()
        for x, y, z in rng.integers(len(blades), size=(1000, 3)):
            a, b, c = blades[x], blades[y], blades[z]
            s1, ab = algebra.blade_mul(a, b)
            s2, left = algebra.blade_mul(ab, c)
            s3, bc = algebra.blade_mul(b, c)
            s4, right = algebra.blade_mul(a, bc)
            assert (s1 * s2, left) == (s3 * s4, right)


def test_even_subalgebra_of_cl04_is_eight_dimensional():
    assert clifford.even_subalgebra(generator_fixture("split-cl04").generators).dimension == 8
