from dataclasses import replace

import pytest

from app.core.exceptions import FixtureError, ToolkitError
from app.models.schemas import CheckStatus
from app.services import finfield
from app.services.finfield import (
    bilinear_form, bitstring, complement_class, format_gf4_vector, letters_of, parse_gf4_vector, quadratic_form,
)
from app.services.fixture_loader import fixture_loader
from app.services.group_registry import group_registry
from app.services.suites import verification_service


@pytest.fixture(scope="module")
def gf2_model():
    return finfield.build_gf2_model()


@pytest.fixture(scope="module")
def triple_cover():
    return group_registry.triple_cover


def test_bitstrings():
    assert bitstring("AB") == 0b11
    assert bitstring("0") == 0
    assert letters_of(bitstring("CDF")) == "CDF"
    assert letters_of(0) == "0"
    assert complement_class(bitstring("BCDEF")) == bitstring("A")
    with pytest.raises(ValueError):
        bitstring("AG")


def test_forms_on_small_strings():
    assert quadratic_form(bitstring("AB")) == 1
    assert quadratic_form(bitstring("ABCD")) == 0
    assert quadratic_form(bitstring("ABCDEF")) == 1
    assert bilinear_form(bitstring("AB"), bitstring("AC")) == 1
    assert bilinear_form(bitstring("AB"), bitstring("CD")) == 0


def test_gf2_model(gf2_model):
    assert gf2_model.report.passed, gf2_model.report.failures
    assert len(gf2_model.even) == 32
    assert len(gf2_model.quotient) == 16
    swap = gf2_model.letter_permutation("BC")
    assert letters_of(gf2_model.act(swap, bitstring("CD"))) == "BD"


def test_gf2_particle_claims(gf2_model):
    report = finfield.verify_subspace_claims(gf2_model, fixture_loader.particles("gf2"))
    assert report.passed, report.failures
    assert report.claim("bc-weak-doublet").witness["CD"] == "BD"


def test_gf2_invariant_forms(gf2_model):
    report = finfield.verify_invariant_forms_gf2(gf2_model)
    assert report.passed, report.failures
    assert report.claim("quadratic-form-invariant").witness["permutations"] == 720


def test_gf4_vector_text():
    assert parse_gf4_vector("(1,v,0)") == (1, 2, 0)
    assert format_gf4_vector((0, 3, 1)) == "(0,w,1)"
    with pytest.raises(ValueError):
        parse_gf4_vector("(1,x,0)")


def test_unknown_particle_model():
    with pytest.raises(FixtureError):
        fixture_loader.particles("gf8")


def test_triple_cover(triple_cover):
    G = triple_cover.group
    assert triple_cover.report.passed, triple_cover.report.failures
    assert G.order == 1080
    assert len(G.center()) == 3
    a, b = G.generators[0], G.generators[3]
    v = (1, 2, 0)
    assert G.act(G.mul(a, b), v) == G.act(b, G.act(a, v))


def test_scalar_orbits(triple_cover):
    G = triple_cover.group
    sizes = finfield.orbit_sizes(finfield.vector_orbits(G, generators=[G.scalar(2)]))
    assert sizes == [3] * 21


def test_gf4_vector_orbits(triple_cover):
    assert finfield.orbit_sizes(finfield.vector_orbits(triple_cover.group)) == [45, 18]


def test_generations(triple_cover):
    report = finfield.generation_action(triple_cover, fixture_loader.particles("gf4"))
    assert report.passed, report.failures
    assert report.claim("rows-split-5-plus-10").witness["row_orbits"] == [5, 10]
    assert report.claim("def-shifts-lepton-generations").witness["scalars"] == {"nu": "1", "e_L": "w", "e_R": "v"}
    column = report.claim("column-convention-orbit-membership").witness
    assert column["in_18_orbit"] == ["e_L", "e_R", "nu", "u_R"]
    assert column["left_sizes"] == [45, 18]


def test_moved_lepton_breaks_generation_scalars(triple_cover):
    particles = fixture_loader.particles("gf4")
    moved = replace(particles, vectors={**particles.vectors, "e_R": [parse_gf4_vector("(1,0,0)")]})
    report = finfield.generation_action(triple_cover, moved)
    claim = report.claim("def-shifts-lepton-generations")
    assert not claim.passed
    assert claim.witness["scalars"]["e_R"] == "1"


def test_column_orbit_membership_is_compared(triple_cover):
    particles = fixture_loader.particles("gf4")
    report = finfield.generation_action(triple_cover, replace(particles, column_orbit=["nu", "e_L"]))
    assert not report.claim("column-convention-orbit-membership").passed


def test_frobenius_twist(triple_cover):
    report = finfield.frobenius_twist(triple_cover)
    assert report.passed, report.failures
    assert report.claim("unitary-subgroup-index-10").witness["order"] == 108


def test_special_linear_groups():
    assert finfield.special_linear_2(3).order == 24
    with pytest.raises(ToolkitError):
        finfield.special_linear_2(5)


def test_sl2q_isomorphisms():
    report = finfield.sl2q_isomorphisms(group_registry.get("2alt4-quaternion"), group_registry.sl29_model)
    assert report.passed, report.failures
    assert report.claim("projective-line-2-transitive").witness["points"] == 10


def test_finfield_suite_passes():
    report = verification_service.run_suite("finfield")
    failed = [(r.id, r.summary) for r in report.records if r.status == CheckStatus.FAIL]
    assert not failed
    assert len(report.records) == 8
