import numpy as np
import pytest

from app.core.exceptions import LieClosureError, RealStructureError
from app.models.schemas import CheckStatus, SuiteOptions
from app.services import klein
from app.services.exactmath import ExactMatrix, GaussianRational
from app.services.suites import KLEIN_EXPECTATIONS, verification_service

FORMS = list(KLEIN_EXPECTATIONS)


def gaussian_matrix(rows):
    return ExactMatrix([[GaussianRational(x) for x in row] for row in rows])


@pytest.fixture(scope="module")
def reports():
    return {name: klein.real_form_signature(klein.get_real_form(name)) for name in FORMS}


@pytest.mark.parametrize("name", FORMS)
def test_real_form_is_fifteen_dimensional(name):
    basis = klein.get_real_form(name)
    assert basis.dimension() == 15
    assert basis.is_traceless()
    assert not basis.closure_failures()
    assert klein.wedge_rep(basis).compatible


@pytest.mark.parametrize("name", FORMS)
def test_invariant_form_signature(reports, name):
    report = reports[name]
    assert report.form_space_dimension == 1
    assert report.unordered == KLEIN_EXPECTATIONS[name]["signature"]
    assert report.signature[0] >= report.signature[1]


@pytest.mark.parametrize("name", FORMS)
def test_hermitian_signature_matches_real_form_on_fixed_space(reports, name):
    report = reports[name]
    assert report.real_signature == report.signature
    assert klein.fixed_space_signature(report.form, report.structure) == report.signature


def test_fixed_space_of_complex_conjugation_is_real_part():
    i = GaussianRational(0, 1)
    h = ExactMatrix([[GaussianRational(1), i], [-i, GaussianRational(-1)]])
    assert klein.hermitian_signature(h) == (1, 1)
    assert klein.fixed_space_signature(h) == (1, 1)
    swap = ExactMatrix([[klein.ZERO, klein.ONE], [klein.ONE, klein.ZERO]])
    assert klein.fixed_space_signature(gaussian_matrix([[1, 0], [0, -1]]), swap.scale(GaussianRational(2))) is None


def test_only_complex_forms_need_a_real_structure(reports):
    assert reports["sl4r"].structure is None
    for name in ("su4", "su22", "sl2h"):
        assert reports[name].structure is not None
        assert reports[name].structure_square > 0


def test_signatures_are_distinct(reports):
    assert len({r.unordered for r in reports.values()}) == 4


@pytest.mark.parametrize("name", FORMS)
def test_vector_stabilizer(reports, name):
    expected = KLEIN_EXPECTATIONS[name]
    result = klein.vector_stabilizer(reports[name], side=expected["side"])
    assert result.dimension == 10
    assert result.restricted_unordered == expected["restricted"]
    assert result.symplectic_nondegenerate
    assert result.norm_sign == (1 if expected["side"] == "majority" else -1)


def test_definite_form_has_no_minority_vector(reports):
    with pytest.raises(RealStructureError):
        klein.choose_vector(reports["su4"], side="minority")


def test_signature_survives_change_of_basis(reports):
    p, p_inv = klein.random_conjugator(np.random.default_rng(5))
    assert p @ p_inv == ExactMatrix.identity(4, klein.ONE, klein.ZERO)
    moved = klein.get_real_form("sl4r").conjugated(p, p_inv)
    assert klein.real_form_signature(moved).unordered == (3, 3)


def test_hermitian_signature():
    assert klein.hermitian_signature(gaussian_matrix([[1, 0], [0, -1]])) == (1, 1)
    i = GaussianRational(0, 1)
    h = ExactMatrix([[GaussianRational(2), i], [-i, GaussianRational(2)]])
    assert klein.hermitian_signature(h) == (2, 0)


def test_wedge_of_identity_is_twice_identity():
    eye = ExactMatrix.identity(4, klein.ONE, klein.ZERO)
    assert klein.wedge(eye) == ExactMatrix.identity(6, GaussianRational(2), klein.ZERO)


def test_unknown_real_form():
    with pytest.raises(RealStructureError):
        klein.get_real_form("so6")


def test_basis_not_closed_under_bracket():
    e01 = gaussian_matrix([[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    e10 = gaussian_matrix([[0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    with pytest.raises(LieClosureError):
        klein.wedge_rep(klein.LieAlgebraBasis("broken", [e01, e10]))


@pytest.mark.parametrize("report", klein.spin4_split_check(), ids=["split-cl04", "split-cl40"])
def test_spin4_even_part_splits(report):
    assert report.passed, report.failures
    assert report.claim("even-part-is-h-plus-h").witness["corners"] == [4, 4]


def test_klein_suite_passes():
    report = verification_service.run_suite("klein", SuiteOptions(seed=11))
    failed = [(r.id, r.summary) for r in report.records if r.status == CheckStatus.FAIL]
    assert not failed
    assert report.seed == 11
