import json
from decimal import Decimal
from fractions import Fraction

import pytest

from app.core.exceptions import FixtureError, MissingConstantError, UnitMismatchError
from app.models.schemas import CheckStatus, SuiteOptions
from app.services.fixture_loader import resolve_path
from app.services.masspred import (
    ConstantsTable, MeasuredQuantity, parse_exact, propagate_linear, ratio, ratio_checks, sin_degrees,
    tau_prediction,
)
from app.services.suites import verification_service
from app.utils.helpers import ContentHasher, DecimalFormatter


@pytest.fixture(scope="module")
def table():
    return ConstantsTable.load()


def write_constants(tmp_path, edit):
    data = json.loads(resolve_path("fixtures/codata2014.json").read_text())
    edit(data["constants"])
    path = tmp_path / "constants.json"
    path.write_text(json.dumps(data))
    return str(path)


def test_parse_exact():
    assert parse_exact("939.5654133") == Fraction(9395654133, 10 ** 7)
    assert parse_exact("1/365.26") == Fraction(100, 36526)
    with pytest.raises(FixtureError):
        parse_exact("1/0")
    with pytest.raises(FixtureError):
        parse_exact("heavy")


def test_tau_prediction(table):
    prediction = tau_prediction(table)
    assert prediction.predicted.value == Fraction("1776.8414491539")
    shown = DecimalFormatter.with_uncertainty(prediction.predicted.value, prediction.predicted.sigma, 5)
    assert shown == "1776.84145(3)"
    assert abs(prediction.z_score) < 1


def test_ratio_predictions(table):
    neutron, electron = ratio_checks(table)
    assert neutron.to_dict(6)["predicted"] == "1.001378"
    assert neutron.to_dict(6)["target"] == "1.001369"
    assert electron.to_dict(8)["predicted"] == ".00054462"
    assert electron.to_dict(8)["target"] == ".00054453"
    assert abs(electron.relative_deviation) < Decimal("5e-4")


def test_linear_propagation():
    a = MeasuredQuantity.from_strings("a", "1.0", "0.3", "MeV/c^2")
    b = MeasuredQuantity.from_strings("b", "2.0", "0.4", "MeV/c^2")
    total = propagate_linear([(1, a), (1, b)])
    assert total.value == 3
    assert total.sigma == Decimal("0.5")
    with pytest.raises(UnitMismatchError):
        propagate_linear([(1, a), (1, MeasuredQuantity.exact("c", 1))])


def test_ratio_of_mismatched_units():
    a = MeasuredQuantity.from_strings("a", "1", "0", "MeV/c^2")
    with pytest.raises(UnitMismatchError):
        ratio(a, MeasuredQuantity.exact("n", 2))
    assert ratio(a, a).value == 1


def test_sin_degrees():
    assert sin_degrees(Fraction(30)) == Fraction(1, 2)
    assert abs(sin_degrees(Fraction("23.44")) - Fraction("0.3977885")) < Fraction(1, 10 ** 6)


def test_missing_constant(tmp_path):
    path = write_constants(tmp_path, lambda cs: cs.pop(next(i for i, c in enumerate(cs) if c["name"] == "m_tau")))
    with pytest.raises(MissingConstantError):
        ConstantsTable.load(path)


def test_theta_must_be_degrees(table):
    theta = table.get("theta")
    radians = ConstantsTable({**table.quantities, "theta": MeasuredQuantity(theta.name, theta.value,
                                                                              theta.variance, "rad")})
    with pytest.raises(UnitMismatchError):
        ratio_checks(radians)


def test_missing_or_malformed_file(tmp_path):
    with pytest.raises(FixtureError):
        ConstantsTable.load(str(tmp_path / "absent.json"))
    broken = tmp_path / "broken.json"
    broken.write_text('{"constants": "none"}')
    with pytest.raises(FixtureError):
        ConstantsTable.load(str(broken))


def test_with_value_keeps_uncertainty(table):
    moved = table.with_value("m_n", "939.6")
    assert moved.value("m_n") == Fraction("939.6")
    assert moved.get("m_n").variance == table.get("m_n").variance
    assert table.value("m_n") == Fraction("939.5654133")


def test_rounding_helpers():
    assert DecimalFormatter.format_fixed(Fraction(1, 8), 2) == "0.13"
    assert DecimalFormatter.format_fixed(Fraction(-1, 8), 2, leading_zero=False) == "-.13"
    assert DecimalFormatter.with_uncertainty(Fraction("1.2345"), Fraction("0.0021"), 3) == "1.235(2)"
    assert ContentHasher.hash_file("no/such/file.json") == "missing"
    assert ContentHasher.hash_payload({"b": 1, "a": 2}) == ContentHasher.hash_payload({"a": 2, "b": 1})


def test_mass_suite_passes():
    report = verification_service.run_suite("mass")
    assert report.counts()["PASS"] == 4
    assert report.input_hashes["constants"].startswith("sha256:")


def test_perturbed_neutron_mass_fails(tmp_path):
    def heavier(constants):
        next(c for c in constants if c["name"] == "m_n")["value"] = "940.5654133"

    report = verification_service.run_suite("mass", SuiteOptions(constants_file=write_constants(tmp_path, heavier)))
    failed = {r.id for r in report.records if r.status == CheckStatus.FAIL}
    assert {"mass.tau-prediction", "mass.neutron-proton"} <= failed


def test_relative_precision(table):
    assert abs(table.precision("m_tau") - Decimal("6.7535e-5")) < Decimal("1e-8")
    rows = {row["name"]: row for row in table.to_dict()}
    assert rows["m_tau"]["unit"] == "MeV/c^2"
    assert rows["m_tau"]["relative_sigma"] is not None
