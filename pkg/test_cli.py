import json
import shutil

import pytest

from app import cli
from app.services.fixture_loader import CLIFFORD_FILE, FixtureLoader, fixture_loader
from app.services.suites import VerificationService


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


@pytest.fixture
def corrupted_service(tmp_path, monkeypatch):
    """A service reading a fixtures copy whose Cl(3,3) list repeats a generator."""
    fixtures = tmp_path / "fixtures"
    shutil.copytree(fixture_loader.fixtures_dir, fixtures)
    data = json.loads((fixtures / CLIFFORD_FILE).read_text())
    fix = next(f for f in data["fixtures"] if f["name"] == "cl33-from-cl06")
    fix["generators"][3] = "A"
    (fixtures / CLIFFORD_FILE).write_text(json.dumps(data))
    service = VerificationService(loader=FixtureLoader(str(fixtures)))
    monkeypatch.setattr(cli, "verification_service", service)
    return service


def test_passing_fixture_exits_zero(capsys):
    code, out = run_cli(capsys, "--suite", "clifford", "--fixture", "cl06-abstract")
    assert code == cli.EXIT_OK
    assert "PASS  clifford.cl06-abstract.generators" in out
    assert out.rstrip().endswith("0 FAIL, 0 SKIP")


def test_corrupted_fixture_fails_by_name(capsys, corrupted_service):
    code, out = run_cli(capsys, "--suite", "clifford", "--fixture", "cl33-from-cl06")
    assert code == cli.EXIT_FAILURES
    assert "FAIL  clifford.cl33-from-cl06.generators" in out


def test_json_report_renders_to_the_same_text(capsys, tmp_path):
    path = str(tmp_path / "report.json")
    code, first = run_cli(capsys, "--suite", "clifford", "--fixture", "spin13-second-copy", "--json", path)
    assert code == cli.EXIT_OK
    data = json.loads((tmp_path / "report.json").read_text())
    assert data["suite"] == "clifford"
    assert [r["id"] for r in data["records"]] == ["clifford.spin13-second-copy.commuting"]
    code, second = run_cli(capsys, "--render", path)
    assert code == cli.EXIT_OK
    assert second == first


def test_seed_is_reported(capsys):
    code, out = run_cli(capsys, "--suite", "clifford", "--fixture", "cl06-abstract", "--seed", "42")
    assert code == cli.EXIT_OK
    assert "seed: 42" in out


def test_unknown_suite(capsys):
    code, out = run_cli(capsys, "--suite", "astrology")
    assert code == cli.EXIT_ERROR
    assert out == ""


def test_unknown_fixture(capsys):
    code, _ = run_cli(capsys, "--suite", "clifford", "--fixture", "cl99")
    assert code == cli.EXIT_ERROR


def test_missing_constants_file(capsys, tmp_path):
    code, _ = run_cli(capsys, "--suite", "mass", "--constants", str(tmp_path / "absent.json"))
    assert code == cli.EXIT_ERROR


def test_unreadable_report(capsys, tmp_path):
    code, _ = run_cli(capsys, "--render", str(tmp_path / "absent.json"))
    assert code == cli.EXIT_ERROR
    broken = tmp_path / "broken.json"
    broken.write_text('{"suite": "clifford"}')
    code, _ = run_cli(capsys, "--render", str(broken))
    assert code == cli.EXIT_ERROR


def test_listing(capsys):
    code, out = run_cli(capsys, "--list")
    assert code == cli.EXIT_OK
    assert "cl33-from-cl06" in out
    assert "2alt4-quaternion" in out
    assert "suites: clifford, groups, repkit, finfield, klein, mass, all" in out


def test_export_table(capsys, tmp_path):
    code, out = run_cli(capsys, "--export-table", "sym3", "--cache-dir", str(tmp_path))
    assert code == cli.EXIT_OK
    table = json.loads(out)
    assert table["order"] == 6
    assert [c["degree"] for c in table["characters"]] == [1, 1, 2]
    code, _ = run_cli(capsys, "--export-table", "monster")
    assert code == cli.EXIT_ERROR
