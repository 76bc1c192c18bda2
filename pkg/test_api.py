import pytest
from fastapi.testclient import TestClient
from main import app

client = TestClient(app)

def test_health_check():
    """Test the health check endpoint"""
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "healthy"

def test_root_endpoint():
    """Test the root endpoint"""
    response = client.get("/")
    assert response.status_code == 200
    assert "Klein Verification Toolkit API" in response.json()["message"]

def test_list_suites():
    """Suite ids include every suite and 'all'"""
    response = client.get("/api/v1/suites")
    assert response.status_code == 200

    data = response.json()
    assert data["success"] is True
    assert data["data"]["suites"] == ["clifford", "groups", "repkit", "finfield", "klein", "mass", "all"]

def test_run_clifford_fixture():
    """Run the Clifford suite restricted to one fixture"""
    response = client.post("/api/v1/suites/clifford/run", json={"fixture": "cl33-from-cl06", "seed": 3})
    assert response.status_code == 200

    data = response.json()
    assert data["success"] is True
    report = data["data"]
    assert report["suite"] == "clifford"
    assert report["seed"] == 3
    ids = [r["id"] for r in report["records"]]
    assert ids == sorted(ids)
    assert "clifford.cl33-from-cl06.grades" in ids
    assert all(r["status"] == "PASS" for r in report["records"])

def test_run_mass_suite():
    """The mass suite runs on the configured constants"""
    response = client.post("/api/v1/suites/mass/run")
    assert response.status_code == 200

    data = response.json()
    assert data["message"] == "4 PASS, 0 FAIL, 0 SKIP"
    assert "constants" in data["data"]["input_hashes"]

def test_unknown_suite():
    """Unknown suite ids are not found"""
    response = client.post("/api/v1/suites/astrology/run")
    assert response.status_code == 404

def test_unknown_fixture_filter():
    """A fixture filter that names nothing is not found"""
    response = client.post("/api/v1/suites/clifford/run", json={"fixture": "cl99"})
    assert response.status_code == 404

def test_list_clifford_fixtures():
    """Fixture listing groups names by kind"""
    response = client.get("/api/v1/fixtures/clifford")
    assert response.status_code == 200

    data = response.json()["data"]
    assert "cl33-from-cl06" in data["fixtures"]
    assert "spin13-second-copy" in data["by_kind"]["commuting"]

def test_get_clifford_fixture():
    """A single fixture comes back with the records of its checks"""
    response = client.get("/api/v1/fixtures/clifford/dirac-cl23")
    assert response.status_code == 200

    data = response.json()
    assert data["success"] is True
    assert data["data"]["fixture"]["name"] == "dirac-cl23"
    ids = {r["id"] for r in data["data"]["records"]}
    assert "clifford.dirac-cl23.central-pseudoscalar" in ids

    response = client.get("/api/v1/fixtures/clifford/cl99")
    assert response.status_code == 404

def test_list_groups():
    """Registry groups are listed with descriptions"""
    response = client.get("/api/v1/groups")
    assert response.status_code == 200

    names = [g["name"] for g in response.json()["data"]["groups"]]
    assert "2alt4-quaternion" in names
    assert "3alt6-gf4" in names

def test_character_table():
    """Export of a small character table"""
    response = client.get("/api/v1/groups/sym3/character-table")
    assert response.status_code == 200

    table = response.json()["data"]
    assert table["order"] == 6
    assert [c["name"] for c in table["characters"]] == ["1a", "1b", "2"]
    assert sum(c["size"] for c in table["classes"]) == 6

    response = client.get("/api/v1/groups/monster/character-table")
    assert response.status_code == 404

def test_constants():
    """Constants of the configured file"""
    response = client.get("/api/v1/constants")
    assert response.status_code == 200

    data = response.json()["data"]
    assert data["hash"].startswith("sha256:")
    names = [c["name"] for c in data["constants"]]
    assert names[:5] == ["m_e", "m_mu", "m_p", "m_n", "m_tau"]

@pytest.mark.parametrize("key,predicted", [
    ("neutron-proton", "1.001378"),
    ("electron-proton", ".00054462"),
])
def test_ratio_predictions(key, predicted):
    """Ratio predictions at display precision"""
    response = client.get("/api/v1/predictions")
    assert response.status_code == 200
    assert response.json()["data"][key]["predicted"] == predicted

def test_tau_prediction_display():
    """Tau-mass prediction in concise uncertainty notation"""
    response = client.get("/api/v1/predictions")
    assert response.status_code == 200
    assert response.json()["data"]["tau-mass"]["display"] == "1776.84145(3)"

if __name__ == "__main__":
    pytest.main([__file__])
