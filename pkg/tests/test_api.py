import pytest
from fastapi.testclient import TestClient

from epidss.bayes import network_to_document
from epidss.preparedness import default_outbreak_network
from epidss.service.api import create_app

from conftest import DISEASE_POSTERIOR_POSITIVE, build_disease_test_net

FIG4_STATES = [
    {"id": "S1", "grade": "C1"}, {"id": "S9", "grade": "C1"},
    {"id": "S2", "grade": "A2"}, {"id": "S7", "grade": "A2"},
    {"id": "S3", "grade": "C4"}, {"id": "S4", "grade": "C4"},
    {"id": "S5", "grade": "C4"},
    {"id": "S10", "grade": "E2"},
    {"id": "S6", "grade": "E6"}, {"id": "S11", "grade": "E6"},
    {"id": "S12", "grade": "F5"},
]


@pytest.fixture
def client(tmp_path):
    return TestClient(create_app(str(tmp_path / "store")))


def create_disease_scenario(client, cost_models=None):
    body = {
        "name": "screening",
        "network": network_to_document(build_disease_test_net()),
    }
    if cost_models:
        body["cost_models"] = cost_models
    response = client.post("/v1/scenarios", json=body)
    assert response.status_code == 201, response.text
    return response.json()["id"]


class TestScenarioEndpoints:
    def test_health(self, client):
        assert client.get("/v1/health").json() == {"status": "ok"}

    def test_template_endpoint_matches_bundled_network(self, client):
        doc = client.get("/v1/templates/outbreak").json()
        assert doc == network_to_document(default_outbreak_network())

    def test_create_and_fetch(self, client):
        sid = create_disease_scenario(client)
        fetched = client.get(f"/v1/scenarios/{sid}")
        assert fetched.status_code == 200
        assert fetched.json()["revision"] == 1
        assert fetched.json()["engine"] == {"mode": "exact"}

    def test_unknown_scenario_404(self, client):
        assert client.get("/v1/scenarios/abcdef123456").status_code == 404

    def test_invalid_network_400(self, client):
        body = {"name": "bad", "network": {"variables": [], "edges": []}}
        response = client.post("/v1/scenarios", json=body)
        assert response.status_code == 400
        assert "cuts" in response.json()["detail"]

    def test_list_scenarios(self, client):
        a = create_disease_scenario(client)
        b = create_disease_scenario(client)
        ids = {s["id"] for s in client.get("/v1/scenarios").json()["scenarios"]}
        assert ids == {a, b}


class TestEvidenceEndpoints:
    def test_submit_hard_evidence(self, client):
        sid = create_disease_scenario(client)
        response = client.post(
            f"/v1/scenarios/{sid}/evidence",
            json={"variable": "Test", "state": "positive", "grade": "A1",
                  "source_id": "lab-7"},
        )
        assert response.status_code == 200, response.text
        payload = response.json()
        assert payload["revision"] == 2
        assert payload["summary"]["posteriors"]["Disease"]["probs"][
            "present"
        ] == pytest.approx(DISEASE_POSTERIOR_POSITIVE, abs=1e-9)

    def test_contradiction_returns_409_and_keeps_revision(self, client):
        sid = create_disease_scenario(client)
        first = client.post(
            f"/v1/scenarios/{sid}/evidence",
            json={"variable": "Test", "state": "positive", "grade": "A1"},
        )
        assert first.status_code == 200
        second = client.post(
            f"/v1/scenarios/{sid}/evidence",
            json={"variable": "Test", "state": "negative", "grade": "A1"},
        )
        assert second.status_code == 409
        assert client.get(f"/v1/scenarios/{sid}").json()["revision"] == 2

    def test_soft_evidence_body(self, client):
        sid = create_disease_scenario(client)
        response = client.post(
            f"/v1/scenarios/{sid}/evidence",
            json={"soft": {"Test": [1.0, 0.4]}, "grade": "A1"},
        )
        assert response.status_code == 200

    def test_empty_evidence_rejected(self, client):
        sid = create_disease_scenario(client)
        response = client.post(
            f"/v1/scenarios/{sid}/evidence", json={"grade": "A1"}
        )
        assert response.status_code == 400

    def test_posterior_at_revision(self, client):
        sid = create_disease_scenario(client)
        client.post(
            f"/v1/scenarios/{sid}/evidence",
            json={"variable": "Test", "state": "positive", "grade": "A1"},
        )
        rev1 = client.get(
            f"/v1/scenarios/{sid}/posterior",
            params={"variable": "Disease", "revision": 1},
        ).json()
        assert rev1["posterior"]["probs"]["present"] == pytest.approx(0.01)


class TestWhatIfEndpoint:
    def test_two_branches_from_one_call(self, client):
        body = {
            "name": "outbreak",
            "network": network_to_document(default_outbreak_network()),
            "cost_models": {
                "default": {
                    "OutbreakRisk": {"low": 0.0, "medium": 40.0, "high": 100.0}
                }
            },
        }
        sid = client.post("/v1/scenarios", json=body).json()["id"]
        response = client.post(
            f"/v1/scenarios/{sid}/what-if",
            json={"set": {"CommunityTransmission": "yes"}, "query": "OutbreakRisk",
                  "cost_model": "default"},
        )
        assert response.status_code == 200, response.text
        payload = response.json()
        assert payload["revision"] == 1
        base = payload["baseline"]["posterior"]["probs"]["high"]
        hypo = payload["hypothetical"]["posterior"]["probs"]["high"]
        assert hypo >= base
        assert payload["hypothetical"]["risk"]["risk"] >= payload["baseline"]["risk"]["risk"]
        # stored scenario untouched
        assert client.get(f"/v1/scenarios/{sid}").json()["revision"] == 1


class TestConsensusEndpoint:
    def test_pool_and_conflict(self, client):
        response = client.post(
            "/v1/consensus",
            json={
                "posteriors": [
                    {"expert_id": "e1", "posterior": [1.0, 0.0], "weight": 3.0},
                    {"expert_id": "e2", "posterior": [0.0, 1.0], "weight": 1.0},
                ]
            },
        )
        assert response.status_code == 200
        payload = response.json()
        assert payload["pooled"] == pytest.approx([0.75, 0.25])
        assert payload["conflict"] == pytest.approx(1.0)

    def test_grade_weights_accepted(self, client):
        response = client.post(
            "/v1/consensus",
            json={
                "posteriors": [
                    {"expert_id": "e1", "posterior": [0.8, 0.2], "grade": "A1"},
                    {"expert_id": "e2", "posterior": [0.6, 0.4], "grade": "E5"},
                ]
            },
        )
        pooled = response.json()["pooled"]
        expected = (1.0 * 0.8 + 0.04 * 0.6) / 1.04, (1.0 * 0.2 + 0.04 * 0.4) / 1.04
        assert pooled == pytest.approx(expected)

    def test_length_mismatch_400(self, client):
        response = client.post(
            "/v1/consensus",
            json={
                "posteriors": [
                    {"expert_id": "e1", "posterior": [0.8, 0.2]},
                    {"expert_id": "e2", "posterior": [0.6, 0.3, 0.1]},
                ]
            },
        )
        assert response.status_code == 400


class TestClassifyEndpoint:
    def test_twelve_state_example(self, client):
        response = client.post("/v1/classify", json={"states": FIG4_STATES + []})
        payload = response.json()
        assert payload["usable"] == ["S1", "S2", "S3", "S4", "S5", "S7", "S9"]
        assert payload["high_risk"] == ["S10", "S11", "S12", "S6"]

    def test_duplicate_ids_400(self, client):
        response = client.post(
            "/v1/classify",
            json={"states": [{"id": "S1", "grade": "A1"}, {"id": "S1", "grade": "B2"}]},
        )
        assert response.status_code == 400
