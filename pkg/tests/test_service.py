import cmath
import math

import pytest
from fastapi.testclient import TestClient

from mulint.service import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json() == {"status": "ok"}


class TestIntegrateEndpoint:
    def test_result_schema(self, client):
        resp = client.post(
            "/integrate",
            json={"function": "exp(1/z)", "curve": "circle 0 0 1", "n_lo": -2, "n_hi": 2},
        )
        assert resp.status_code == 200
        body = resp.json()
        assert list(body) == ["principal", "delta", "cardinality", "values", "quadrature"]
        assert set(body["principal"]) == {"re", "im"}
        assert set(body["quadrature"]) == {"est_error", "panels"}
        assert [v["n"] for v in body["values"]] == [-2, -1, 0, 1, 2]
        assert body["cardinality"] == "single"
        for v in body["values"]:
            assert abs(complex(v["re"], v["im"]) - 1.0) < 1e-9

    def test_finite_cardinality_shape(self, client):
        resp = client.post(
            "/integrate", json={"function": "exp(z)", "curve": "segment 0 0 0.5 0"}
        )
        assert resp.json()["cardinality"] == {"finite": 2}

    def test_constants_binding(self, client):
        resp = client.post(
            "/integrate",
            json={
                "function": "exp(c*z)",
                "constants": {"c": "1+2i"},
                "curve": "segment 0 0 1 0",
                "n_lo": 0,
                "n_hi": 0,
            },
        )
        assert resp.status_code == 200

    def test_window_validation(self, client):
        resp = client.post(
            "/integrate",
            json={"function": "exp(z)", "curve": "segment 0 0 1 0", "n_lo": 3, "n_hi": -3},
        )
        assert resp.status_code == 422

    def test_zero_on_curve_maps_to_domain_error(self, client):
        resp = client.post(
            "/integrate", json={"function": "z-1", "curve": "circle 0 0 1"}
        )
        assert resp.status_code == 422
        body = resp.json()
        assert body["kind"] == "domain"
        assert body["stage"] == "track"

    def test_parse_error_maps_to_400(self, client):
        resp = client.post(
            "/integrate", json={"function": "exp(", "curve": "circle 0 0 1"}
        )
        assert resp.status_code == 400
        body = resp.json()
        assert body["kind"] == "parse"
        assert body["stage"] == "parse"

    def test_bad_curve_spec_maps_to_400(self, client):
        resp = client.post(
            "/integrate", json={"function": "exp(z)", "curve": "blob 1 2"}
        )
        assert resp.status_code == 400


def test_star_deriv_endpoint(client):
    resp = client.post(
        "/star-deriv",
        json={"function": "exp(c*z)", "constants": {"c": "1+2i"}, "at": "0.5+0.5i"},
    )
    assert resp.status_code == 200
    value = resp.json()["value"]
    assert cmath.isclose(complex(value["re"], value["im"]), cmath.exp(1 + 2j), rel_tol=1e-12)


def test_line_integrate_endpoint(client):
    resp = client.post(
        "/line-integrate",
        json={"function": "2", "curve": "segment 0 0 1 0", "differential": "dx"},
    )
    assert resp.status_code == 200
    assert math.isclose(resp.json()["value"], 2.0, rel_tol=1e-12)


def test_line_integrate_bad_differential(client):
    resp = client.post(
        "/line-integrate",
        json={"function": "2", "curve": "segment 0 0 1 0", "differential": "dt"},
    )
    assert resp.status_code == 422


def test_riemann_endpoint(client):
    resp = client.post(
        "/riemann",
        json={"function": "exp(1/z)", "curve": "circle 0 0 1", "m": 4096},
    )
    assert resp.status_code == 200
    value = resp.json()["value"]
    assert abs(complex(value["re"], value["im"]) - 1.0) < 1e-5


def test_verify_endpoint_single_suite(client):
    resp = client.post("/verify", json={"suite": "line-ftc"})
    assert resp.status_code == 200
    reports = resp.json()["reports"]
    assert len(reports) == 1
    assert reports[0]["suite"] == "line-ftc"
    assert reports[0]["passed"] is True
    assert reports[0]["failures"] == []


def test_sample_endpoint_csv(client):
    resp = client.post(
        "/sample", json={"function": "z", "curve": "arc 0 0 1 0 pi/2"}
    )
    assert resp.status_code == 200
    assert resp.headers["content-type"].startswith("text/csv")
    lines = resp.text.strip().splitlines()
    assert lines[0] == "t,re_z,im_z,re_f,im_f,abs_f,theta_unwrapped"
    assert len(lines) > 60
    first = lines[1].split(",")
    assert float(first[0]) == 0.0
    assert float(first[5]) == 1.0  # |f| = 1 on the unit circle
