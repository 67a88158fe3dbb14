import pytest
from fastapi.testclient import TestClient

from main import app
from qtembed.document import load_document

from .conftest import DATA
from .test_momentangle import K5_EQUATIONS

client = TestClient(app)


@pytest.fixture(scope="module")
def k5_body():
    return load_document(DATA / "k5.txt").model_dump()


def test_read_root():
    response = client.get("/")
    assert response.status_code == 200
    assert response.json() == {"message": "qtembed API"}


def test_health():
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "healthy"


def test_validate(k5_body):
    response = client.post("/validate", json=k5_body)
    assert response.status_code == 200
    assert [r["check"] for r in response.json()["reports"]] == [
        "polytope",
        "characteristic",
    ]


def test_faces(k5_body):
    response = client.post("/faces", json=k5_body)
    assert response.status_code == 200
    assert (response.json()["f0"], response.json()["f1"]) == (14, 21)


def test_quadrics(k5_body):
    response = client.post("/quadrics", json=k5_body)
    assert response.status_code == 200
    assert set(response.json()["equations"]) == K5_EQUATIONS


def test_embed(k5_body):
    response = client.post("/embed", json={"document": k5_body})
    assert response.status_code == 200
    assert response.json()["q"] == 32

    response = client.post(
        "/embed", json={"document": k5_body, "character": "trivial"}
    )
    assert response.json()["target"] == "R^3 x C^6"


def test_embed_unknown_mode(k5_body):
    response = client.post("/embed", json={"document": k5_body, "mode": "spherical"})
    assert response.status_code == 400


def test_embed_bad_character(k5_body):
    response = client.post("/embed", json={"document": k5_body, "character": "1,2"})
    assert response.status_code == 400


def test_embed_affine_with_nontrivial_character(k5_body):
    response = client.post("/embed", json={"document": k5_body, "mode": "affine"})
    assert response.status_code == 422


def test_malformed_document():
    response = client.post("/faces", json={"n": 1, "m": 2})
    assert response.status_code == 422


def test_unbounded_polytope():
    body = {"n": 1, "m": 1, "A": [[1]], "b": [0], "Lambda": [[1]]}
    response = client.post("/faces", json=body)
    assert response.status_code == 422


def test_zero_denominator_is_rejected(k5_body):
    body = dict(k5_body, b=["1/0"] + k5_body["b"][1:])
    response = client.post("/validate", json=body)
    assert response.status_code == 422
