from app.models.group_spec import FAMILY_PARAMS


def test_list_families(test_client):
    response = test_client.get("/families/")
    assert response.status_code == 200
    data = response.json()
    assert len(data) == len(FAMILY_PARAMS)
    assert {"name": "dihedral", "params": ["order"]} in data


def test_get_family_member(test_client):
    response = test_client.get("/families/dihedral", params={"order": 16})
    assert response.status_code == 200
    data = response.json()
    assert data["name"] == "D16"
    assert data["kind"] == "perm"
    assert data["degree"] == 8


def test_matrix_family_member(test_client):
    response = test_client.get("/families/unitriangular", params={"n": 3, "p": 5})
    assert response.status_code == 200
    data = response.json()
    assert data["name"] == "UT3(5)"
    assert data["p"] == 5
    assert len(data["generators"]) == 2


def test_unknown_family(test_client):
    response = test_client.get("/families/sporadic")
    assert response.status_code == 404


def test_non_integer_parameter(test_client):
    response = test_client.get("/families/dihedral", params={"order": "abc"})
    assert response.status_code == 422
    assert response.json()["detail"]["expected"] == ["order"]


def test_bad_parameter_value(test_client):
    response = test_client.get("/families/dihedral", params={"order": 5})
    assert response.status_code == 400


def test_member_too_large(test_client):
    response = test_client.get("/families/dihedral", params={"order": 8192})
    assert response.status_code == 413
