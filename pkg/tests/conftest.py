import json
import os
from unittest.mock import Mock

import pytest
from fastapi.testclient import TestClient

from app.corpus import CorpusDataManager, get_corpus_data_manager
from app.engine.builder import build_from_spec
from app.engine.families import family
from app.engine.group_core import build_group, direct_product, permutation_from_cycles
from app.main import app
from app.models.group_spec import spec_from_dict


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow corpus-scale tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


# ────────────────────────────────────────────────
# General Test Client
# ────────────────────────────────────────────────

@pytest.fixture
def test_client():
    """Return a TestClient instance for API testing."""
    with TestClient(app) as client:
        yield client


# ────────────────────────────────────────────────
# Group Fixtures
# ────────────────────────────────────────────────

def perm_group(degree, *generators):
    return build_group([permutation_from_cycles(cycles, degree) for cycles in generators])


def family_group(name, **params):
    return build_from_spec(family(name, params))


@pytest.fixture(scope="session")
def d8():
    return perm_group(4, [[1, 2, 3, 4]], [[1, 3]])


@pytest.fixture(scope="session")
def d16():
    return perm_group(8, [[1, 2, 3, 4, 5, 6, 7, 8]], [[2, 8], [3, 7], [4, 6]])


@pytest.fixture(scope="session")
def q8():
    return family_group("quaternion", order=8)


@pytest.fixture(scope="session")
def s3():
    return perm_group(3, [[1, 2, 3]], [[1, 2]])


@pytest.fixture(scope="session")
def c4():
    return family_group("cyclic", order=4)


@pytest.fixture(scope="session")
def ut4_2():
    return family_group("unitriangular", n=4, p=2)


@pytest.fixture(scope="session")
def d8xd8(d8):
    return direct_product(d8, d8)


@pytest.fixture(scope="session")
def d16xd8(d16, d8):
    return direct_product(d16, d8)


@pytest.fixture(scope="session")
def c3wrc3():
    return family_group("wreath_cyclic", p=3)


# ────────────────────────────────────────────────
# Corpus Fixtures
# ────────────────────────────────────────────────

D8_SPEC = {
    "name": "D8",
    "kind": "perm",
    "degree": 4,
    "generators": [[[1, 2, 3, 4]], [[1, 3]]],
    "expected": {"tL": 3, "tU": 3, "cl": 2, "gprime_type": "C2"},
}

Q8_SPEC = {
    "name": "Q8",
    "kind": "family",
    "family": "quaternion",
    "params": {"order": 8},
    "expected": {"tU": 3, "cl": 2, "gprime_type": "C2"},
}

S3_SPEC = {
    "name": "S3",
    "kind": "perm",
    "degree": 3,
    "generators": [[[1, 2, 3]], [[1, 2]]],
}

UT3_3_SPEC = {
    "name": "UT3(3)",
    "kind": "matrix",
    "p": 3,
    "dim": 3,
    "generators": [[1, 1, 0, 0, 1, 0, 0, 0, 1], [1, 0, 0, 0, 1, 1, 0, 0, 1]],
    "expected": {"tU": 4, "cl": 2, "gprime_type": "C3"},
}


@pytest.fixture
def sample_specs():
    return [D8_SPEC, Q8_SPEC, S3_SPEC, UT3_3_SPEC]


@pytest.fixture
def corpus_dir(tmp_path, sample_specs):
    """A small corpus written to a temporary directory."""
    for data in sample_specs:
        filename = data["name"].lower().replace("(", "_").replace(")", "") + ".json"
        with open(os.path.join(tmp_path, filename), "w") as f:
            json.dump(data, f)
    return str(tmp_path)


@pytest.fixture
def mock_corpus_data_manager(sample_specs):
    """Mock CorpusDataManager serving the sample specs, installed as a FastAPI override."""
    specs = {s.name: s for s in (spec_from_dict(d) for d in sample_specs)}

    mock_manager = Mock(spec=CorpusDataManager)
    mock_manager.corpus_dir = "/tmp/corpus"
    mock_manager.load_errors = {}
    mock_manager.get_all_names.return_value = sorted(specs)
    mock_manager.get_all_specs.return_value = [specs[name] for name in sorted(specs)]
    mock_manager.get_spec.side_effect = lambda name: specs.get(name)

    app.dependency_overrides[get_corpus_data_manager] = lambda: mock_manager
    yield mock_manager
    app.dependency_overrides.pop(get_corpus_data_manager, None)
