from pathlib import Path

import pytest

from bloomtutor import SessionConfig, decompose, scripted_gateway
from bloomtutor.scripted import KNN_GOAL, build_knn_script

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def knn_gateway():
    return scripted_gateway(build_knn_script())


@pytest.fixture
def knn_plan(knn_gateway):
    return decompose(KNN_GOAL, SessionConfig(), knn_gateway)
