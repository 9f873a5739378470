from logging import DEBUG, INFO, WARNING
from pathlib import Path
from pprint import pprint
from typing import Generator

import numpy as np
import pytest
from coverage_badge.__main__ import main as gen_cov_badge

from bellbox.bell_statistics import BellData
from bellbox.datasets import dataset_dict, load_dataset
from bellbox.types import BellDataDict
from bellbox.utils import write_json

BADGE_PATH: Path = Path("docs") / "img" / "coverage.svg"


@pytest.fixture
def rng() -> np.random.Generator:
    """A seeded `numpy` `Generator` for randomised property tests."""
    return np.random.default_rng(20231)


@pytest.fixture
def animal_acts_data() -> BellData:
    return load_dataset("animal-acts")


@pytest.fixture
def vessels_data() -> BellData:
    return load_dataset("vessels")


@pytest.fixture
def cats_data() -> BellData:
    return load_dataset("cats")


@pytest.fixture
def uniform_data() -> BellData:
    return load_dataset("uniform")


@pytest.fixture
def bell_json(tmp_path: Path) -> Generator[Path, None, None]:
    """Folder for the `JSON` inputs written by the fixtures below."""
    yield tmp_path / "inputs"


def _dataset_json(folder: Path, name: str) -> Path:
    return write_json(folder / f"{name}.json", dict(dataset_dict(name)))


@pytest.fixture
def animal_acts_json(bell_json: Path) -> Path:
    return _dataset_json(bell_json, "animal-acts")


@pytest.fixture
def vessels_json(bell_json: Path) -> Path:
    return _dataset_json(bell_json, "vessels")


@pytest.fixture
def cats_json(bell_json: Path) -> Path:
    return _dataset_json(bell_json, "cats")


@pytest.fixture
def uniform_json(bell_json: Path) -> Path:
    return _dataset_json(bell_json, "uniform")


@pytest.fixture
def short_table_json(bell_json: Path) -> Path:
    """Tables of the cats with an `AB` table summing to 0.9."""
    record: BellDataDict = dataset_dict("cats")
    record["tables"]["AB"] = [[0.0, 0.4], [0.5, 0.0]]
    return write_json(bell_json / "short-table.json", dict(record))


@pytest.fixture
def missing_context_json(bell_json: Path) -> Path:
    record: BellDataDict = dataset_dict("cats")
    del record["tables"]["A'B'"]
    return write_json(bell_json / "missing-context.json", dict(record))


@pytest.fixture
def malformed_json(bell_json: Path) -> Path:
    bell_json.mkdir(parents=True, exist_ok=True)
    path: Path = bell_json / "malformed.json"
    path.write_text('{"tables": {"AB": [[0.5, 0.5], ', encoding="utf-8")
    return path


@pytest.fixture
def binary_json(bell_json: Path) -> Path:
    bell_json.mkdir(parents=True, exist_ok=True)
    path: Path = bell_json / "binary.json"
    path.write_bytes(b"\xff\xfe{")
    return path


@pytest.fixture(autouse=True)
def doctest_auto_fixtures(doctest_namespace: dict) -> None:
    """Elements to add to default `doctest` namespace."""
    doctest_namespace["np"] = np
    doctest_namespace["pprint"] = pprint
    doctest_namespace["pytest"] = pytest
    doctest_namespace["DEBUG"] = DEBUG
    doctest_namespace["INFO"] = INFO
    doctest_namespace["WARNING"] = WARNING


def pytest_sessionfinish(session, exitstatus):
    """Generate badges for docs after tests finish."""
    if exitstatus == 0:
        BADGE_PATH.parent.mkdir(parents=True, exist_ok=True)
        gen_cov_badge(["-o", f"{BADGE_PATH}", "-f"])
