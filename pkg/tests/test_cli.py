import json
from pathlib import Path

import pandas as pd
import pytest
from typer.testing import CliRunner

from bellbox.bell_statistics import BellData
from bellbox.cli import cli
from bellbox.report import DEMOS

runner = CliRunner()

VESSELS_STATE: list[str] = [
    "0",
    "0",
    "0.7071067811865476",
    "0",
    "0.7071067811865476",
    "0",
    "0",
    "0",
]


def invoke_json(*args: str) -> dict:
    result = runner.invoke(cli, [*args, "--format", "json"])
    assert result.exit_code == 0, result.output
    return json.loads(result.stdout)


def test_analyze_animal_acts_json(animal_acts_json: Path) -> None:
    record = invoke_json("analyze", str(animal_acts_json))
    classification = record["classification"]
    assert classification["verdict"] == "Type2"
    assert classification["chsh_fixed"] == pytest.approx(2.4197, abs=1e-3)
    assert classification["expectations"]["AB"] == pytest.approx(-0.7778, abs=5e-4)
    assert not classification["factorizable"]["AB"]["factorizable"]
    assert record["label"] == "animal-acts"


def test_analyze_text(cats_json: Path) -> None:
    result = runner.invoke(cli, ["analyze", str(cats_json)])
    assert result.exit_code == 0
    for message in ("CHSH: 4", "marginal law satisfied", "Verdict: Type4"):
        assert message in result.stdout


def test_analyze_vessels_text(vessels_json: Path) -> None:
    result = runner.invoke(cli, ["analyze", str(vessels_json)])
    assert result.exit_code == 0
    assert "Warning: marginal law violated" in result.stdout
    assert "Verdict: Type3" in result.stdout


def test_text_and_json_agree(animal_acts_json: Path) -> None:
    record = invoke_json("analyze", str(animal_acts_json))
    text = runner.invoke(cli, ["analyze", str(animal_acts_json)]).stdout
    chsh_max: float = record["classification"]["chsh_max"]
    assert f"{chsh_max:.6g}" in text


def test_analyze_csv(uniform_json: Path, tmp_path: Path) -> None:
    csv_path: Path = tmp_path / "out" / "uniform.csv"
    invoke_json("analyze", str(uniform_json), "--csv", str(csv_path))
    df = pd.read_csv(csv_path, index_col="context")
    assert list(df.columns) == ["p11", "p12", "p21", "p22", "E"]
    assert df.loc["AB", "p11"] == 0.25


def test_analyze_json_round_trip(animal_acts_json: Path) -> None:
    record = invoke_json("analyze", str(animal_acts_json))
    restored = BellData.from_dict(record["dataset"])
    assert restored == BellData.from_dict(json.loads(animal_acts_json.read_text()))


@pytest.mark.parametrize(
    "fixture_name, exit_code, message",
    (
        ("malformed_json", 2, "Invalid JSON"),
        ("binary_json", 2, "not UTF-8"),
        ("missing_context_json", 2, "Missing context tables: A'B'"),
        ("short_table_json", 3, "sum to 0.9"),
    ),
)
def test_analyze_errors(
    fixture_name: str, exit_code: int, message: str, request
) -> None:
    path: Path = request.getfixturevalue(fixture_name)
    result = runner.invoke(cli, ["analyze", str(path)])
    assert result.exit_code == exit_code
    assert message in result.output


def test_analyze_normalize(short_table_json: Path) -> None:
    """A sum of 0.9 is beyond what `--normalize` accepts."""
    result = runner.invoke(cli, ["analyze", str(short_table_json), "--normalize"])
    assert result.exit_code == 3
    assert "normalization tolerance" in result.output


def test_analyze_bad_tolerance(cats_json: Path) -> None:
    result = runner.invoke(cli, ["analyze", str(cats_json), "--tol-bell", "0"])
    assert result.exit_code == 2
    assert "--tol-bell must be positive" in result.output


@pytest.mark.parametrize("name", DEMOS)
def test_demos(name: str) -> None:
    record = invoke_json("demo", name)
    assert record["demo"] == name
    assert record["classification"]["verdict"].startswith(("Type", "NoViolation"))


@pytest.mark.parametrize(
    "name, verdict",
    (
        ("animal-acts", "Type2"),
        ("vessels", "Type3"),
        ("cats", "Type4"),
        ("nonlocal-box", "Type4"),
        ("spheres", "Type1"),
    ),
)
def test_demo_verdicts(name: str, verdict: str) -> None:
    assert invoke_json("demo", name)["classification"]["verdict"] == verdict


def test_demo_nonlocal_box_text() -> None:
    result = runner.invoke(cli, ["demo", "nonlocal-box", "--alpha", "0.3"])
    assert result.exit_code == 0
    assert "tr(ρB) = 4" in result.stdout
    assert "Lüders updates leave the state invariant" in result.stdout
    assert "Verdict: Type4" in result.stdout


def test_demo_animal_acts_verbatim() -> None:
    record = invoke_json("demo", "animal-acts")
    assert record["verbatim"]["tables"]["AB"] == [[0.049, 0.630], [0.259, 0.062]]
    text = runner.invoke(cli, ["demo", "animal-acts"]).stdout
    assert "0.049" in text


def test_demo_spheres_verification() -> None:
    verification = invoke_json("demo", "spheres")["verification"]
    assert verification["reproduction_residual"] < 1e-12
    assert verification["marginal_law_holds"]


def test_unknown_demo() -> None:
    result = runner.invoke(cli, ["demo", "dogs"])
    assert result.exit_code == 2
    assert "Unknown demo 'dogs'" in result.output
    assert "animal-acts" in result.output


def test_simulate_is_byte_identical() -> None:
    args: list[str] = ["simulate", "spheres", "--trials", "5000", "--seed", "11"]
    first = runner.invoke(cli, [*args, "--format", "json"])
    second = runner.invoke(cli, [*args, "--format", "json"])
    assert first.exit_code == 0
    assert first.stdout == second.stdout


@pytest.mark.parametrize("model", ("spheres", "vessels", "vessels-box"))
def test_simulate_models(model: str) -> None:
    record = invoke_json("simulate", model, "--trials", "2000")
    assert record["simulation"]["model"] == model
    assert record["simulation"]["trials"] == 2000
    assert "analytic_classification" in record


def test_simulate_angles() -> None:
    record = invoke_json(
        "simulate", "spheres", "--a", "0", "--ap", "0", "--b", "0", "--bp", "0",
        "--trials", "1000",
    )
    assert record["simulation"]["parameters"] == {
        "A": 0.0,
        "A'": 0.0,
        "B": 0.0,
        "B'": 0.0,
    }
    assert record["classification"]["expectations"]["AB"] == pytest.approx(-1.0)


def test_simulate_vessels_box() -> None:
    record = invoke_json("simulate", "vessels-box", "--trials", "100000", "--seed", "1")
    assert record["classification"]["chsh_max"] == pytest.approx(4.0)
    assert record["classification"]["max_marginal_deviation"] < 0.01


@pytest.mark.slow
def test_simulate_spheres_million_trials() -> None:
    record = invoke_json(
        "simulate", "spheres", "--a", "0", "--ap", "90", "--b", "135", "--bp", "45",
        "--trials", "1000000", "--seed", "7",
    )
    assert abs(record["classification"]["chsh_max"] - 2.828) < 0.01


def test_simulate_text() -> None:
    result = runner.invoke(cli, ["simulate", "vessels", "--trials", "100"])
    assert result.exit_code == 0
    assert "simulate config" in result.stdout
    assert "vessels: 100 trials per context, seed 0" in result.stdout
    assert "Verdict: Type3" in result.stdout


@pytest.mark.parametrize(
    "args",
    (("simulate", "marbles"), ("simulate", "spheres", "--trials", "0")),
)
def test_simulate_usage_errors(args: tuple[str, ...]) -> None:
    assert runner.invoke(cli, list(args)).exit_code == 2


def test_construct_animal_acts(animal_acts_json: Path, tmp_path: Path) -> None:
    output: Path = tmp_path / "model.json"
    record = invoke_json("construct", str(animal_acts_json), "--output", str(output))
    verification = record["verification"]
    assert verification["reproduction_residual"] < 1e-10
    assert verification["model"]["state_product"]["is_product"]
    assert "AB" in record["entangled_contexts"]
    assert json.loads(output.read_text())["label"] == "animal-acts"


def test_construct_vessels(vessels_json: Path) -> None:
    record = invoke_json("construct", str(vessels_json), "--state", *VESSELS_STATE)
    assert record["entangled_contexts"] == ["AB'", "A'B", "A'B'"]
    assert not record["verification"]["model"]["state_product"]["is_product"]


def test_construct_default_state_is_product(vessels_json: Path) -> None:
    """Without `--state` every file gets the product state (½, ½, ½, ½)."""
    record = invoke_json("construct", str(vessels_json))
    assert record["verification"]["model"]["state_product"]["is_product"]
    assert record["verification"]["reproduction_residual"] < 1e-10


def test_construct_text(cats_json: Path) -> None:
    result = runner.invoke(cli, ["construct", str(cats_json)])
    assert result.exit_code == 0
    assert "Reproduction residual" in result.stdout
    assert "Entangled measurements" in result.stdout


def test_construct_unnormalized_state(cats_json: Path) -> None:
    result = runner.invoke(
        cli, ["construct", str(cats_json), "--state", *(["1"] * 8)]
    )
    assert result.exit_code == 2
    assert "State must be normalized" in result.output


def test_setup() -> None:
    result = runner.invoke(cli, ["setup"])
    assert result.exit_code == 0
    assert "TOL_BELL" in result.stdout
