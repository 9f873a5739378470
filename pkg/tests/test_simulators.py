from math import pi, sqrt

import numpy as np
import pytest

from bellbox.bell_statistics import BellData, Verdict, chsh, classify
from bellbox.settings import CONTEXTS
from bellbox.simulators import (
    SphereExperimentConfig,
    cats_gedanken,
    context_generators,
    spheres_analytic,
    spheres_bell_data,
    spheres_simulate,
    vessels_deterministic,
    vessels_nonlocal_box,
    vessels_simulate,
)


def test_spheres_analytic_grid() -> None:
    for gamma in np.linspace(-pi, pi, 100):
        apart = np.sin(gamma / 2) ** 2 / 2
        together = np.cos(gamma / 2) ** 2 / 2
        np.testing.assert_allclose(
            spheres_analytic(gamma).p,
            [[apart, together], [together, apart]],
            atol=1e-12,
        )


def test_spheres_analytic_respects_tsirelson() -> None:
    grid = np.linspace(0, 2 * pi, 100)
    for a in grid[::9]:
        for a_prime in grid[::9]:
            for b in grid:
                config = SphereExperimentConfig(a, a_prime, b, b + pi / 2)
                assert chsh(spheres_bell_data(config)).max <= 2 * sqrt(2) + 1e-12


def test_spheres_analytic_verdict() -> None:
    report = classify(spheres_bell_data(SphereExperimentConfig()))
    assert report.chsh_max == pytest.approx(2 * sqrt(2), abs=1e-12)
    assert report.verdict == Verdict.TYPE1


@pytest.mark.slow
def test_spheres_monte_carlo() -> None:
    config = SphereExperimentConfig.from_degrees(0, 90, 135, 45, trials=1_000_000)
    result = spheres_simulate(config)
    assert abs(chsh(result.empirical).max - 2 * sqrt(2)) < 0.01
    for context in CONTEXTS:
        assert result.counts[context].sum() == 1_000_000


@pytest.mark.slow
def test_spheres_empirical_matches_analytic(rng) -> None:
    for seed, angles in enumerate(rng.uniform(-pi, pi, size=(10, 4))):
        config = SphereExperimentConfig(*angles, trials=1_000_000, seed=seed)
        result = spheres_simulate(config)
        for context in CONTEXTS:
            np.testing.assert_allclose(
                result.empirical[context].p,
                spheres_analytic(config.gamma(context)).p,
                atol=0.005,
            )


@pytest.mark.slow
def test_spheres_orthogonal_directions_are_uncorrelated() -> None:
    config = SphereExperimentConfig.from_degrees(0, 90, 90, 180, trials=1_000_000)
    assert config.gamma("AB") == pytest.approx(-pi / 2)
    assert abs(spheres_simulate(config).empirical.expectations()["AB"]) < 0.005


@pytest.mark.slow
def test_spheres_marginals_are_fair() -> None:
    config = SphereExperimentConfig.from_degrees(0, 90, 135, 45, trials=1_000_000)
    empirical: BellData = spheres_simulate(config).empirical
    for context in CONTEXTS:
        np.testing.assert_allclose(empirical[context].marginal_a(), 0.5, atol=0.01)
        np.testing.assert_allclose(empirical[context].marginal_b(), 0.5, atol=0.01)


def test_spheres_simulation_is_deterministic() -> None:
    config = SphereExperimentConfig.from_degrees(trials=2000, seed=42)
    first, second = spheres_simulate(config), spheres_simulate(config)
    assert first.to_dict() == second.to_dict()
    other = spheres_simulate(SphereExperimentConfig.from_degrees(trials=2000, seed=43))
    assert other.to_dict()["counts"] != first.to_dict()["counts"]


def test_context_generators_are_independent() -> None:
    draws = {c: g.random() for c, g in context_generators(0).items()}
    assert list(draws) == list(CONTEXTS)
    assert len(set(draws.values())) == 4
    again = {c: g.random() for c, g in context_generators(0).items()}
    assert draws == again


def test_vessels_simulation_matches_deterministic() -> None:
    result = vessels_simulate(trials=5000, seed=3)
    assert result.analytic == vessels_deterministic()
    assert result.empirical.expectations() == pytest.approx(
        {"AB": -1.0, "AB'": 1.0, "A'B": 1.0, "A'B'": 1.0}
    )
    report = classify(result.empirical)
    assert report.verdict == Verdict.TYPE3
    assert report.deviation("A1").deviation == pytest.approx(0.5, abs=0.05)


def test_vessels_nonlocal_box() -> None:
    result = vessels_nonlocal_box(trials=20_000, seed=7)
    assert result.analytic == cats_gedanken()
    empirical: BellData = result.empirical
    assert chsh(empirical).max == pytest.approx(4.0)
    assert classify(empirical).max_marginal_deviation < 0.03
    for context in CONTEXTS:
        np.testing.assert_allclose(
            empirical[context].p, cats_gedanken()[context].p, atol=0.02
        )


@pytest.mark.parametrize(
    "simulate", (vessels_simulate, vessels_nonlocal_box), ids=("vessels", "box")
)
def test_trials_must_be_positive(simulate) -> None:
    with pytest.raises(ValueError, match="trials must be at least 1"):
        simulate(trials=0)


def test_config_parameters_in_degrees() -> None:
    config = SphereExperimentConfig.from_degrees(10, 20, 30, 40)
    assert {k: round(v, 9) for k, v in config.parameters().items()} == {
        "A": 10.0,
        "A'": 20.0,
        "B": 30.0,
        "B'": 40.0,
    }
