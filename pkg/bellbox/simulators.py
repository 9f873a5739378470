"""
Classical mechanisms that produce coincidence statistics.

Every simulator draws from one `numpy.random.Generator` (`PCG64`) per
context, spawned from ``SeedSequence(seed)`` in the order `AB`, `AB'`,
`A'B`, `A'B'`. Within a context each array of uniforms is drawn in full,
for all trials, before the next one, so results depend only on the seed,
the number of trials and the parameters.
"""
from dataclasses import dataclass
from logging import getLogger
from math import cos, degrees, pi, radians, sin
from typing import Final, Mapping

import numpy as np
from numpy.typing import NDArray
from tqdm import tqdm

from .bell_statistics import BellData, JointTable
from .datasets import load_dataset
from .settings import CONTEXTS, SETTINGS_PER_SIDE, ContextName, SettingName, settings
from .types import SimulationResultDict

logger = getLogger("rich")

TOTAL_LITERS: Final[float] = 20.0
HALF_LITERS: Final[float] = TOTAL_LITERS / 2

# Settings that siphon water; the others take a spoon of it
SIPHON_SETTINGS: Final[tuple[SettingName, ...]] = ("A", "B")


def context_generators(seed: int) -> dict[ContextName, np.random.Generator]:
    """One independent `PCG64` generator per context, in `CONTEXTS` order."""
    return {
        context: np.random.Generator(np.random.PCG64(child))
        for context, child in zip(
            CONTEXTS, np.random.SeedSequence(seed).spawn(len(CONTEXTS))
        )
    }


def _check_trials(trials: int) -> None:
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")


def _tally(a_plus: NDArray[np.bool_], b_plus: NDArray[np.bool_]) -> NDArray[np.int64]:
    """2×2 counts of ``(A_i, B_j)``; outcome index 0 is ``+1``."""
    return np.array(
        [
            [np.sum(a_plus & b_plus), np.sum(a_plus & ~b_plus)],
            [np.sum(~a_plus & b_plus), np.sum(~a_plus & ~b_plus)],
        ],
        dtype=np.int64,
    )


@dataclass(frozen=True)
class SphereExperimentConfig:
    """Measurement directions (radians) and run size of the connected spheres.

    Example:
        ```pycon
        >>> config = SphereExperimentConfig.from_degrees(0, 90, 135, 45, trials=10)
        >>> round(config.gamma("AB'"), 12) == round(-pi / 4, 12)
        True
        >>> SphereExperimentConfig(trials=0)
        Traceback (most recent call last):
        ...
        ValueError: trials must be at least 1, got 0

        ```
    """

    angle_a: float = 0.0
    angle_a_prime: float = pi / 2
    angle_b: float = 3 * pi / 4
    angle_b_prime: float = pi / 4
    trials: int = settings.DEFAULT_TRIALS
    seed: int = settings.DEFAULT_SEED

    def __post_init__(self) -> None:
        _check_trials(self.trials)

    @classmethod
    def from_degrees(
        cls,
        a: float = settings.SPHERE_ANGLES_DEGREES["A"],
        a_prime: float = settings.SPHERE_ANGLES_DEGREES["A'"],
        b: float = settings.SPHERE_ANGLES_DEGREES["B"],
        b_prime: float = settings.SPHERE_ANGLES_DEGREES["B'"],
        trials: int = settings.DEFAULT_TRIALS,
        seed: int = settings.DEFAULT_SEED,
    ) -> "SphereExperimentConfig":
        return cls(
            angle_a=radians(a),
            angle_a_prime=radians(a_prime),
            angle_b=radians(b),
            angle_b_prime=radians(b_prime),
            trials=trials,
            seed=seed,
        )

    def angles(self) -> dict[SettingName, float]:
        return {
            "A": self.angle_a,
            "A'": self.angle_a_prime,
            "B": self.angle_b,
            "B'": self.angle_b_prime,
        }

    def gamma(self, context: ContextName) -> float:
        """Angle between the two directions measured in ``context``."""
        angles: dict[SettingName, float] = self.angles()
        setting_a, setting_b = SETTINGS_PER_SIDE[context]
        return angles[setting_a] - angles[setting_b]

    def parameters(self) -> dict[str, float]:
        """Angles in degrees, keyed by setting."""
        return {setting: degrees(angle) for setting, angle in self.angles().items()}


@dataclass(frozen=True, eq=False)
class SimulationResult:
    """Counts and tables of one simulation run.

    Attributes:
        model: name of the simulated mechanism
        trials: trials per context
        seed: seed of the `SeedSequence`
        parameters: mechanism parameters, e.g. angles in degrees
        counts: 2×2 outcome counts per context
        empirical: tables of relative frequencies
        analytic: the exact tables of the mechanism, when known
    """

    model: str
    trials: int
    seed: int
    parameters: Mapping[str, float]
    counts: Mapping[ContextName, NDArray[np.int64]]
    empirical: BellData
    analytic: BellData | None = None

    def to_dict(self) -> SimulationResultDict:
        record: SimulationResultDict = {
            "model": self.model,
            "trials": self.trials,
            "seed": self.seed,
            "parameters": dict(self.parameters),
            "counts": {c: counts.tolist() for c, counts in self.counts.items()},
            "empirical": self.empirical.to_dict(),
        }
        if self.analytic is not None:
            record["analytic"] = self.analytic.to_dict()
        return record


def _result(
    model: str,
    trials: int,
    seed: int,
    parameters: Mapping[str, float],
    counts: dict[ContextName, NDArray[np.int64]],
    analytic: BellData | None,
) -> SimulationResult:
    empirical: BellData = BellData(
        tables={c: JointTable.from_counts(counts[c], label=c) for c in CONTEXTS},
        label=f"{model} (empirical)",
    )
    return SimulationResult(
        model=model,
        trials=trials,
        seed=seed,
        parameters=parameters,
        counts=counts,
        empirical=empirical,
        analytic=analytic,
    )


def spheres_analytic(gamma: float) -> JointTable:
    """Exact table ``(½ sin²(γ/2), ½ cos²(γ/2), ½ cos²(γ/2), ½ sin²(γ/2))``.

    Example:
        ```pycon
        >>> table = spheres_analytic(pi / 2)
        >>> [round(p, 12) for p in table.flat()]
        [0.25, 0.25, 0.25, 0.25]

        ```
    """
    apart: float = sin(gamma / 2) ** 2 / 2
    together: float = cos(gamma / 2) ** 2 / 2
    return JointTable(p=np.array([[apart, together], [together, apart]]))


def spheres_bell_data(config: SphereExperimentConfig) -> BellData:
    """Analytic tables of all four contexts of ``config``."""
    return BellData(
        tables={
            context: JointTable(p=spheres_analytic(config.gamma(context)).p, label=context)
            for context in CONTEXTS
        },
        label="spheres (analytic)",
    )


def spheres_simulate(
    config: SphereExperimentConfig, progress: bool = settings.SHOW_PROGRESS
) -> SimulationResult:
    """Monte Carlo run of two spheres joined by a rigid rod, each on an elastic.

    Per context the first array of uniforms breaks the elastic along the first
    direction: the first sphere, sitting at the center, lands on ``+a`` when
    ``2u - 1 < 0``. The rod puts the second sphere at the antipode, whose
    coordinate along the second elastic is ``-s cos γ`` (``s = ±1`` the first
    outcome). The second array breaks that elastic at ``2u - 1``; the sphere
    lands on ``+b`` when the break lies below its coordinate.

    Example:
        ```pycon
        >>> config = SphereExperimentConfig.from_degrees(0, 0, 0, 0, trials=1000)
        >>> round(spheres_simulate(config).empirical.expectations()["AB"], 12)
        -1.0

        ```
    """
    generators: dict[ContextName, np.random.Generator] = context_generators(
        config.seed
    )
    counts: dict[ContextName, NDArray[np.int64]] = {}
    for context in tqdm(
        CONTEXTS, desc="spheres", leave=False, colour="blue", disable=not progress
    ):
        rng: np.random.Generator = generators[context]
        first_break: NDArray[np.float64] = 2 * rng.random(config.trials) - 1
        second_break: NDArray[np.float64] = 2 * rng.random(config.trials) - 1
        a_plus: NDArray[np.bool_] = first_break < 0
        coordinate: NDArray[np.float64] = -np.where(a_plus, 1.0, -1.0) * cos(
            config.gamma(context)
        )
        counts[context] = _tally(a_plus, second_break < coordinate)
        logger.debug(f"spheres {context}: {counts[context].ravel().tolist()}")
    return _result(
        "spheres",
        config.trials,
        config.seed,
        config.parameters(),
        counts,
        spheres_bell_data(config),
    )


def vessels_deterministic() -> BellData:
    """Exact tables of the vessels of water.

    Two siphons together split the 20 liters randomly around 10, so exactly
    one collects more than 10. A siphon working alone collects all 20 liters,
    and a spoon always finds transparent water.

    Example:
        ```pycon
        >>> vessels_deterministic().expectations()
        {'AB': -1.0, "AB'": 1.0, "A'B": 1.0, "A'B'": 1.0}

        ```
    """
    return load_dataset("vessels")


def _siphon_volumes(
    context: ContextName, rng: np.random.Generator, trials: int
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Liters collected on each side; both draw from one uniform split."""
    split: NDArray[np.float64] = TOTAL_LITERS * rng.random(trials)
    setting_a, setting_b = SETTINGS_PER_SIDE[context]
    if setting_a in SIPHON_SETTINGS and setting_b in SIPHON_SETTINGS:
        return split, TOTAL_LITERS - split
    alone: NDArray[np.float64] = np.full(trials, TOTAL_LITERS)
    return alone, alone


def vessels_simulate(
    trials: int = settings.DEFAULT_TRIALS,
    seed: int = settings.DEFAULT_SEED,
    progress: bool = settings.SHOW_PROGRESS,
) -> SimulationResult:
    """Monte Carlo run of the vessels of water.

    Siphon settings answer ``+1`` when more than 10 liters are collected;
    spoon settings answer ``+1`` for transparent water, which it always is.
    Per context one array of uniforms sets the siphon split.
    """
    _check_trials(trials)
    generators: dict[ContextName, np.random.Generator] = context_generators(seed)
    counts: dict[ContextName, NDArray[np.int64]] = {}
    for context in tqdm(
        CONTEXTS, desc="vessels", leave=False, colour="blue", disable=not progress
    ):
        volume_a, volume_b = _siphon_volumes(context, generators[context], trials)
        setting_a, setting_b = SETTINGS_PER_SIDE[context]
        transparent: NDArray[np.bool_] = np.ones(trials, dtype=bool)
        a_plus = volume_a > HALF_LITERS if setting_a in SIPHON_SETTINGS else transparent
        b_plus = volume_b > HALF_LITERS if setting_b in SIPHON_SETTINGS else transparent
        counts[context] = _tally(a_plus, b_plus)
    return _result("vessels", trials, seed, {}, counts, vessels_deterministic())


def vessels_nonlocal_box(
    trials: int = settings.DEFAULT_TRIALS,
    seed: int = settings.DEFAULT_SEED,
    progress: bool = settings.SHOW_PROGRESS,
) -> SimulationResult:
    """Monte Carlo run of the vessels prepared in an equal mixture of clear and murky water.

    Per context the first array of uniforms is the mixture (``u < ½`` means
    transparent) and the second sets the siphon split. A siphon setting
    answers ``+1`` for more than 10 liters of transparent water or less than
    10 liters of non transparent water; a spoon setting answers ``+1`` for
    transparent water.

    Example:
        ```pycon
        >>> result = vessels_nonlocal_box(trials=1000, seed=1)
        >>> {c: round(e, 12) for c, e in result.empirical.expectations().items()}
        {'AB': -1.0, "AB'": 1.0, "A'B": 1.0, "A'B'": 1.0}

        ```
    """
    _check_trials(trials)
    generators: dict[ContextName, np.random.Generator] = context_generators(seed)
    counts: dict[ContextName, NDArray[np.int64]] = {}
    for context in tqdm(
        CONTEXTS, desc="vessels-box", leave=False, colour="blue", disable=not progress
    ):
        rng: np.random.Generator = generators[context]
        transparent: NDArray[np.bool_] = rng.random(trials) < 0.5
        volume_a, volume_b = _siphon_volumes(context, rng, trials)
        setting_a, setting_b = SETTINGS_PER_SIDE[context]
        outcomes: list[NDArray[np.bool_]] = []
        for setting, volume in ((setting_a, volume_a), (setting_b, volume_b)):
            if setting in SIPHON_SETTINGS:
                outcomes.append(
                    ((volume > HALF_LITERS) & transparent)
                    | ((volume < HALF_LITERS) & ~transparent)
                )
            else:
                outcomes.append(transparent)
        counts[context] = _tally(*outcomes)
    return _result("vessels-box", trials, seed, {}, counts, cats_gedanken())


def cats_gedanken() -> BellData:
    """Exact tables of Glimmer and Inkling, a nonlocal box.

    Example:
        ```pycon
        >>> cats_gedanken().expectations()
        {'AB': -1.0, "AB'": 1.0, "A'B": 1.0, "A'B'": 1.0}

        ```
    """
    return load_dataset("cats")
