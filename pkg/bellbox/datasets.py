"""
Bundled coincidence datasets, embedded so demos need no filesystem access.

Attributes:
    ANIMAL_ACTS:
        Probabilities of the four exemplar pairs of the concept combination
        *The Animal Acts* (settings `A`: Horse/Bear, `A'`: Tiger/Cat, `B`:
        Growls/Whinnies, `B'`: Snorts/Meows), as printed to three decimals
        and measured on 81 subjects.
    VESSELS_OF_WATER:
        Two vessels connected by a tube holding 20 liters of transparent
        water. `A` and `B` siphon out water and answer whether more than 10
        liters were collected; `A'` and `B'` take a spoon of water and
        answer whether it is transparent.
    CATS_GEDANKEN:
        Two cats, Glimmer and Inkling, whose coincidence tables form a
        nonlocal box.
    UNIFORM:
        Every outcome equally likely in every context.
"""
from copy import deepcopy
from typing import Final

from .bell_statistics import BellData
from .types import BellDataDict

ANIMAL_ACTS_SUBJECTS: Final[int] = 81

ANIMAL_ACTS: Final[BellDataDict] = {
    "tables": {
        "AB": [[0.049, 0.630], [0.259, 0.062]],
        "AB'": [[0.593, 0.025], [0.296, 0.086]],
        "A'B": [[0.778, 0.086], [0.086, 0.049]],
        "A'B'": [[0.148, 0.086], [0.099, 0.667]],
    },
    "subjects": ANIMAL_ACTS_SUBJECTS,
    "label": "animal-acts",
}

VESSELS_OF_WATER: Final[BellDataDict] = {
    "tables": {
        "AB": [[0.0, 0.5], [0.5, 0.0]],
        "AB'": [[1.0, 0.0], [0.0, 0.0]],
        "A'B": [[1.0, 0.0], [0.0, 0.0]],
        "A'B'": [[1.0, 0.0], [0.0, 0.0]],
    },
    "label": "vessels",
}

CATS_GEDANKEN: Final[BellDataDict] = {
    "tables": {
        "AB": [[0.0, 0.5], [0.5, 0.0]],
        "AB'": [[0.5, 0.0], [0.0, 0.5]],
        "A'B": [[0.5, 0.0], [0.0, 0.5]],
        "A'B'": [[0.5, 0.0], [0.0, 0.5]],
    },
    "label": "cats",
}

UNIFORM: Final[BellDataDict] = {
    "tables": {
        context: [[0.25, 0.25], [0.25, 0.25]]
        for context in ("AB", "AB'", "A'B", "A'B'")
    },
    "label": "uniform",
}

DATASETS: Final[dict[str, BellDataDict]] = {
    "animal-acts": ANIMAL_ACTS,
    "vessels": VESSELS_OF_WATER,
    "cats": CATS_GEDANKEN,
    "uniform": UNIFORM,
}


def dataset_dict(name: str) -> BellDataDict:
    """A copy of the `JSON` form of bundled dataset ``name``.

    Raises:
        KeyError: ``name`` is not in `DATASETS`
    """
    return deepcopy(DATASETS[name])


def load_dataset(name: str) -> BellData:
    """Parse bundled dataset ``name`` into a `BellData`.

    Example:
        ```pycon
        >>> load_dataset("animal-acts")["AB"].flat() == (4/81, 51/81, 21/81, 5/81)
        True

        ```
    """
    return BellData.from_dict(dataset_dict(name))


def animal_acts() -> BellData:
    return load_dataset("animal-acts")

