"""
Coincidence tables, CHSH values, the marginal law and the Type 1-4 classifier.

A `JointTable` holds the probabilities ``p[i, j]`` of outcomes ``(A_i, B_j)``
of one coincidence measurement; a `BellData` bundles the four tables of the
contexts `AB`, `AB'`, `A'B` and `A'B'`.
"""
from dataclasses import dataclass, field
from enum import StrEnum
from logging import getLogger
from math import sqrt
from typing import Any, Final, Mapping, NamedTuple, Sequence

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike, NDArray

from .settings import (
    CONTEXTS,
    DEFAULT_OUTCOMES,
    SETTINGS,
    SETTINGS_PER_SIDE,
    ContextName,
    SettingName,
    settings,
)
from .types import (
    BellDataDict,
    ClassificationReportDict,
    FactorizationDict,
    MarginalDeviationDict,
    TableRows,
)

logger = getLogger("rich")

CLASSICAL_BOUND: Final[float] = 2.0
TSIRELSON_BOUND: Final[float] = 2 * sqrt(2)

DATAFRAME_COLUMNS: Final[tuple[str, ...]] = ("p11", "p12", "p21", "p22", "E")


class InvalidProbabilitiesError(ValueError):
    """A table has negative entries or does not sum to 1."""


class BellDataFormatError(ValueError):
    """An input mapping does not follow the `BellDataDict` schema."""


def _is_number(value: Any) -> bool:
    """JSON numbers only: no strings, booleans or nested lists."""
    return isinstance(value, (int, float, np.integer, np.floating)) and not isinstance(
        value, (bool, np.bool_)
    )


def _as_outcomes(values: Sequence[float], name: str) -> tuple[float, float]:
    try:
        outcomes: tuple[float, ...] = tuple(float(v) for v in values)
    except (TypeError, ValueError) as err:
        raise BellDataFormatError(f"Outcomes of {name} must be numbers") from err
    if len(outcomes) != 2:
        raise BellDataFormatError(
            f"Outcomes of {name} must be a pair, got {len(outcomes)} values"
        )
    return outcomes[0], outcomes[1]


@dataclass(frozen=True)
class JointTable:
    """Joint probabilities of one coincidence measurement.

    Attributes:
        p: 2×2 probabilities, ``p[i, j]`` for outcomes ``(A_i, B_j)``
        outcomes_a: values of the first side outcomes ``A_1, A_2``
        outcomes_b: values of the second side outcomes ``B_1, B_2``
        label: optional name, e.g. the context

    Raises:
        BellDataFormatError: ``p`` is not 2×2
        InvalidProbabilitiesError:
            an entry is below ``-TABLE_SUM_TOL`` or the sum misses 1 by more
            than ``TABLE_SUM_TOL``

    Example:
        ```pycon
        >>> table = JointTable.from_rows([[0.4, 0.1], [0.1, 0.4]])
        >>> table.marginal_a().tolist()
        [0.5, 0.5]
        >>> JointTable.from_rows([[0.5, 0.5], [0.5, 0.5]])
        Traceback (most recent call last):
        ...
        bellbox.bell_statistics.InvalidProbabilitiesError: Probabilities sum to 2.0, not 1

        ```
    """

    p: NDArray[np.float64]
    outcomes_a: tuple[float, float] = DEFAULT_OUTCOMES
    outcomes_b: tuple[float, float] = DEFAULT_OUTCOMES
    label: str = ""

    def __post_init__(self) -> None:
        probabilities: NDArray[np.float64] = np.asarray(self.p, dtype=np.float64)
        if probabilities.shape != (2, 2):
            raise BellDataFormatError(
                f"{self.label or 'Table'} must be 2×2, got shape {probabilities.shape}"
            )
        if not np.all(np.isfinite(probabilities)):
            raise InvalidProbabilitiesError(
                f"{self.label or 'Table'} has non finite entries"
            )
        if np.any(probabilities < -settings.TABLE_SUM_TOL):
            raise InvalidProbabilitiesError(
                f"{self.label or 'Table'} has negative probabilities: "
                f"{probabilities.ravel().tolist()}"
            )
        total: float = float(probabilities.sum())
        if abs(total - 1.0) > settings.TABLE_SUM_TOL:
            raise InvalidProbabilitiesError(
                f"{self.label + ' p' if self.label else 'P'}robabilities "
                f"sum to {round(total, 12)}, not 1"
            )
        object.__setattr__(self, "p", probabilities)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, JointTable):
            return NotImplemented
        return (
            bool(np.array_equal(self.p, other.p))
            and self.outcomes_a == other.outcomes_a
            and self.outcomes_b == other.outcomes_b
        )

    def __hash__(self) -> int:
        return hash((tuple(self.flat()), self.outcomes_a, self.outcomes_b))

    @classmethod
    def from_rows(
        cls,
        rows: ArrayLike,
        outcomes_a: Sequence[float] = DEFAULT_OUTCOMES,
        outcomes_b: Sequence[float] = DEFAULT_OUTCOMES,
        label: str = "",
        normalize: bool = False,
        normalize_tol: float = settings.NORMALIZE_TOL,
        subjects: int | None = None,
    ) -> "JointTable":
        """Build a table from ``[[p11, p12], [p21, p22]]``.

        Args:
            rows: the 2×2 probabilities
            outcomes_a: outcome values of the first side
            outcomes_b: outcome values of the second side
            label: name of the table
            normalize:
                rescale a table whose sum is within ``normalize_tol`` of 1
            normalize_tol: largest sum deviation `normalize` accepts
            subjects:
                number of trials behind the table: snap each probability to
                the nearest multiple of ``1 / subjects``
        """
        numbers_only: str = f"{label or 'Table'} must hold numbers only"
        try:
            entries: NDArray[np.object_] = np.asarray(rows, dtype=object).ravel()
            p: NDArray[np.float64] = np.asarray(rows, dtype=np.float64)
        except (TypeError, ValueError) as err:
            raise BellDataFormatError(numbers_only) from err
        if not all(map(_is_number, entries)):
            raise BellDataFormatError(numbers_only)
        if p.shape != (2, 2):
            raise BellDataFormatError(
                f"{label or 'Table'} must be 2×2, got shape {p.shape}"
            )
        if np.any(p < -settings.TABLE_SUM_TOL):
            raise InvalidProbabilitiesError(
                f"{label or 'Table'} has negative probabilities: {p.ravel().tolist()}"
            )
        total: float = float(p.sum())
        if normalize and abs(total - 1.0) > normalize_tol:
            raise InvalidProbabilitiesError(
                f"{label or 'Table'} sums to {round(total, 12)}, "
                f"beyond the normalization tolerance {normalize_tol}"
            )
        if subjects is not None:
            counts: NDArray[np.int64] = np.rint(p * subjects).astype(np.int64)
            if counts.sum() != subjects and not normalize:
                raise InvalidProbabilitiesError(
                    f"{label or 'Table'} rounds to {counts.sum()} of {subjects} subjects"
                )
            return cls.from_counts(counts, outcomes_a, outcomes_b, label)
        if normalize and abs(total - 1.0) > settings.TABLE_SUM_TOL:
            logger.info(f"Renormalizing {label or 'table'} from a sum of {total}")
            p = p / total
        return cls(
            p=p,
            outcomes_a=_as_outcomes(outcomes_a, "A"),
            outcomes_b=_as_outcomes(outcomes_b, "B"),
            label=label,
        )

    @classmethod
    def from_counts(
        cls,
        counts: ArrayLike,
        outcomes_a: Sequence[float] = DEFAULT_OUTCOMES,
        outcomes_b: Sequence[float] = DEFAULT_OUTCOMES,
        label: str = "",
    ) -> "JointTable":
        """Build a table of relative frequencies from 2×2 outcome counts.

        Example:
            ```pycon
            >>> [round(v, 4) for v in JointTable.from_counts([[4, 51], [21, 5]]).flat()]
            [0.0494, 0.6296, 0.2593, 0.0617]

            ```
        """
        tally: NDArray[np.float64] = np.asarray(counts, dtype=np.float64)
        if tally.shape != (2, 2):
            raise BellDataFormatError(
                f"{label or 'Counts'} must be 2×2, got shape {tally.shape}"
            )
        if np.any(tally < 0) or tally.sum() <= 0:
            raise InvalidProbabilitiesError(
                f"{label or 'Counts'} must be nonnegative with a positive total"
            )
        return cls(
            p=tally / tally.sum(),
            outcomes_a=_as_outcomes(outcomes_a, "A"),
            outcomes_b=_as_outcomes(outcomes_b, "B"),
            label=label,
        )

    def marginal_a(self) -> NDArray[np.float64]:
        """Probabilities of ``A_1, A_2`` summed over the second side."""
        return self.p.sum(axis=1)

    def marginal_b(self) -> NDArray[np.float64]:
        """Probabilities of ``B_1, B_2`` summed over the first side."""
        return self.p.sum(axis=0)

    def flat(self) -> tuple[float, float, float, float]:
        """Entries on the ``(11, 12, 21, 22)`` grid."""
        p11, p12, p21, p22 = (float(v) for v in self.p.ravel())
        return p11, p12, p21, p22

    def to_rows(self) -> TableRows:
        return [[float(v) for v in row] for row in self.p]


def expectation(table: JointTable) -> float:
    """Expectation ``sum_ij λ(A_i) λ(B_j) p[i, j]``.

    Example:
        ```pycon
        >>> expectation(JointTable.from_rows([[0.5, 0], [0, 0.5]]))
        1.0
        >>> expectation(JointTable.from_rows([[0.25, 0.25], [0.25, 0.25]]))
        0.0

        ```
    """
    labels: NDArray[np.float64] = np.outer(table.outcomes_a, table.outcomes_b)
    return float(np.sum(labels * table.p))


@dataclass(frozen=True)
class BellData:
    """The four coincidence tables of one CHSH experiment.

    Attributes:
        tables: one `JointTable` per context in `CONTEXTS`
        label: free text name of the dataset
        subjects: trials behind every table, when known
    """

    tables: Mapping[ContextName, JointTable]
    label: str = ""
    subjects: int | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        missing: list[str] = [c for c in CONTEXTS if c not in self.tables]
        if missing:
            raise BellDataFormatError(f"Missing context tables: {', '.join(missing)}")
        unknown: list[str] = [c for c in self.tables if c not in CONTEXTS]
        if unknown:
            raise BellDataFormatError(f"Unknown context tables: {', '.join(unknown)}")
        object.__setattr__(
            self, "tables", {context: self.tables[context] for context in CONTEXTS}
        )

    def __getitem__(self, context: ContextName) -> JointTable:
        return self.tables[context]

    @classmethod
    def from_tables(
        cls, rows: Mapping[ContextName, ArrayLike], label: str = "", **kwargs
    ) -> "BellData":
        """Build from 2×2 probability rows per context with ±1 outcomes."""
        return cls(
            tables={
                context: JointTable.from_rows(table, label=context, **kwargs)
                for context, table in rows.items()
            },
            label=label,
        )

    @classmethod
    def from_dict(
        cls,
        data: BellDataDict | Mapping[str, Any],
        normalize: bool = False,
        normalize_tol: float = settings.NORMALIZE_TOL,
    ) -> "BellData":
        """Parse the `JSON` input schema.

        Raises:
            BellDataFormatError: a field is missing, has the wrong shape or type
            InvalidProbabilitiesError: a table is not a probability distribution

        Example:
            ```pycon
            >>> uniform = [[0.25, 0.25], [0.25, 0.25]]
            >>> data = BellData.from_dict(
            ...     {"tables": {c: uniform for c in ("AB", "AB'", "A'B", "A'B'")}})
            >>> data.expectations()
            {'AB': 0.0, "AB'": 0.0, "A'B": 0.0, "A'B'": 0.0}
            >>> BellData.from_dict({"tables": {"AB": uniform}})
            Traceback (most recent call last):
            ...
            bellbox.bell_statistics.BellDataFormatError: Missing context tables: AB', A'B, A'B'

            ```
        """
        if not isinstance(data, Mapping):
            raise BellDataFormatError("Expected a JSON object at the top level")
        if "tables" not in data:
            raise BellDataFormatError("Missing field: tables")
        tables: Any = data["tables"]
        if not isinstance(tables, Mapping):
            raise BellDataFormatError("Field tables must be an object of contexts")
        outcomes: Any = data.get("outcomes", {})
        if not isinstance(outcomes, Mapping):
            raise BellDataFormatError("Field outcomes must be an object of settings")
        unknown: list[str] = [s for s in outcomes if s not in SETTINGS]
        if unknown:
            raise BellDataFormatError(f"Unknown outcome settings: {', '.join(unknown)}")
        subjects: Any = data.get("subjects")
        if subjects is not None and (
            isinstance(subjects, bool) or not isinstance(subjects, int) or subjects < 1
        ):
            raise BellDataFormatError("Field subjects must be a positive integer")
        label: Any = data.get("label", "")
        if not isinstance(label, str):
            raise BellDataFormatError("Field label must be a string")
        missing: list[str] = [c for c in CONTEXTS if c not in tables]
        if missing:
            raise BellDataFormatError(f"Missing context tables: {', '.join(missing)}")
        extra: list[str] = [c for c in tables if c not in CONTEXTS]
        if extra:
            raise BellDataFormatError(f"Unknown context tables: {', '.join(extra)}")
        parsed: dict[ContextName, JointTable] = {}
        for context in CONTEXTS:
            setting_a, setting_b = SETTINGS_PER_SIDE[context]
            parsed[context] = JointTable.from_rows(
                tables[context],
                outcomes_a=_as_outcomes(
                    outcomes.get(setting_a, DEFAULT_OUTCOMES), setting_a
                ),
                outcomes_b=_as_outcomes(
                    outcomes.get(setting_b, DEFAULT_OUTCOMES), setting_b
                ),
                label=context,
                normalize=normalize,
                normalize_tol=normalize_tol,
                subjects=subjects,
            )
        return cls(tables=parsed, label=label, subjects=subjects)

    def outcomes(self) -> dict[SettingName, tuple[float, float]]:
        """Outcome values per setting, read from the tables they appear in."""
        values: dict[SettingName, tuple[float, float]] = {}
        for context, table in self.tables.items():
            setting_a, setting_b = SETTINGS_PER_SIDE[context]
            values.setdefault(setting_a, table.outcomes_a)
            values.setdefault(setting_b, table.outcomes_b)
        return {setting: values[setting] for setting in SETTINGS}

    def to_dict(self) -> BellDataDict:
        """Serialize to the `JSON` input schema."""
        record: BellDataDict = {
            "tables": {c: t.to_rows() for c, t in self.tables.items()},
            "outcomes": {s: list(v) for s, v in self.outcomes().items()},
        }
        if self.subjects is not None:
            record["subjects"] = self.subjects
        if self.label:
            record["label"] = self.label
        return record

    def expectations(self) -> dict[ContextName, float]:
        return {context: expectation(t) for context, t in self.tables.items()}

    def to_dataframe(self) -> pd.DataFrame:
        """One row per context with columns `p11 p12 p21 p22 E`."""
        return pd.DataFrame(
            [(*t.flat(), expectation(t)) for t in self.tables.values()],
            index=pd.Index(list(self.tables), name="context"),
            columns=list(DATAFRAME_COLUMNS),
        )


class ChshValues(NamedTuple):
    fixed: float
    max: float


def chsh(data: BellData) -> ChshValues:
    """CHSH values of ``data``.

    ``fixed`` is ``E(A',B') + E(A',B) + E(A,B') - E(A,B)``; ``max`` is the
    largest ``abs`` over the four placements of the single minus sign.

    Example:
        ```pycon
        >>> correlated = [[0.5, 0], [0, 0.5]]
        >>> anti = [[0, 0.5], [0.5, 0]]
        >>> box = BellData.from_tables(
        ...     {"AB": anti, "AB'": correlated, "A'B": correlated, "A'B'": correlated})
        >>> chsh(box)
        ChshValues(fixed=4.0, max=4.0)

        ```
    """
    e: dict[ContextName, float] = data.expectations()
    fixed: float = e["A'B'"] + e["A'B"] + e["AB'"] - e["AB"]
    total: float = sum(e.values())
    return ChshValues(
        fixed=fixed, max=max(abs(total - 2 * value) for value in e.values())
    )


class MarginalDeviation(NamedTuple):
    """One comparison of a single side marginal across two contexts.

    Attributes:
        setting: the outcome compared, e.g. ``"A'1"``
        side: ``"A"`` for the first side, ``"B"`` for the second
        contexts: the two contexts sharing the setting
        lhs: marginal probability in the first context
        rhs: marginal probability in the second context
        deviation: ``abs(lhs - rhs)``
    """

    setting: str
    side: str
    contexts: tuple[ContextName, ContextName]
    lhs: float
    rhs: float
    deviation: float

    def to_dict(self) -> MarginalDeviationDict:
        return {
            "setting": self.setting,
            "side": self.side,
            "contexts": list(self.contexts),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "deviation": self.deviation,
        }

    @classmethod
    def from_dict(cls, record: MarginalDeviationDict) -> "MarginalDeviation":
        first, second = record["contexts"]
        return cls(
            setting=record["setting"],
            side=record["side"],
            contexts=(first, second),  # type: ignore[arg-type]
            lhs=record["lhs"],
            rhs=record["rhs"],
            deviation=record["deviation"],
        )


# Setting, side, and the two contexts whose marginals must agree
MARGINAL_COMPARISONS: Final[
    tuple[tuple[SettingName, str, ContextName, ContextName], ...]
] = (
    ("A", "A", "AB", "AB'"),
    ("A'", "A", "A'B", "A'B'"),
    ("B", "B", "AB", "A'B"),
    ("B'", "B", "AB'", "A'B'"),
)


def marginal_law_audit(data: BellData) -> list[MarginalDeviation]:
    """All eight marginal law comparisons of ``data``.

    Example:
        ```pycon
        >>> correlated = [[0.5, 0], [0, 0.5]]
        >>> box = BellData.from_tables({c: correlated for c in CONTEXTS})
        >>> max(d.deviation for d in marginal_law_audit(box))
        0.0

        ```
    """
    deviations: list[MarginalDeviation] = []
    for setting, side, first, second in MARGINAL_COMPARISONS:
        if side == "A":
            lhs, rhs = data[first].marginal_a(), data[second].marginal_a()
        else:
            lhs, rhs = data[first].marginal_b(), data[second].marginal_b()
        for outcome in range(2):
            deviations.append(
                MarginalDeviation(
                    setting=f"{setting}{outcome + 1}",
                    side=side,
                    contexts=(first, second),
                    lhs=float(lhs[outcome]),
                    rhs=float(rhs[outcome]),
                    deviation=float(abs(lhs[outcome] - rhs[outcome])),
                )
            )
    return deviations


class Factorization(NamedTuple):
    """Whether a table is ``p[i, j] = a[i] * b[j]``, with the marginals as factors."""

    factorizable: bool
    a: tuple[float, float]
    b: tuple[float, float]
    residual: float

    def to_dict(self) -> FactorizationDict:
        return {
            "factorizable": self.factorizable,
            "a": list(self.a),
            "b": list(self.b),
            "residual": self.residual,
        }

    @classmethod
    def from_dict(cls, record: FactorizationDict) -> "Factorization":
        a1, a2 = record["a"]
        b1, b2 = record["b"]
        return cls(
            factorizable=record["factorizable"],
            a=(a1, a2),
            b=(b1, b2),
            residual=record["residual"],
        )


def factorizability(
    table: JointTable, tol: float = settings.FACTORIZATION_TOL
) -> Factorization:
    """Test whether ``table`` is rank one, i.e. ``abs(p11 p22 - p12 p21) <= tol``.

    Example:
        ```pycon
        >>> table = JointTable.from_rows(np.outer([0.6, 0.4], [0.7, 0.3]))
        >>> result = factorizability(table)
        >>> result.factorizable, [round(v, 12) for v in result.a]
        (True, [0.6, 0.4])
        >>> factorizability(JointTable.from_rows([[0.5, 0], [0, 0.5]])).residual
        0.25

        ```
    """
    residual: float = float(abs(np.linalg.det(table.p)))
    a1, a2 = (float(v) for v in table.marginal_a())
    b1, b2 = (float(v) for v in table.marginal_b())
    return Factorization(
        factorizable=residual <= tol, a=(a1, a2), b=(b1, b2), residual=residual
    )


class Verdict(StrEnum):
    """Entanglement situations ordered by CHSH value and the marginal law."""

    NO_VIOLATION = "NoViolation"
    TYPE1 = "Type1"
    TYPE2 = "Type2"
    TYPE3 = "Type3"
    TYPE4 = "Type4"

    @property
    def description(self) -> str:
        return VERDICT_DESCRIPTIONS[self]


VERDICT_DESCRIPTIONS: Final[dict[Verdict, str]] = {
    Verdict.NO_VIOLATION: "CHSH inequality satisfied: a classical model exists",
    Verdict.TYPE1: "customary quantum modeling (within Tsirelson's bound, marginal law holds)",
    Verdict.TYPE2: "nonlocal non-marginal box modeling 1 (within Tsirelson's bound, marginal law violated)",
    Verdict.TYPE3: "nonlocal non-marginal box modeling 2 (beyond Tsirelson's bound, marginal law violated)",
    Verdict.TYPE4: "nonlocal box modeling (beyond Tsirelson's bound, marginal law holds)",
}


def verdict_for(
    chsh_max: float,
    max_marginal_deviation: float,
    tol_bell: float = settings.TOL_BELL,
    tol_marginal: float = settings.TOL_MARGINAL,
) -> Verdict:
    """Map a CHSH value and a marginal deviation onto a `Verdict`.

    Example:
        ```pycon
        >>> verdict_for(2.0, 0.5)
        <Verdict.NO_VIOLATION: 'NoViolation'>
        >>> verdict_for(2.5, 0.0)
        <Verdict.TYPE1: 'Type1'>
        >>> verdict_for(4.0, 0.5)
        <Verdict.TYPE3: 'Type3'>

        ```
    """
    marginal_holds: bool = max_marginal_deviation <= tol_marginal
    if chsh_max <= CLASSICAL_BOUND + tol_bell:
        return Verdict.NO_VIOLATION
    if chsh_max <= TSIRELSON_BOUND + tol_bell:
        return Verdict.TYPE1 if marginal_holds else Verdict.TYPE2
    return Verdict.TYPE4 if marginal_holds else Verdict.TYPE3


@dataclass(frozen=True)
class ClassificationReport:
    """Numbers behind a `Verdict` alongside the verdict itself.

    Attributes:
        expectations: ``E`` per context
        chsh_fixed: ``E(A',B') + E(A',B) + E(A,B') - E(A,B)``
        chsh_max: largest ``abs`` CHSH value over the sign placements
        marginal_deviations: the eight marginal law comparisons
        max_marginal_deviation: largest of `marginal_deviations`
        factorizable: `factorizability` per context
        verdict: the classification
        tol_bell: tolerance on the CHSH thresholds
        tol_marginal: tolerance on the marginal law
    """

    expectations: dict[ContextName, float]
    chsh_fixed: float
    chsh_max: float
    marginal_deviations: tuple[MarginalDeviation, ...]
    max_marginal_deviation: float
    factorizable: dict[ContextName, Factorization]
    verdict: Verdict
    tol_bell: float = settings.TOL_BELL
    tol_marginal: float = settings.TOL_MARGINAL

    @property
    def marginal_law_holds(self) -> bool:
        return self.max_marginal_deviation <= self.tol_marginal

    def deviation(self, setting: str) -> MarginalDeviation:
        """The comparison of outcome ``setting``, e.g. ``"A'1"``."""
        for deviation in self.marginal_deviations:
            if deviation.setting == setting:
                return deviation
        raise KeyError(setting)

    def to_dict(self) -> ClassificationReportDict:
        return {
            "expectations": dict(self.expectations),
            "chsh_fixed": self.chsh_fixed,
            "chsh_max": self.chsh_max,
            "marginal_deviations": [d.to_dict() for d in self.marginal_deviations],
            "max_marginal_deviation": self.max_marginal_deviation,
            "factorizable": {c: f.to_dict() for c, f in self.factorizable.items()},
            "verdict": str(self.verdict),
            "verdict_description": self.verdict.description,
            "tol_bell": self.tol_bell,
            "tol_marginal": self.tol_marginal,
        }

    @classmethod
    def from_dict(cls, record: ClassificationReportDict) -> "ClassificationReport":
        return cls(
            expectations=dict(record["expectations"]),  # type: ignore[arg-type]
            chsh_fixed=record["chsh_fixed"],
            chsh_max=record["chsh_max"],
            marginal_deviations=tuple(
                MarginalDeviation.from_dict(d) for d in record["marginal_deviations"]
            ),
            max_marginal_deviation=record["max_marginal_deviation"],
            factorizable={
                c: Factorization.from_dict(f)  # type: ignore[misc]
                for c, f in record["factorizable"].items()
            },
            verdict=Verdict(record["verdict"]),
            tol_bell=record["tol_bell"],
            tol_marginal=record["tol_marginal"],
        )


def classify(
    data: BellData,
    tol_bell: float = settings.TOL_BELL,
    tol_marginal: float = settings.TOL_MARGINAL,
    tol_factorization: float = settings.FACTORIZATION_TOL,
) -> ClassificationReport:
    """Classify ``data`` into `NoViolation` or one of the four types.

    The verdict is based on ``chsh_max``; ``chsh_fixed`` is reported alongside.

    Example:
        ```pycon
        >>> correlated = [[0.5, 0], [0, 0.5]]
        >>> anti = [[0, 0.5], [0.5, 0]]
        >>> box = BellData.from_tables(
        ...     {"AB": anti, "AB'": correlated, "A'B": correlated, "A'B'": correlated})
        >>> classify(box).verdict
        <Verdict.TYPE4: 'Type4'>

        ```
    """
    values: ChshValues = chsh(data)
    deviations: list[MarginalDeviation] = marginal_law_audit(data)
    max_deviation: float = max(d.deviation for d in deviations)
    verdict: Verdict = verdict_for(values.max, max_deviation, tol_bell, tol_marginal)
    logger.debug(
        f"{data.label or 'BellData'}: chsh_max={values.max:.6f}, "
        f"max marginal deviation={max_deviation:.6f} -> {verdict}"
    )
    return ClassificationReport(
        expectations=data.expectations(),
        chsh_fixed=values.fixed,
        chsh_max=values.max,
        marginal_deviations=tuple(deviations),
        max_marginal_deviation=max_deviation,
        factorizable={
            c: factorizability(t, tol_factorization) for c, t in data.tables.items()
        },
        verdict=verdict,
        tol_bell=tol_bell,
        tol_marginal=tol_marginal,
    )
