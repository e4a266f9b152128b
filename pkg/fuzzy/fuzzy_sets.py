from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, Tuple, Union

import numpy as np

from core.errors import DuplicateId, OutOfRange, ParseError
from core.intervals import Interval, IntervalRole, Theta, make_interval, m_theta


def _check_ids(ids: Tuple[str, ...]) -> None:
    seen = set()
    for object_id in ids:
        if not isinstance(object_id, str) or not object_id:
            raise ParseError(f"object id must be a non-empty string, got {object_id!r}")
        if object_id in seen:
            raise DuplicateId(f"duplicate object id '{object_id}'")
        seen.add(object_id)


@dataclass(frozen=True)
class IVFuzzySet:
    """
    Interval-valued fuzzy set over a finite, ordered universe.

    ids[i] carries the membership interval grades[i]; iteration follows the
    universe order.
    """
    ids: Tuple[str, ...]
    grades: Tuple[Interval, ...]

    def __post_init__(self):
        if len(self.ids) != len(self.grades):
            raise ParseError(f"{len(self.ids)} ids but {len(self.grades)} grades")
        _check_ids(self.ids)
        for object_id, grade in zip(self.ids, self.grades):
            if grade.lo < 0.0 or grade.hi > 1.0:
                raise OutOfRange(f"grade of '{object_id}' {grade} is not inside [0, 1]")

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[str, Union[Interval, Tuple[float, float]]]]) -> "IVFuzzySet":
        ids, grades = [], []
        for object_id, grade in pairs:
            if not isinstance(grade, Interval):
                grade = make_interval(grade[0], grade[1], IntervalRole.MEMBERSHIP)
            ids.append(object_id)
            grades.append(grade)
        return cls(tuple(ids), tuple(grades))

    def __len__(self) -> int:
        return len(self.ids)

    def __iter__(self) -> Iterator[Tuple[str, Interval]]:
        return iter(zip(self.ids, self.grades))

    def grade(self, object_id: str) -> Interval:
        return self.grades[self.ids.index(object_id)]


@dataclass(frozen=True)
class ScalarFuzzySet:
    """Fuzzy set with scalar grades in [0, 1] over a finite, ordered universe."""
    ids: Tuple[str, ...]
    grades: Tuple[float, ...]

    def __post_init__(self):
        if len(self.ids) != len(self.grades):
            raise ParseError(f"{len(self.ids)} ids but {len(self.grades)} grades")
        _check_ids(self.ids)
        for object_id, m in zip(self.ids, self.grades):
            if not 0.0 <= m <= 1.0:
                raise OutOfRange(f"grade of '{object_id}' ({m}) is not inside [0, 1]")

    @classmethod
    def from_mapping(cls, grades: Dict[str, float]) -> "ScalarFuzzySet":
        return cls(tuple(grades), tuple(float(m) for m in grades.values()))

    @classmethod
    def from_grades(cls, grades: Iterable[float], prefix: str = "x") -> "ScalarFuzzySet":
        """Anonymous universe x1, x2, ... for generated data."""
        values = tuple(float(m) for m in grades)
        return cls(tuple(f"{prefix}{i + 1}" for i in range(len(values))), values)

    def __len__(self) -> int:
        return len(self.ids)

    def __iter__(self) -> Iterator[Tuple[str, float]]:
        return iter(zip(self.ids, self.grades))

    def grade(self, object_id: str) -> float:
        return self.grades[self.ids.index(object_id)]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.grades, dtype=np.float64)


def reduce(fuzzy_set: IVFuzzySet, theta: Union[Theta, float]) -> ScalarFuzzySet:
    """
    θ-reduce every interval grade to m_θ, keeping the universe order.

    Args:
        fuzzy_set: interval-valued fuzzy set
        theta: θ in [0, 1]; 0 keeps lower bounds, 1 keeps upper bounds

    Returns:
        ScalarFuzzySet with the same ids.
    """
    theta = Theta(theta)
    return ScalarFuzzySet(fuzzy_set.ids, tuple(m_theta(grade, theta) for grade in fuzzy_set.grades))


def embed_scalar(fuzzy_set: ScalarFuzzySet) -> IVFuzzySet:
    """Promote each scalar grade m to the zero-width interval [m, m]."""
    return IVFuzzySet(fuzzy_set.ids, tuple(Interval(m, m) for m in fuzzy_set.grades))
