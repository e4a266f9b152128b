import json
import logging
import math
import re
from pathlib import Path
from typing import Union

import pandas as pd

from core.errors import (
    DuplicateId,
    EmptyUniverse,
    InvertedBounds,
    MissingInput,
    NonPositiveLoss,
    OutOfRange,
    ParseError,
)
from core.intervals import Interval
from decisions.loss_thresholds import IntervalLossProfile
from fuzzy.fuzzy_sets import IVFuzzySet

logger = logging.getLogger(__name__)

DATASET_COLUMNS = ("id", "lo", "hi")
LOSS_KEYS = ("lambda_e", "lambda_r", "lambda_sd", "lambda_su")
FIELD_COUNT_MESSAGE = re.compile(r"Expected (\d+) fields in line (\d+), saw (\d+)")


def _require_file(path: Union[str, Path], what: str) -> Path:
    if path is None:
        raise MissingInput(f"no {what} given")
    path = Path(path)
    if not path.is_file():
        raise MissingInput(f"{what} '{path}' does not exist")
    return path


def _parse_number(text: str, row: int, column: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"'{text}' is not a number", row=row, column=column) from None
    if not math.isfinite(value):
        raise ParseError(f"'{text}' is not a finite number", row=row, column=column)
    return value


def _field_count_error(path: Path, error: Exception) -> ParseError:
    match = FIELD_COUNT_MESSAGE.search(str(error))
    if match is None:
        return ParseError(f"cannot parse dataset '{path}': {error}")
    expected, line, saw = (int(g) for g in match.groups())
    # the parser counts the header as line 1
    return ParseError(f"expected {expected} fields, got {saw}", row=line - 1)


def ingest_dataset(path: Union[str, Path]) -> IVFuzzySet:
    """
    Read an `id,lo,hi` CSV into an interval-valued fuzzy set.

    Rows keep their file order. Row numbers in errors count data rows from 1;
    the header is not counted.

    Raises:
        ParseError: unreadable file, wrong header, a row without exactly three
            fields, empty id or non-numeric bound.
        InvertedBounds: lo > hi.
        OutOfRange: a bound outside [0, 1].
        DuplicateId: an id seen on an earlier row.
        EmptyUniverse: no data rows.
    """
    path = _require_file(path, "dataset")
    try:
        # headerless, so a surplus field is a parse error instead of an index column
        frame = pd.read_csv(path, header=None, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise ParseError(f"dataset '{path}' is empty") from None
    except pd.errors.ParserError as e:
        raise _field_count_error(path, e) from None
    except UnicodeDecodeError as e:
        raise ParseError(f"cannot parse dataset '{path}': {e}") from None

    columns = tuple(str(c).strip() for c in frame.iloc[0])
    if columns != DATASET_COLUMNS:
        missing = next((c for c in DATASET_COLUMNS if c not in columns), None)
        raise ParseError(f"header must be 'id,lo,hi', got '{','.join(columns)}'", column=missing)
    records = frame.iloc[1:]
    if records.empty:
        raise EmptyUniverse(f"dataset '{path}' has no rows")

    seen = {}
    pairs = []
    for index, record in enumerate(records.itertuples(index=False)):
        row = index + 1
        for column, text in zip(DATASET_COLUMNS, record):
            if pd.isna(text):
                raise ParseError(f"missing field, expected {len(DATASET_COLUMNS)}", row=row, column=column)
        object_id, lo_text, hi_text = record
        object_id = object_id.strip()
        if not object_id:
            raise ParseError("empty object id", row=row, column="id")
        if object_id in seen:
            raise DuplicateId(f"row {row}: id '{object_id}' already used on row {seen[object_id]}")
        lo = _parse_number(lo_text, row, "lo")
        hi = _parse_number(hi_text, row, "hi")
        if lo > hi:
            raise InvertedBounds(lo, hi, where=f"row {row}, id '{object_id}'")
        if lo < 0.0 or hi > 1.0:
            raise OutOfRange(f"row {row}, id '{object_id}': grade [{lo}, {hi}] is not inside [0, 1]")
        seen[object_id] = row
        pairs.append((object_id, Interval(lo, hi)))

    logger.debug("read %d objects from %s", len(pairs), path)
    return IVFuzzySet.from_pairs(pairs)


def _loss_interval(key: str, value) -> Interval:
    def number(v):
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ParseError(f"expected a finite number, got {v!r}", column=key)
        return float(v)

    if isinstance(value, list):
        if len(value) != 2:
            raise ParseError(f"expected [lo, hi], got {len(value)} elements", column=key)
        lo, hi = number(value[0]), number(value[1])
    else:
        # scalar cost -> zero-width interval
        lo = hi = number(value)
    if lo > hi:
        raise InvertedBounds(lo, hi, where=key)
    if lo <= 0.0:
        raise NonPositiveLoss(f"{key}: loss [{lo}, {hi}] must have a strictly positive lower bound")
    return Interval(lo, hi)


def ingest_losses(path: Union[str, Path]) -> IntervalLossProfile:
    """
    Read the four loss costs from a JSON object.

    Each of lambda_e, lambda_r, lambda_sd, lambda_su is a number or a
    two-element [lo, hi] list.
    """
    path = _require_file(path, "loss profile")
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise ParseError(f"cannot parse loss profile '{path}': {e}") from None
    if not isinstance(document, dict):
        raise ParseError(f"loss profile '{path}' must be a JSON object")

    unknown = sorted(set(document) - set(LOSS_KEYS))
    if unknown:
        raise ParseError(f"unknown key in loss profile '{path}'", column=unknown[0])
    for key in LOSS_KEYS:
        if key not in document:
            raise ParseError(f"missing key in loss profile '{path}'", column=key)

    return IntervalLossProfile(*(_loss_interval(key, document[key]) for key in LOSS_KEYS))
