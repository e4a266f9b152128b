import io
import json
import math
import numbers
import re
from dataclasses import dataclass, field
from typing import Any, Dict, List

import pandas as pd

from core.errors import OutOfRange
from core.intervals import Interval

FLOAT_FORMAT = "%.17g"
# finite floats travel through json.dumps as marked strings, then lose their quotes
FLOAT_MARK = "\x00float:"
MARKED_FLOAT = re.compile(r'"\\u0000float:([^"]*)"')
MATRIX_LABELS = ("e", "r", "s")
# number lists that are sets, not [lo, hi] intervals
SET_KEYS = ("allowed",)


def interval_list(interval: Interval) -> List[float]:
    return [interval.lo, interval.hi]


def _jsonable(value: Any) -> Any:
    # infinities become strings; float subclasses become plain floats
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return float(value)
    return str(value)


def float_text(value: float) -> str:
    """17 significant digits, with a decimal point kept on integral values."""
    text = FLOAT_FORMAT % value
    return text if any(ch in text for ch in ".en") else text + ".0"


def _mark_floats(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _mark_floats(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_mark_floats(v) for v in value]
    if isinstance(value, float):
        if math.isnan(value):
            raise OutOfRange("a report value is NaN, which JSON cannot carry")
        return FLOAT_MARK + float_text(value)
    return value


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _flatten(prefix: str, value: Any, out: Dict[str, Any]) -> None:
    key = prefix
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}_{k}" if prefix else k, v, out)
    elif isinstance(value, list) and len(value) == 3 and all(isinstance(r, list) and len(r) == 3 for r in value):
        for i, row in enumerate(value):
            for j, v in enumerate(row):
                out[f"{key}_{MATRIX_LABELS[i]}{MATRIX_LABELS[j]}"] = v
    elif isinstance(value, list) and len(value) == 2 and all(_is_number(v) for v in value) and key not in SET_KEYS:
        out[f"{key}_lo"], out[f"{key}_hi"] = value
    elif isinstance(value, list):
        out[key] = ";".join(str(v) for v in value)
    else:
        out[key] = value


def _comment_value(value: Any) -> str:
    if isinstance(value, float):
        return FLOAT_FORMAT % value
    return str(value)


@dataclass
class DecisionReport:
    """
    Output of one subcommand.

    objects holds one record per object in universe order (or one per suite
    check for `check`); summary holds run-level results; config echoes the
    effective settings.
    """
    command: str
    config: Dict[str, Any]
    objects: List[Dict[str, Any]] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)
    exit_code: int = 0

    def as_dict(self) -> dict:
        return _jsonable({
            "command": self.command,
            "config": self.config,
            "objects": self.objects,
            "summary": self.summary,
        })

    def to_json(self) -> str:
        text = json.dumps(_mark_floats(self.as_dict()), indent=2, ensure_ascii=False)
        return MARKED_FLOAT.sub(lambda match: match.group(1), text)

    def to_csv(self) -> str:
        """Objects as CSV rows, config and summary as leading '# key=value' lines."""
        document = self.as_dict()
        lines = [f"# command={self.command}"]
        for section in ("config", "summary"):
            flat = {}
            _flatten("", document[section], flat)
            lines.extend(f"# {section}.{k}={_comment_value(v)}" for k, v in flat.items())

        rows = []
        for record in document["objects"]:
            flat = {}
            _flatten("", record, flat)
            rows.append(flat)
        buffer = io.StringIO()
        if rows:
            pd.DataFrame(rows).to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        return "\n".join(lines) + "\n" + buffer.getvalue()

    def render(self, output_format: str) -> str:
        return self.to_csv() if output_format == "csv" else self.to_json()
