import logging
import sys
from dataclasses import asdict, dataclass, fields
from typing import Any, Mapping, Optional

from core.errors import OutOfRange
from core.intervals import DEFAULT_EPSILON, Theta

OUTPUT_FORMATS = ("json", "csv")
LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


@dataclass(frozen=True)
class RunConfig:
    """
    Effective settings of one run. Every report echoes them.

    Args:
        theta: θ of the m_θ reduction for grades and losses
        grid_points: points of the uniform scans used by the oracle
        seed: seed of the random instance generator
        epsilon: snapping tolerance of the possibility degree
        output_format: "json" or "csv"
        cases: random instances in the possibility suite
        datasets: random universes in the optimizer suite
        profiles: random loss profiles in the threshold suite
    """
    theta: float = 0.5
    grid_points: int = 1001
    seed: int = 42
    epsilon: float = DEFAULT_EPSILON
    output_format: str = "json"
    cases: int = 10000
    datasets: int = 50
    profiles: int = 100

    def __post_init__(self):
        Theta(self.theta)
        if self.seed < 0:
            raise OutOfRange(f"seed must be non-negative, got {self.seed}")
        if self.grid_points < 2:
            raise OutOfRange(f"grid_points must be at least 2, got {self.grid_points}")
        if not 0.0 <= self.epsilon < 0.5:
            raise OutOfRange(f"epsilon must lie in [0, 0.5), got {self.epsilon}")
        if self.output_format not in OUTPUT_FORMATS:
            raise OutOfRange(f"output_format must be one of {OUTPUT_FORMATS}, got {self.output_format!r}")
        for name in ("cases", "datasets", "profiles"):
            if getattr(self, name) < 1:
                raise OutOfRange(f"{name} must be positive, got {getattr(self, name)}")

    @classmethod
    def from_dict(cls, config: Optional[Mapping[str, Any]] = None) -> "RunConfig":
        """Build from a plain mapping; missing or None keys keep their defaults."""
        config = config or {}
        default_cfg = cls()
        values = {}
        for f in fields(cls):
            value = config.get(f.name)
            values[f.name] = getattr(default_cfg, f.name) if value is None else value
        return cls(
            theta=float(values["theta"]),
            grid_points=int(values["grid_points"]),
            seed=int(values["seed"]),
            epsilon=float(values["epsilon"]),
            output_format=str(values["output_format"]),
            cases=int(values["cases"]),
            datasets=int(values["datasets"]),
            profiles=int(values["profiles"]),
        )

    def as_dict(self) -> dict:
        return asdict(self)


def configure_logging(verbose: bool = False, stream=None) -> None:
    """Route package logs to stderr; DEBUG when verbose, WARNING otherwise."""
    handler = logging.StreamHandler(stream if stream is not None else sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root = logging.getLogger()
    for existing in list(root.handlers):
        if getattr(existing, "_threeway", False):
            root.removeHandler(existing)
    handler._threeway = True
    root.addHandler(handler)
    root.setLevel(logging.DEBUG if verbose else logging.WARNING)
