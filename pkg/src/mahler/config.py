"""Default budgets, tolerances and the global precision switch.

Everything the CLI prints under ``--show-config`` lives here, so that any
published number can be reproduced from one place.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Defaults:
    """Node budgets and tolerances used when a caller does not override them."""

    # circle rules (periodic trapezoid and the Jensen evaluators)
    circle_nodes_start: int = 4096
    circle_nodes_max: int = 262144
    measure_tol: float = 1.0e-9

    # tensor-product torus rule
    torus_nodes_start: int = 256
    torus_nodes_max: int = 4096
    torus3_nodes_max: int = 128
    torus_tol: float = 2.5e-7

    # tanh-sinh (double-exponential) rule
    tanh_sinh_tol: float = 1.0e-12
    tanh_sinh_level_max: int = 12

    # adaptive Simpson fallback
    adaptive_tol: float = 1.0e-10
    adaptive_depth_max: int = 48

    # Gauss hypergeometric series
    series_tol: float = 1.0e-16
    series_max_terms: int = 100_000

    # scans and finite differences
    branch_scan_nodes: int = 10_000
    fd_step: float = 1.0e-3

    # working digits of the extended-precision escape hatch
    extended_dps: int = 30

    seed: int = 0


DEFAULTS = Defaults()

_VALID_PRECISION = ("double", "extended")
_precision = "double"


def set_precision(mode: str) -> None:
    """Select the scalar working precision ("double" or "extended")."""
    global _precision
    if mode not in _VALID_PRECISION:
        raise ValueError(f"precision must be one of {_VALID_PRECISION}, got {mode!r}")
    _precision = mode


def get_precision() -> str:
    return _precision


@dataclass
class RunConfig:
    """CLI-facing runtime configuration."""

    precision: str = "double"
    node_budget: int = DEFAULTS.circle_nodes_start
    tolerance_overrides: dict[str, float] = field(default_factory=dict)
    output_format: str = "table"
    seed: int = DEFAULTS.seed

    def __post_init__(self) -> None:
        if self.precision not in _VALID_PRECISION:
            raise ValueError(f"precision must be one of {_VALID_PRECISION}")
        if self.node_budget < 64:
            raise ValueError("node_budget must be at least 64")
        if self.output_format not in ("json", "csv", "table"):
            raise ValueError("output_format must be json, csv or table")


def show_config(config: RunConfig | None = None) -> str:
    """Render the full configuration (defaults plus run overrides) as JSON."""
    payload = {
        "defaults": dataclasses.asdict(DEFAULTS),
        "run": dataclasses.asdict(config if config is not None else RunConfig()),
    }
    return json.dumps(payload, indent=2, sort_keys=True)
