"""Federated ground-station downlink scheduling simulator.

Scenarios may be given as a path to a JSON file or as a dict. Tabular
results come back as lists of dicts with numeric fields converted.
"""

from __future__ import annotations

import csv
import io
import json
import os
from typing import Any, Iterable, Mapping, Optional, Sequence, Union

from . import _skygs
from ._skygs import ContractViolation, InfeasibleAssignment, InfeasibleMatching, ValidationError

__all__ = [
    "ContractViolation",
    "InfeasibleAssignment",
    "InfeasibleMatching",
    "ValidationError",
    "POLICIES",
    "validate",
    "gen_contacts",
    "simulate",
    "compare",
    "sweep_v",
    "hungarian",
]

ScenarioLike = Union[str, os.PathLike, Mapping[str, Any]]

POLICIES: tuple[str, ...] = tuple(_skygs.policies())


def _source(scenario: ScenarioLike) -> tuple[str, str]:
    if isinstance(scenario, Mapping):
        return json.dumps(scenario), ""
    return "", os.fspath(scenario)


def _rows(text: str) -> list[dict[str, Any]]:
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        parsed: dict[str, Any] = {}
        for key, value in row.items():
            if key in ("policy", "status"):
                parsed[key] = value
            elif value == "":
                parsed[key] = None
            elif key == "seed":
                parsed[key] = int(value)
            else:
                parsed[key] = float(value)
        out.append(parsed)
    return out


def validate(scenario: ScenarioLike) -> dict[str, Any]:
    """Validate a scenario and return its normalized form (MB, minutes, $/slot)."""
    return json.loads(_skygs.validate(*_source(scenario)))


def gen_contacts(scenario: ScenarioLike, seed: Optional[int] = None) -> str:
    """Propagated contact plan as CSV text."""
    return _skygs.gen_contacts(*_source(scenario), seed)


def simulate(
    scenario: ScenarioLike,
    policy: Optional[str] = None,
    seed: Optional[int] = None,
    v: Optional[float] = None,
    xi: Optional[float] = None,
    contacts: Optional[Union[str, os.PathLike]] = None,
) -> dict[str, Any]:
    """Run one simulation.

    Returns the run summary plus ``traces`` (per-slot cost, phi, Q and
    backlog) and ``run_csv`` (the full record).
    """
    summary, traces, run_csv = _skygs.simulate(
        *_source(scenario), policy, seed, v, xi, None if contacts is None else os.fspath(contacts)
    )
    result = json.loads(summary)
    result["traces"] = json.loads(traces)
    result["run_csv"] = run_csv
    return result


def compare(
    scenario: ScenarioLike,
    policies: Optional[Iterable[str]] = None,
    seeds: Optional[Iterable[int]] = None,
    threads: int = 0,
) -> list[dict[str, Any]]:
    """Every (policy, seed) pair on paired sample paths."""
    return _rows(_skygs.table(*_source(scenario), list(policies or []), [], list(seeds or []), threads))


def sweep_v(
    scenario: ScenarioLike, v_list: Sequence[float], seeds: Optional[Iterable[int]] = None, threads: int = 0
) -> list[dict[str, Any]]:
    """The drift-plus-penalty scheduler over several V values."""
    if not v_list:
        raise ValueError("v_list must not be empty")
    return _rows(_skygs.table(*_source(scenario), [], [float(v) for v in v_list], list(seeds or []), threads))


def hungarian(cost: Sequence[Sequence[Optional[float]]]) -> tuple[list[int], float]:
    """Minimum-cost matching of every row to a distinct column; None marks a missing edge."""
    return _skygs.hungarian([list(r) for r in cost])
