"""Loading and validating JSON run configurations."""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import jsonschema

from .radial import RadialMap, identity_profile, make_map
from .space import SpaceParams
from .weights import DEFAULT_DELTAS, DEFAULT_LADDER, EpsLadder, WeightField, constant, make_weight


class ConfigError(ValueError):
    """Configuration that fails the schema or a module precondition."""


def load_schema() -> dict:
    text = resources.files("pmodlab").joinpath("schema/config.schema.json").read_text()
    return json.loads(text)


def _location(err: jsonschema.ValidationError) -> str:
    return "/".join(str(p) for p in err.absolute_path) or "<root>"


def validate(raw: dict) -> None:
    validator = jsonschema.Draft202012Validator(load_schema())
    errors = sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path))
    if errors:
        lines = [f"  at {_location(e)}: {e.message}" for e in errors]
        raise ConfigError("invalid config:\n" + "\n".join(lines))


@dataclass
class RunConfig:
    raw: dict
    space: SpaceParams
    fmap: RadialMap
    weight: WeightField
    ladder: EpsLadder
    check: dict

    @property
    def ring(self) -> dict | None:
        return self.raw.get("ring")

    @property
    def radii(self) -> list:
        return self.raw.get("radii", [0.1, 0.25, 0.5, 0.9])

    @property
    def grid_points(self) -> int:
        return self.raw.get("grid_points", 4096)

    @property
    def deltas(self) -> tuple:
        return tuple(self.check.get("deltas", DEFAULT_DELTAS))


def build(raw: dict) -> RunConfig:
    """Validate ``raw`` against the schema and every module precondition."""
    validate(raw)
    try:
        space = SpaceParams(raw["space"]["n"], raw["space"]["p"])
        fmap = make_map(space, raw["map"]) if "map" in raw else RadialMap(space, identity_profile())
        weight = make_weight(raw["weight"], fmap) if "weight" in raw else constant(1.0)
        ladder = EpsLadder(tuple(raw["ladder"])) if "ladder" in raw else DEFAULT_LADDER
        ring = raw.get("ring")
        if ring is not None and not 0 < ring["r1"] < ring["r2"]:
            raise ValueError(f"ring needs 0 < r1 < r2, got r1={ring['r1']}, r2={ring['r2']}")
        check = dict(raw.get("check", {}))
        if "deltas" in check:
            d = check["deltas"]
            if any(b >= a for a, b in zip(d, d[1:])):
                raise ValueError("check.deltas must be strictly decreasing")
    except (ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from exc
    return RunConfig(raw, space, fmap, weight, ladder, check)


def load(path: str | Path) -> RunConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return build(raw)


def with_param(raw: dict, param: str, value) -> dict:
    """Copy of ``raw`` with one sweep parameter set."""
    out = copy.deepcopy(raw)
    out.pop("sweep", None)
    if param == "n":
        out["space"]["n"] = int(value)
    elif param == "p":
        out["space"]["p"] = value
    elif param == "theta":
        out["map"] = {"kind": "power", "theta": value}
    elif param in ("alpha", "eps", "delta", "scale"):
        out.setdefault("check", {})[param] = value
        if out.get("map", {}).get("kind") == "theorem3" and param in ("alpha", "eps"):
            out["map"][param] = value
    elif param in ("r1", "r2"):
        out.setdefault("ring", {"r1": 1.0, "r2": 4.0})[param] = value
    elif param == "grid_points":
        out["grid_points"] = int(value)
    else:
        raise ConfigError(f"unknown sweep parameter {param!r}")
    return out
