"""Run configuration: strict JSON schema plus typed dataclasses."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .forward import wavenumbers
from .scene import Crack, CrackScene, DirectionSet, SearchGrid, make_direction_set


class ConfigError(ValueError):
    """Invalid configuration; ``path`` names the offending field (dotted)."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


@lru_cache(maxsize=None)
def schema() -> dict:
    text = resources.files("submig").joinpath("data/run_config.schema.json").read_text()
    return json.loads(text)


@dataclass(frozen=True)
class ArrayConfig:
    N: int
    alpha: float = 0.0
    beta: float = 2 * math.pi
    full_view: bool = False

    def directions(self) -> DirectionSet:
        if self.full_view:
            return make_direction_set(self.N, 0.0, 2 * math.pi)
        return make_direction_set(self.N, self.alpha, self.beta)


@dataclass(frozen=True)
class FrequencyConfig:
    lambda_min: float
    lambda_max: float
    count: int

    def wavenumbers(self) -> np.ndarray:
        return wavenumbers(self.lambda_min, self.lambda_max, self.count)


@dataclass(frozen=True)
class NoiseConfig:
    level: float = 0.0
    seed: int = 0


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "out"
    formats: tuple[str, ...] = ("csv", "pgm")
    emit_singular_values: bool = True


@dataclass(frozen=True)
class RunConfig:
    scene: CrackScene
    array: ArrayConfig
    frequencies: FrequencyConfig
    grid: SearchGrid
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    tau: float | None = None
    output: OutputConfig = field(default_factory=OutputConfig)

    @property
    def effective_tau(self) -> float:
        """Explicit tau, else 1e-4 for noise-free and 1e-2 for noisy data."""
        if self.tau is not None:
            return self.tau
        return 1e-2 if self.noise.level > 0 else 1e-4

    def to_dict(self) -> dict:
        d = {
            "scene": {
                "half_length": self.scene.half_length,
                "cracks": [{"center": list(c.center), "orientation": c.orientation}
                           for c in self.scene.cracks],
            },
            "array": asdict(self.array),
            "frequencies": asdict(self.frequencies),
            "grid": {k: getattr(self.grid, k)
                     for k in ("x_min", "x_max", "y_min", "y_max", "nx", "ny")},
            "noise": asdict(self.noise),
            "output": {**asdict(self.output), "formats": list(self.output.formats)},
        }
        if self.tau is not None:
            d["tau"] = self.tau
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def with_overrides(self, *, full_view: bool | None = None, tau: float | None = None,
                       noise: float | None = None, seed: int | None = None,
                       output: str | None = None) -> "RunConfig":
        cfg = self
        if full_view:
            cfg = replace(cfg, array=replace(cfg.array, full_view=True))
        if tau is not None:
            if not 0 < tau < 1:
                raise ConfigError("must lie in (0, 1)", "tau")
            cfg = replace(cfg, tau=tau)
        if noise is not None or seed is not None:
            if noise is not None and noise < 0:
                raise ConfigError("must be non-negative", "noise.level")
            cfg = replace(cfg, noise=NoiseConfig(
                cfg.noise.level if noise is None else noise,
                cfg.noise.seed if seed is None else seed))
        if output is not None:
            cfg = replace(cfg, output=replace(cfg.output, directory=output))
        return cfg


def _path(err: jsonschema.ValidationError) -> str:
    return ".".join(str(p) for p in err.absolute_path) or "<root>"


def from_dict(raw: dict) -> RunConfig:
    validator = jsonschema.Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(raw), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        first = errors[0]
        raise ConfigError(first.message, _path(first))

    freq = raw["frequencies"]
    if freq["lambda_min"] > freq["lambda_max"]:
        raise ConfigError("lambda_min must not exceed lambda_max", "frequencies")
    arr = raw["array"]
    try:
        array = ArrayConfig(**arr)
        array.directions()
    except ValueError as exc:
        raise ConfigError(str(exc), "array") from None
    try:
        scene = CrackScene(
            tuple(Crack(tuple(float(v) for v in c["center"]), float(c.get("orientation", 0.0)))
                  for c in raw["scene"]["cracks"]),
            float(raw["scene"]["half_length"]))
    except ValueError as exc:
        raise ConfigError(str(exc), "scene") from None
    try:
        grid = SearchGrid(**raw["grid"])
    except ValueError as exc:
        raise ConfigError(str(exc), "grid") from None
    out = raw.get("output", {})
    return RunConfig(
        scene=scene,
        array=array,
        frequencies=FrequencyConfig(**freq),
        grid=grid,
        noise=NoiseConfig(**raw.get("noise", {})),
        tau=raw.get("tau"),
        output=OutputConfig(out.get("directory", "out"),
                            tuple(out.get("formats", ("csv", "pgm"))),
                            out.get("emit_singular_values", True)),
    )


def load_config(path) -> RunConfig:
    text = Path(path).read_text()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[:exc.pos].encode())
        raise ConfigError(f"invalid JSON at byte offset {offset}: {exc.msg}") from None
    return from_dict(raw)
