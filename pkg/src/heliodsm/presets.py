"""Declarative experiment configs and the five built-in benchmark presets.

A config is plain JSON.  Complex intensities are serialized as [re, im]
pairs (bare numbers are accepted on input and normalized on output, so
parse -> serialize -> parse is idempotent).

Schema (dims = 2 or 3 everywhere consistent)::

    {
      "dims": 2,
      "wavenumber": 15.0,
      "sources": [
        {"location": [2.0, 3.0], "monopole": [9.0, 0.0]},
        {"location": [...],      "dipole": [[1.0, 0.0], [0.0, 0.0]]}
      ],
      "measurement": {"radius": 6.0, "count": 200},            # 2D
      "measurement": {"radius": 6.0, "n_theta": 42, "n_phi": 43},  # 3D
      "noise": {"level": 0.05, "seed": 101},
      "directions": {"count": 256} | {"n_theta": 42, "n_phi": 43},
      "grid": {"lower": [-4.0, -4.0], "upper": [4.0, 4.0], "counts": [100, 100]},
      "fine_counts": [40, 40],
      "dsm_counts": [60, 60, 60],        # optional, single-level comparison grid
      "locator": {"significance": 0.5, "merge_radius": null,
                  "cluster_radius": null, "components": null},
      "algorithm": "dsm2"
    }
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .forward import NoiseSpec, PointSource, SourceEnsemble, dipole, monopole
from .geometry import (
    DirectionSet,
    MeasurementSurface,
    SamplingGrid,
    circle_directions,
    circle_surface,
    make_grid,
    sphere_directions,
    sphere_surface,
)
from .locator import DsmOptions

__all__ = ["ConfigError", "ExperimentConfig", "PRESETS", "preset_config", "exact_table"]


class ConfigError(ValueError):
    """Raised when an experiment config fails validation."""


def _want(mapping: dict, key: str, kind, where: str):
    if key not in mapping:
        raise ConfigError(f"missing '{key}' in {where}")
    value = mapping[key]
    if kind is float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigError(f"'{key}' in {where} must be a number")
        return float(value)
    if kind is int:
        if not isinstance(value, int) or isinstance(value, bool):
            raise ConfigError(f"'{key}' in {where} must be an integer")
        return value
    if kind is list and not isinstance(value, list):
        raise ConfigError(f"'{key}' in {where} must be a list")
    if kind is dict and not isinstance(value, dict):
        raise ConfigError(f"'{key}' in {where} must be an object")
    return value


def _as_complex(value, where: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        return complex(value[0], value[1])
    raise ConfigError(f"{where} must be a number or an [re, im] pair")


def _complex_out(z: complex) -> list[float]:
    return [z.real, z.imag]


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment description; builders construct library objects."""

    dims: int
    wavenumber: float
    sources: tuple[PointSource, ...]
    measurement_radius: float
    measurement_counts: tuple[int, ...]  # (count,) or (n_theta, n_phi)
    noise_level: float
    noise_seed: int
    direction_counts: tuple[int, ...]
    grid_lower: tuple[float, ...]
    grid_upper: tuple[float, ...]
    grid_counts: tuple[int, ...]
    fine_counts: tuple[int, ...]
    dsm_counts: tuple[int, ...] | None = None
    significance: float = 0.5
    merge_radius: float | None = None
    cluster_radius: float | None = None
    components: tuple[int, ...] | None = None
    algorithm: str = "dsm2"
    output_dir: str | None = None

    # ------------------------------------------------------------------
    # parsing / serialization
    # ------------------------------------------------------------------

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config root must be an object")
        dims = _want(raw, "dims", int, "config")
        if dims not in (2, 3):
            raise ConfigError("dims must be 2 or 3")
        k = _want(raw, "wavenumber", float, "config")
        if k <= 0:
            raise ConfigError("wavenumber must be positive")

        sources = []
        entries = _want(raw, "sources", list, "config")
        if not entries:
            raise ConfigError("config needs at least one source")
        for i, entry in enumerate(entries):
            where = f"sources[{i}]"
            if not isinstance(entry, dict):
                raise ConfigError(f"{where} must be an object")
            loc = _want(entry, "location", list, where)
            if len(loc) != dims:
                raise ConfigError(f"{where} location must have length {dims}")
            if ("monopole" in entry) == ("dipole" in entry):
                raise ConfigError(f"{where} needs exactly one of 'monopole' or 'dipole'")
            try:
                if "monopole" in entry:
                    sources.append(monopole(loc, _as_complex(entry["monopole"], where)))
                else:
                    vec = entry["dipole"]
                    if not isinstance(vec, list) or len(vec) != dims:
                        raise ConfigError(f"{where} dipole must have length {dims}")
                    sources.append(dipole(loc, [_as_complex(v, where) for v in vec]))
            except ValueError as exc:
                raise ConfigError(f"{where}: {exc}") from exc

        meas = _want(raw, "measurement", dict, "config")
        radius = _want(meas, "radius", float, "measurement")
        if dims == 2:
            meas_counts = (_want(meas, "count", int, "measurement"),)
        else:
            meas_counts = (
                _want(meas, "n_theta", int, "measurement"),
                _want(meas, "n_phi", int, "measurement"),
            )

        noise = _want(raw, "noise", dict, "config")
        level = _want(noise, "level", float, "noise")
        seed = _want(noise, "seed", int, "noise")

        dirs = _want(raw, "directions", dict, "config")
        if dims == 2:
            dir_counts = (_want(dirs, "count", int, "directions"),)
        else:
            dir_counts = (
                _want(dirs, "n_theta", int, "directions"),
                _want(dirs, "n_phi", int, "directions"),
            )

        grid = _want(raw, "grid", dict, "config")
        lower = tuple(float(v) for v in _want(grid, "lower", list, "grid"))
        upper = tuple(float(v) for v in _want(grid, "upper", list, "grid"))
        counts = tuple(int(v) for v in _want(grid, "counts", list, "grid"))
        if not (len(lower) == len(upper) == len(counts) == dims):
            raise ConfigError("grid lower/upper/counts must have length dims")
        if any(lo >= hi for lo, hi in zip(lower, upper)):
            raise ConfigError("grid lower must be strictly below upper")

        fine = tuple(int(v) for v in _want(raw, "fine_counts", list, "config"))
        if len(fine) != dims:
            raise ConfigError("fine_counts must have length dims")

        dsm_counts = None
        if raw.get("dsm_counts") is not None:
            dsm_counts = tuple(int(v) for v in raw["dsm_counts"])
            if len(dsm_counts) != dims:
                raise ConfigError("dsm_counts must have length dims")

        loc_opts = raw.get("locator", {})
        if not isinstance(loc_opts, dict):
            raise ConfigError("'locator' must be an object")
        significance = float(loc_opts.get("significance", 0.5))
        merge_radius = loc_opts.get("merge_radius")
        cluster_radius = loc_opts.get("cluster_radius")
        components = loc_opts.get("components")
        if components is not None:
            components = tuple(int(c) for c in components)
            if any(not (0 <= c <= dims) for c in components):
                raise ConfigError("locator components out of range")

        algorithm = raw.get("algorithm", "dsm2")
        if algorithm not in ("dsm", "dsm2"):
            raise ConfigError("algorithm must be 'dsm' or 'dsm2'")

        output_dir = raw.get("output_dir")
        if output_dir is not None and not isinstance(output_dir, str):
            raise ConfigError("'output_dir' must be a string")

        try:
            return cls(
                dims=dims,
                wavenumber=k,
                sources=tuple(sources),
                measurement_radius=radius,
                measurement_counts=meas_counts,
                noise_level=level,
                noise_seed=seed,
                direction_counts=dir_counts,
                grid_lower=lower,
                grid_upper=upper,
                grid_counts=counts,
                fine_counts=fine,
                dsm_counts=dsm_counts,
                significance=significance,
                merge_radius=None if merge_radius is None else float(merge_radius),
                cluster_radius=None if cluster_radius is None else float(cluster_radius),
                components=components,
                algorithm=algorithm,
                output_dir=output_dir,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def to_dict(self) -> dict:
        sources = []
        for s in self.sources:
            entry: dict = {"location": [float(v) for v in s.location]}
            if s.is_monopole:
                entry["monopole"] = _complex_out(s.scalar_intensity)
            else:
                entry["dipole"] = [_complex_out(v) for v in s.vector_intensity]
            sources.append(entry)
        meas: dict = {"radius": self.measurement_radius}
        dirs: dict = {}
        if self.dims == 2:
            meas["count"] = self.measurement_counts[0]
            dirs["count"] = self.direction_counts[0]
        else:
            meas["n_theta"], meas["n_phi"] = self.measurement_counts
            dirs["n_theta"], dirs["n_phi"] = self.direction_counts
        out = {
            "dims": self.dims,
            "wavenumber": self.wavenumber,
            "sources": sources,
            "measurement": meas,
            "noise": {"level": self.noise_level, "seed": self.noise_seed},
            "directions": dirs,
            "grid": {
                "lower": list(self.grid_lower),
                "upper": list(self.grid_upper),
                "counts": list(self.grid_counts),
            },
            "fine_counts": list(self.fine_counts),
            "dsm_counts": None if self.dsm_counts is None else list(self.dsm_counts),
            "locator": {
                "significance": self.significance,
                "merge_radius": self.merge_radius,
                "cluster_radius": self.cluster_radius,
                "components": None if self.components is None else list(self.components),
            },
            "algorithm": self.algorithm,
            "output_dir": self.output_dir,
        }
        return out

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(raw)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    # ------------------------------------------------------------------
    # builders
    # ------------------------------------------------------------------

    def ensemble(self) -> SourceEnsemble:
        return SourceEnsemble(sources=self.sources)

    def surface(self) -> MeasurementSurface:
        if self.dims == 2:
            return circle_surface(self.measurement_radius, self.measurement_counts[0])
        return sphere_surface(self.measurement_radius, *self.measurement_counts)

    def direction_set(self) -> DirectionSet:
        if self.dims == 2:
            return circle_directions(self.direction_counts[0])
        return sphere_directions(*self.direction_counts)

    def grid(self) -> SamplingGrid:
        return make_grid(self.grid_lower, self.grid_upper, self.grid_counts)

    def dsm_grid(self) -> SamplingGrid:
        counts = self.dsm_counts if self.dsm_counts is not None else self.grid_counts
        return make_grid(self.grid_lower, self.grid_upper, counts)

    def noise_spec(self, seed_override: int | None = None) -> NoiseSpec:
        seed = self.noise_seed if seed_override is None else seed_override
        return NoiseSpec(level=self.noise_level, seed=seed)

    def options(self) -> DsmOptions:
        return DsmOptions(
            significance=self.significance,
            merge_radius=self.merge_radius,
            cluster_radius=self.cluster_radius,
            components=self.components,
            directions=self.direction_set(),
        )


# ----------------------------------------------------------------------
# built-in presets (benchmark experiments 1-5)
# ----------------------------------------------------------------------

_SQRT2 = math.sqrt(2.0)


def _preset_dicts() -> dict[str, dict]:
    return {
        "example1": {
            "dims": 2,
            "wavenumber": 15.0,
            "sources": [
                {"location": [2.0, 3.0], "monopole": 9.0},
                {"location": [-3.0, -2.0], "monopole": 8.0},
                {"location": [-2.0, 3.0], "monopole": 8.0},
                {"location": [3.0, -3.0], "monopole": 7.0},
            ],
            "measurement": {"radius": 6.0, "count": 200},
            "noise": {"level": 0.05, "seed": 101},
            "directions": {"count": 256},
            "grid": {"lower": [-4.0, -4.0], "upper": [4.0, 4.0], "counts": [100, 100]},
            "fine_counts": [40, 40],
            "algorithm": "dsm2",
        },
        "example2": {
            "dims": 2,
            "wavenumber": 18.0,
            "sources": [
                {"location": [-1.5, -1.5], "dipole": [-_SQRT2, _SQRT2]},
                {"location": [1.5, -2.0], "dipole": [_SQRT2, _SQRT2]},
            ],
            "measurement": {"radius": 5.0, "count": 200},
            "noise": {"level": 0.05, "seed": 202},
            "directions": {"count": 256},
            "grid": {"lower": [-3.0, -3.0], "upper": [3.0, 3.0], "counts": [100, 100]},
            "fine_counts": [40, 40],
            "algorithm": "dsm2",
        },
        "example3": {
            "dims": 2,
            "wavenumber": 20.0,
            "sources": [
                {"location": [-1.0, 2.0], "monopole": 10.0},
                {"location": [2.0, -1.5], "dipole": [1.0, 0.0]},
                {"location": [-2.0, -2.0], "dipole": [0.0, 1.0]},
            ],
            "measurement": {"radius": 5.0, "count": 200},
            "noise": {"level": 0.05, "seed": 303},
            "directions": {"count": 256},
            "grid": {"lower": [-3.0, -3.0], "upper": [3.0, 3.0], "counts": [100, 100]},
            "fine_counts": [40, 40],
            "algorithm": "dsm2",
        },
        "example4": {
            "dims": 3,
            "wavenumber": 10.0,
            "sources": [
                {"location": [1.0, 1.0, 2.0], "monopole": 5.0},
                {"location": [1.0, -1.0, -1.5], "monopole": 5.0},
                {"location": [-2.0, 1.0, 0.0], "monopole": 5.0},
            ],
            "measurement": {"radius": 6.0, "n_theta": 42, "n_phi": 43},
            "noise": {"level": 0.10, "seed": 404},
            "directions": {"n_theta": 42, "n_phi": 43},
            "grid": {
                "lower": [-3.0, -3.0, -3.0],
                "upper": [3.0, 3.0, 3.0],
                "counts": [30, 30, 30],
            },
            "fine_counts": [20, 20, 20],
            "dsm_counts": [60, 60, 60],
            # pure-monopole a priori: only the zeroth indicator is sampled
            "locator": {"components": [0]},
            "algorithm": "dsm2",
        },
        "example5": {
            "dims": 3,
            "wavenumber": 10.0,
            "sources": [
                {"location": [1.0, 1.0, 2.0], "monopole": 9.0},
                {"location": [1.0, -1.0, -1.5], "dipole": [1.0, 0.0, 0.0]},
                {"location": [-2.0, 1.0, 0.0], "dipole": [0.0, 0.0, 1.0]},
            ],
            "measurement": {"radius": 6.0, "n_theta": 42, "n_phi": 43},
            "noise": {"level": 0.15, "seed": 505},
            "directions": {"n_theta": 42, "n_phi": 43},
            "grid": {
                "lower": [-3.0, -3.0, -3.0],
                "upper": [3.0, 3.0, 3.0],
                "counts": [30, 30, 30],
            },
            "fine_counts": [20, 20, 20],
            "algorithm": "dsm2",
        },
    }


PRESETS = tuple(sorted(_preset_dicts()))


def preset_config(name: str) -> ExperimentConfig:
    table = _preset_dicts()
    if name not in table:
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(sorted(table))}")
    return ExperimentConfig.from_dict(table[name])


def exact_table(name: str) -> list[dict]:
    """Ground-truth source table for a preset (for comparison reports)."""
    cfg = preset_config(name)
    rows = []
    for i, s in enumerate(cfg.sources):
        rows.append(
            {
                "label": i + 1,
                "kind": "monopole" if s.is_monopole else "dipole",
                "location": np.asarray(s.location),
                "intensity": s.scalar_intensity if s.is_monopole else np.asarray(s.vector_intensity),
            }
        )
    return rows
