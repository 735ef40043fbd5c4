"""Check-suite orchestration over sample points.

A run never aborts on a single bad point: degenerate metrics, positivity
failures and gauge degeneracies are recorded per point and the sweep
continues.  Points may be evaluated by a process pool (capped by the
AKVERIFY_WORKERS environment variable); serial and parallel runs produce
identical reports because records are assembled in point order.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from . import __version__
from .checks import (
    CATALOGUE,
    GROUPS,
    conventions_hash,
    evaluate_point,
    tolerance_table,
)
from .curvature import DegenerateMetric
from .family import FamilyInstance, PositivityError, presets, sample as family_sample
from .rawspec import ExplicitSpec, RandomAlmostKahler
from .report import PointRecord, Report


class ConfigError(ValueError):
    """Invalid run configuration."""


@dataclass
class RunConfig:
    instance: str | dict
    checks: list[str] = field(default_factory=lambda: ["gray"])
    samples: dict = field(default_factory=lambda: {"count": 10, "seed": 0})
    tolerances: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)

    def __post_init__(self):
        for c in self.checks:
            if c not in GROUPS:
                raise ConfigError(f"unknown check group {c!r}; valid: {GROUPS}")
        if int(self.samples.get("count", 0)) < 1:
            raise ConfigError("samples.count must be at least 1")
        fmt = self.output.get("format", "json")
        if fmt not in ("json", "csv"):
            raise ConfigError(f"unknown output format {fmt!r}")
        overrides = self.tolerances.get("overrides", {})
        for name in overrides:
            if name not in CATALOGUE:
                raise ConfigError(f"unknown identity in tolerance overrides: {name!r}")

    @classmethod
    def from_dict(cls, cfg: dict) -> "RunConfig":
        known = {"instance", "checks", "samples", "tolerances", "output"}
        unknown = set(cfg) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "instance" not in cfg:
            raise ConfigError("config needs an 'instance'")
        return cls(
            instance=cfg["instance"],
            checks=list(cfg.get("checks", ["gray"])),
            samples=dict(cfg.get("samples", {"count": 10, "seed": 0})),
            tolerances=dict(cfg.get("tolerances", {})),
            output=dict(cfg.get("output", {})),
        )

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        try:
            with open(path) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        return cls.from_dict(cfg)


def resolve_instance(spec: str | dict):
    """Preset name, family config, or raw-metric config to an instance."""
    if isinstance(spec, str):
        table = presets()
        if spec not in table:
            raise ConfigError(
                f"unknown preset {spec!r}; available: {sorted(table)}"
            )
        return table[spec]
    if not isinstance(spec, dict):
        raise ConfigError("instance must be a preset name or a config object")
    kind = spec.get("kind", "family")
    if kind == "family":
        return FamilyInstance.from_config(spec)
    if kind == "random_ak":
        return RandomAlmostKahler(
            seed=int(spec.get("seed", 0)),
            amplitude=float(spec.get("amplitude", 0.12)),
            domain={k: tuple(v) for k, v in spec.get("domain", {}).items()}
            or RandomAlmostKahler(0).domain,
            name=spec.get("name", "random_ak"),
        )
    if kind == "explicit":
        return ExplicitSpec.from_config(spec)
    raise ConfigError(f"unknown instance kind {kind!r}")


def sample_points(instance, n: int, seed: int):
    if isinstance(instance, FamilyInstance):
        return family_sample(instance, n, seed)
    return instance.sample(n, seed)


def _evaluate_one(instance, point, groups) -> PointRecord:
    rec = PointRecord(p=tuple(point))
    try:
        geom = instance.geometry(point)
        residuals, scalars, skipped = evaluate_point(geom, groups)
        rec.residuals = residuals
        rec.scalars = scalars
        rec.skipped = skipped
    except (DegenerateMetric, PositivityError) as exc:
        rec.error = f"{type(exc).__name__}: {exc}"
    return rec


def run(config: RunConfig) -> Report:
    instance = resolve_instance(config.instance)
    n = int(config.samples.get("count", 10))
    seed = int(config.samples.get("seed", 0))
    points = sample_points(instance, n, seed)

    workers = int(os.environ.get("AKVERIFY_WORKERS", "1"))
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(
                pool.map(
                    _evaluate_one,
                    [instance] * len(points),
                    points,
                    [config.checks] * len(points),
                )
            )
    else:
        records = [_evaluate_one(instance, p, config.checks) for p in points]

    tols = tolerance_table(
        scale=float(config.tolerances.get("scale", 1.0)),
        overrides=config.tolerances.get("overrides", {}),
    )
    meta = {
        "engine": f"akverify {__version__}",
        "conventions": conventions_hash(),
        "instance": config.instance
        if isinstance(config.instance, str)
        else instance.to_config(),
        "checks": list(dict.fromkeys(["compat", *config.checks])),
        "samples": {"count": n, "seed": seed},
        "tolerances": {k: v for k, v in sorted(tols.items()) if v is not None},
    }
    return Report(meta=meta, points=records, tolerances=tols)
