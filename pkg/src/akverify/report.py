"""Residual reports: assembly and machine-readable emission.

JSON schema:
  {"meta": {...}, "points": [{"p": [4 reals], "residuals": {...},
   "scalars": {...}, "skipped": [...], "error": null|str}],
   "summary": {"<identity>": {"max": .., "mean": ..}, ..., "pass": bool}}

CSV: one row per point; columns are the point index, the four coordinates,
then the residuals in sorted identity order, then the scalar diagnostics.
Identical configurations produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field


@dataclass
class PointRecord:
    p: tuple[float, float, float, float]
    residuals: dict[str, float] = field(default_factory=dict)
    scalars: dict[str, float] = field(default_factory=dict)
    skipped: list[str] = field(default_factory=list)
    error: str | None = None


@dataclass
class Report:
    meta: dict
    points: list[PointRecord]
    tolerances: dict[str, float | None]

    def summary(self) -> dict:
        names = sorted({n for rec in self.points for n in rec.residuals})
        out: dict = {}
        failures = []
        for name in names:
            vals = [r.residuals[name] for r in self.points if name in r.residuals]
            mx, mean = max(vals), sum(vals) / len(vals)
            out[name] = {"max": mx, "mean": mean}
            tol = self.tolerances.get(name)
            if tol is not None and mx > tol:
                failures.append(name)
        errors = [r for r in self.points if r.error]
        out["pass"] = not failures and not errors
        return out

    def failures(self) -> list[str]:
        names = sorted({n for rec in self.points for n in rec.residuals})
        bad = []
        for name in names:
            tol = self.tolerances.get(name)
            if tol is None:
                continue
            mx = max(r.residuals[name] for r in self.points if name in r.residuals)
            if mx > tol:
                bad.append(name)
        return bad

    def to_dict(self) -> dict:
        return {
            "meta": self.meta,
            "points": [
                {
                    "p": list(rec.p),
                    "residuals": rec.residuals,
                    "scalars": rec.scalars,
                    "skipped": rec.skipped,
                    "error": rec.error,
                }
                for rec in self.points
            ],
            "summary": self.summary(),
        }

    # -- emission -----------------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        res_names = sorted({n for rec in self.points for n in rec.residuals})
        sc_names = sorted({n for rec in self.points for n in rec.scalars})
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["index", "x", "y", "z", "t", *res_names, *sc_names])
        for i, rec in enumerate(self.points):
            row = [i, *[repr(c) for c in rec.p]]
            for n in res_names:
                row.append(repr(rec.residuals[n]) if n in rec.residuals else "")
            for n in sc_names:
                row.append(repr(rec.scalars[n]) if n in rec.scalars else "")
            writer.writerow(row)
        return buf.getvalue()

    def emit(self, path: str, fmt: str = "json") -> None:
        text = self.to_json() if fmt == "json" else self.to_csv()
        with open(path, "w") as fh:
            fh.write(text)
