"""Experiment reports, their CSV/JSON encodings, and the on-disk result cache."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import platform
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__

CACHE_ENV = "TERNARY_FORGE_CACHE"


def fmt_value(v) -> str:
    """Fixed formatting so the same numbers always produce the same bytes."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".15g")
    return str(v)


@dataclass
class ExperimentReport:
    experiment: str
    parameters: dict
    columns: list[str]
    rows: list[list]
    environment: dict = field(default_factory=dict)

    def sort_rows(self, key: str = "x") -> None:
        if key in self.columns:
            i = self.columns.index(key)
            self.rows.sort(key=lambda row: row[i])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([fmt_value(v) for v in row])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "parameters": self.parameters,
            "columns": self.columns,
            "rows": self.rows,
            "environment": self.environment,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ExperimentReport":
        d = json.loads(text)
        return cls(d["experiment"], d["parameters"], d["columns"], d["rows"], d.get("environment", {}))

    def render(self, fmt: str) -> str:
        return self.to_json() if fmt == "json" else self.to_csv()

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


def environment_stamp(wall_time: float) -> dict:
    return {
        "version": __version__,
        "python": platform.python_version(),
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "wall_time_s": round(wall_time, 3),
    }


def canonical_params(params: dict) -> str:
    return json.dumps(params, sort_keys=True, separators=(",", ":"))


def param_hash(experiment: str, params: dict) -> str:
    key = f"{__version__}\n{experiment}\n{canonical_params(params)}"
    return hashlib.sha256(key.encode()).hexdigest()[:20]


class ResultCache:
    """Content-addressed store: ``<root>/<experiment>/<param-hash>.json``.

    The package version is part of every key, so an upgrade never serves
    stale results.
    """

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)

    @classmethod
    def for_output(cls, out: str | os.PathLike) -> "ResultCache":
        env = os.environ.get(CACHE_ENV)
        return cls(env if env else Path(out) / "cache")

    def path(self, experiment: str, params: dict) -> Path:
        return self.root / experiment / f"{param_hash(experiment, params)}.json"

    def load(self, experiment: str, params: dict) -> ExperimentReport | None:
        path = self.path(experiment, params)
        if not path.is_file():
            return None
        return ExperimentReport.from_json(path.read_text(encoding="utf-8"))

    def store(self, report: ExperimentReport, params: dict | None = None) -> Path:
        """Write ``report`` under ``params`` (defaults to the report's own parameters)."""
        path = self.path(report.experiment, report.parameters if params is None else params)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(report.to_json())
        tmp.replace(path)
        return path

    def entries(self) -> list[Path]:
        if not self.root.is_dir():
            return []
        return sorted(self.root.glob("*/*.json"))

    def clear(self) -> int:
        n = 0
        for path in self.entries():
            path.unlink()
            n += 1
        for sub in sorted(self.root.glob("*")):
            if sub.is_dir() and not any(sub.iterdir()):
                sub.rmdir()
        return n
