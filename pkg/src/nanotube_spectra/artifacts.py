"""Deterministic CSV/JSON output with a comment header.

Every artifact starts with ``# key: value`` lines carrying the tool version,
the configuration and the seed.  JSON artifacts are ``{"meta": ..., "data":
...}`` where ``data`` maps each CSV column to a list.  Nothing time- or
host-dependent is written, so one configuration always gives the same bytes.
"""

from __future__ import annotations

import csv
import io
import json
import os
from pathlib import Path
from typing import Any, Iterable, Sequence

from . import __version__

__all__ = ["Table", "render", "write_artifact", "output_dir", "parse_csv"]

ENV_OUTDIR = "NANOTUBE_SPECTRA_OUTDIR"


class Table:
    """Named columns plus per-table metadata."""

    def __init__(self, name: str, columns: Sequence[str], rows: Iterable[Sequence[Any]], meta: dict | None = None):
        self.name = name
        self.columns = list(columns)
        self.rows = [list(r) for r in rows]
        self.meta = dict(meta or {})
        for r in self.rows:
            if len(r) != len(self.columns):
                raise ValueError(f"row {r!r} does not match columns {self.columns}")


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _jsonable(v):
    # big integers would lose digits as JSON numbers in most readers
    if isinstance(v, int) and not isinstance(v, bool) and abs(v) >= 2 ** 53:
        return str(v)
    if hasattr(v, "item"):
        return v.item()
    return v


def _meta(table: Table, config: dict) -> dict:
    meta = {"tool": "nanotube-spectra", "version": __version__, "table": table.name}
    meta["config"] = {k: config[k] for k in sorted(config)}
    meta["seed"] = config.get("seed")
    meta.update({k: table.meta[k] for k in sorted(table.meta)})
    return meta


def render(table: Table, config: dict, fmt: str = "csv") -> str:
    meta = _meta(table, config)
    if fmt == "csv":
        buf = io.StringIO()
        for k, v in meta.items():
            buf.write(f"# {k}: {json.dumps(v, sort_keys=True, default=str)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(table.columns)
        for r in table.rows:
            w.writerow([_cell(v) for v in r])
        return buf.getvalue()
    if fmt == "json":
        data = {c: [_jsonable(r[i]) for r in table.rows] for i, c in enumerate(table.columns)}
        return json.dumps({"meta": meta, "data": data}, indent=1, sort_keys=False, default=str) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def output_dir(explicit: str | None = None) -> Path:
    """``explicit`` if given, else ``$NANOTUBE_SPECTRA_OUTDIR``, else the cwd."""
    if explicit:
        return Path(explicit)
    return Path(os.environ.get(ENV_OUTDIR) or ".")


def write_artifact(table: Table, config: dict, out: Path, fmt: str = "csv") -> Path:
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{table.name}.{fmt}"
    path.write_text(render(table, config, fmt), encoding="utf-8")
    return path


def parse_csv(text: str) -> tuple[dict, list[str], list[list[str]]]:
    """Inverse of :func:`render` for CSV: ``(meta, columns, rows)``."""
    meta = {}
    body = []
    for line in text.splitlines():
        if line.startswith("# "):
            k, _, v = line[2:].partition(": ")
            meta[k] = json.loads(v)
        else:
            body.append(line)
    rows = list(csv.reader(body))
    return meta, rows[0], rows[1:]
