"""Loading and validation of figure CSV bundles.

A bundle directory contains ``manifest.json`` (figure_id, member list,
axis labels) plus the member CSV files.  Member files carry ``#``-prefixed
``key = value`` metadata lines before the column header; the ``figure_id``
key, when present, must agree with the manifest.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

FIGURE_IDS = ("fig1a", "fig1b", "fig2a", "fig2b", "fig3")


class BundleError(Exception):
    """The bundle is missing, incomplete, or internally inconsistent."""


@dataclass(frozen=True)
class Table:
    """One member CSV: metadata, column names, and per-column arrays."""

    meta: dict
    columns: list
    data: dict = field(repr=False)

    def column(self, name):
        return self.data[name]

    def __len__(self):
        cols = next(iter(self.data.values()), [])
        return len(cols)


@dataclass(frozen=True)
class FigureBundle:
    figure_id: str
    axes: dict
    tables: dict

    def table(self, member: str) -> Table:
        return self.tables[member]


def read_table(path: Path) -> Table:
    meta = {}
    header = None
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].partition("=")
                meta[key.strip()] = value.strip()
            elif header is None:
                header = line.split(",")
            else:
                rows.append(line.split(","))
    if header is None:
        raise BundleError(f"{path.name}: no column header found")
    data = {}
    for j, name in enumerate(header):
        raw = [r[j] for r in rows]
        try:
            data[name] = np.array([float(v) for v in raw])
        except ValueError:
            data[name] = np.array(raw)
    return Table(meta=meta, columns=header, data=data)


def load_bundle(bundle_dir) -> FigureBundle:
    """Read and validate a bundle directory.

    Raises BundleError (listing every missing member) before reading any
    data, so a broken bundle never yields a partial result.
    """
    bundle_dir = Path(bundle_dir)
    manifest_path = bundle_dir / "manifest.json"
    if not manifest_path.exists():
        raise BundleError(f"{bundle_dir}: no manifest.json "
                          "(not a figure bundle)")
    try:
        manifest = json.loads(manifest_path.read_text())
    except json.JSONDecodeError as exc:
        raise BundleError(f"{manifest_path}: invalid JSON ({exc})")

    for key in ("figure_id", "members", "axes"):
        if key not in manifest:
            raise BundleError(f"{manifest_path}: manifest missing {key!r}")
    figure_id = manifest["figure_id"]
    if figure_id not in FIGURE_IDS:
        raise BundleError(f"{manifest_path}: unknown figure_id {figure_id!r}")

    missing = [m for m in manifest["members"]
               if not (bundle_dir / m).exists()]
    if missing:
        raise BundleError(f"{bundle_dir}: missing members: "
                          + ", ".join(sorted(missing)))

    tables = {}
    for member in manifest["members"]:
        table = read_table(bundle_dir / member)
        got = table.meta.get("figure_id")
        if got is not None and got != figure_id:
            raise BundleError(
                f"{member}: metadata figure_id {got!r} disagrees with "
                f"manifest figure_id {figure_id!r}")
        tables[member] = table
    return FigureBundle(figure_id=figure_id, axes=manifest["axes"],
                        tables=tables)
