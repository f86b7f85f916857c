"""Figure recipes: which CSV files feed each figure id, and their schemas.

A FigureRecipe binds a figure id to concrete CSV paths and an output
image path.  Validation is strict: the CSV header must equal the
documented schema for the id, and a mismatch reports the column diff.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

_SWEEP_COLUMNS = ["delta_over_g1", "g2_over_g1", "c_avg_max", "omega_opt"]

#: figure id -> (CSV base names, expected header)
SCHEMAS = {
    "2b": (["2b"], ["omega_minus_E1_ueV", "gamma_ueV", "beta", "c_avg"]),
    "2c": (["2c"], ["gamma_ueV", "beta", "omega_opt_minus_E1_ueV",
                    "c_avg_max"]),
    "2d": (["2d"], ["sigma_ueV", "profile", "c_avg"]),
    "3a": (["3a"], ["omega_minus_E1_ueV", "gamma_ueV", "c_avg"]),
    "3b": (["3b"], ["sigma_ueV", "profile", "c_avg"]),
    "3c": (["3c"], ["beta", "input", "c_avg"]),
    "3d": (["3d"], ["delta_over_gamma", "input", "beta", "c_avg_max",
                    "omega_opt_minus_E1_ueV"]),
    "4": (["4a", "4b", "4c", "4d"], _SWEEP_COLUMNS),
    "4a": (["4a"], _SWEEP_COLUMNS),
    "4b": (["4b"], _SWEEP_COLUMNS),
    "4c": (["4c"], _SWEEP_COLUMNS),
    "4d": (["4d"], _SWEEP_COLUMNS),
    "S1": ([f"S1_n{n}m{m}" for total in range(1, 7)
            for m in range(total // 2 + 1) for n in [total - m]],
           _SWEEP_COLUMNS),
    "S2": (["S2_n1m0", "S2_n1m1"], _SWEEP_COLUMNS),
}

FIGURE_IDS = tuple(SCHEMAS)


class SchemaError(Exception):
    """CSV header does not match the figure id's documented schema."""


@dataclass(frozen=True)
class FigureRecipe:
    figure_id: str
    data_dir: Path
    output: Path
    csv_paths: tuple = field(init=False)

    def __post_init__(self):
        if self.figure_id not in SCHEMAS:
            raise SchemaError(f"unknown figure id {self.figure_id!r}; "
                              f"expected one of {FIGURE_IDS}")
        names, _ = SCHEMAS[self.figure_id]
        paths = tuple(Path(self.data_dir) / f"fig_{name}.csv"
                      for name in names)
        object.__setattr__(self, "csv_paths", paths)

    @property
    def columns(self):
        return list(SCHEMAS[self.figure_id][1])


def load_table(path, expected_columns):
    """Read one CSV into {column: list}; floats where possible.

    Raises SchemaError with a column diff on header mismatch, and on
    missing or empty files.
    """
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"missing CSV: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise SchemaError(f"empty CSV (no header): {path}")
    header = rows[0]
    if header != list(expected_columns):
        missing = [c for c in expected_columns if c not in header]
        unexpected = [c for c in header if c not in expected_columns]
        raise SchemaError(
            f"{path}: header {header} does not match schema "
            f"{list(expected_columns)} (missing: {missing or 'none'}, "
            f"unexpected: {unexpected or 'none'})")
    if len(rows) == 1:
        raise SchemaError(f"empty CSV (no data rows): {path}")
    table = {}
    for j, col in enumerate(header):
        values = [r[j] for r in rows[1:]]
        try:
            table[col] = [float(v) for v in values]
        except ValueError:
            table[col] = values
    return table
