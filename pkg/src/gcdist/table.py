"""Flat tabular container shared by every exportable result type."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Table:
    """Header plus rows of plain scalars (str, int, float)."""

    columns: list[str]
    rows: list[list]

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(f"row width {len(row)} != {len(self.columns)} columns")


def kv_table(pairs: list[tuple[str, object]]) -> Table:
    """Two-column field/value table, the schema used for summary reports."""
    return Table(["field", "value"], [[k, v] for k, v in pairs])
