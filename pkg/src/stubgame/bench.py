"""NORMAL vs POR benchmark harness.

Each model is solved twice (without and with partial order reduction) and
summarised in a ``BenchRow``.  Rows can be written as CSV with the columns
``model,time_normal,time_por,markings_normal,markings_por,pct_time,pct_markings``
or as an aligned text table.
"""
from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .formats import ModelFile
from .net import BoundednessError
from .solver import InvariantViolation, compare_runs, reduction_pct

CSV_HEADER = ["model", "time_normal", "time_por", "markings_normal", "markings_por",
              "pct_time", "pct_markings"]


@dataclass
class BenchRow:
    model: str
    time_normal: float = 0.0
    time_por: float = 0.0
    markings_normal: int = 0
    markings_por: int = 0
    error: str | None = None

    @property
    def pct_markings(self) -> int:
        return reduction_pct(self.markings_normal, self.markings_por)

    @property
    def pct_time(self) -> int:
        return reduction_pct(self.time_normal, self.time_por)

    def cells(self, with_time: bool = True) -> list[str]:
        if self.error is not None:
            return [self.model] + ["ERROR"] * 4 + ["", self.error]
        t = (lambda v: f"{v:.3f}") if with_time else (lambda v: "-")
        return [self.model, t(self.time_normal), t(self.time_por),
                str(self.markings_normal), str(self.markings_por),
                str(self.pct_time) if with_time else "-", str(self.pct_markings)]


def bench_one(name: str, model: ModelFile, max_states: int = 1_000_000,
              search_order: str = "dfs") -> BenchRow:
    if model.query is None:
        return BenchRow(name, error="model has no query")
    try:
        cmp = compare_runs(model.net, model.initial, model.query, max_states=max_states,
                           search_order=search_order)
    except BoundednessError as exc:
        return BenchRow(name, error=f"state limit: {exc}")
    except InvariantViolation as exc:
        return BenchRow(name, error=f"invariant: {exc}")
    return BenchRow(name, cmp.normal.wall_time, cmp.por.wall_time,
                    cmp.normal.unique_markings, cmp.por.unique_markings)


def bench(models, max_states: int = 1_000_000, search_order: str = "dfs",
          jobs: int = 1) -> list[BenchRow]:
    """Benchmark ``(name, ModelFile)`` pairs; rows keep the input order."""
    models = list(models)

    def run(item):
        return bench_one(item[0], item[1], max_states, search_order)

    if jobs <= 1:
        return [run(x) for x in models]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run, models))


def to_csv(rows, with_time: bool = True) -> str:
    """CSV text; ``with_time=False`` prints ``-`` in the timing columns so
    that the output is byte-stable across runs."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.cells(with_time)[:7])
    return buf.getvalue()


def to_table(rows, with_time: bool = True) -> str:
    head = ["Model", "NORMAL s", "POR s", "NORMAL markings", "POR markings",
            "Time red. %", "Markings red. %"]
    body = [r.cells(with_time) for r in rows]
    widths = [max(len(x[i]) for x in [head] + body) for i in range(len(head))]
    lines = []
    for i, row in enumerate([head] + body):
        cells = [row[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(row[1:7], widths[1:])]
        line = "  ".join(cells)
        if len(row) > 7 and row[7]:
            line += "  " + row[7]
        lines.append(line.rstrip())
        if i == 0:
            lines.append("-" * len(lines[0]))
    return "\n".join(lines) + "\n"
