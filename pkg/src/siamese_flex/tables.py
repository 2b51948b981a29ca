"""Reproduction of the printed parameter tables and the pentagonal examples.

Printed reference values live in ``data/golden.csv``; ``check_table`` compares a
computed table against them and reports every cell outside tolerance.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from importlib import resources

from .atlas import characteristic_points
from .deformation import admissible_interval, delta_extrinsic, delta_intrinsic
from .geometry import FaceParams
from .io import dumps17, fmt17
from .roots import solve_heights, transition_base_length

TABLE_IDS = ("T1", "A1", "A2", "examples")
LIMIT_N = 10000
INF = "inf"

# label -> (point, coordinate index); U coordinates for A1, V coordinates for A2
A1_ROWS = {
    r"x_A, \widetilde x_C": ("A", 0),
    r"\widetilde x_A, x_C": ("A", 1),
    r"x_F, \widetilde x_F": ("F", 0),
    r"x_B, \widetilde x_D": ("B", 0),
    r"\widetilde x_B, x_D": ("B", 1),
    r"x_M, \widetilde x_M": ("M", 0),
    r"x_H, \widetilde x_K": ("H", 0),
    r"\widetilde x_H, x_K": ("H", 1),
    r"x_{E_1}, \widetilde x_{E_2}": ("E1", 0),
    r"\widetilde x_{E_1}, x_{E_2}": ("E1", 1),
    r"x_{E_3}, \widetilde x_{E_3}": ("E3", 0),
}
A2_ROWS = {
    r"l_{\bar A}, \tilde l_{\bar C}": ("A", 0),
    r"\tilde l_{\bar A}, l_{\bar C}": ("A", 1),
    r"l_{\bar F}, \tilde l_{\bar F}": ("F", 0),
    r"l_{\bar O}, \tilde l_{\bar O}": ("O", 0),
    r"l_{\bar B}, \tilde l_{\bar D}": ("B", 0),
    r"\tilde l_{\bar B}, l_{\bar D}": ("B", 1),
    r"l_{\bar M}, \tilde l_{\bar M}": ("M", 0),
    r"l_{\bar H}, \tilde l_{\bar K}": ("H", 0),
    r"\tilde l_{\bar H}, l_{\bar K}": ("H", 1),
    r"l_{\bar E}": ("E", 0),
}
T1_LM = r"l_{\bar M}"
T1_MID = r"\frac{1}{2}\left(l_{\bar H}+l_{\bar K}\right)"
T1_L0 = r"l_0=2\sin\frac{5\pi}{6n}"
T1_DI = r"\delta_i"
T1_DE = r"\delta_e"
T1_ROWS = (T1_LM, T1_MID, T1_L0, T1_DI, T1_DE)

DEFAULT_RANGES = {"T1": (5, 12), "A1": (3, 12), "A2": (3, 11), "examples": (5, 5)}
# per-row tolerances; rows not listed use DEFAULT_TOL
DEFAULT_TOL = 1e-4
ROW_TOL = {("T1", T1_DI): 2e-5, ("T1", T1_DE): 1e-3}
EXAMPLE4_TOL = 1e-3


@dataclass(frozen=True)
class TableArtifact:
    table_id: str
    n_range: tuple  # inclusive (n_from, n_to)
    columns: tuple  # n values, possibly with INF
    rows: dict  # label -> list of values, one per column
    format: str = "csv"

    def render(self, fmt=None):
        fmt = fmt or self.format
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["row"] + [str(c) for c in self.columns])
            for label, vals in self.rows.items():
                w.writerow([label] + [_cell17(v) for v in vals])
            return buf.getvalue()
        if fmt == "json":
            return dumps17({"table": self.table_id, "columns": [str(c) for c in self.columns],
                            "rows": {k: list(v) for k, v in self.rows.items()}})
        if fmt == "pretty":
            width = max(len(k) for k in self.rows)
            head = "n".ljust(width) + "".join(f"{str(c):>11}" for c in self.columns)
            lines = [head]
            for label, vals in self.rows.items():
                lines.append(label.ljust(width) + "".join(f"{_cell5(v):>11}" for v in vals))
            return "\n".join(lines) + "\n"
        raise ValueError(f"unknown format {fmt!r}")


def _cell17(v):
    return "" if v is None else (str(v) if isinstance(v, int) else fmt17(v))


def _cell5(v):
    return "-" if v is None else (str(v) if isinstance(v, int) else f"{v:.5f}")


def _columns(table_id, n_from, n_to):
    cols = list(range(n_from, n_to + 1))
    if table_id == "A1":
        cols.append(INF)
    return tuple(cols)


def _atlas_table(table_id, rows, cols):
    out = {label: [] for label in rows}
    for c in cols:
        atlas = characteristic_points(LIMIT_N if c == INF else c)
        pts = atlas.points_U if table_id == "A1" else atlas.points_V
        for label, (p, k) in rows.items():
            out[label].append(float(pts[p][k]))
    return out


def _t1_table(cols):
    out = {label: [] for label in T1_ROWS}
    for n in cols:
        mid, l_M = admissible_interval(n)
        l0 = 2.0 * math.sin(5.0 * math.pi / (6.0 * n))
        out[T1_LM].append(l_M)
        out[T1_MID].append(mid)
        out[T1_L0].append(l0)
        out[T1_DI].append(delta_intrinsic(n, l0))
        out[T1_DE].append(delta_extrinsic(solve_heights(FaceParams(n, l0, l0))))
    return out


def example_values():
    """Computed counterparts of the ``examples`` rows of the golden file (all at n = 5)."""
    vals = {}
    for name, l, keys in (("Example 1 (l=1, l~=1)", 1.0, ("(a)", "(b)", "(c)")),
                          ("Example 2 (l=1.01, l~=1)", 1.01, ("",)),
                          ("Example 3 (l=1.05, l~=1)", 1.05, ())):
        sols = solve_heights(FaceParams(5, l, 1.0))
        vals[f"{name}: count"] = sols.regime
        base = name.split(" (")[0]
        for key, (x, xt) in zip(keys, sols.heights()):
            tag = f"{base} {key}".rstrip()
            vals[f"{tag}: x"] = x
            vals[f"{tag}: x~"] = xt
    tr = transition_base_length(5, 1.0, 1.0, 1.01)
    vals["Example 4 (l~=1): count"] = tr.solutions.regime
    vals["Example 4: l_0"] = tr.l0
    # printed order: the near-boundary solution (a) first, the double root (b) second
    by_x = sorted(tr.solutions.heights(), key=lambda h: -h[0])
    for key, (x, xt) in zip(("(a)", "(b)"), by_x):
        vals[f"Example 4 {key}: x"] = x
        vals[f"Example 4 {key}: x~"] = xt
    return vals


def compute_table(table_id, n_from=None, n_to=None, fmt="csv"):
    if table_id not in TABLE_IDS:
        raise ValueError(f"unknown table {table_id!r}; expected one of {', '.join(TABLE_IDS)}")
    d_from, d_to = DEFAULT_RANGES[table_id]
    n_from = d_from if n_from is None else n_from
    n_to = d_to if n_to is None else n_to
    if n_from < 3 or n_to < n_from:
        raise ValueError(f"invalid range {n_from}..{n_to}")
    if table_id == "examples":
        vals = example_values()
        return TableArtifact("examples", (5, 5), (5,), {k: [v] for k, v in vals.items()}, fmt)
    cols = _columns(table_id, n_from, n_to)
    if table_id == "T1":
        rows = _t1_table(cols)
    else:
        rows = _atlas_table(table_id, A1_ROWS if table_id == "A1" else A2_ROWS, cols)
    return TableArtifact(table_id, (n_from, n_to), cols, rows, fmt)


@dataclass(frozen=True)
class GoldenCell:
    table: str
    row: str
    n: object  # int or INF
    value: float
    line: int  # line number in the golden file

    def cite(self):
        return f"table {self.table}, row {self.row!r}, column n={self.n} (golden.csv line {self.line})"


def load_golden(table_id=None):
    text = resources.files("siamese_flex").joinpath("data/golden.csv").read_text(encoding="utf-8")
    cells = []
    lines = [(i + 1, s) for i, s in enumerate(text.splitlines())
             if s.strip() and not s.startswith("#")]
    reader = csv.reader(s for _, s in lines)
    header = next(reader)
    if header != ["table", "row", "n", "value"]:
        raise ValueError("golden data has an unexpected header")
    for (lineno, _), rec in zip(lines[1:], reader):
        table, row, n, value = rec
        if table_id is not None and table != table_id:
            continue
        cells.append(GoldenCell(table, row, INF if n == INF else int(n), float(value), lineno))
    return cells


@dataclass(frozen=True)
class Mismatch:
    cell: GoldenCell
    computed: object
    tolerance: float

    def describe(self):
        got = "missing" if self.computed is None else fmt17(self.computed)
        return f"{self.cell.cite()}: printed {self.cell.value}, computed {got}, tol {self.tolerance}"


def tolerance(cell):
    if cell.table == "examples":
        if cell.row.endswith("count"):
            return 0.0
        return EXAMPLE4_TOL if cell.row.startswith("Example 4") else DEFAULT_TOL
    return ROW_TOL.get((cell.table, cell.row), DEFAULT_TOL)


def check_table(artifact):
    """Golden cells of the artifact's table that are out of tolerance (empty when all match)."""
    col_index = {c: i for i, c in enumerate(artifact.columns)}
    bad = []
    for cell in load_golden(artifact.table_id):
        col = 5 if artifact.table_id == "examples" else cell.n
        if col not in col_index:
            continue
        vals = artifact.rows.get(cell.row)
        got = None if vals is None else vals[col_index[col]]
        tol = tolerance(cell)
        if got is None or abs(got - cell.value) > tol:
            bad.append(Mismatch(cell, got, tol))
    return bad
