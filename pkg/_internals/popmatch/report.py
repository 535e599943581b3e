"""
Command reports as long-format DataFrames (columns record, key, value).

The same frame renders as text for people, as TSV for scripts, and as a
sheet of an Excel workbook.
"""

import logging
from pathlib import Path
from typing import IO, Dict, List, Optional, Sequence, Tuple, Union

import pandas as pd

import config

from popmatch.core import Instance, Matching
from popmatch.errors import NO_POPULAR_MATCHING
from popmatch.reduction import Cnf, GadgetIndex
from popmatch.solver import SolveReport, iteration_count
from popmatch.verifier import MarginReport

log = logging.getLogger(__name__)

COLUMNS = ["record", "key", "value"]

Row = Tuple[str, str, object]


def _frame(rows: List[Row]) -> pd.DataFrame:
    return pd.DataFrame(rows, columns=COLUMNS)


def _set(inst: Instance, posts) -> str:
    return "{" + ",".join(inst.post_label(b) for b in sorted(posts)) + "}"


def _matching_rows(record: str, inst: Instance, m: Matching) -> List[Row]:
    rows = []
    for a in range(inst.num_applicants):
        b = m.partner(a)
        rows.append((record, inst.applicant_label(a), "-" if b is None else inst.post_label(b)))
    return rows


def solve_frame(report: SolveReport, trace: bool = False) -> pd.DataFrame:
    inst = report.instance
    part = report.partition
    rows: List[Row] = [
        ("result", "status", "found" if report.found else repr(NO_POPULAR_MATCHING)),
        ("result", "iterations", iteration_count(report.trace)),
        ("result", "work", report.trace.work),
        ("partition", "X", _set(inst, part.X)),
        ("partition", "Y", _set(inst, part.Y)),
        ("partition", "Z", _set(inst, part.Z)),
    ]
    for (a, node), kind in sorted(report.helper.edges.items()):
        target = "l(" + inst.applicant_label(a) + ")" if report.helper.is_dummy(node) else inst.post_label(node)
        rows.append(("helper", f"{inst.applicant_label(a)}-{target}", kind.value))
    if report.found:
        rows += _matching_rows("matching", inst, report.result)
    if trace:
        for it in report.trace.iterations:
            rows.append(("trace", f"iteration {it.index}",
                         f"X->Y {_set(inst, it.x_to_y)} Y->Z {_set(inst, it.y_to_z)}"))
    return _frame(rows)


def margin_frame(inst: Instance, report: MarginReport) -> pd.DataFrame:
    rows: List[Row] = [
        ("result", "margin", report.margin),
        ("result", "popular", report.margin == 0),
        ("votes", "for_witness", report.votes_for_witness),
        ("votes", "for_matching", report.votes_for_matching),
    ]
    if report.margin > 0:
        rows += _matching_rows("witness", inst, report.witness)
    return _frame(rows)


def oracle_frame(inst: Instance, popular: Sequence[Matching], total: Optional[int] = None) -> pd.DataFrame:
    rows: List[Row] = [("result", "popular_count", len(popular))]
    if total is not None:
        rows.append(("result", "matchings", total))
    if not popular:
        rows.append(("result", "status", "none"))
    for n, m in enumerate(popular, start=1):
        rows.append((f"popular_{n}", "pairs", m.describe(inst)))
    return _frame(rows)


def reduce_frame(cnf: Cnf, inst: Instance, index: GadgetIndex,
                 decision: Union[Matching, None, object] = None,
                 assignment: Optional[Sequence[bool]] = None) -> pd.DataFrame:
    rows: List[Row] = [
        ("formula", "variables", cnf.num_vars),
        ("formula", "clauses", cnf.num_clauses),
        ("instance", "applicants", inst.num_applicants),
        ("instance", "posts", inst.num_posts),
        ("instance", "edges", inst.num_edges),
    ]
    if decision is not None:
        found = decision is not NO_POPULAR_MATCHING
        rows.append(("result", "status", "popular" if found else repr(NO_POPULAR_MATCHING)))
        if found:
            rows.append(("result", "matching", decision.describe(inst)))
    if assignment is not None:
        rows += [("assignment", f"v{j}", bool(v)) for j, v in enumerate(assignment, start=1)]
    return _frame(rows)


def gen_frame(inst: Instance, source: str, path: Optional[Path] = None) -> pd.DataFrame:
    rows: List[Row] = [
        ("instance", "source", source),
        ("instance", "applicants", inst.num_applicants),
        ("instance", "posts", inst.num_posts),
        ("instance", "edges", inst.num_edges),
        ("instance", "single_tie", inst.is_single_tie_model()),
    ]
    if path is not None:
        rows.append(("output", "path", str(path)))
    return _frame(rows)


# ============================================================================
# RENDERING
# ============================================================================

def write_tsv(frame: pd.DataFrame, stream: IO[str]) -> None:
    frame.to_csv(stream, sep="\t", index=False, lineterminator="\n")


def write_text(frame: pd.DataFrame, stream: IO[str]) -> None:
    for record, group in frame.groupby("record", sort=False):
        stream.write(f"[{record}]\n")
        width = max(len(str(k)) for k in group["key"])
        for key, value in zip(group["key"], group["value"]):
            stream.write(f"  {str(key).ljust(width)}  {value}\n")


def write_report(frame: pd.DataFrame, stream: IO[str], fmt: Optional[str] = None) -> None:
    fmt = fmt or config.OUTPUT_SETTINGS["format"]
    if fmt == "tsv":
        write_tsv(frame, stream)
    else:
        write_text(frame, stream)


def write_excel_report(frames: Dict[str, pd.DataFrame], path: Union[str, Path]) -> Path:
    """One sheet per frame; sheet names come from OUTPUT_SETTINGS when known."""
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    names = config.OUTPUT_SETTINGS["excel_sheet_names"]
    with pd.ExcelWriter(out, engine="openpyxl") as xw:
        for key, frame in frames.items():
            frame.to_excel(xw, sheet_name=names.get(key, key)[:31], index=False)
    log.info("wrote Excel report %s", out)
    return out
