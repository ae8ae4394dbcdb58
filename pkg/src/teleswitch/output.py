"""Trace and summary serialization.

Numbers go through Python's own formatting, which ignores the process
locale, so identical runs give byte-identical files.
"""
from __future__ import annotations

import io
import math
import os
import shutil
import tempfile
from pathlib import Path

from .engine import CSV_COLUMNS, TraceLog
from .metrics import RunSummary

_INT_COLUMNS = {"pkts_fwd", "pkts_bwd"}


def _num(v: float) -> str:
    if math.isnan(v):
        return "nan"
    s = repr(float(v))
    return "0.0" if s == "-0.0" else s


def trace_csv(trace: TraceLog) -> str:
    """The trace as CSV text with a fixed column order and ``\\n`` line ends."""
    cols = trace.columns
    n = len(trace)
    rendered = []
    for name in CSV_COLUMNS:
        if name == "scheme":
            rendered.append([s.value for s in cols[name]])
        elif name == "t_ms":
            rendered.append([f"{v:.3f}" for v in cols[name]])
        elif name in _INT_COLUMNS:
            rendered.append([str(int(v)) for v in cols[name]])
        else:
            rendered.append([_num(v) for v in cols[name].tolist()])
    buf = io.StringIO()
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for i in range(n):
        buf.write(",".join(col[i] for col in rendered) + "\n")
    return buf.getvalue()


def summary_text(summary: RunSummary, header: dict[str, str] | None = None) -> str:
    lines = [f"{k} = {v}" for k, v in (header or {}).items()]
    return "\n".join(lines + summary.as_lines()) + "\n"


SWEEP_COLUMNS = (
    "rtt_ms", "scheme", "avg_fwd_packet_rate", "avg_bwd_packet_rate",
    "displayed_stiffness", "force_tracking_rmse", "position_tracking_rmse",
    "mean_abs_force_error", "switch_count",
)


def sweep_table(rows: list[tuple[float, RunSummary]]) -> str:
    out = [",".join(SWEEP_COLUMNS)]
    for rtt_ms, s in rows:
        out.append(",".join([
            f"{rtt_ms:g}", s.final_scheme.value,
            f"{s.avg_fwd_packet_rate:.6f}", f"{s.avg_bwd_packet_rate:.6f}",
            f"{s.displayed_stiffness:.6f}", f"{s.force_tracking_rmse:.9f}",
            f"{s.position_tracking_rmse:.9f}", f"{s.mean_abs_force_error:.9f}",
            str(len(s.switch_events)),
        ]))
    return "\n".join(out) + "\n"


def write_bundle(out_dir: str | Path, files: dict[str, str]) -> list[Path]:
    """Write ``files`` (relative path -> text) under ``out_dir``.

    Everything is staged in a sibling temporary directory first and moved
    into place only once all files are complete, so a failure leaves no
    partial outputs behind.
    """
    out_dir = Path(out_dir)
    parent = out_dir.resolve().parent
    parent.mkdir(parents=True, exist_ok=True)
    stage = Path(tempfile.mkdtemp(prefix=f".{out_dir.name}.", dir=parent))
    try:
        for rel, text in files.items():
            dest = stage / rel
            dest.parent.mkdir(parents=True, exist_ok=True)
            with open(dest, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        out_dir.mkdir(parents=True, exist_ok=True)
        written = []
        for rel in files:
            dest = out_dir / rel
            dest.parent.mkdir(parents=True, exist_ok=True)
            os.replace(stage / rel, dest)
            written.append(dest)
        return written
    finally:
        shutil.rmtree(stage, ignore_errors=True)
