"""CSV, JSON and plain-text emitters for reports and sweeps."""

import csv
import json
import logging
import math
from pathlib import Path
from typing import IO, Any, Dict, Iterable, List, Optional, Sequence, Union

from llo_qkd.config import settings
from llo_qkd.core.noise_budget import trusted_phase_fraction
from llo_qkd.models.schemas import (
    KeyRateBreakdown, NoiseBudget, OracleCheck, OutputRow, ReproductionReport, SweepResult,
)

_LOGGER = logging.getLogger(__name__)

ROW_FIELDS = ["distance_km", "transmittance", "xi_tot", "xi_tot_trusted", "xi_error_t_over_t"]
BUDGET_FIELDS = [
    "xi0", "xi_am", "xi_le", "xi_adc", "xi_rest", "xi_drift", "xi_channel",
    "xi_error", "xi_error_u", "xi_error_t", "xi_phase", "xi_tot",
]


def format_number(value: float) -> str:
    return format(value, settings.CSV_FLOAT_FORMAT)


def format_quantity(value: Optional[float], unit: str = "") -> str:
    """Human-readable value with unit; rates get an SI prefix."""
    if value is None:
        return "n/a"
    if unit == "bit/s" and math.isfinite(value) and abs(value) >= 1e3:
        for factor, prefix in ((1e9, "G"), (1e6, "M"), (1e3, "k")):
            if abs(value) >= factor:
                return f"{value / factor:.4f} {prefix}bit/s"
    text = f"{value:.6g}"
    return f"{text} {unit}" if unit else text


# CSV
def sweep_header(rows: Sequence[OutputRow]) -> List[str]:
    if not rows:
        return list(ROW_FIELDS)
    header = ROW_FIELDS + list(rows[0].columns)
    if rows[0].eigenvalues:
        for name in rows[0].eigenvalues:
            header += [f"lambda{i}_{name}" for i in range(1, 6)]
    return header


def _row_values(row: OutputRow) -> List[float]:
    values = [getattr(row, name) for name in ROW_FIELDS] + list(row.columns.values())
    if row.eigenvalues:
        for lambdas in row.eigenvalues.values():
            values += list(lambdas)
    return values


def write_table(stream: IO[str], header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(v) if isinstance(v, float) else v for v in row])


def write_sweep_csv(result: SweepResult, destination: Union[str, Path, IO[str]]) -> None:
    """Rows in distance order with a header; numbers at 12 significant digits."""
    header = sweep_header(result.rows)
    rows = [_row_values(row) for row in result.rows]
    if isinstance(destination, (str, Path)):
        with open(destination, "w", encoding="utf-8", newline="") as handle:
            write_table(handle, header, rows)
        _LOGGER.info(f"Wrote {len(rows)} rows to {destination}")
    else:
        write_table(destination, header, rows)


def write_keyrate_csv(breakdown: KeyRateBreakdown, budget: NoiseBudget, stream: IO[str]) -> None:
    header = ["model", "i_ab", "chi_be", "k", "key"] + [f"lambda{i}" for i in range(1, 6)] + BUDGET_FIELDS
    values: List[Any] = [breakdown.model.value, breakdown.i_ab, breakdown.chi_be, breakdown.k, breakdown.key]
    values += list(breakdown.lambdas)
    values += [getattr(budget, name) for name in BUDGET_FIELDS]
    write_table(stream, header, [values])


# JSON
def keyrate_document(breakdown: KeyRateBreakdown, budget: NoiseBudget) -> Dict[str, Any]:
    return {**breakdown.model_dump(mode="json"), "budget": budget.model_dump(mode="json")}


def to_json(document: Any) -> str:
    if hasattr(document, "model_dump"):
        document = document.model_dump(mode="json")
    elif isinstance(document, list):
        document = [d.model_dump(mode="json") if hasattr(d, "model_dump") else d for d in document]
    return json.dumps(document, indent=2)


# Text reports
def keyrate_report(breakdown: KeyRateBreakdown, budget: NoiseBudget) -> str:
    lines = [f"Model: {breakdown.model.value}"]
    lines.append(f"  T              {format_quantity(budget.t)}")
    for name in BUDGET_FIELDS:
        lines.append(f"  {name:<14} {format_quantity(getattr(budget, name), 'SNU')}")
    if budget.phase is not None:
        lines.append(f"  V_est          {format_quantity(budget.phase.v_est, 'rad^2')}")
    lines.append(f"  trusted share  {trusted_phase_fraction(budget):.2%} of xi_tot")
    if breakdown.added is not None:
        lines.append(f"  chi_line       {format_quantity(breakdown.added.chi_line, 'SNU')}")
        lines.append(f"  chi_het        {format_quantity(breakdown.added.chi_het, 'SNU')}")
        lines.append(f"  chi_tot        {format_quantity(breakdown.added.chi_tot, 'SNU')}")
    lines.append("  lambdas        " + ", ".join(f"{v:.9g}" for v in breakdown.lambdas))
    lines.append(f"  I_AB           {format_quantity(breakdown.i_ab, 'bits/pulse')}")
    lines.append(f"  chi_BE         {format_quantity(breakdown.chi_be, 'bits/pulse')}")
    lines.append(f"  K              {format_quantity(breakdown.k, 'bits/pulse')}")
    lines.append(f"  Key            {format_quantity(breakdown.key, 'bit/s')}")
    return "\n".join(lines)


def sweep_summary(result: SweepResult) -> str:
    lines = []
    for name, distance in result.max_distance_km.items():
        shown = f"{distance:.2f} km" if distance is not None else "no zero crossing in range"
        lines.append(f"Maximum distance {name}: {shown}")
    if result.ordering_ok is not None:
        lines.append(f"Ordering K_conv <= K_attacked <= K_trusted: {'ok' if result.ordering_ok else 'VIOLATED'}")
    if result.alarms:
        triggered = [row.distance_km for row, alarm in zip(result.rows, result.alarms) if alarm.triggered]
        if triggered:
            lines.append(f"Intensity alarm triggered from {triggered[0]:g} km ({len(triggered)} rows)")
        else:
            lines.append("Intensity alarm never triggered")
    return "\n".join(lines)


def oracle_report(checks: Sequence[OracleCheck]) -> str:
    header = f"{'quantity':<26}{'analytic':>14}{'empirical':>14}{'std_error':>12}{'dev':>8}  result"
    lines = [header]
    for c in checks:
        lines.append(
            f"{c.quantity:<26}{c.analytic:>14.7g}{c.empirical:>14.7g}{c.std_error:>12.3g}"
            f"{c.deviation_sigma:>7.2f}s  {'pass' if c.passed else 'FAIL'}"
        )
        if c.note:
            lines.append(f"    {c.note}")
    return "\n".join(lines)


def reproduction_report(report: ReproductionReport) -> str:
    lines = [f"{'quantity':<18}{'computed':>14}{'published':>14}  tolerance"]
    for item in report.items:
        tolerance = f"±{item.tolerance:.1%}" if item.relative else f"±{item.tolerance:g}"
        lines.append(
            f"{item.quantity:<18}{item.computed:>14.7g}{item.published:>14.7g}  {tolerance:<8} "
            f"{'pass' if item.passed else 'FAIL'}"
        )
    lo, hi = report.ratio_range
    lines.append(
        f"Key^T/Key = {report.ratio:.4f} (expected [{lo}, {hi}]) {'pass' if report.ratio_ok else 'FAIL'}"
    )
    return "\n".join(lines)
