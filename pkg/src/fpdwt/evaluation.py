"""Threshold-sweep evaluation: FAR / FRR / TSR per threshold and the EER.

    FAR% = impostor accepts / impostor trials * 100
    FRR% = genuine rejects (MMC) / genuine trials (NF) * 100
    TSR% = genuine accepts (MC) / genuine trials (NF) * 100

With "accept iff distance <= t", FAR can only grow and FRR only shrink as
t increases. The EER is read off by linear interpolation between the two
sweep rows that bracket the FAR/FRR crossing.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .errors import OverlapError, UnknownFinger
from .matcher import verify

CSV_COLUMNS = ("threshold", "far", "frr", "tsr", "mc", "mmc")


class OperatingPoint(NamedTuple):
    far_pct: float
    frr_pct: float
    tsr_pct: float


# Published operating points, for side-by-side comparison tables.
BASELINES = {
    "AMFAUW": OperatingPoint(5.91, 6.14, 94.09),
    "DWTFR": OperatingPoint(0.0, 3.0, 97.0),
}


@dataclass(frozen=True)
class EvalRow:
    threshold: float
    far_pct: float
    frr_pct: float
    tsr_pct: float
    mc: int
    mmc: int
    false_accepts: int = 0


@dataclass
class EvalReport:
    rows: list
    eer_pct: float
    eer_threshold: float
    eer_defined: bool
    metadata: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([repr(float(r.threshold)), repr(r.far_pct), repr(r.frr_pct),
                        repr(r.tsr_pct), r.mc, r.mmc])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "rows": [asdict(r) for r in self.rows],
            "eer_pct": self.eer_pct if self.eer_defined else None,
            "eer_threshold": self.eer_threshold if self.eer_defined else None,
            "eer_defined": self.eer_defined,
            "metadata": self.metadata,
        }
        return json.dumps(doc, indent=1, sort_keys=True, allow_nan=False) + "\n"

    def row_at(self, threshold: float) -> EvalRow:
        for r in self.rows:
            if r.threshold == threshold:
                return r
        raise KeyError(f"no sweep row at threshold {threshold}")


def assign_claims(n_probes: int, finger_ids, mode: str = "round_robin", seed: int = 0) -> list:
    """Enrolled identity claimed by each impostor probe."""
    fingers = sorted(finger_ids)
    if not fingers:
        raise ValueError("no enrolled fingers to claim")
    if mode == "round_robin":
        return [fingers[k % len(fingers)] for k in range(n_probes)]
    if mode == "random":
        rng = np.random.default_rng(seed)
        return [fingers[i] for i in rng.integers(0, len(fingers), size=n_probes)]
    raise ValueError(f"unknown claim mode {mode!r}")


def genuine_distances(store, genuine_test, aggregation: str = "min") -> np.ndarray:
    out = []
    for probe in genuine_test:
        if probe.finger_id not in store.templates:
            raise UnknownFinger(f"genuine probe finger {probe.finger_id} is not enrolled")
        out.append(verify(probe, probe.finger_id, store, math.inf, aggregation).distance)
    return np.array(out, dtype=np.float64)


def impostor_distances(store, impostor_test, aggregation: str = "min",
                       claim_mode: str = "round_robin", seed: int = 0) -> np.ndarray:
    overlap = sorted({p.finger_id for p in impostor_test} & set(store.templates))
    if overlap:
        raise OverlapError(f"impostor fingers also enrolled: {overlap}")
    claims = assign_claims(len(impostor_test), store.finger_ids, claim_mode, seed)
    return np.array([verify(p, c, store, math.inf, aggregation).distance
                     for p, c in zip(impostor_test, claims)], dtype=np.float64)


def genuine_trials(store, genuine_test, threshold: float, aggregation: str = "min"):
    """(MC, MMC): genuine probes accepted and rejected at ``threshold``."""
    d = genuine_distances(store, genuine_test, aggregation)
    mc = int(np.count_nonzero(d <= threshold))
    return mc, len(d) - mc


def impostor_trials(store, impostor_test, threshold: float, aggregation: str = "min",
                    claim_mode: str = "round_robin", seed: int = 0) -> int:
    """Number of impostor probes wrongly accepted at ``threshold``."""
    d = impostor_distances(store, impostor_test, aggregation, claim_mode, seed)
    return int(np.count_nonzero(d <= threshold))


def far_pct(false_accepts: int, trials: int) -> float:
    return 100.0 * false_accepts / trials if trials else 0.0


def frr_pct(mmc: int, nf: int) -> float:
    return 100.0 * mmc / nf if nf else 0.0


def tsr_pct(mc: int, nf: int) -> float:
    return 100.0 * mc / nf if nf else 0.0


def rows_from_distances(genuine, impostor, thresholds) -> list:
    genuine = np.sort(np.asarray(genuine, dtype=np.float64))
    impostor = np.sort(np.asarray(impostor, dtype=np.float64))
    nf, ni = genuine.size, impostor.size
    rows = []
    for t in thresholds:
        mc = int(np.searchsorted(genuine, t, side="right"))
        fa = int(np.searchsorted(impostor, t, side="right"))
        rows.append(EvalRow(float(t), far_pct(fa, ni), frr_pct(nf - mc, nf),
                            tsr_pct(mc, nf), mc, nf - mc, fa))
    return rows


def check_monotone(rows) -> None:
    far = [r.far_pct for r in rows]
    frr = [r.frr_pct for r in rows]
    if any(b < a for a, b in zip(far, far[1:])) or any(b > a for a, b in zip(frr, frr[1:])):
        raise AssertionError("FAR must be non-decreasing and FRR non-increasing in threshold")


def equal_error_rate(rows):
    """(eer_pct, threshold) at the FAR/FRR crossing, or None when the sweep has no crossing."""
    if len(rows) < 2:
        return None
    diff = [r.far_pct - r.frr_pct for r in rows]
    for i, d in enumerate(diff):
        if d >= 0:
            break
    else:
        return None
    if d == 0:
        return rows[i].far_pct, rows[i].threshold
    if i == 0:
        return None
    a, b = rows[i - 1], rows[i]
    frac = -diff[i - 1] / (d - diff[i - 1])
    return (a.far_pct + frac * (b.far_pct - a.far_pct),
            a.threshold + frac * (b.threshold - a.threshold))


def report_from_distances(genuine, impostor, thresholds, metadata=None) -> EvalReport:
    thresholds = [float(t) for t in thresholds]
    if not thresholds:
        raise ValueError("need at least one threshold")
    if any(b <= a for a, b in zip(thresholds, thresholds[1:])):
        raise ValueError("thresholds must be strictly increasing")
    rows = rows_from_distances(genuine, impostor, thresholds)
    check_monotone(rows)
    eer = equal_error_rate(rows)
    if eer is None:
        return EvalReport(rows, math.nan, math.nan, False, dict(metadata or {}))
    return EvalReport(rows, eer[0], eer[1], True, dict(metadata or {}))


def sweep(store, genuine_test, impostor_test, thresholds, aggregation: str = "min",
          claim_mode: str = "round_robin", seed: int = 0) -> EvalReport:
    """Score every trial once, then evaluate each threshold."""
    g = genuine_distances(store, genuine_test, aggregation)
    i = impostor_distances(store, impostor_test, aggregation, claim_mode, seed)
    meta = {
        "enrolled_templates": len(store),
        "enrolled_fingers": len(store.finger_ids),
        "genuine_trials": int(g.size),
        "impostor_trials": int(i.size),
        "config_hash": store.config_hash,
        "config": store.config.to_dict(),
        "aggregation": aggregation,
        "claim_mode": claim_mode,
        "claim_seed": seed,
    }
    return report_from_distances(g, i, thresholds, meta)


class ComparisonRow(NamedTuple):
    method: str
    far_pct: float
    frr_pct: float
    tsr_pct: float


def operating_point(report: EvalReport, threshold: Optional[float] = None) -> EvalRow:
    """The row at ``threshold``, or else the row with the lowest FAR + FRR
    (ties go to the lowest threshold)."""
    if threshold is not None:
        return report.row_at(threshold)
    if not report.rows:
        raise ValueError("empty report")
    return min(report.rows, key=lambda r: (r.far_pct + r.frr_pct, r.threshold))


def compare_report(report: EvalReport, baseline="AMFAUW", threshold: Optional[float] = None,
                   name: str = "proposed") -> list:
    """Baseline row followed by this report's selected operating point."""
    if isinstance(baseline, str):
        label, point = baseline, BASELINES[baseline]
    else:
        label, point = baseline
        point = OperatingPoint(*point)
    row = operating_point(report, threshold)
    return [ComparisonRow(label, *point), ComparisonRow(name, row.far_pct, row.frr_pct, row.tsr_pct)]


def format_table(report: EvalReport) -> str:
    """Threshold / %FAR / %FRR / %TSR table, one line per sweep row."""
    lines = ["Threshold\t%FAR\t%FRR\t%TSR"]
    for r in report.rows:
        lines.append(f"{r.threshold:g}\t{r.far_pct:.4g}\t{r.frr_pct:.4g}\t{r.tsr_pct:.4g}")
    return "\n".join(lines)


def format_comparison(rows) -> str:
    lines = ["Method\t%FAR\t%FRR\t%TSR"]
    lines += [f"{r.method}\t{r.far_pct:.4g}\t{r.frr_pct:.4g}\t{r.tsr_pct:.4g}" for r in rows]
    return "\n".join(lines)
