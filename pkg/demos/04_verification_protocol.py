"""
Verification protocol on a synthetic database
=============================================

Ten enrolled fingers with eight impressions each: impressions 1-7 are
enrolled and impression 8 is the genuine probe. Two further fingers act as
impostors, each impostor probe claiming an enrolled identity in turn. A
threshold sweep gives FAR, FRR and TSR; the EER is read off where the FAR
and FRR curves cross.
"""
import tempfile
from pathlib import Path

import numpy as np

from fpdwt import evaluation
from fpdwt.ingest import load_image, scan_dataset
from fpdwt.pipeline import enroll_database, make_template
from fpdwt.synth import SynthParams, generate

root = Path(tempfile.mkdtemp())
params = SynthParams(seed=1)
generate(root / "db", fingers=10, samples=8, params=params)
generate(root / "impostors", fingers=2, samples=8, params=params, first_finger=11)

split = scan_dataset(root / "db", root / "impostors")
print(f"{len(split.enroll)} enrolled, {len(split.genuine_test)} genuine probes, "
      f"{len(split.impostor_test)} impostor probes")

store = enroll_database(split)


def probes(samples):
    return [make_template(load_image(s.path), s.finger_id, s.sample_id, store.config)
            for s in samples]


genuine, impostor = probes(split.genuine_test), probes(split.impostor_test)

g = evaluation.genuine_distances(store, genuine)
i = evaluation.impostor_distances(store, impostor)
print(f"genuine distances:  mean {g.mean():7.1f}  max {g.max():7.1f}")
print(f"impostor distances: mean {i.mean():7.1f}  min {i.min():7.1f}")

thresholds = np.linspace(0, max(g.max(), i.max()), 21).round(1)
report = evaluation.sweep(store, genuine, impostor, thresholds)
print(evaluation.format_table(report))
print(f"EER {report.eer_pct:.2f}% at threshold {report.eer_threshold:.1f}")

# Side by side with a published wavelet baseline.
rows = evaluation.compare_report(report, "AMFAUW", name="this run")
print(evaluation.format_comparison(rows))
