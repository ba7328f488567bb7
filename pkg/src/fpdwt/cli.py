"""Command-line front end: enroll, verify, identify, evaluate, synth.

Results go to stdout, diagnostics to stderr. Exit codes: 0 success (or
MATCH for ``verify``), 1 NO-MATCH, 2 usage or input error.

Extraction settings come from, in increasing priority: defaults, the
``--config`` JSON file, ``FPDWT_*`` environment variables (e.g.
``FPDWT_CANNY_SIGMA=1.5``, ``FPDWT_WAVELET=db4``) and ``--set key=value``.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import evaluation, ingest, synth
from .errors import FingerprintError
from .matcher import identify, verify
from .pipeline import ExtractionConfig, TemplateStore, enroll_database, make_template

log = logging.getLogger("fpdwt")

ENV_PREFIX = "FPDWT_"
CONFIG_KEYS = (
    "wavelet", "boundary", "swap_axes", "normalize",
    "glcm.levels", "glcm.offset", "glcm.symmetric",
    "canny.sigma", "canny.t_low", "canny.t_high",
)


class UsageError(Exception):
    pass


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        else:
            out[key] = v
    return out


def load_config(path=None, overrides=(), environ=None) -> ExtractionConfig:
    environ = os.environ if environ is None else environ
    flat = {}
    if path is not None:
        p = Path(path)
        if not p.is_file():
            raise UsageError(f"config file not found: {p}")
        try:
            flat.update(_flatten(json.loads(p.read_text())))
        except json.JSONDecodeError as e:
            raise UsageError(f"{p}: invalid JSON ({e})") from e
    flat.pop("schema_version", None)
    for key in CONFIG_KEYS:
        env = ENV_PREFIX + key.replace(".", "_").upper()
        if env in environ:
            flat[key] = _parse_value(environ[env])
    for item in overrides:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--set expects key=value, got {item!r}")
        flat[key.strip()] = _parse_value(value.strip())
    try:
        return ExtractionConfig().updated(flat)
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"bad configuration: {e}") from e


def parse_thresholds(spec: str) -> list:
    """'lo:hi:step' with hi inclusive, or a comma-separated list."""
    try:
        if ":" in spec:
            lo, hi, step = (float(x) for x in spec.split(":"))
            if step <= 0 or hi < lo:
                raise ValueError
            n = int(math.floor((hi - lo) / step + 1e-9)) + 1
            return [round(lo + k * step, 10) for k in range(n)]
        return [float(x) for x in spec.split(",")]
    except ValueError:
        raise UsageError(f"bad thresholds spec {spec!r}; use lo:hi:step or a,b,c") from None


def auto_thresholds(genuine, impostor, n: int = 101) -> list:
    top = float(max(np.max(genuine, initial=0.0), np.max(impostor, initial=0.0)))
    top = top * 1.01 if top > 0 else 1.0
    return [float(v) for v in np.linspace(0.0, top, n)]


def _probe(image_path, store):
    img = ingest.load_image(image_path)
    return make_template(img, 0, 0, store.config, image_path)


def _load_store(path):
    if not Path(path).is_dir():
        raise UsageError(f"store directory not found: {path}")
    return TemplateStore.load(path)


def cmd_enroll(args) -> int:
    cfg = load_config(args.config, args.set)
    root = Path(args.dataset_dir)
    if not root.is_dir():
        raise UsageError(f"dataset directory not found: {root}")
    split = ingest.scan_dataset(root, naming=args.naming,
                                enroll_samples=args.enroll_samples or 10**9)
    store = enroll_database(split, cfg, workers=args.workers)
    store.save(args.store)
    print(f"enrolled {len(store)} templates, {len(store.failures)} failures")
    return 0


def cmd_verify(args) -> int:
    store = _load_store(args.store)
    d = verify(_probe(args.image, store), args.finger, store, args.threshold, args.aggregation)
    print(f"distance={d.distance!r} {'MATCH' if d.matched else 'NO-MATCH'} "
          f"finger={args.finger} best_sample={d.best_sample_id}")
    return 0 if d.matched else 1


def cmd_identify(args) -> int:
    store = _load_store(args.store)
    ranked = identify(_probe(args.image, store), store, args.threshold, args.aggregation)
    for rank, c in enumerate(ranked[:args.top], 1):
        print(f"{rank}\t{c.finger_id}\t{c.distance!r}\t{'*' if c.within_threshold else ''}")
    return 0


def _probes(samples, cfg):
    out = []
    for s in samples:
        out.append(make_template(ingest.load_image(s.path), s.finger_id, s.sample_id, cfg, s.path))
    return out


def cmd_evaluate(args) -> int:
    cfg = load_config(args.config, args.set)
    for d in (args.dataset_dir, args.impostor_dir):
        if not Path(d).is_dir():
            raise UsageError(f"dataset directory not found: {d}")
    split = ingest.scan_dataset(args.dataset_dir, args.impostor_dir, naming=args.naming)
    store = enroll_database(split, cfg, workers=args.workers)
    if store.failures:
        log.warning("%d enrollment failures", len(store.failures))
    genuine = _probes(split.genuine_test, cfg)
    impostor = _probes(split.impostor_test, cfg)
    g = evaluation.genuine_distances(store, genuine, args.aggregation)
    i = evaluation.impostor_distances(store, impostor, args.aggregation, args.claim_mode, args.seed)
    thresholds = (auto_thresholds(g, i) if args.thresholds == "auto"
                  else parse_thresholds(args.thresholds))
    report = evaluation.sweep(store, genuine, impostor, thresholds, args.aggregation,
                              args.claim_mode, args.seed)
    report.metadata["enrollment_failures"] = len(store.failures)

    out = Path(args.out)
    if out.suffix.lower() in (".csv", ".json"):
        out = out.with_suffix("")
    out.parent.mkdir(parents=True, exist_ok=True)
    out.with_suffix(".csv").write_text(report.to_csv())
    out.with_suffix(".json").write_text(report.to_json())

    print(evaluation.format_table(report))
    if report.eer_defined:
        print(f"EER={report.eer_pct:.4g}% @ t={report.eer_threshold:.6g}")
    else:
        print("EER=undefined (no FAR/FRR crossing in the sweep)")
    return 0


def cmd_synth(args) -> int:
    params = synth.SynthParams(width=args.width, height=args.height,
                               ridge_frequency=args.frequency, noise_sigma=args.noise,
                               max_shift=args.max_shift, seed=args.seed)
    paths = synth.generate(args.out, args.fingers, args.samples, params,
                           first_finger=args.first_finger, naming=args.naming)
    print(f"wrote {len(paths)} images to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fpdwt", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def extraction_opts(p):
        p.add_argument("--config", help="JSON extraction config")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override one config key, e.g. canny.sigma=1.5")
        p.add_argument("--naming", default="{finger}_{sample}")
        p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("enroll", help="extract and store templates for a dataset")
    p.add_argument("dataset_dir")
    p.add_argument("--store", required=True)
    p.add_argument("--enroll-samples", type=int, default=None,
                   help="only enroll sample ids up to this value (default: all)")
    extraction_opts(p)
    p.set_defaults(func=cmd_enroll)

    for name, helptext in (("verify", "1:1 check against a claimed finger"),
                           ("identify", "rank all enrolled fingers")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("image")
        p.add_argument("--store", required=True)
        p.add_argument("--threshold", type=float, required=True)
        p.add_argument("--aggregation", choices=("min", "mean", "median"), default="min")
        if name == "verify":
            p.add_argument("--finger", type=int, required=True)
            p.set_defaults(func=cmd_verify)
        else:
            p.add_argument("--top", type=int, default=10)
            p.set_defaults(func=cmd_identify)

    p = sub.add_parser("evaluate", help="run the enroll / genuine / impostor threshold sweep")
    p.add_argument("dataset_dir")
    p.add_argument("impostor_dir")
    p.add_argument("--thresholds", default="auto", help="lo:hi:step, a,b,c or auto")
    p.add_argument("--out", required=True, help="report path prefix; writes .csv and .json")
    p.add_argument("--aggregation", choices=("min", "mean", "median"), default="min")
    p.add_argument("--claim-mode", choices=("round_robin", "random"), default="round_robin")
    p.add_argument("--seed", type=int, default=0)
    extraction_opts(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("synth", help="generate a synthetic ridge-pattern dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--fingers", type=int, default=10)
    p.add_argument("--samples", type=int, default=8)
    p.add_argument("--first-finger", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--width", type=int, default=192)
    p.add_argument("--height", type=int, default=192)
    p.add_argument("--frequency", type=float, default=None)
    p.add_argument("--noise", type=float, default=12.0)
    p.add_argument("--max-shift", type=int, default=3)
    p.add_argument("--naming", default="{finger}_{sample}")
    p.set_defaults(func=cmd_synth)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (UsageError, FingerprintError, FileNotFoundError, OSError, ValueError) as e:
        print(f"fpdwt {args.command}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
