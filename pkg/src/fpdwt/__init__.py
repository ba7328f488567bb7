"""Fingerprint verification from multi-level DWT sub-band features.

Three-level Daubechies decomposition, directional (coherence and
orientation) texture, center-area texture and Canny edge statistics per
level, Euclidean matching, and FAR/FRR/TSR/EER threshold sweeps.
"""
from .dwt import SubbandPyramid, SubbandSet, decompose3, dwt2_single, idwt2_single
from .edgefeat import CannyConfig, canny
from .evaluation import EvalReport, EvalRow, compare_report, sweep
from .ingest import GrayImage, load_image, scan_dataset, write_pgm
from .matcher import euclidean, identify, verify
from .pipeline import (
    ExtractionConfig,
    Template,
    TemplateStore,
    enroll_database,
    extract,
    load_template,
    make_template,
    save_template,
)
from .texture import GlcmConfig

__version__ = "0.1.0"
