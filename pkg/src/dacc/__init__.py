"""Numerical verification of rank and leading-coefficient predictions for
elliptic curves over Q."""

from .curve import Point, WeierstrassModel, compute_model, minimal_model
from .fixtures import bundled, parse_fixtures
from .pipeline import Config, batch_verify, verify_curve
from .report import emit_report

__all__ = [
    "Config",
    "Point",
    "WeierstrassModel",
    "batch_verify",
    "bundled",
    "compute_model",
    "emit_report",
    "minimal_model",
    "parse_fixtures",
    "verify_curve",
]
