"""Experiment specs: parsing, printing and running."""
from .printer import format_spec
from .runner import TaskResult, run_spec, run_source
from .syntax import Diagnostic, ExperimentSpec, Span, SpecError, diagnose, parse_spec

__all__ = [
    "Diagnostic", "ExperimentSpec", "Span", "SpecError", "TaskResult", "diagnose", "format_spec",
    "parse_spec", "run_source", "run_spec",
]
