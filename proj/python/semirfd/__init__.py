"""Finite-dimensional approximation toolkit for semigroup operator algebras."""

import json as _json

from ._core import (
    DepthError,
    Error,
    InvalidArgument,
    InvariantFailure,
    NonConvergence,
    ParseError,
    ResourceLimit,
    Table,
    enumerate,
    fell_check,
    kernel_set,
    monomial_norm,
    multiplier_norm_lower,
    pi_F,
    qf_spanning_set,
)
from ._core import execute as _execute


def run(config, max_words=1_000_000, norm_tol=1e-9):
    """Run a batch config (dict or JSON text); returns (exit_status, report_dict)."""
    text = config if isinstance(config, str) else _json.dumps(config)
    status, report = _execute(text, max_words, norm_tol)
    return status, _json.loads(report)


__all__ = [
    "DepthError",
    "Error",
    "InvalidArgument",
    "InvariantFailure",
    "NonConvergence",
    "ParseError",
    "ResourceLimit",
    "Table",
    "enumerate",
    "fell_check",
    "kernel_set",
    "monomial_norm",
    "multiplier_norm_lower",
    "pi_F",
    "qf_spanning_set",
    "run",
]
