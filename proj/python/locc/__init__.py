"""LOCC copying and discrimination of orthogonal maximally entangled states."""

import json

from ._core import *  # noqa: F401,F403
from ._core import LoccError, commands, run as _run


def run(command, document, tolerance=None, seed=0, rounds=10000):
    """Run a CLI command on a set document (dict or JSON text).

    Returns (exit_code, report_dict, diagnostics).
    """
    text = document if isinstance(document, str) else json.dumps(document)
    code, report, diagnostics = _run(command, text, tolerance, seed, rounds)
    return code, json.loads(report), diagnostics


__all__ = [name for name in dir() if not name.startswith("_")]
