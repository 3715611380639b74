"""Intertwining and interweaving relations for Markov semigroups."""

import json

from ._core import *  # noqa: F401,F403
from ._core import run as _run


def run_report(config: str) -> dict:
    """Run an experiment from configuration text and return the parsed report."""
    return json.loads(_run(config))


__version__ = "0.1.0"
