"""Fermionic operator representations of unitary groups.

Thin wrapper over the compiled ``_core`` module. Operators are sparse on the
C++ side; ``FockOperator.to_dense()`` returns a NumPy array.
"""

import json

from ._core import *  # noqa: F401,F403
from ._core import run_suite_json


def run_suite(n_max, tol=1e-10, threads=0):
    """Run the verification catalogue up to ``n_max`` modes; returns a dict."""
    return json.loads(run_suite_json(n_max, tol, threads))
