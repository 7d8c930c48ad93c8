"""Information-theoretic agency measures over tabular MDPs."""

import json

from ._core import *  # noqa: F401,F403
from ._core import __version__, run_report_json


def run(command, settings=None, seed=0, inputs=None):
    """Run one CLI command in-process and return its report as a dict."""
    config = {
        "command": command,
        "seed": seed,
        "inputs": dict(inputs or {}),
        "set": dict(settings or {}),
    }
    return json.loads(run_report_json(json.dumps(config)))
