"""Panel trend grouping, Pearson screening and two-sample Hotelling T-squared tests."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import HeatpanelError, __version__
from ._core import run_pipeline as _run_pipeline


def run_pipeline(panel_path, target, factors, **kwargs):
    """Run the full pipeline and return the report as a dict."""
    return _json.loads(_run_pipeline(str(panel_path), target, list(factors), **kwargs))


