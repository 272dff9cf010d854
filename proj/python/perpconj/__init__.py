"""Fixed points, perpetual points and conjugacy checks for vector fields.

The heavy lifting happens in the compiled ``_core`` module; the helpers here
accept dicts or file paths and decode JSON reports.
"""

import json
import os

from . import _core
from ._core import (
    DomainError,
    Error,
    InverseMismatch,
    NoConvergence,
    SyntaxError,
    UnknownIdentifier,
    ValidationError,
    eigenvalues,
    parse_region,
)

__version__ = _core.__version__

__all__ = [
    "analyze",
    "transform",
    "verify",
    "portrait",
    "eigenvalues",
    "parse_region",
    "Error",
    "ValidationError",
    "SyntaxError",
    "UnknownIdentifier",
    "DomainError",
    "InverseMismatch",
    "NoConvergence",
]


def _text(obj):
    # dict -> JSON text; existing path -> file contents; str -> as is
    if isinstance(obj, dict):
        return json.dumps(obj)
    if isinstance(obj, os.PathLike) or (isinstance(obj, str) and not obj.lstrip().startswith("{")):
        with open(obj, encoding="utf-8") as fh:
            return fh.read()
    return obj


def _region(region):
    if region is None or isinstance(region, str):
        return region
    return ",".join(f"{lo!r}:{hi!r}" for lo, hi in region)


def analyze(system, region=None, **kw):
    """Fixed and perpetual points of `system` as a report dict."""
    return json.loads(_core.analyze(_text(system), region=_region(region), **kw))


def transform(system, map, region=None, **kw):
    """Returns (report dict, transformed system dict)."""
    report, system_file = _core.transform(_text(system), _text(map), region=_region(region), **kw)
    return json.loads(report), json.loads(system_file)


def verify(system, map, against=None, region=None, theorems="flow,t1,t2,t3,r1", **kw):
    """Returns (report dict, passed)."""
    if not isinstance(theorems, str):
        theorems = ",".join(theorems)
    report, passed = _core.verify(
        _text(system),
        _text(map),
        against=None if against is None else _text(against),
        region=_region(region),
        theorems=theorems,
        **kw,
    )
    return json.loads(report), passed


def portrait(system, region=None, **kw):
    """Returns (grid CSV text, list of trajectory CSV texts)."""
    return _core.portrait(_text(system), region=_region(region), **kw)
