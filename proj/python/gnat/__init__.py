"""Python bindings for the gnat library.

Metrics, frame models and parameters are passed as JSON documents (dicts or JSON text), in
the same format the ``gnat`` command-line tool reads.
"""

import json as _json

from . import _core
from ._core import PreconditionError, __version__

__all__ = [
    "PreconditionError",
    "__version__",
    "bitension_parallel",
    "classify_unit",
    "cli",
    "connection_coeffs",
    "fd_compare",
]


def _text(doc):
    return doc if isinstance(doc, str) else _json.dumps(doc)


def connection_coeffs(metric, rho):
    """The 29 connection scalars A1..F3 at t = rho, keyed by name."""
    return _core.connection_coeffs(_text(metric), float(rho))


def bitension_parallel(metric, rho, dim=2):
    """Tension and bitension factors of a parallel field V with |V|^2 = rho."""
    return _core.bitension_parallel(_text(metric), float(rho), int(dim))


def fd_compare(metric, rho, dim=2):
    """Closed-form bitension against the finite-difference oracle on the flat chart."""
    return _core.fd_compare(_text(metric), float(rho), int(dim))


def classify_unit(model, field, params=None):
    """Classification of a unit field (e.g. "e3" or "0.6,0.8,0") on a frame model."""
    return _core.classify_unit(_text(model), field, _text(params or {}))


def cli(*args):
    """Run the command-line tool in-process.

    Returns (exit_code, parsed JSON output or None, stderr text).
    """
    code, out, err = _core.run([str(a) for a in args])
    parsed = _json.loads(out) if out.strip().startswith("{") else None
    return code, parsed, err
