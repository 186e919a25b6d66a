"""Entanglement concentration by phonon counting.

Thin wrapper over the C++ core. Invalid parameters raise ValueError,
solver problems raise NumericalFailure (an ArithmeticError).
"""

import json

from . import _core
from ._core import (
    SCHEMA_VERSION,
    NumericalFailure,
    first_order_entanglement,
    imperfect_entanglement_numeric,
    imperfect_outcome_prob,
    occupations,
    off_entanglement,
    omega_factor,
    on_entanglement,
    pair_distribution,
    perfect_entanglement,
    perfect_entanglement_gaussian,
    phonon_prob,
    pre_measurement_entanglement,
    second_order_entanglement,
    traced_state_entanglement,
)

__all__ = [
    "SCHEMA_VERSION",
    "NumericalFailure",
    "first_order_entanglement",
    "imperfect_entanglement_numeric",
    "imperfect_outcome_prob",
    "manifest",
    "occupations",
    "off_entanglement",
    "omega_factor",
    "on_entanglement",
    "pair_distribution",
    "perfect_entanglement",
    "perfect_entanglement_gaussian",
    "phonon_prob",
    "point",
    "pre_measurement_entanglement",
    "preset",
    "second_order_entanglement",
    "sweep",
    "to_csv",
    "traced_state_entanglement",
]


def _methods(methods):
    return methods if isinstance(methods, str) else ",".join(methods)


def point(c1, c2, q=None, mu=(), methods=("exact",), eps_trunc=1e-12, eps_eig=1e-12, omega="direct"):
    """Evaluate one parameter point; returns the JSON document as a dict."""
    text = _core.run_point(c1, c2, q, list(mu), _methods(methods), eps_trunc, eps_eig, omega)
    return json.loads(text)


def sweep(c1, c2, axis, start, stop, step=1.0, q=None, mu=(), methods=("exact",),
          eps_trunc=1e-12, eps_eig=1e-12, omega="direct"):
    """Sweep one axis; returns (columns, rows)."""
    return _core.run_sweep(c1, c2, q, list(mu), _methods(methods), axis, start, stop, step,
                           eps_trunc, eps_eig, omega)


def preset(name, eps_trunc=1e-12):
    """Dataset for a figure preset ("fig2" .. "fig5"); returns (columns, rows)."""
    return _core.run_preset(name, eps_trunc)


def to_csv(columns, rows):
    return _core.to_csv(columns, rows)


def manifest():
    return json.loads(_core.manifest())
