# Copyright (c) extbell contributors.
# SPDX-License-Identifier: Apache-2.0
"""Exact local, non-disturbing and contextual sets of sequential Bell scenarios.

Probabilities are exact rationals. Functions taking a behaviour accept any
sequence of ``Fraction``, ``int`` or ``"p/q"`` strings in the scenario's
coordinate order and return ``Fraction`` values.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from . import _extbell
from ._extbell import ExtbellError, Scenario

__all__ = [
    "ExtbellError",
    "Scenario",
    "parse_table",
    "table_text",
    "classify",
    "joint_vertices",
    "party_vertices",
    "set_facets",
    "evaluate_inequality",
    "local_joint",
    "quantum_behaviour",
    "violation_search",
    "rationalize",
]


def _out(values: Iterable[str]) -> list[Fraction]:
    return [Fraction(v) for v in values]


def _in(values: Sequence) -> list[str]:
    return [str(Fraction(v)) for v in values]


def parse_table(scenario: Scenario, text: str) -> list[Fraction]:
    return _out(_extbell.parse_table(scenario, text))


def table_text(scenario: Scenario, values: Sequence) -> str:
    return _extbell.table_text(scenario, _in(values))


def classify(scenario: Scenario, values: Sequence, labels: str = "NS,ND,NSND,NC,L_nc,L_nd,L_G,L_ND") -> tuple[dict[str, bool], str]:
    """Membership of the behaviour in each comma-separated set label, plus the rendered report."""
    return _extbell.classify(scenario, _in(values), labels)


def joint_vertices(scenario: Scenario, class_a: str, class_b: str) -> list[list[Fraction]]:
    return [_out(v) for v in _extbell.joint_vertices(scenario, class_a, class_b)]


def party_vertices(scenario: Scenario, party: str, cls: str) -> list[list[Fraction]]:
    return [_out(v) for v in _extbell.party_vertices(scenario, party, cls)]


def set_facets(scenario: Scenario, label: str) -> dict:
    """Equalities and facets ``(coeffs, rhs)`` of a local set, meaning coeffs . p <= rhs."""
    h = _extbell.set_facets(scenario, label)
    rows = lambda key: [(_out(c), Fraction(r)) for c, r in h[key]]
    return {"dimension": h["dimension"], "equalities": rows("equalities"), "inequalities": rows("inequalities")}


def evaluate_inequality(scenario: Scenario, inequality: str, values: Sequence) -> tuple[str, Fraction, Fraction]:
    """Name, value and bound of an inequality given in the text format."""
    name, value, bound = _extbell.evaluate_inequality(scenario, inequality, _in(values))
    return name, Fraction(value), Fraction(bound)


def local_joint(scenario: Scenario, values: Sequence, cls: str = "nc") -> str | None:
    """Joint distribution text of a local model over ``cls`` responses, or None."""
    return _extbell.local_joint(scenario, _in(values), cls)


def quantum_behaviour(scenario: Scenario, model: str) -> list[float]:
    return _extbell.quantum_behaviour(scenario, model)


def violation_search(scenario: Scenario, inequality: str, seed: int = 1, restarts: int = 16,
                     dims: Sequence[int] = ()) -> tuple[float, str]:
    """Best value found by the seesaw and the model text reaching it."""
    return _extbell.violation_search(scenario, inequality, seed, restarts, list(dims))


def rationalize(scenario: Scenario, probabilities: Sequence[float]) -> list[Fraction] | None:
    r = _extbell.rationalize(scenario, list(probabilities))
    return None if r is None else _out(r)
