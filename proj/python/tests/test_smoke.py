# Copyright (c) extbell contributors.
# SPDX-License-Identifier: Apache-2.0
import os
from fractions import Fraction
from pathlib import Path

import pytest

import extbell

DATA = Path(os.environ.get("EXTBELL_DATA", Path(__file__).resolve().parents[2] / "data"))


@pytest.fixture(scope="module")
def chain():
    return extbell.Scenario.from_file(str(DATA / "scenarios" / "chain.scn"))


@pytest.fixture(scope="module")
def mixture(chain):
    return extbell.parse_table(chain, (DATA / "behaviours" / "chain_disturbing.tbl").read_text())


def test_scenario_shape(chain):
    assert chain.name == "chain"
    assert chain.parties == ["A", "B"]
    assert chain.dimension == len(chain.coordinate_names()) == 32
    assert extbell.Scenario.from_text(chain.to_text()) == chain
    assert len(chain.hash) == 16


def test_table_round_trip(chain, mixture):
    assert all(isinstance(x, Fraction) for x in mixture)
    assert sum(mixture) == 4
    text = extbell.table_text(chain, mixture)
    assert extbell.parse_table(chain, text) == mixture


def test_classify_mixture(chain, mixture):
    verdicts, report = extbell.classify(chain, mixture, "NSND,L_ND,L_nd,L_nc")
    assert verdicts == {"NSND": True, "L_ND": True, "L_nd": False, "L_nc": False}
    assert "L_nd" in report


def test_vertex_counts(chain):
    assert len(extbell.joint_vertices(chain, "nd", "nd")) == 32
    assert len(extbell.joint_vertices(chain, "g", "g")) == 64
    assert len(extbell.party_vertices(chain, "B", "nc")) == 8


def test_facet_inequality(chain, mixture):
    text = (DATA / "inequalities" / "chain_facet.ineq").read_text()
    name, value, bound = extbell.evaluate_inequality(chain, text, mixture)
    assert (name, value, bound) == ("CHAIN_FACET", Fraction(3, 2), Fraction(1))
    facets = extbell.set_facets(chain, "L_nd")
    assert len(facets["inequalities"]) == 48
    best = max(sum(c * x for c, x in zip(coeffs, v)) - rhs
               for coeffs, rhs in facets["inequalities"] for v in extbell.joint_vertices(chain, "nd", "nd"))
    assert best == 0


def test_local_joint(chain, mixture):
    assert extbell.local_joint(chain, mixture, "nc") is None
    assert "scenario chain" in extbell.local_joint(chain, mixture, "g")


def test_quantum(chain):
    model = (DATA / "models" / "chain_facet_2x4.model").read_text()
    p = extbell.quantum_behaviour(chain, model)
    assert len(p) == 32 and abs(sum(p) - 4) < 1e-9
    assert extbell.rationalize(chain, [1 / 8] * 32) == [Fraction(1, 8)] * 32


def test_errors(chain):
    with pytest.raises(extbell.ExtbellError, match="input"):
        extbell.classify(chain, [0] * 32, "Q")
    with pytest.raises(ValueError):
        extbell.parse_table(chain, "scenario chain\ncolumns 0\n")
