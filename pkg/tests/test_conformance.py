import math

import pytest

from swanson_csm import ModelParams
from swanson_csm.conformance import run_conformance
from swanson_csm.errors import RegionError


@pytest.fixture(scope="module")
def report():
    return run_conformance(ModelParams(), quick=True)


def test_quick_suite_passes(report):
    assert report["suite"] == "inverted_oscillator"
    failed = [c["name"] for c in report["checks"] if not c["passed"]]
    assert failed == []
    assert report["passed"]


def test_report_records_verdicts(report):
    assert report["verdicts"]["evolution_phase"]["verdict"] == "oracle"
    assert report["verdicts"]["survival_normalization"]["consistent"]
    names = {c["name"] for c in report["checks"]}
    assert {"biorthonormality", "wigner_oracle", "continuity", "rhs_equivalence"} <= names


def test_ep_suite():
    rep = run_conformance(ModelParams(1.0, -0.5, -0.5))
    assert rep["suite"] == "exceptional_point" and rep["passed"]


def test_out_of_scope():
    with pytest.raises(RegionError):
        run_conformance(ModelParams(1.0, 1.0, 1.0))
