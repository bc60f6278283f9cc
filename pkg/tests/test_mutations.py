"""Each single-table mutation is caught by its named check, with a concrete witness."""

import pytest

from dqg.checks import run_suite
from mutations import MUTATIONS


@pytest.mark.parametrize("mutation", MUTATIONS, ids=[m.detector for m in MUTATIONS])
def test_mutation_detected(mutation):
    results = run_suite(mutation.build(), mutation.suite)
    hit = next(r for r in results if r.check_id == mutation.detector)
    assert hit.status == "fail"
    assert hit.witness is not None


def test_twelve_distinct_mutations():
    assert len(MUTATIONS) == 12
    assert len({m.name for m in MUTATIONS}) == 12


def test_antipode_mutation_names_diagram_check():
    from mutations import antipode_identity
    results = run_suite(antipode_identity(), "axioms")
    failing = [r.check_id for r in results if r.status == "fail"]
    assert "antipode-diagram-1" in failing
