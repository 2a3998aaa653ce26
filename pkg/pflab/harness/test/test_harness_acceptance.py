import pytest

from pflab.harness._acceptance import (
    CRITERIA,
    Level,
    acceptance_suite,
)
from pflab.solvers import QuasilinearProfile, make_minimal_surface_profile


class _NegatedXi(QuasilinearProfile):
    # Sign error in xi, the fault criterion 3 must catch.

    def xi(self, s):
        return -super().xi(s)


def _negated_profile() -> _NegatedXi:
    base = make_minimal_surface_profile()
    return _NegatedXi('negated_xi', base.phi, base.phi1, base.phi2)


def test_harness_acceptance_quick_subset():
    summary = acceptance_suite(Level.QUICK, only=[10, 1])
    assert summary.level == Level.QUICK
    assert summary.passed
    assert summary.failed_criteria == ()
    assert [o.criterion for o in summary.outcomes] == [1, 10]
    assert summary.outcomes[0].check == 'kink-max'
    assert summary.outcomes[0].title == CRITERIA[1]
    assert summary.outcomes[1].check == 'decay'


def test_harness_acceptance_catches_negated_xi():
    summary = acceptance_suite(Level.QUICK, only=[3],
                               profile=_negated_profile())
    assert not summary.passed
    assert summary.failed_criteria == (3,)
    failed = {o.check for o in summary.outcomes if not o.passed}
    assert 'xi-consistency' in failed or 'run' in failed


def test_harness_acceptance_unknown_criterion():
    with pytest.raises(ValueError, match='unknown criteria'):
        acceptance_suite(Level.QUICK, only=[0, 11])
