from dataclasses import dataclass, field
from typing import Dict, Final, List, Optional, Tuple

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pflab._errors import NonlinearityError, WorkingRangeError
from pflab.nonlinearity import (
    evaluate, make_double_well, make_named, make_polynomial, make_zero,
    validate)


def test_nonlinearity_evaluate():
    for case in EVALUATE_CASES:
        nl = make_double_well(case.beta)
        f, f1, f2 = evaluate(nl, case.u)
        assert f == pytest.approx(case.f, abs=1e-14)
        if case.f1 is not None:
            assert f1 == pytest.approx(case.f1, abs=1e-14)
        if case.f2 is not None:
            assert f2 == pytest.approx(case.f2, abs=1e-14)


@dataclass
class _EvaluateCase:
    u: float
    f: float
    f1: Optional[float] = None
    f2: Optional[float] = None
    beta: float = 0.0


EVALUATE_CASES: Final[List[_EvaluateCase]] = [
    _EvaluateCase(u=0.0, f=0.25, f1=0.0, f2=-1.0),
    _EvaluateCase(u=1.0, f=0.0, f1=0.0),
    _EvaluateCase(u=-1.0, f=0.0, f1=0.0),
    _EvaluateCase(u=0.5, f=0.140625),
    _EvaluateCase(u=-1.0, f=0.0, f1=0.0, beta=0.3),
    _EvaluateCase(u=1.0, f=0.4, f1=0.0, beta=0.3),
    _EvaluateCase(u=1.0, f=0.0, f1=0.0, beta=-0.6),
]


def test_nonlinearity_zero_sets():
    for beta, zeros in ZERO_SETS:
        nl = make_double_well(beta)
        assert nl.zero_set == zeros
        assert nl.wells == (-1.0, 1.0)
        f, f1, _ = evaluate(nl, np.array(zeros))
        np.testing.assert_allclose(f, 0.0, atol=1e-15)
        np.testing.assert_allclose(f1, 0.0, atol=1e-15)


ZERO_SETS: Final[List[Tuple[float, Tuple[float, ...]]]] = [
    (0.0, (-1.0, 1.0)),
    (0.3, (-1.0,)),
    (-0.3, (1.0,)),
]


def test_nonlinearity_imbalanced_minimum():
    nl = make_double_well(0.3)
    u = np.linspace(-1.5, 1.5, 300_001)
    assert float(np.min(nl.eval_f(u))) == pytest.approx(0.0, abs=1e-12)


@given(beta=st.floats(min_value=-0.95, max_value=0.95),
       u=st.floats(min_value=-1.9, max_value=1.9))
def test_nonlinearity_finite_differences(beta, u):
    nl = make_double_well(beta)
    delta = 1e-5
    f, f1, f2 = evaluate(nl, u)
    fd1 = (nl.eval_f(u + delta) - nl.eval_f(u - delta)) / (2 * delta)
    fd2 = (nl.eval_f1(u + delta) - nl.eval_f1(u - delta)) / (2 * delta)
    assert f >= 0.0
    assert abs(fd1 - f1) <= 1e-6 * (1 + abs(f1))
    assert abs(fd2 - f2) <= 1e-6 * (1 + abs(f2))
    assert abs(f2) <= nl.f2_bound


def test_nonlinearity_dense_nonnegative():
    for beta in [-0.9, -0.3, 0.0, 0.3, 0.9]:
        nl = make_double_well(beta)
        validate(nl)
        assert np.min(nl.eval_f(nl.sample())) >= -1e-12


def test_nonlinearity_errors():
    for beta in [1.0, -1.0, 1.5, float('nan')]:
        with pytest.raises(NonlinearityError):
            make_double_well(beta)

    nl = make_double_well()
    with pytest.raises(WorkingRangeError):
        evaluate(nl, 2.5)
    with pytest.raises(WorkingRangeError):
        evaluate(nl, np.array([0.0, -3.0]))

    with pytest.raises(NonlinearityError):
        make_polynomial([0.0, 0.0, -1.0])


def test_nonlinearity_zero():
    nl = make_zero()
    f, f1, f2 = evaluate(nl, np.linspace(-1, 1, 5))
    assert not np.any(f) and not np.any(f1) and not np.any(f2)
    assert nl.zero_set == () and nl.f2_bound == 0.0


def test_nonlinearity_polynomial():
    # (1 - u^2)^2 / 4 in ascending coefficients.
    nl = make_polynomial([0.25, 0.0, -0.5, 0.0, 0.25])
    reference = make_double_well()
    u = np.linspace(-2, 2, 101)
    np.testing.assert_allclose(nl.eval_f(u), reference.eval_f(u), atol=1e-14)
    np.testing.assert_allclose(nl.eval_f1(u), reference.eval_f1(u),
                               atol=1e-13)
    np.testing.assert_allclose(nl.zero_set, [-1.0, 1.0], atol=1e-12)
    np.testing.assert_allclose(nl.wells, [-1.0, 1.0], atol=1e-12)
    assert nl.f2_bound == pytest.approx(11.0)


def test_nonlinearity_named():
    for case in NAMED_CASES:
        if case.error:
            with pytest.raises(NonlinearityError):
                make_named(case.name, case.params, coefficients=case.coeffs)
            continue
        nl = make_named(case.name, case.params, coefficients=case.coeffs)
        assert nl.zero_set == pytest.approx(case.zeros)


@dataclass
class _NamedCase:
    name: str
    params: Dict[str, float] = field(default_factory=dict)
    coeffs: Optional[List[float]] = None
    zeros: Tuple[float, ...] = ()
    error: bool = False


NAMED_CASES: Final[List[_NamedCase]] = [
    _NamedCase('double_well', zeros=(-1.0, 1.0)),
    _NamedCase('double_well_imbalanced', {'beta': 0.3}, zeros=(-1.0,)),
    _NamedCase('zero'),
    _NamedCase('polynomial', coeffs=[0.25, 0.0, -0.5, 0.0, 0.25],
               zeros=(-1.0, 1.0)),
    _NamedCase('double_well', {'beta': 0.3}, error=True),
    _NamedCase('double_well_imbalanced', error=True),
    _NamedCase('polynomial', error=True),
    _NamedCase('quartic', error=True),
]
