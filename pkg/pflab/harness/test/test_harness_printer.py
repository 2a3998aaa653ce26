from dataclasses import dataclass, field
from typing import Final, List

from pflab.harness._printer import (
    Outcome,
    Printer,
    PrinterOptions,
    Spacing,
)


def test_harness_printer():
    for case in TEST_CASES:
        p = Printer(options=case.options)
        assert p.to_string(case.outcomes) == case.output


@dataclass
class _TestCase:
    outcomes: List[Outcome]
    output: str
    options: PrinterOptions = field(default_factory=PrinterOptions)


def _output(items: List[str]) -> str:
    return '\n'.join(items) + '\n'


TEST_CASES: Final[List[_TestCase]] = [
    _TestCase(outcomes=[], output=''),
    _TestCase(
        outcomes=[
            Outcome(1, 'equality case', 'kink-max', True),
            Outcome(1, 'equality case', 'kink-order', True),
            Outcome(2, 'forward invariance', 'estimate-identity', True),
            Outcome(2, 'forward invariance', 'estimate-ramp', False,
                    'sup P 0.3'),
        ],
        output=_output([
            'o  1 equality case         kink-{max,order}',
            'x  2 forward invariance    estimate-{identity,ramp}'
            ' [estimate-ramp: sup P 0.3]',
        ]),
    ),
    _TestCase(
        outcomes=[
            Outcome(9, 'rigidity', 'order-plane', True),
            Outcome(9, 'rigidity', 'max-plane', True),
        ],
        output=_output([
            'o  9 rigidity    {order,max}-plane',
        ]),
    ),
    _TestCase(
        outcomes=[
            Outcome(7, 'bochner', 'match', True),
            Outcome(10, 'heat mode', '', True),
        ],
        output=_output([
            'o  7 bochner  match',
            'o 10 heat mode',
        ]),
        options=PrinterOptions(spacing=Spacing.FIXED, spaces=2),
    ),
    _TestCase(
        outcomes=[
            Outcome(3, 'minimal', 'xi-consistency', False, 'gap 0.5'),
        ],
        output=_output([
            'x  3 minimal        xi-consistency',
        ]),
        options=PrinterOptions(spacing=Spacing.JUSTIFIED, spaces=20,
                               show_details=False),
    ),
    _TestCase(
        outcomes=[
            Outcome(5, 'ancient', 'trend-window', True),
            Outcome(5, 'ancient', 'trend-seeds', True),
        ],
        output=_output([
            'o  5 ancient    trend-window,trend-seeds',
        ]),
        options=PrinterOptions(group_checks_by_prefix=False),
    ),
]
