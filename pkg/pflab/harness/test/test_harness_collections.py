from typing import Final, List, Tuple

from pflab.harness._collections import group_by_key, median_by_key


def test_harness_group_by_key():
    for items, expected_groups in TEST_GROUP_BY_KEY:
        assert group_by_key(items) == expected_groups


def test_harness_median_by_key():
    for items, expected in TEST_MEDIAN_BY_KEY:
        assert median_by_key(items) == expected


TEST_GROUP_BY_KEY: Final[List[Tuple[List, List]]] = [
    ([], []),
    (
        [
            (8, 0.3),
            (2, 0.5),
            (8, 0.1),
            (4, 0.2),
        ],
        [
            (8, [0.3, 0.1]),
            (2, [0.5]),
            (4, [0.2]),
        ],
    ),
]

TEST_MEDIAN_BY_KEY: Final[List[Tuple[List, List]]] = [
    ([], []),
    (
        [
            (4, 0.25),
            (1, 3.0),
            (4, 0.75),
            (1, 1.0),
            (1, 2.0),
        ],
        [
            (1, 2.0),
            (4, 0.5),
        ],
    ),
]
