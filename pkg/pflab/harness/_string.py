"""Common affixes of check names."""
from itertools import takewhile
from typing import Sequence


def longest_common_prefix(names: Sequence[str]) -> str:
    if not names:
        return ''
    agreeing = takewhile(lambda column: len(set(column)) == 1, zip(*names))
    return ''.join(column[0] for column in agreeing)


def longest_common_suffix(names: Sequence[str]) -> str:
    reversed_names = [name[::-1] for name in names]
    return longest_common_prefix(reversed_names)[::-1]
