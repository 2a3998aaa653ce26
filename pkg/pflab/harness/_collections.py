"""Grouping of tabulated results."""
from collections import defaultdict
from typing import DefaultDict, Hashable, Iterable, List, Tuple, TypeVar

import numpy as np


K = TypeVar('K', bound=Hashable)
V = TypeVar('V')


def group_by_key(pairs: Iterable[Tuple[K, V]]) -> List[Tuple[K, List[V]]]:
    """Collect the values of (key, value) pairs under their key.

    Keys keep the order in which they first appear, values the order in
    which they arrive.
    """
    groups: DefaultDict[K, List[V]] = defaultdict(list)
    for key, value in pairs:
        groups[key].append(value)
    return list(groups.items())


def median_by_key(pairs: Iterable[Tuple[K, float]]) -> List[Tuple[K, float]]:
    """Return the median of the values sharing a key, keys sorted."""
    return sorted((key, float(np.median(values)))
                  for key, values in group_by_key(pairs))
