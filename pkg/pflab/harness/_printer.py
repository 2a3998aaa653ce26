"""Text table of acceptance outcomes, one row per criterion."""
from dataclasses import dataclass
from enum import Enum, auto
from typing import List, Sequence

from ._collections import group_by_key
from ._string import longest_common_prefix, longest_common_suffix


class Spacing(Enum):
    """Where the check names of a row start."""

    FIXED = auto()
    """A constant gap after the criterion title."""

    JUSTIFIED = auto()
    """A given column, or one space past the title if it is longer."""

    AUTO_JUSTIFIED = auto()
    """A common column past the longest title of the table."""


class Mark(Enum):
    PASS = 'o'
    FAIL = 'x'


@dataclass(frozen=True)
class Outcome:
    """Result of one check of an acceptance criterion."""

    criterion: int
    title: str
    check: str
    passed: bool
    detail: str = ''


@dataclass(frozen=True)
class PrinterOptions:

    spacing: Spacing = Spacing.AUTO_JUSTIFIED

    spaces: int = 4
    """Gap for FIXED, target column for JUSTIFIED, and the gap after the
    longest title for AUTO_JUSTIFIED."""

    group_checks_by_prefix: bool = True
    """`kink-max,kink-order` prints as `kink-{max,order}`."""

    group_checks_by_suffix: bool = True
    """`order-plane,max-plane` prints as `{order,max}-plane`."""

    min_group_size: int = 2
    """Rows with fewer checks are never folded."""

    prefix_min_length: int = 4

    suffix_min_length: int = 4

    show_details: bool = True
    """Append `[check: detail; ...]` for failed checks."""


class Printer:

    def __init__(self, options: PrinterOptions = PrinterOptions()) -> None:
        self.options = options

    def to_string(self, outcomes: Sequence[Outcome]) -> str:
        """Return the table, newline terminated, or '' without outcomes.

        Checks sharing a criterion and title are folded into one row, in
        the order the criteria first appear.
        """
        if not outcomes:
            return ''
        rows = [(_head(criterion, title, checks), checks)
                for (criterion, title), checks in group_by_key(
                    ((o.criterion, o.title), o) for o in outcomes)]
        widest = max(len(head) for head, _ in rows)
        return ''.join(self._row(head, checks, widest) + '\n'
                       for head, checks in rows)

    def _row(self, head: str, checks: List[Outcome], widest: int) -> str:
        parts = [head]
        names = [check.check for check in checks]
        if any(names):
            parts.append(' ' * _gap(len(head), widest, self.options))
            parts.append(_fold(names, self.options))
        notes = [f'{c.check}: {c.detail}' for c in checks
                 if not c.passed and c.detail]
        if notes and self.options.show_details:
            parts.append(' [' + '; '.join(notes) + ']')
        return ''.join(parts)


def _head(criterion: int, title: str, checks: List[Outcome]) -> str:
    mark = Mark.PASS if all(c.passed for c in checks) else Mark.FAIL
    return f'{mark.value} {criterion:>2} {title}'


def _gap(used: int, widest: int, options: PrinterOptions) -> int:
    if options.spacing == Spacing.FIXED:
        return options.spaces
    if options.spacing == Spacing.JUSTIFIED:
        return max(1, options.spaces - used)
    if options.spacing == Spacing.AUTO_JUSTIFIED:
        return max(0, widest + options.spaces - used)
    raise ValueError(f'unknown spacing {options.spacing!r}')


def _fold(names: List[str], options: PrinterOptions) -> str:
    foldable = len(names) >= options.min_group_size
    prefix = suffix = ''
    if foldable and options.group_checks_by_prefix:
        prefix = _affix(longest_common_prefix(names),
                        options.prefix_min_length)
        names = [name[len(prefix):] for name in names]
    if foldable and options.group_checks_by_suffix:
        suffix = _affix(longest_common_suffix(names),
                        options.suffix_min_length)
        names = [name[:len(name) - len(suffix)] for name in names]
    body = ','.join(name or '?' for name in names)
    if prefix or suffix:
        return f'{prefix}{{{body}}}{suffix}'
    return body


def _affix(common: str, min_length: int) -> str:
    return common if len(common) >= min_length else ''
