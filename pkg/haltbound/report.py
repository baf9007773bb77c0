"""Aggregation of census records and comparison with the predicted bounds.

The empirical fraction ``F(m)`` of a size class is the share of the
programs that halted within their budget whose step count has fewer than
``m`` bits. It conditions on halting within the budget, while the predicted
probabilities condition on halting at all; programs that exhausted their
budget are unknowns and only appear in the summaries.

"""

from __future__ import annotations

import csv
import logging
import operator
import os
from fractions import Fraction
from typing import Any, Iterable, Mapping, NamedTuple, Sequence

import toolz
from public import public

from .census import CensusRecord
from .complexity import ComplexityModel
from .errors import DomainError
from .horizon import LowerBoundParams, lower_bound_closed
from .probability import below_prob
from .rational import format_significant
from .typehints import ExactRational

logger = logging.getLogger(__name__)

#: Columns of the comparison CSV.
COMPARISON_HEADER = (
    "k",
    "m",
    "halted_total",
    "halted_below_m",
    "empirical_fraction",
    "predicted_lower_bound",
    "flag",
)

#: Columns of the histogram CSV.
HISTOGRAM_HEADER = ("k", "bitlen_t", "count")

#: The largest threshold compared is this many bits above the complexity.
COMPARISON_SPAN = 64


@public
class SizeClassSummary:
    """Outcome counts and the step-count size histogram of one program size.

    Summaries are built one record at a time with :meth:`step` and two
    summaries of disjoint records of the same size merge with
    :meth:`combine`.

    Attributes
    ----------
    k
        The program size in bits.
    total
        The number of records.
    halted
        The number of programs that halted within their budget.
    exhausted
        The number of programs that ran out of budget.
    cycled
        The number of programs caught in an infinite loop.
    histogram
        Maps the bit length of the step count to the number of halting
        programs with that bit length.

    """

    __slots__ = "k", "total", "halted", "exhausted", "cycled", "histogram"

    def __init__(
        self,
        k: int,
        total: int = 0,
        halted: int = 0,
        exhausted: int = 0,
        cycled: int = 0,
        histogram: Mapping[int, int] | None = None,
    ) -> None:
        self.k = k
        self.total = total
        self.halted = halted
        self.exhausted = exhausted
        self.cycled = cycled
        self.histogram: dict[int, int] = dict(histogram or {})

    def step(self, record: CensusRecord) -> None:
        """Account for a single record."""
        if record.k != self.k:
            raise DomainError(f"record of size {record.k:d} in class {self.k:d}")
        self.total += 1
        if record.outcome == "halted":
            assert record.bitlen_t is not None
            self.halted += 1
            self.histogram[record.bitlen_t] = self.histogram.get(record.bitlen_t, 0) + 1
        elif record.outcome == "exhausted":
            self.exhausted += 1
        else:
            self.cycled += 1

    def combine(self, other: SizeClassSummary) -> SizeClassSummary:
        """Return the summary of the records of both summaries."""
        if other.k != self.k:
            raise DomainError(f"cannot combine size classes {self.k:d} and {other.k:d}")
        return SizeClassSummary(
            k=self.k,
            total=self.total + other.total,
            halted=self.halted + other.halted,
            exhausted=self.exhausted + other.exhausted,
            cycled=self.cycled + other.cycled,
            histogram=toolz.merge_with(sum, self.histogram, other.histogram),
        )

    def halted_below(self, m: int) -> int:
        """Return how many halting programs counted fewer than `m` bits of steps."""
        return sum(count for bitlen, count in self.histogram.items() if bitlen < m)

    def empirical_fraction(self, m: int) -> ExactRational | None:
        """Return ``F(m)``, or :data:`None` when no program halted."""
        if not self.halted:
            return None
        return Fraction(self.halted_below(m), self.halted)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, SizeClassSummary):
            return NotImplemented
        return all(
            getattr(self, name) == getattr(other, name) for name in self.__slots__
        )

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(k={self.k:d}, total={self.total:d}, "
            f"halted={self.halted:d}, exhausted={self.exhausted:d}, "
            f"cycled={self.cycled:d}, histogram={dict(sorted(self.histogram.items()))})"
        )


@public
def aggregate(records_path: str | os.PathLike[str]) -> list[SizeClassSummary]:
    """Summarize a census records file, one summary per size in ascending order.

    The file is streamed, so it may be larger than memory.

    Raises
    ------
    MalformedRecord
        If a line is not a census record; the error carries its line number.

    """
    summaries: dict[int, SizeClassSummary] = {}
    with open(records_path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            record = CensusRecord.from_json(line, lineno)
            summary = summaries.get(record.k)
            if summary is None:
                summary = summaries[record.k] = SizeClassSummary(record.k)
            summary.step(record)
    for k, summary in summaries.items():
        logger.debug("size class %d: %r", k, summary)
    return [summaries[k] for k in sorted(summaries)]


@public
class ComparisonRow(NamedTuple):
    """The empirical and predicted probability of a step count below `m` bits.

    Attributes
    ----------
    k
        The program size in bits.
    m
        The threshold in bits.
    halted_total
        The number of programs that halted within their budget.
    halted_below_m
        How many of those halted with a step count of fewer than `m` bits.
    empirical_fraction
        Their ratio, :data:`None` when no program halted.
    predicted_lo
        The lower endpoint of the predicted probability.
    predicted_hi
        The upper endpoint of the predicted probability.
    predicted_lower_bound
        The closed-form lower bound on the predicted probability.
    flag
        Whether the empirical fraction falls short of the lower bound.

    """

    k: int
    m: int
    halted_total: int
    halted_below_m: int
    empirical_fraction: ExactRational | None
    predicted_lo: ExactRational
    predicted_hi: ExactRational
    predicted_lower_bound: ExactRational
    flag: bool


@public
def compare(
    summaries: Sequence[SizeClassSummary],
    model: ComplexityModel,
    b: int,
    *,
    s: int = 0,
) -> list[ComparisonRow]:
    """Compare every size class with the predicted probabilities.

    Thresholds ``m`` range over ``[k + s + b, k + s + 64]`` where ``s`` is
    the overhead of the step counter, so predictions are made for programs
    of complexity ``k + s``.

    Raises
    ------
    DomainError
        If `summaries` is empty.

    """
    if not summaries:
        raise DomainError("nothing to compare: no size classes")
    (b,) = LowerBoundParams.of(b)
    rows = []
    for summary in sorted(summaries, key=operator.attrgetter("k")):
        complexity = summary.k + s
        for m in range(complexity + b, complexity + COMPARISON_SPAN + 1):
            predicted = below_prob(model, complexity, m)
            bound = lower_bound_closed(complexity, m, b)
            fraction = summary.empirical_fraction(m)
            rows.append(
                ComparisonRow(
                    k=summary.k,
                    m=m,
                    halted_total=summary.halted,
                    halted_below_m=summary.halted_below(m),
                    empirical_fraction=fraction,
                    predicted_lo=predicted.lo,
                    predicted_hi=predicted.hi,
                    predicted_lower_bound=bound,
                    flag=fraction is not None and fraction < bound,
                )
            )
        logger.debug("compared size class %d", summary.k)
    return rows


def _comparison_cells(row: ComparisonRow) -> list[str]:
    fraction = row.empirical_fraction
    return [
        str(row.k),
        str(row.m),
        str(row.halted_total),
        str(row.halted_below_m),
        "" if fraction is None else format_significant(fraction),
        format_significant(row.predicted_lower_bound),
        "1" if row.flag else "0",
    ]


def _write_csv(
    path: str | os.PathLike[str], header: Sequence[str], rows: Iterable[Sequence[str]]
) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


@public
def emit_csv(table: Iterable[ComparisonRow], path: str | os.PathLike[str]) -> None:
    """Write the comparison `table` as CSV, ordered by size and threshold.

    Fractions are written with 12 significant digits; an empty fraction
    means no program of that size halted.

    """
    rows = sorted(table, key=operator.itemgetter(0, 1))
    _write_csv(path, COMPARISON_HEADER, map(_comparison_cells, rows))


@public
def emit_histogram_csv(
    summaries: Iterable[SizeClassSummary], path: str | os.PathLike[str]
) -> None:
    """Write the raw step-count size histograms as CSV."""
    rows = [
        (str(summary.k), str(bitlen), str(count))
        for summary in sorted(summaries, key=operator.attrgetter("k"))
        for bitlen, count in sorted(summary.histogram.items())
    ]
    _write_csv(path, HISTOGRAM_HEADER, rows)
