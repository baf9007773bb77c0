"""Closed intervals with exact rational endpoints.

Every probability computed by haltbound that involves an infinite series is
returned as an enclosure: a closed interval ``[lo, hi]`` whose endpoints are
exact rationals and which contains the mathematically exact value.

"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Union

from public import public

from .errors import ConsistencyError
from .typehints import ExactRational

Endpoint = Union[ExactRational, int]


@public
class Interval:
    """A closed interval ``[lo, hi]`` of exact rationals.

    Attributes
    ----------
    lo
        The lower endpoint.
    hi
        The upper endpoint.

    """

    __slots__ = "lo", "hi"

    def __init__(self, lo: Endpoint, hi: Endpoint) -> None:
        lo = Fraction(lo)
        hi = Fraction(hi)
        if lo > hi:
            raise ConsistencyError(f"empty interval: lo == {lo} > hi == {hi}")
        self.lo: ExactRational = lo
        self.hi: ExactRational = hi

    @classmethod
    def point(cls, value: Endpoint) -> Interval:
        """Construct the degenerate interval ``[value, value]``."""
        return cls(value, value)

    @property
    def width(self) -> ExactRational:
        """Return ``hi - lo``."""
        return self.hi - self.lo

    def __contains__(self, value: Any) -> bool:
        return self.lo <= value <= self.hi

    def within(self, other: Interval) -> bool:
        """Return whether this interval is a subset of `other`."""
        return other.lo <= self.lo and self.hi <= other.hi

    def distance(self, other: Interval) -> ExactRational:
        """Return the largest distance between a point here and one in `other`."""
        return max(abs(self.hi - other.lo), abs(other.hi - self.lo))

    def __add__(self, other: Interval) -> Interval:
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Interval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(lo={self.lo}, hi={self.hi})"

    def __str__(self) -> str:
        return f"lo = {self.lo}, hi = {self.hi}"


@public
class ProbInterval(Interval):
    """An enclosure of a probability, so ``0 <= lo <= hi <= 1``.

    Endpoints outside of ``[0, 1]`` are never clamped: they raise
    :class:`~haltbound.errors.ConsistencyError`.

    """

    __slots__ = ()

    def __init__(self, lo: Endpoint, hi: Endpoint) -> None:
        super().__init__(lo, hi)
        if self.lo < 0 or self.hi > 1:
            raise ConsistencyError(
                f"probability enclosure out of range: [{self.lo}, {self.hi}]"
            )

    def complement(self) -> ProbInterval:
        """Return the enclosure of ``1 - x`` for ``x`` in this interval."""
        return ProbInterval(1 - self.hi, 1 - self.lo)


@public
def dyadic(scaled: int, precision: int) -> ExactRational:
    """Return the exact rational ``scaled / 2 ** precision``.

    Examples
    --------
    >>> dyadic(3, 2)
    Fraction(3, 4)

    """
    return Fraction(scaled, 1 << precision)


@public
def share(part: Interval, rest: Interval) -> ProbInterval:
    """Enclose ``x / (x + y)`` for ``x`` in `part` and ``y`` in `rest`.

    ``x / (x + y)`` increases with ``x`` and decreases with ``y``, so the
    endpoints pair up crosswise and always land in ``[0, 1]``.

    Parameters
    ----------
    part
        An enclosure of a positive quantity.
    rest
        An enclosure of a non-negative quantity.

    Examples
    --------
    >>> share(Interval.point(1), Interval.point(3))
    ProbInterval(lo=1/4, hi=1/4)
    >>> share(Interval.point(1), Interval.point(0))
    ProbInterval(lo=1, hi=1)

    """
    if part.lo <= 0 or rest.lo < 0:
        raise ConsistencyError(f"cannot share {part!r} against {rest!r}")
    return ProbInterval(
        part.lo / (part.lo + rest.hi),
        part.hi / (part.hi + rest.lo),
    )
