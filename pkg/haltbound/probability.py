r"""Exact evaluation of the halting-size probabilities.

For a program of complexity :math:`k` bits the prior that it generates a
string of :math:`n` bits is

.. math::

   P_1 = \frac{2^k}{2^{n + c + 1} - 2}

and normalizing over every admissible size gives the posterior :math:`P_2`.
Applied to the output of a step counter, the same normalization yields the
probability that a halting program's step count needs at least :math:`m`
bits.

All infinite sums are enclosed rigorously: the first ``depth`` terms are
accumulated with outward rounding on a dyadic grid fine enough that rounding
is negligible next to the truncation error, and the remaining tail is
bracketed by geometric series in closed form. The common :math:`2^k` factor
is cancelled before any summation.

Every function here is pure and its results are immutable.

"""

from __future__ import annotations

import functools
import math
from fractions import Fraction

from public import public

from .complexity import ComplexityModel, Plain, TermFamily
from .errors import DomainError
from .interval import Interval, ProbInterval, dyadic, share
from .typehints import ExactRational

#: Extra terms summed exactly beyond the largest index of interest.
DEPTH_MARGIN = 128

#: Bits of working precision below the first truncated term.
GUARD_BITS = 64


def _default_depth(*indices: int) -> int:
    return max(indices) + DEPTH_MARGIN


def _precision(family: TermFamily, stop: int) -> int:
    return family.exponent(stop) + GUARD_BITS


def _check_depth(depth: int) -> None:
    if depth < 1:
        raise DomainError(f"truncation depth must be positive, got {depth:d}")


@functools.lru_cache(maxsize=8192)
def _block(
    family: TermFamily, start: int, stop: int, precision: int
) -> tuple[int, int]:
    """Bracket the terms in ``[start, stop)`` scaled by ``2 ** precision``."""
    scale = 1 << precision
    lo = hi = 0
    for i in range(start, stop):
        quotient, remainder = divmod(scale, (1 << (family.exponent(i) + 1)) - 2)
        lo += quotient
        hi += quotient + (remainder != 0)
    return lo, hi


def _block_interval(
    family: TermFamily, start: int, stop: int, precision: int
) -> Interval:
    lo, hi = _block(family, start, stop, precision)
    return Interval(dyadic(lo, precision), dyadic(hi, precision))


@functools.lru_cache(maxsize=8192)
def series(family: TermFamily, start: int, depth: int) -> ProbInterval:
    """Enclose the infinite sum of the terms of `family` from index `start`.

    Parameters
    ----------
    family
        The term family, usually a :class:`~haltbound.complexity.ComplexityModel`.
    start
        The first index of the sum.
    depth
        The number of terms summed before the tail is bracketed.

    Examples
    --------
    >>> enclosure = series(Plain(0), 10, 64)
    >>> Fraction(1, 2 ** 10) < enclosure.lo <= enclosure.hi < Fraction(1, 2 ** 9)
    True

    """
    _check_depth(depth)
    stop = start + depth
    precision = _precision(family, stop)
    lo, hi = _block(family, start, stop, precision)
    tail_lo, tail_hi = family.tail_exponents(stop)
    return ProbInterval(
        dyadic(lo, precision) + Fraction(1, 1 << tail_lo),
        dyadic(hi, precision) + Fraction(1, 1 << tail_hi),
    )


def _check_k(k: int) -> None:
    if k < 1:
        raise DomainError(f"complexity k must be at least 1, got k == {k:d}")


def _first(model: ComplexityModel, k: int) -> int:
    return max(model.first_index(k), 1)


def _split(
    model: ComplexityModel, k: int, head_stop: int, tail_start: int, depth: int
) -> tuple[ProbInterval, Interval]:
    """Return two disjoint pieces of the normalizing sum for `k`.

    The first element encloses the tail from `tail_start` on, the second the
    finite block of terms from the first index up to `head_stop`, exclusive.

    """
    tail = series(model, tail_start, depth)
    precision = _precision(model, tail_start + depth)
    head = _block_interval(model, _first(model, k), head_stop, precision)
    return tail, head


@public
def term(model: ComplexityModel, n: int) -> ExactRational:
    """Return the exact term ``1 / (2 ** (n + overhead(n) + 1) - 2)``.

    Examples
    --------
    >>> term(Plain(0), 4)
    Fraction(1, 30)

    """
    return model.term(n)


@public
def tail_sum(
    model: ComplexityModel, k: int, *, depth: int | None = None
) -> ProbInterval:
    """Enclose the normalizing sum of the posterior for complexity `k`.

    For :class:`~haltbound.complexity.Plain` this is the sum over ``i >= k``
    of ``1 / (2 ** (i + 1) - 2)``; for
    :class:`~haltbound.complexity.SelfDelimiting` the sum over ``i >= l`` of
    ``1 / (2 ** (i + g(i) + 1) - 2)`` with ``l = solve_l(g, k)``.

    Parameters
    ----------
    model
        The complexity measure.
    k
        The program complexity in bits.
    depth
        Number of exactly summed terms, ``k + 128`` by default.

    Examples
    --------
    >>> s = tail_sum(Plain(0), 1)
    >>> s.width <= Fraction(1, 2 ** 64)
    True
    >>> float(s.lo)  # doctest: +ELLIPSIS
    0.8033...

    """
    _check_k(k)
    return series(model, _first(model, k), _default_depth(k) if depth is None else depth)


@public
def p1(model: ComplexityModel, k: int, n: int) -> ExactRational:
    """Return the prior that a `k`-bit minimal program produces `n` bits.

    Raises
    ------
    DomainError
        If ``k > n + overhead(n)``.

    Examples
    --------
    >>> p1(Plain(0), 4, 4)
    Fraction(8, 15)
    >>> p1(Plain(2), 3, 3)
    Fraction(4, 31)

    """
    _check_k(k)
    if not model.admits(k, n):
        raise DomainError(f"{model.describe()} does not admit k == {k:d}, n == {n:d}")
    return (1 << k) * model.term(n)


def _check_p2_domain(model: ComplexityModel, k: int, n: int) -> None:
    _check_k(k)
    if n < _first(model, k):
        raise DomainError(f"{model.describe()} does not admit k == {k:d}, n == {n:d}")


@public
def p2(
    model: ComplexityModel, k: int, n: int, *, depth: int | None = None
) -> ProbInterval:
    """Enclose the posterior that a `k`-bit program with output produces `n` bits.

    Sizes are admissible from the first index of the normalizing sum on, which
    for :class:`~haltbound.complexity.SelfDelimiting` is ``solve_l(g, k)``.

    Examples
    --------
    >>> p = p2(Plain(0), 10, 10)
    >>> abs(p.lo - Fraction(1, 2)) < Fraction(1, 2 ** 10)
    True

    """
    _check_p2_domain(model, k, n)
    depth = _default_depth(k, n) if depth is None else depth
    rest, head = _split(model, k, n, n + 1, depth)
    return share(Interval.point(model.term(n)), rest + head)


@public
def p2_mass(
    model: ComplexityModel, k: int, upto: int, *, depth: int | None = None
) -> Interval:
    """Enclose the total posterior mass over every admissible size.

    The posteriors of the sizes up to `upto` are summed and the remaining
    mass is enclosed in closed form. Whenever the normalizing sum starts at a
    positive index the result contains exactly 1.

    Examples
    --------
    >>> 1 in p2_mass(Plain(3), 10, 20)
    True

    """
    _check_k(k)
    first = _first(model, k)
    if upto < first:
        raise DomainError(f"upto == {upto:d} is below the first size {first:d}")
    total = Interval.point(0)
    for n in range(first, upto + 1):
        total += p2(model, k, n, depth=depth)
    depth = _default_depth(k, upto) if depth is None else depth
    rest, head = _split(model, k, upto + 1, upto + 1, depth)
    return total + share(rest, head)


@public
def p2_closed(k: int, n: int, c: int) -> ExactRational:
    """Return the closed-form approximation ``2 ** -(n + c - k + 1)``.

    Examples
    --------
    >>> p2_closed(10, 15, 3)
    Fraction(1, 512)

    """
    _check_k(k)
    if n + c < k:
        raise DomainError(f"n + c must be at least k, got {n + c:d} < {k:d}")
    return Fraction(1, 1 << (n + c - k + 1))


def _check_threshold(model: ComplexityModel, k: int, m: int) -> None:
    _check_k(k)
    if not model.admits(k, m):
        raise DomainError(f"{model.describe()} does not admit k == {k:d}, m == {m:d}")


@public
def tail_prob(
    model: ComplexityModel, k: int, m: int, *, depth: int | None = None
) -> ProbInterval:
    """Enclose the probability that the halting step count needs `m` bits or more.

    Examples
    --------
    >>> tail_prob(Plain(0), 10, 10)
    ProbInterval(lo=1, hi=1)
    >>> tail_prob(Plain(0), 10, 60).hi <= Fraction(1, 2 ** 50)
    True

    """
    _check_threshold(model, k, m)
    tail, head = _split(model, k, m, m, _default_depth(k, m) if depth is None else depth)
    return share(tail, head)


@public
def tail_closed(k: int, m: int, c: int) -> ExactRational:
    """Return the closed-form approximation ``2 ** -(m + c - k)``.

    Examples
    --------
    >>> tail_closed(20, 30, 5)
    Fraction(1, 32768)

    """
    _check_k(k)
    if m + c < k:
        raise DomainError(f"m + c must be at least k, got {m + c:d} < {k:d}")
    return Fraction(1, 1 << (m + c - k))


@public
def below_prob(
    model: ComplexityModel, k: int, m: int, *, depth: int | None = None
) -> ProbInterval:
    """Enclose the probability that the halting step count needs fewer than `m` bits.

    Examples
    --------
    >>> below_prob(Plain(0), 10, 60).lo >= 1 - Fraction(1, 2 ** 49)
    True

    """
    return tail_prob(model, k, m, depth=depth).complement()


class _Scaled(TermFamily):
    """Terms ``1 / (2 ** (b * i + 1) - 2)``."""

    __slots__ = ("b",)

    def __init__(self, b: int) -> None:
        self.b = b

    def exponent(self, i: int) -> int:
        return self.b * i

    def __eq__(self, other: object) -> bool:
        return isinstance(other, _Scaled) and self.b == other.b

    def __hash__(self) -> int:
        return hash((_Scaled, self.b))


@public
def lower_bound_series(
    k: int, m: int, b: int, *, depth: int | None = None
) -> ProbInterval:
    """Enclose the scaled lower-bound expression for ``P(size < m)``.

    This is ``1 - S(m) / D`` where ``S(m)`` is the plain tail from `m` and
    ``D`` the sum over ``i >= ceil(k / b)`` of ``1 / (2 ** (b * i + 1) - 2)``.
    It approximates ``1 - 2 ** (k - m + b)``.

    Examples
    --------
    >>> lower_bound_series(10, 12, 2).lo > 0
    True

    """
    _check_k(k)
    if b < 1:
        raise DomainError(f"b must be at least 1, got b == {b:d}")
    if m < k + b:
        raise DomainError(f"m must be at least k + b, got {m:d} < {k + b:d}")
    start = math.ceil(Fraction(k, b))
    depth = _default_depth(k, m) if depth is None else depth
    numerator = series(Plain(0), m, depth)
    denominator = series(_Scaled(b), start, depth)
    ratio = ProbInterval(
        numerator.lo / denominator.hi, numerator.hi / denominator.lo
    )
    return ratio.complement()
