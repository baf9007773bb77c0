"""Complexity measures and the series they induce.

A complexity measure says how many bits a program of ``n`` bits may need once
its algorithmic complexity is accounted for: ``n + c`` for a plain machine and
``n + g(n)`` for a self-delimiting one, where ``g`` models the
:math:`O(\\log_2 n)` prefix overhead.

Every probability in :mod:`haltbound.probability` is a ratio of sums of terms

.. math::

   \\frac{1}{2^{e(i) + 1} - 2}

for an increasing exponent function :math:`e`. :class:`TermFamily` captures
that shape.

"""

from __future__ import annotations

import abc
import functools
from fractions import Fraction
from typing import Any

from public import public

from .errors import DomainError
from .protocols import Overhead
from .typehints import ExactRational

#: Range over which overhead functions are checked on construction.
_OVERHEAD_CHECK = range(1, 257)


@public
def default_overhead(n: int) -> int:
    """Return :math:`\\lceil \\log_2 (n + 1) \\rceil`, computed exactly.

    Examples
    --------
    >>> [default_overhead(n) for n in (1, 2, 3, 4, 15, 16)]
    [1, 2, 2, 3, 4, 5]

    """
    return n.bit_length()


@public
@functools.lru_cache(maxsize=4096)
def solve_l(g: Overhead, k: int) -> int:
    """Return the largest ``l`` with ``l + g(l) <= k``.

    When ``l + g(l) = k`` has no solution the larger candidate wins, which
    shrinks the denominator sum and is therefore conservative.

    Parameters
    ----------
    g
        A self-delimiting overhead function.
    k
        The program complexity in bits.

    Raises
    ------
    DomainError
        If no positive ``l`` satisfies the inequality.

    Examples
    --------
    >>> solve_l(default_overhead, 20)
    15
    >>> solve_l(lambda n: 0, 7)
    7

    """
    if k < 1 or k < 1 + g(1):
        raise DomainError(f"no l >= 1 with l + g(l) <= {k:d}")
    for l in range(k, 0, -1):  # noqa: E741
        if l + g(l) <= k:
            return l
    raise DomainError(f"no l >= 1 with l + g(l) <= {k:d}")  # pragma: no cover


class TermFamily(abc.ABC):
    """A family of series terms ``1 / (2 ** (e(i) + 1) - 2)``.

    Subclasses provide the exponent function :math:`e`, which must satisfy
    ``e(i) >= 1`` on the indices used and ``e(i + 1) >= e(i) + 1``.

    """

    __slots__ = ()

    @abc.abstractmethod
    def exponent(self, i: int) -> int:
        """Return the exponent of the `i`-th term."""

    def term(self, i: int) -> ExactRational:
        """Return the exact value of the `i`-th term."""
        return Fraction(1, (1 << (self.exponent(i) + 1)) - 2)

    def tail_exponents(self, j: int) -> tuple[int, int]:
        """Return ``(a, b)`` such that the tail from `j` lies in ``[2**-a, 2**-b]``.

        Each term lies in ``(2 ** -(e + 1), 2 ** -e]`` and exponents grow by at
        least one per index, so the tail is at most ``2 ** -(e(j) - 1)`` and at
        least its first term.

        """
        e = self.exponent(j)
        return e + 1, e - 1


@public
class ComplexityModel(TermFamily):
    """Base class of the complexity measures.

    The exponent of a model is ``n + overhead(n)``: the size of the generating
    strings counted in the prior.

    """

    __slots__ = ()

    @abc.abstractmethod
    def overhead(self, n: int) -> int:
        """Return the overhead in bits of a program of `n` bits."""

    @abc.abstractmethod
    def first_index(self, k: int) -> int:
        """Return the index where the normalizing sum for complexity `k` starts."""

    @abc.abstractmethod
    def describe(self) -> str:
        """Return a short, stable description of the model."""

    def exponent(self, n: int) -> int:
        return n + self.overhead(n)

    def admits(self, k: int, n: int) -> bool:
        """Return whether size `n` is admissible for complexity `k`."""
        return n >= 1 and k <= self.exponent(n)

    def smallest_admissible(self, k: int) -> int:
        """Return the smallest admissible size for complexity `k`."""
        n = max(self.first_index(k), 1)
        while not self.admits(k, n):
            n += 1
        return n

    def __repr__(self) -> str:
        return self.describe()


@public
class Plain(ComplexityModel):
    """Plain complexity: a string of ``n`` bits needs at most ``n + c`` bits.

    Attributes
    ----------
    c
        The language-dependent constant.

    """

    __slots__ = ("c",)

    def __init__(self, c: int = 0) -> None:
        if c < 0:
            raise DomainError(f"c must be non-negative, got c == {c:d}")
        self.c = c

    def overhead(self, n: int) -> int:
        return self.c

    def first_index(self, k: int) -> int:
        return k - self.c

    def tail_exponents(self, j: int) -> tuple[int, int]:
        # consecutive exponents: the lower bounds form an exact geometric series
        e = self.exponent(j)
        return e, e - 1

    def describe(self) -> str:
        return f"plain(c={self.c:d})"

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Plain):
            return NotImplemented
        return self.c == other.c

    def __hash__(self) -> int:
        return hash((Plain, self.c))


@public
class SelfDelimiting(ComplexityModel):
    """Self-delimiting complexity: at most ``n + g(n)`` bits.

    Attributes
    ----------
    g
        The overhead function, :func:`default_overhead` unless given.

    """

    __slots__ = ("g",)

    def __init__(self, g: Overhead = default_overhead) -> None:
        previous = 0
        for n in _OVERHEAD_CHECK:
            value = g(n)
            if value < previous:
                raise DomainError(f"overhead decreases at n == {n:d}")
            if n >= 8 and value >= n:
                raise DomainError(f"overhead g({n:d}) == {value:d} is not below n")
            previous = value
        self.g = g

    def overhead(self, n: int) -> int:
        return self.g(n)

    def first_index(self, k: int) -> int:
        return solve_l(self.g, k)

    def describe(self) -> str:
        name = getattr(self.g, "__name__", type(self.g).__name__)
        return f"sd(g={name})"

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, SelfDelimiting):
            return NotImplemented
        return self.g is other.g

    def __hash__(self) -> int:
        return hash((SelfDelimiting, self.g))
