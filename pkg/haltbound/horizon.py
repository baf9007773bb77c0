"""Confidence-parameterized step budgets.

Inverting the tail probability gives, for a tolerated probability
:math:`\\varepsilon`, the smallest step-count size :math:`m^*` such that a
halting program of complexity :math:`k` needs :math:`m^*` bits or more to
count its steps with probability at most :math:`\\varepsilon`.

Step counts are sized by bit length, so every count ``t`` with
``t.bit_length() <= m`` fits in the budget ``2 ** m - 1``. The looser
``2 ** (k + 51)`` characteristic time is exposed separately by
:func:`paper_characteristic`.

"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple, Sequence

from public import public

from .complexity import ComplexityModel
from .errors import DomainError
from .probability import below_prob, tail_prob
from .typehints import ExactRational

#: Offset of the characteristic time above the program complexity.
CHARACTERISTIC_OFFSET = 51


@public
class HorizonResult(NamedTuple):
    """The horizon for a complexity and a tolerated probability.

    Attributes
    ----------
    m_star
        The minimal step-count size in bits.
    budget
        ``2 ** m_star - 1``, the largest step count of at most `m_star` bits.
    epsilon
        The tolerated probability of exceeding `budget`.
    model
        The description of the complexity measure.

    """

    m_star: int
    budget: int
    epsilon: ExactRational
    model: str


@public
class LowerBoundParams(NamedTuple):
    """The slack ``b`` of the closed-form lower bound ``1 - 2 ** (k - m + b)``."""

    b: int

    @classmethod
    def of(cls, b: int) -> LowerBoundParams:
        """Validate `b` and construct the parameters.

        Zero is accepted so that sweeps can start below the smallest slack
        anyone would claim.

        """
        if b < 0:
            raise DomainError(f"b must be non-negative, got b == {b:d}")
        return cls(b)


def _check_epsilon(epsilon: ExactRational) -> ExactRational:
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < 1:
        raise DomainError(f"epsilon must lie strictly between 0 and 1, got {epsilon}")
    return epsilon


@public
def horizon_bits(model: ComplexityModel, k: int, epsilon: ExactRational) -> int:
    """Return the minimal ``m`` with ``tail_prob(model, k, m).hi <= epsilon``.

    The scan starts at the smallest admissible size and moves up one bit at
    a time.

    Examples
    --------
    >>> from haltbound.complexity import Plain
    >>> horizon_bits(Plain(0), 10, Fraction(1, 2 ** 50))
    60

    """
    epsilon = _check_epsilon(epsilon)
    m = model.smallest_admissible(k)
    while tail_prob(model, k, m).hi > epsilon:
        m += 1
    return m


@public
def budget_steps(model: ComplexityModel, k: int, epsilon: ExactRational) -> int:
    """Return ``2 ** horizon_bits(model, k, epsilon) - 1``.

    Examples
    --------
    >>> from haltbound.complexity import Plain
    >>> budget_steps(Plain(0), 10, Fraction(1, 2 ** 50)) == 2 ** 60 - 1
    True

    """
    return (1 << horizon_bits(model, k, epsilon)) - 1


@public
def paper_characteristic(k: int) -> int:
    """Return the characteristic time ``2 ** (k + 51)``.

    Examples
    --------
    >>> paper_characteristic(10) == 2 ** 61
    True

    """
    if k < 1:
        raise DomainError(f"complexity k must be at least 1, got k == {k:d}")
    return 1 << (k + CHARACTERISTIC_OFFSET)


@public
def horizon(model: ComplexityModel, k: int, epsilon: ExactRational) -> HorizonResult:
    """Compute the full horizon for `model`, `k` and `epsilon`."""
    epsilon = _check_epsilon(epsilon)
    m_star = horizon_bits(model, k, epsilon)
    return HorizonResult(
        m_star=m_star,
        budget=(1 << m_star) - 1,
        epsilon=epsilon,
        model=model.describe(),
    )


@public
def lower_bound_closed(k: int, m: int, b: int) -> ExactRational:
    """Return the closed-form lower bound ``1 - 2 ** (k - m + b)``.

    Examples
    --------
    >>> lower_bound_closed(10, 62, 2) == 1 - Fraction(1, 2 ** 50)
    True
    >>> lower_bound_closed(10, 12, 2)
    Fraction(0, 1)

    """
    (b,) = LowerBoundParams.of(b)
    if m < k + b:
        raise DomainError(f"m must be at least k + b, got {m:d} < {k + b:d}")
    return 1 - Fraction(1, 1 << (m - k - b))


@public
def check_lower_bound(
    model: ComplexityModel, k: int, m_range: range, b: int
) -> Sequence[int]:
    """Return every ``m`` in `m_range` where the closed-form bound fails.

    A threshold ``m`` is a violation when ``lower_bound_closed(k, m, b)``
    exceeds the lower endpoint of ``below_prob(model, k, m)``. An empty
    result certifies the bound over the whole range.

    Raises
    ------
    DomainError
        If some ``m`` in `m_range` is not admissible or is below ``k + b``.

    """
    return [
        m
        for m in m_range
        if lower_bound_closed(k, m, b) > below_prob(model, k, m).lo
    ]


@public
def minimal_lower_bound_b(
    model: ComplexityModel, k: int, m_range: range, b_max: int = 8
) -> int | None:
    """Return the smallest ``b <= b_max`` certified over `m_range`.

    Thresholds below ``k + b`` are skipped for each candidate. Returns
    :data:`None` when no candidate works.

    """
    for b in range(b_max + 1):
        start = max(m_range.start, k + b, model.smallest_admissible(k))
        if not check_lower_bound(model, k, range(start, m_range.stop), b):
            return b
    return None

