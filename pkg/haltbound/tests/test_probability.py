from __future__ import annotations

from fractions import Fraction

import pytest

from haltbound.complexity import ComplexityModel, Plain, SelfDelimiting
from haltbound.errors import DomainError
from haltbound.probability import (
    below_prob,
    lower_bound_series,
    p1,
    p2,
    p2_closed,
    p2_mass,
    series,
    tail_closed,
    tail_prob,
    tail_sum,
    term,
)


def relative(value: Fraction, reference: Fraction) -> Fraction:
    return abs(value - reference) / reference


def test_tail_sum_half_erdos_borwein(plain: Plain) -> None:
    s = tail_sum(plain, 1)
    assert s.width <= Fraction(1, 2**64)
    # 1.606695152415291763... / 2
    assert Fraction(803347576207645, 10**15) < s.lo
    assert s.hi < Fraction(803347576207646, 10**15)


@pytest.mark.parametrize("k", range(1, 80))  # type: ignore[misc]
def test_tail_sum_bracketing(plain: Plain, k: int) -> None:
    s = tail_sum(plain, k)
    assert Fraction(1, 2**k) < s.lo <= s.hi < Fraction(1, 2 ** (k - 1))


@pytest.mark.parametrize("k", range(10, 65))  # type: ignore[misc]
def test_tail_sum_approximates_inverse_power(plain: Plain, k: int) -> None:
    s = tail_sum(plain, k)
    bound = Fraction(1, 2 ** (k - 2))
    reference = Fraction(1, 2**k)
    assert relative(s.lo, reference) <= bound
    assert relative(s.hi, reference) <= bound


def test_tail_sum_rejects_zero(plain: Plain, sd: SelfDelimiting) -> None:
    with pytest.raises(DomainError):
        tail_sum(plain, 0)
    with pytest.raises(DomainError):
        tail_sum(sd, 1)


def test_term() -> None:
    assert term(Plain(0), 4) == Fraction(1, 30)


def test_p1_examples() -> None:
    assert p1(Plain(0), 4, 4) == Fraction(8, 15)
    assert p1(Plain(0), 1, 1) == 1
    assert p1(Plain(2), 3, 3) == Fraction(4, 31)


def test_p1_domain(plain: Plain, sd: SelfDelimiting) -> None:
    with pytest.raises(DomainError):
        p1(plain, 5, 4)
    with pytest.raises(DomainError):
        p1(plain, 0, 4)
    with pytest.raises(DomainError):
        p1(sd, 20, 15)
    assert p1(sd, 20, 16) == Fraction(2**20, 2**22 - 2)


def test_p2_examples(plain: Plain) -> None:
    p = p2(plain, 10, 10)
    assert relative(p.lo, Fraction(1, 2)) <= Fraction(1, 2**9)
    assert relative(p.hi, Fraction(1, 2)) <= Fraction(1, 2**9)

    p = p2(plain, 10, 20)
    assert relative(p.lo, Fraction(1, 2**11)) <= Fraction(1, 2**8)
    assert relative(p.hi, Fraction(1, 2**11)) <= Fraction(1, 2**8)


@pytest.mark.parametrize("k", [10, 20, 40, 64])  # type: ignore[misc]
@pytest.mark.parametrize("c", [0, 2])  # type: ignore[misc]
def test_p2_matches_closed_form(k: int, c: int) -> None:
    model = Plain(c)
    for n in range(k - c, k - c + 12):
        closed = p2_closed(k, n, c)
        p = p2(model, k, n)
        assert relative(p.lo, closed) <= Fraction(1, 2 ** (k - 2))
        assert relative(p.hi, closed) <= Fraction(1, 2 ** (k - 2))


def test_p2_self_delimiting_domain(sd: SelfDelimiting) -> None:
    # the normalizing sum for k == 20 starts at l == 15
    assert p2(sd, 20, 15).lo > 0
    with pytest.raises(DomainError):
        p2(sd, 20, 14)


def test_p2_non_increasing_in_n(plain: Plain) -> None:
    highs = [p2(plain, 12, n).hi for n in range(12, 40)]
    assert highs == sorted(highs, reverse=True)


def test_closed_forms() -> None:
    assert p2_closed(10, 10, 0) == Fraction(1, 2)
    assert p2_closed(10, 15, 3) == Fraction(1, 512)
    assert p2_closed(7, 4, 3) == Fraction(1, 2)
    assert tail_closed(10, 60, 0) == Fraction(1, 2**50)
    assert tail_closed(20, 30, 5) == Fraction(1, 2**15)
    assert tail_closed(12, 9, 3) == 1

    with pytest.raises(DomainError):
        p2_closed(10, 5, 4)
    with pytest.raises(DomainError):
        tail_closed(10, 5, 4)


def test_tail_prob_examples(plain: Plain) -> None:
    t = tail_prob(plain, 10, 20)
    assert relative(t.lo, Fraction(1, 2**10)) <= Fraction(1, 2**8)
    assert relative(t.hi, Fraction(1, 2**10)) <= Fraction(1, 2**8)
    assert 1 in tail_prob(plain, 10, 10)
    assert tail_prob(plain, 10, 60).hi <= Fraction(1, 2**50)

    with pytest.raises(DomainError):
        tail_prob(plain, 10, 9)


def test_below_prob_examples(plain: Plain) -> None:
    assert below_prob(plain, 10, 60).lo >= 1 - Fraction(1, 2**49)
    assert 0 in below_prob(plain, 10, 10)


@pytest.mark.parametrize("k", [10, 20, 30, 40])  # type: ignore[misc]
def test_below_prob_practically_one_fifty_bits_up(plain: Plain, k: int) -> None:
    assert below_prob(plain, k, k + 50).lo >= 1 - Fraction(1, 2**48)


@pytest.mark.parametrize(  # type: ignore[misc]
    "model", [Plain(0), Plain(4), SelfDelimiting()]
)
def test_tail_and_below_monotone_in_m(model: ComplexityModel) -> None:
    k = 16
    tails = [tail_prob(model, k, m) for m in range(model.smallest_admissible(k), 90)]
    for before, after in zip(tails, tails[1:]):
        assert after.hi <= before.hi
        assert after.lo <= before.lo
    belows = [t.complement() for t in tails]
    for before, after in zip(belows, belows[1:]):
        assert after.lo >= before.lo


@pytest.mark.parametrize(  # type: ignore[misc]
    "model", [Plain(0), Plain(2), SelfDelimiting()]
)
@pytest.mark.parametrize("m", [24, 30, 75])  # type: ignore[misc]
def test_complement_identity(model: ComplexityModel, m: int) -> None:
    tail = tail_prob(model, 24, m)
    below = below_prob(model, 24, m)
    assert below.lo + tail.hi == 1
    assert below.hi + tail.lo == 1


@pytest.mark.parametrize(  # type: ignore[misc]
    "enclose",
    [
        lambda depth: tail_sum(Plain(0), 12, depth=depth),
        lambda depth: tail_sum(SelfDelimiting(), 30, depth=depth),
        lambda depth: p2(Plain(1), 12, 15, depth=depth),
        lambda depth: tail_prob(Plain(0), 12, 20, depth=depth),
        lambda depth: tail_prob(SelfDelimiting(), 40, 45, depth=depth),
    ],
)
def test_deeper_truncation_nests(enclose) -> None:  # type: ignore[no-untyped-def]
    enclosures = [enclose(depth) for depth in (1, 2, 4, 8, 16, 32, 64)]
    for shallow, deep in zip(enclosures, enclosures[1:]):
        assert deep.within(shallow)
    widths = [enclosure.width for enclosure in enclosures]
    assert widths[-1] * 2**40 < widths[0]


def test_series_rejects_bad_depth() -> None:
    with pytest.raises(DomainError):
        series(Plain(0), 3, 0)


@pytest.mark.parametrize(  # type: ignore[misc]
    "model", [Plain(0), Plain(3), SelfDelimiting()], ids=repr
)
@pytest.mark.parametrize("k", [10, 20])  # type: ignore[misc]
def test_posterior_normalizes(model: ComplexityModel, k: int) -> None:
    for upto in (k + 4, k + 9):
        mass = p2_mass(model, k, upto)
        assert 1 in mass
        assert mass.width <= Fraction(1, 2**60)


def test_p2_mass_domain(plain: Plain) -> None:
    with pytest.raises(DomainError):
        p2_mass(plain, 10, 9)


@pytest.mark.parametrize("m", [1024, 1034, 1074, 1084])  # type: ignore[misc]
def test_self_delimiting_below_converges_to_plain(m: int) -> None:
    k = 1024
    distance = below_prob(SelfDelimiting(), k, m).distance(below_prob(Plain(0), k, m))
    assert distance <= Fraction(1, 2 ** (m - k))
    if m >= k + 40:
        assert distance <= Fraction(1, 2**40)


def test_self_delimiting_below_differs_at_the_boundary() -> None:
    k = 1024
    sd = below_prob(SelfDelimiting(), k, k)
    assert sd.lo > Fraction(1, 2)
    assert 0 in below_prob(Plain(0), k, k)


@pytest.mark.parametrize("b", [1, 2, 3])  # type: ignore[misc]
@pytest.mark.parametrize("m", [14, 20, 40])  # type: ignore[misc]
def test_lower_bound_series(b: int, m: int) -> None:
    k = 10
    enclosure = lower_bound_series(k, m, b)
    closed = 1 - Fraction(1, 2 ** (m - k - b))
    assert abs(enclosure.lo - closed) <= Fraction(1, 2 ** (m - k - b))
    assert enclosure.width <= Fraction(1, 2**60)


def test_lower_bound_series_domain() -> None:
    with pytest.raises(DomainError):
        lower_bound_series(10, 11, 2)
    with pytest.raises(DomainError):
        lower_bound_series(10, 20, 0)


@pytest.mark.parametrize("depth", [0, -1])  # type: ignore[misc]
@pytest.mark.parametrize(  # type: ignore[misc]
    "enclose",
    [
        lambda depth: tail_sum(Plain(0), 10, depth=depth),
        lambda depth: p2(Plain(0), 10, 12, depth=depth),
        lambda depth: p2_mass(Plain(0), 10, 14, depth=depth),
        lambda depth: tail_prob(Plain(0), 10, 20, depth=depth),
        lambda depth: below_prob(Plain(0), 10, 20, depth=depth),
        lambda depth: lower_bound_series(10, 20, 2, depth=depth),
    ],
    ids=["tail_sum", "p2", "p2_mass", "tail_prob", "below_prob", "lower_bound"],
)
def test_explicit_depth_is_validated(  # type: ignore[no-untyped-def]
    enclose, depth: int
) -> None:
    with pytest.raises(DomainError):
        enclose(depth)
