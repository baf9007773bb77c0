import pytest

from haltbound.errors import DomainError
from haltbound.machine import Halted, Opcode, encode, run, witness, witness_report
from haltbound.machine.witness import runtime, runtime_bound, witness_size_bits


def test_layout() -> None:
    program = witness(4)
    assert [instruction.opcode for instruction in program] == [
        Opcode.DBL,
        Opcode.INC,
        Opcode.DBL,
        Opcode.DBL,
        Opcode.LOADC,
        Opcode.DBL,
        Opcode.DEC,
        Opcode.JNZ,
        Opcode.DEC,
        Opcode.JNZ,
        Opcode.HALT,
    ]
    assert program.size_bits == 99
    assert runtime(4) == 50


@pytest.mark.parametrize("n", range(1, 17))  # type: ignore[misc]
def test_runtime_is_exact(n: int) -> None:
    program = witness(n)
    assert run(program, runtime(n)) == Halted(runtime(n))
    assert runtime(n) >= runtime_bound(n) == 2 ** (n + 1) - 2


@pytest.mark.slow  # type: ignore[misc]
@pytest.mark.parametrize("n", range(17, 21))  # type: ignore[misc]
def test_runtime_is_exact_slow(n: int) -> None:
    assert run(witness(n), runtime(n)) == Halted(runtime(n))


@pytest.mark.parametrize("n", [1, 2, 7, 8, 255, 256, 10_000])  # type: ignore[misc]
def test_size(n: int) -> None:
    size = witness_size_bits(n)
    assert size == witness(n).size_bits == len(encode(witness(n)))
    assert size <= 9 * (2 * n.bit_length() + 7)


def test_report() -> None:
    report = witness_report(10_000)
    assert report.size_bits == 234
    assert report.characteristic == 2 ** (234 + 51)
    assert report.bound == 2**10_001 - 2
    assert report.runtime > report.bound
    assert report.exceeds_characteristic

    small = witness_report(4)
    assert (small.size_bits, small.runtime, small.bound) == (99, 50, 30)
    assert not small.exceeds_characteristic


def test_bad_n() -> None:
    for function in (witness, witness_report, runtime, witness_size_bits):
        with pytest.raises(DomainError):
            function(0)
