"""A family of short programs with very long running times.

The program for ``n`` builds ``n`` in a register from its binary digits,
doubles a second register ``n`` times and then counts it back down to zero,
so it takes more than ``2 ** (n + 1)`` steps while its size grows only with
the number of binary digits of ``n``. For large ``n`` its running time
dwarfs the characteristic time of a program of its size.

"""

from __future__ import annotations

from typing import NamedTuple

from public import public

from ..errors import DomainError
from ..horizon import paper_characteristic
from .instruction import WIDTH, Instruction, Opcode
from .program import CrmProgram


def _check_n(n: int) -> None:
    if n < 1:
        raise DomainError(f"n must be at least 1, got n == {n:d}")


@public
def witness(n: int) -> CrmProgram:
    """Return the program that runs ``runtime(n)`` steps and then halts.

    Examples
    --------
    >>> program = witness(4)
    >>> len(program), program.size_bits
    (11, 99)

    """
    _check_n(n)
    instructions = []
    for bit in bin(n)[2:]:
        instructions.append(Instruction(Opcode.DBL, 0))
        if bit == "1":
            instructions.append(Instruction(Opcode.INC, 0))
    instructions += [
        Instruction(Opcode.LOADC, 1, 1),
        Instruction(Opcode.DBL, 1),
        Instruction(Opcode.DEC, 0),
        Instruction(Opcode.JNZ, 0, -2),
        Instruction(Opcode.DEC, 1),
        Instruction(Opcode.JNZ, 1, -1),
        Instruction(Opcode.HALT),
    ]
    return CrmProgram(instructions)


@public
def witness_size_bits(n: int) -> int:
    """Return the size of ``witness(n)`` without building it."""
    _check_n(n)
    return WIDTH * (n.bit_length() + bin(n).count("1") + 7)


@public
def runtime(n: int) -> int:
    """Return the exact number of steps ``witness(n)`` runs before halting.

    Building ``n`` takes one step per digit plus one per set digit, loading
    takes one, the doubling loop three per iteration, the countdown two per
    unit of ``2 ** n`` and the final ``HALT`` one.

    Examples
    --------
    >>> runtime(4)
    50

    """
    _check_n(n)
    return n.bit_length() + bin(n).count("1") + 1 + 3 * n + (1 << (n + 1)) + 1


@public
def runtime_bound(n: int) -> int:
    """Return ``2 ** (n + 1) - 2``, the step count the program must reach."""
    _check_n(n)
    return (1 << (n + 1)) - 2


@public
class WitnessReport(NamedTuple):
    """Arithmetic comparison of a witness against the characteristic time.

    Attributes
    ----------
    n
        The witness parameter.
    size_bits
        The size of the program.
    bound
        ``2 ** (n + 1) - 2``.
    runtime
        The exact running time.
    characteristic
        ``2 ** (size_bits + 51)``.

    """

    n: int
    size_bits: int
    bound: int
    runtime: int
    characteristic: int

    @property
    def exceeds_characteristic(self) -> bool:
        """Whether the program halts only after its characteristic time."""
        return self.runtime > self.characteristic


@public
def witness_report(n: int) -> WitnessReport:
    """Compare the running time of ``witness(n)`` with its characteristic time.

    Examples
    --------
    >>> witness_report(10_000).exceeds_characteristic
    True
    >>> witness_report(4).exceeds_characteristic
    False

    """
    size_bits = witness_size_bits(n)
    return WitnessReport(
        n=n,
        size_bits=size_bits,
        bound=runtime_bound(n),
        runtime=runtime(n),
        characteristic=paper_characteristic(size_bits),
    )
