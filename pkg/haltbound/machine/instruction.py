"""The instruction set of the counting register machine.

Every instruction occupies exactly nine bits::

    opcode (3) | register (2) | argument (4)

The argument is an immediate for ``LOADC``, a signed two's complement jump
offset for ``JZ`` and ``JNZ`` and ignored otherwise. The opcode pattern
``111`` is reserved and never decodes.

"""

from __future__ import annotations

import enum
from typing import Any

from public import public

from ..errors import DomainError, InvalidOpcode

#: Width of an encoded instruction in bits.
WIDTH = 9

#: Number of registers.
REGISTERS = 4

#: Number of distinct valid 9-bit chunks: 7 opcodes, 4 registers, 16 arguments.
VALID_CHUNKS = 448


@public
@enum.unique
class Opcode(enum.IntEnum):
    """The seven valid opcodes, numbered by their bit pattern."""

    HALT = 0
    INC = 1
    DEC = 2
    DBL = 3
    JZ = 4
    JNZ = 5
    LOADC = 6

    @property
    def is_jump(self) -> bool:
        return self is Opcode.JZ or self is Opcode.JNZ


def _check_arg(opcode: Opcode, arg: int) -> None:
    low, high = (-8, 7) if opcode.is_jump else (0, 15)
    if not low <= arg <= high:
        raise DomainError(
            f"{opcode.name} argument must lie in [{low:d}, {high:d}], got {arg:d}"
        )


@public
class Instruction:
    """A single decoded instruction.

    Attributes
    ----------
    opcode
        The operation.
    reg
        The register operand, ``0`` through ``3``.
    arg
        The immediate, the jump offset or the ignored raw argument bits.

    """

    __slots__ = "opcode", "reg", "arg"

    def __init__(self, opcode: Opcode | int, reg: int = 0, arg: int = 0) -> None:
        opcode = Opcode(opcode)
        if not 0 <= reg < REGISTERS:
            raise DomainError(f"register must lie in [0, 3], got {reg:d}")
        _check_arg(opcode, arg)
        self.opcode = opcode
        self.reg = reg
        self.arg = arg

    @classmethod
    def from_chunk(cls, chunk: int) -> Instruction:
        """Decode a 9-bit integer.

        Raises
        ------
        InvalidOpcode
            If the chunk starts with ``111``.

        Examples
        --------
        >>> Instruction.from_chunk(0b101_00_1111)
        Instruction(JNZ, r0, -1)

        """
        code = chunk >> 6
        if code == 0b111:
            raise InvalidOpcode(f"reserved opcode 111 in chunk {chunk:09b}")
        opcode = Opcode(code)
        reg = (chunk >> 4) & 0b11
        arg = chunk & 0b1111
        if opcode.is_jump and arg & 0b1000:
            arg -= 16
        return cls(opcode, reg, arg)

    @property
    def chunk(self) -> int:
        """Return the 9-bit integer encoding of this instruction."""
        return (self.opcode << 6) | (self.reg << 4) | (self.arg & 0b1111)

    @property
    def operation(self) -> tuple[int, int, int]:
        """Return the plain ``(opcode, reg, arg)`` triple run by the interpreter."""
        return int(self.opcode), self.reg, self.arg

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Instruction):
            return NotImplemented
        return self.operation == other.operation

    def __hash__(self) -> int:
        return hash(self.operation)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self})"

    def __str__(self) -> str:
        return f"{self.opcode.name}, r{self.reg:d}, {self.arg:d}"
