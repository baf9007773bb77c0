"""Programs, their bit-string encoding and their enumeration by size.

Because every valid 9-bit chunk is smaller than ``448`` and every chunk below
``448`` is valid, the valid ``k``-bit strings in ascending numeric order are
exactly the base-448 numerals of length ``k / 9``. :func:`program_at` uses
this to jump straight to the ``idx``-th program of a size class.

"""

from __future__ import annotations

import itertools
import re
from typing import Any, Iterable, Iterator, Sequence, overload

from public import public

from ..errors import DomainError, InvalidCode, InvalidLength
from ..typehints import Operation
from .instruction import VALID_CHUNKS, WIDTH, Instruction

_CODE = re.compile(r"^(?P<length>[1-9]\d*):(?P<digits>[0-9a-f]+)$")


@public
class CrmProgram(Sequence[Instruction]):
    """An immutable, non-empty sequence of instructions.

    Examples
    --------
    >>> from haltbound.machine.instruction import Opcode
    >>> program = CrmProgram([Instruction(Opcode.INC), Instruction(Opcode.HALT)])
    >>> program.size_bits
    18
    >>> program
    CrmProgram([INC, r0, 0; HALT, r0, 0])

    """

    __slots__ = ("instructions",)

    def __init__(self, instructions: Iterable[Instruction]) -> None:
        self.instructions = tuple(instructions)
        if not self.instructions:
            raise InvalidLength("a program needs at least one instruction")

    @classmethod
    def from_chunks(cls, chunks: Iterable[int]) -> CrmProgram:
        """Construct a program from its 9-bit chunks."""
        return cls(map(Instruction.from_chunk, chunks))

    @property
    def size_bits(self) -> int:
        return WIDTH * len(self.instructions)

    @property
    def operations(self) -> list[Operation]:
        """Return the instructions as plain triples."""
        return [instruction.operation for instruction in self.instructions]

    @overload
    def __getitem__(self, index: int) -> Instruction:
        ...

    @overload
    def __getitem__(self, index: slice) -> Sequence[Instruction]:
        ...

    def __getitem__(self, index: int | slice) -> Instruction | Sequence[Instruction]:
        return self.instructions[index]

    def __len__(self) -> int:
        return len(self.instructions)

    def __iter__(self) -> Iterator[Instruction]:
        return iter(self.instructions)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, CrmProgram):
            return NotImplemented
        return self.instructions == other.instructions

    def __hash__(self) -> int:
        return hash(self.instructions)

    def __repr__(self) -> str:
        body = "; ".join(map(str, self.instructions))
        return f"{type(self).__name__}([{body}])"


@public
def decode(bits: str) -> CrmProgram:
    """Decode a string of ``0`` and ``1`` characters into a program.

    Raises
    ------
    InvalidLength
        If `bits` is empty or its length is not a multiple of 9.
    InvalidOpcode
        If some chunk starts with ``111``.
    InvalidCode
        If `bits` contains characters other than ``0`` and ``1``.

    Examples
    --------
    >>> decode("001010000")
    CrmProgram([INC, r1, 0])

    """
    if not bits or len(bits) % WIDTH:
        raise InvalidLength(
            f"bit string length must be a positive multiple of {WIDTH:d}, "
            f"got {len(bits):d}"
        )
    if bits.strip("01"):
        raise InvalidCode(f"not a bit string: {bits!r}")
    return CrmProgram.from_chunks(
        int(bits[i : i + WIDTH], 2) for i in range(0, len(bits), WIDTH)
    )


@public
def encode(program: CrmProgram) -> str:
    """Encode `program` as a string of ``0`` and ``1`` characters.

    Examples
    --------
    >>> encode(decode("000000000"))
    '000000000'

    """
    return "".join(f"{instruction.chunk:09b}" for instruction in program)


@public
def to_code(program: CrmProgram) -> str:
    """Serialize `program` as ``L:hex``.

    The bit string is left-aligned in ``ceil(L / 4)`` lowercase hex digits
    and padded with zero bits on the right.

    Examples
    --------
    >>> to_code(decode("000000000"))
    '9:000'
    >>> to_code(decode("001010000"))
    '9:280'

    """
    length = program.size_bits
    digits = -(-length // 4)
    value = int(encode(program), 2) << (4 * digits - length)
    return f"{length:d}:{value:0{digits:d}x}"


@public
def from_code(code: str) -> CrmProgram:
    """Parse the ``L:hex`` serialization written by :func:`to_code`.

    Raises
    ------
    InvalidCode
        If `code` is malformed, has the wrong number of digits or nonzero
        padding bits.

    """
    match = _CODE.match(code)
    if match is None:
        raise InvalidCode(f"not an L:hex program code: {code!r}")
    length = int(match.group("length"))
    digits = match.group("digits")
    if len(digits) != -(-length // 4):
        raise InvalidCode(f"expected {-(-length // 4):d} hex digits in {code!r}")
    padding = 4 * len(digits) - length
    value = int(digits, 16)
    if value & ((1 << padding) - 1):
        raise InvalidCode(f"nonzero padding bits in {code!r}")
    return decode(f"{value >> padding:0{length:d}b}")


def check_size(k: int) -> int:
    """Return the number of instructions in a `k`-bit program."""
    if k < WIDTH or k % WIDTH:
        raise DomainError(f"size must be a positive multiple of {WIDTH:d}, got {k:d}")
    return k // WIDTH


@public
def program_count(k: int) -> int:
    """Return the number of valid `k`-bit programs, ``448 ** (k / 9)``.

    Examples
    --------
    >>> program_count(18)
    200704

    """
    return VALID_CHUNKS ** check_size(k)


@public
def program_at(k: int, idx: int) -> CrmProgram:
    """Return the `idx`-th valid `k`-bit program in ascending bit-string order.

    Examples
    --------
    >>> program_at(18, 448) == decode("000000001" + "000000000")
    True

    """
    length = check_size(k)
    if not 0 <= idx < VALID_CHUNKS**length:
        raise DomainError(f"index {idx:d} out of range for {k:d}-bit programs")
    chunks = []
    for _ in range(length):
        idx, chunk = divmod(idx, VALID_CHUNKS)
        chunks.append(chunk)
    return CrmProgram.from_chunks(reversed(chunks))


@public
def enumerate_programs(k: int) -> Iterator[CrmProgram]:
    """Yield every valid `k`-bit program in ascending bit-string order.

    Examples
    --------
    >>> programs = enumerate_programs(9)
    >>> next(programs)
    CrmProgram([HALT, r0, 0])
    >>> sum(1 for _ in programs) + 1
    448

    """
    length = check_size(k)
    return map(
        CrmProgram.from_chunks,
        itertools.product(range(VALID_CHUNKS), repeat=length),
    )
