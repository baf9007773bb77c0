"""Various type definitions used throughout haltbound."""

from fractions import Fraction
from typing import Mapping, Tuple, Union

ExactRational = Fraction

#: A register file: exactly four unbounded non-negative integers.
Registers = Tuple[int, int, int, int]

#: A full machine state used for cycle detection: ``(pc, r0, r1, r2, r3)``.
FullState = Tuple[int, int, int, int, int]

#: One decoded instruction in its compact interpreter form.
Operation = Tuple[int, int, int]

JsonValue = Union[str, int, bool, None]
JsonRecord = Mapping[str, JsonValue]
