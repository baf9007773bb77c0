"""Step-counting execution of programs.

Semantics of one step, where ``L`` is the number of instructions:

* ``HALT`` stops the machine; executing it counts as a step.
* ``INC r`` adds one to ``r``, ``DEC r`` subtracts one saturating at zero,
  ``DBL r`` doubles ``r`` and ``LOADC r, imm`` stores ``imm`` in ``r``.
* ``JZ r, off`` and ``JNZ r, off`` add ``off`` to the program counter when
  ``r`` is zero, respectively nonzero, and fall through otherwise.
* A program counter outside of ``[0, L)`` stops the machine.

Registers are unbounded non-negative integers and all start at zero.

Non-termination is detected with Brent's algorithm on the full machine
state, the program counter together with every register, which needs no
hashing and constant memory.

"""

from __future__ import annotations

from typing import NamedTuple, Union

from public import public

from ..errors import DomainError
from ..typehints import FullState, Registers
from .instruction import Opcode
from .program import CrmProgram

_HALT = int(Opcode.HALT)
_INC = int(Opcode.INC)
_DEC = int(Opcode.DEC)
_DBL = int(Opcode.DBL)
_JZ = int(Opcode.JZ)
_JNZ = int(Opcode.JNZ)
_LOADC = int(Opcode.LOADC)


@public
class MachineState(NamedTuple):
    """A snapshot of the machine.

    Attributes
    ----------
    pc
        The index of the next instruction.
    registers
        The four register values.
    steps
        The number of instructions executed so far.
    halted
        Whether the machine has stopped.

    """

    pc: int = 0
    registers: Registers = (0, 0, 0, 0)
    steps: int = 0
    halted: bool = False


@public
class Halted(NamedTuple):
    """The program halted after exactly `t` steps."""

    t: int

    @property
    def bitlen_t(self) -> int:
        return self.t.bit_length()

    tag = "halted"


@public
class BudgetExhausted(NamedTuple):
    """The program was still running after `budget` steps."""

    budget: int

    tag = "exhausted"


@public
class CycleDetected(NamedTuple):
    """The program provably never halts.

    The full state after `start` steps recurs after ``start + period``
    steps, and `period` is the exact length of the cycle.

    """

    start: int
    period: int

    tag = "cycle"


RunOutcome = Union[Halted, BudgetExhausted, CycleDetected]
public(RunOutcome=RunOutcome)


@public
def step(program: CrmProgram, state: MachineState) -> MachineState:
    """Execute one instruction of `program` in `state`.

    Examples
    --------
    >>> from haltbound.machine.program import decode
    >>> step(decode("001000000"), MachineState())
    MachineState(pc=1, registers=(1, 0, 0, 0), steps=1, halted=True)

    """
    if state.halted:
        raise DomainError("cannot step a halted machine")
    if not 0 <= state.pc < len(program):
        raise DomainError(f"program counter {state.pc:d} is out of range")
    opcode, reg, arg = program[state.pc].operation
    registers = list(state.registers)
    pc = state.pc + 1
    if opcode == _HALT:
        return MachineState(state.pc, state.registers, state.steps + 1, True)
    elif opcode == _INC:
        registers[reg] += 1
    elif opcode == _DEC:
        registers[reg] = max(registers[reg] - 1, 0)
    elif opcode == _DBL:
        registers[reg] *= 2
    elif opcode == _LOADC:
        registers[reg] = arg
    elif (opcode == _JZ) == (registers[reg] == 0):
        pc = state.pc + arg
    return MachineState(
        pc,
        (registers[0], registers[1], registers[2], registers[3]),
        state.steps + 1,
        not 0 <= pc < len(program),
    )


@public
def run(program: CrmProgram, budget: int, detect_cycles: bool = True) -> RunOutcome:
    """Run `program` from the zero state for at most `budget` steps.

    Parameters
    ----------
    program
        The program to execute.
    budget
        The largest number of steps to execute, at least 1.
    detect_cycles
        Whether to stop early on a provable infinite loop.

    Examples
    --------
    >>> from haltbound.machine.program import decode
    >>> run(decode("001000000" "000000000"), 10)
    Halted(t=2)
    >>> run(decode("100000000"), 1000)
    CycleDetected(start=0, period=1)
    >>> run(decode("100000000"), 1000, detect_cycles=False)
    BudgetExhausted(budget=1000)

    """
    if budget < 1:
        raise DomainError(f"budget must be at least 1, got {budget:d}")

    code = program.operations
    length = len(code)
    regs = [0, 0, 0, 0]
    pc = 0
    steps = 0

    # Brent: the saved state is compared against every later state until
    # `limit` steps have passed, then replaced and the limit doubled
    saved: FullState = (0, 0, 0, 0, 0)
    saved_steps = 0
    limit = 1

    while steps < budget:
        opcode, reg, arg = code[pc]
        steps += 1
        if opcode == _HALT:
            return Halted(steps)
        elif opcode == _INC:
            regs[reg] += 1
            pc += 1
        elif opcode == _DEC:
            if regs[reg]:
                regs[reg] -= 1
            pc += 1
        elif opcode == _DBL:
            regs[reg] <<= 1
            pc += 1
        elif opcode == _LOADC:
            regs[reg] = arg
            pc += 1
        elif (opcode == _JZ) == (not regs[reg]):
            pc += arg
        else:
            pc += 1

        if not 0 <= pc < length:
            return Halted(steps)

        if detect_cycles:
            current = (pc, regs[0], regs[1], regs[2], regs[3])
            if current == saved:
                return CycleDetected(saved_steps, steps - saved_steps)
            if steps - saved_steps == limit:
                saved = current
                saved_steps = steps
                limit <<= 1

    return BudgetExhausted(budget)
