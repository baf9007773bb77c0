from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Callable, Tuple

import pytest

from haltbound.census import CensusConfig
from haltbound.complexity import Plain, SelfDelimiting
from haltbound.machine.interpreter import MachineState, step
from haltbound.machine.program import CrmProgram, encode

Outcome = Tuple[str, int]


@pytest.fixture(scope="session")  # type: ignore[misc]
def plain() -> Plain:
    return Plain(0)


@pytest.fixture(scope="session")  # type: ignore[misc]
def sd() -> SelfDelimiting:
    return SelfDelimiting()


@pytest.fixture  # type: ignore[misc]
def make_config(tmp_path: Path) -> Callable[..., CensusConfig]:
    def make(name: str = "census", **kwargs: object) -> CensusConfig:
        kwargs.setdefault("checkpoint_every", 64)
        kwargs.setdefault("chunk_size", 32)
        return CensusConfig(
            kwargs.pop("sizes", [9]),  # type: ignore[arg-type]
            kwargs.pop("epsilon", Fraction(1, 2**10)),  # type: ignore[arg-type]
            tmp_path / f"{name}.jsonl",
            tmp_path / f"{name}.checkpoint.json",
            **kwargs,  # type: ignore[arg-type]
        )

    return make


def reference_run(bits: str, budget: int) -> Outcome:
    """Run the program encoded by `bits` remembering every state it visits.

    Returns ``("halted", t)``, ``("exhausted", budget)`` or
    ``("cycle", period)``.

    """
    program = []
    for i in range(0, len(bits), 9):
        opcode = int(bits[i : i + 3], 2)
        assert opcode != 7
        reg = int(bits[i + 3 : i + 5], 2)
        arg = int(bits[i + 5 : i + 9], 2)
        if opcode in (4, 5) and arg >= 8:
            arg -= 16
        program.append((opcode, reg, arg))

    registers = [0] * 4
    pc = 0
    seen = {(0, 0, 0, 0, 0): 0}
    for t in range(1, budget + 1):
        opcode, reg, arg = program[pc]
        if opcode == 0:
            return "halted", t
        if opcode == 1:
            registers[reg] = registers[reg] + 1
            pc = pc + 1
        elif opcode == 2:
            registers[reg] = registers[reg] - 1 if registers[reg] > 0 else 0
            pc = pc + 1
        elif opcode == 3:
            registers[reg] = registers[reg] + registers[reg]
            pc = pc + 1
        elif opcode == 4:
            pc = pc + arg if registers[reg] == 0 else pc + 1
        elif opcode == 5:
            pc = pc + arg if registers[reg] != 0 else pc + 1
        else:
            registers[reg] = arg
            pc = pc + 1
        if pc < 0 or pc >= len(program):
            return "halted", t
        state = (pc, *registers)
        if state in seen:
            return "cycle", t - seen[state]
        seen[state] = t
    return "exhausted", budget


def reference_outcome(program: CrmProgram, budget: int) -> Outcome:
    return reference_run(encode(program), budget)


def replay(program: CrmProgram, steps: int) -> MachineState:
    """Return the state of `program` after `steps` steps."""
    state = MachineState()
    for _ in range(steps):
        state = step(program, state)
        assert not state.halted
    return state
