"""The counting register machine."""

from .instruction import Instruction, Opcode  # noqa: F401
from .interpreter import (  # noqa: F401
    BudgetExhausted,
    CycleDetected,
    Halted,
    MachineState,
    RunOutcome,
    run,
    step,
)
from .program import (  # noqa: F401
    CrmProgram,
    decode,
    encode,
    enumerate_programs,
    from_code,
    program_at,
    program_count,
    to_code,
)
from .witness import WitnessReport, runtime, witness, witness_report  # noqa: F401
