"""Exhaustive execution of every program of the configured sizes.

Programs are numbered globally: the programs of the smallest size come
first, in ascending bit-string order, followed by those of the next size
and so on. Contiguous ranges of indices are run by worker processes and a
single writer appends one JSON record per program to the output file in
index order, so the output depends only on the configuration.

Progress is recorded in a checkpoint holding the next index to write and a
hash of the configuration. The checkpoint is replaced atomically and only
after the records it covers have been flushed, so a crash at any point
leaves a checkpoint whose index is at most the number of complete records
in the output file. Resuming truncates the output to that many records and
continues from there.

"""

from __future__ import annotations

import bisect
import collections
import contextlib
import hashlib
import json
import logging
import multiprocessing
import os
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import (
    Any,
    Callable,
    Iterable,
    Iterator,
    Mapping,
    NamedTuple,
    Sequence,
    TypeVar,
)

import toolz
from public import public

from .complexity import ComplexityModel, Plain
from .errors import CheckpointMismatch, DomainError, MalformedRecord
from .horizon import budget_steps
from .machine.interpreter import RunOutcome, run
from .machine.program import (
    CrmProgram,
    check_size,
    program_at,
    program_count,
    to_code,
)
from .typehints import ExactRational, JsonRecord

logger = logging.getLogger(__name__)

#: Default upper bound on the step budget of every program.
DEFAULT_BUDGET_CAP = 10**6

#: Default number of records written between two checkpoints.
DEFAULT_CHECKPOINT_EVERY = 256

#: Default number of programs run by a worker per task.
DEFAULT_CHUNK_SIZE = 1024

#: The outcome tags, in the order they are reported.
OUTCOMES = ("halted", "exhausted", "cycle")

_A = TypeVar("_A")
_B = TypeVar("_B")

Mapper = Callable[[Callable[[_A], _B], Iterable[_A]], Iterator[_B]]


@public
class Segment(NamedTuple):
    """The block of global indices holding the programs of one size."""

    offset: int
    k: int
    count: int
    budget: int


@public
class CensusConfig:
    """The parameters of a census.

    Only the sizes, epsilon, budget cap, cycle detection flag, model and
    counter overhead determine the output; the remaining fields control how
    the work is carried out.

    Parameters
    ----------
    sizes
        Program sizes in bits, each a positive multiple of 9.
    epsilon
        The tolerated probability used to derive the budget of each size.
    output_path
        Where records are written, one JSON object per line.
    checkpoint_path
        Where progress is recorded.
    budget_cap
        The largest budget given to any program.
    detect_cycles
        Whether provable infinite loops stop a run early.
    model
        The complexity measure used to derive budgets.
    counter_overhead_bits
        The size ``s`` of the external step counter, added to each size when
        deriving its budget.
    workers
        The number of worker processes, 1 to run inline.
    checkpoint_every
        The number of records written between checkpoints.
    chunk_size
        The number of programs in one worker task.

    """

    __slots__ = (
        "sizes",
        "epsilon",
        "output_path",
        "checkpoint_path",
        "budget_cap",
        "detect_cycles",
        "model",
        "counter_overhead_bits",
        "workers",
        "checkpoint_every",
        "chunk_size",
    )

    def __init__(
        self,
        sizes: Iterable[int],
        epsilon: ExactRational,
        output_path: str | os.PathLike[str],
        checkpoint_path: str | os.PathLike[str],
        *,
        budget_cap: int = DEFAULT_BUDGET_CAP,
        detect_cycles: bool = True,
        model: ComplexityModel | None = None,
        counter_overhead_bits: int = 0,
        workers: int = 1,
        checkpoint_every: int = DEFAULT_CHECKPOINT_EVERY,
        chunk_size: int = DEFAULT_CHUNK_SIZE,
    ) -> None:
        self.sizes = tuple(sorted(set(sizes)))
        if not self.sizes:
            raise DomainError("a census needs at least one size")
        for k in self.sizes:
            check_size(k)
        if budget_cap < 1:
            raise DomainError(f"budget cap must be positive, got {budget_cap:d}")
        if counter_overhead_bits < 0:
            raise DomainError(
                f"counter overhead must be non-negative, got {counter_overhead_bits:d}"
            )
        for name, value in (
            ("workers", workers),
            ("checkpoint_every", checkpoint_every),
            ("chunk_size", chunk_size),
        ):
            if value < 1:
                raise DomainError(f"{name} must be positive, got {value:d}")
        if not 0 < epsilon < 1:
            raise DomainError(f"epsilon must lie strictly in (0, 1), got {epsilon}")
        self.epsilon = Fraction(epsilon)
        self.output_path = Path(output_path)
        self.checkpoint_path = Path(checkpoint_path)
        self.budget_cap = budget_cap
        self.detect_cycles = detect_cycles
        self.model = model if model is not None else Plain(0)
        self.counter_overhead_bits = counter_overhead_bits
        self.workers = workers
        self.checkpoint_every = checkpoint_every
        self.chunk_size = chunk_size

    def budget_for(self, k: int) -> int:
        """Return the step budget of the `k`-bit programs."""
        complexity = k + self.counter_overhead_bits
        return min(budget_steps(self.model, complexity, self.epsilon), self.budget_cap)

    def segments(self) -> tuple[Segment, ...]:
        """Return the index block of every size, in ascending order."""
        segments = []
        offset = 0
        for k in self.sizes:
            count = program_count(k)
            segments.append(Segment(offset, k, count, self.budget_for(k)))
            offset += count
        return tuple(segments)

    def config_hash(self) -> str:
        """Return the SHA-256 of the fields that determine the output."""
        document = {
            "budget_cap": str(self.budget_cap),
            "counter_overhead_bits": self.counter_overhead_bits,
            "detect_cycles": self.detect_cycles,
            "epsilon": str(self.epsilon),
            "model": self.model.describe(),
            "sizes": list(self.sizes),
        }
        canonical = json.dumps(document, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(sizes={list(self.sizes)}, "
            f"epsilon={self.epsilon}, budget_cap={self.budget_cap:d}, "
            f"detect_cycles={self.detect_cycles}, model={self.model!r}, "
            f"counter_overhead_bits={self.counter_overhead_bits:d})"
        )


def _decimal(record: Mapping[str, Any], field: str) -> int:
    value = record[field]
    if not isinstance(value, str) or not value.isdigit():
        raise ValueError(f"{field} must be a decimal string, got {value!r}")
    return int(value)


def _integer(record: Mapping[str, Any], field: str) -> int:
    value = record[field]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{field} must be an integer, got {value!r}")
    return value


@public
class CensusRecord(NamedTuple):
    """The result of running one program.

    Attributes
    ----------
    idx
        The global enumeration index.
    k
        The program size in bits.
    code
        The ``L:hex`` serialization of the program.
    outcome
        One of ``"halted"``, ``"exhausted"`` or ``"cycle"``.
    t
        The number of steps, when the program halted.
    bitlen_t
        The bit length of `t`, when the program halted.
    budget
        The step budget the program ran with.

    """

    idx: int
    k: int
    code: str
    outcome: str
    t: int | None
    bitlen_t: int | None
    budget: int

    @classmethod
    def from_outcome(
        cls, idx: int, program: CrmProgram, outcome: RunOutcome, budget: int
    ) -> CensusRecord:
        t = getattr(outcome, "t", None)
        return cls(
            idx=idx,
            k=program.size_bits,
            code=to_code(program),
            outcome=outcome.tag,
            t=t,
            bitlen_t=None if t is None else t.bit_length(),
            budget=budget,
        )

    def to_json(self) -> str:
        """Serialize the record as one line of JSON, without the newline.

        Integers that may exceed 64 bits are written as decimal strings.

        """
        document: dict[str, Any] = {
            "idx": self.idx,
            "k": self.k,
            "code": self.code,
            "outcome": self.outcome,
        }
        if self.t is not None:
            document["t"] = str(self.t)
            document["bitlen_t"] = self.bitlen_t
        document["budget"] = str(self.budget)
        return json.dumps(document, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str, lineno: int) -> CensusRecord:
        """Parse one line written by :meth:`to_json`.

        Raises
        ------
        MalformedRecord
            If the line is not a consistent census record.

        """
        try:
            document: JsonRecord = json.loads(line)
            if not isinstance(document, dict):
                raise ValueError("not a JSON object")
            outcome = document["outcome"]
            if outcome not in OUTCOMES:
                raise ValueError(f"unknown outcome {outcome!r}")
            code = document["code"]
            if not isinstance(code, str):
                raise ValueError(f"code must be a string, got {code!r}")
            budget = _decimal(document, "budget")
            if outcome == "halted":
                t: int | None = _decimal(document, "t")
                bitlen_t: int | None = _integer(document, "bitlen_t")
                if t < 1 or t > budget or bitlen_t != t.bit_length():
                    raise ValueError(f"inconsistent step count t == {t:d}")
            elif "t" in document or "bitlen_t" in document:
                raise ValueError(f"step count given for outcome {outcome!r}")
            else:
                t = bitlen_t = None
            return cls(
                idx=_integer(document, "idx"),
                k=_integer(document, "k"),
                code=code,
                outcome=str(outcome),
                t=t,
                bitlen_t=bitlen_t,
                budget=budget,
            )
        except KeyError as e:
            raise MalformedRecord(lineno, f"missing field {e.args[0]!r}") from e
        except ValueError as e:
            raise MalformedRecord(lineno, str(e)) from e


@public
class Checkpoint(NamedTuple):
    """The configuration hash and the index of the next record to write."""

    config_hash: str
    next_idx: int


@public
class CensusSummary(NamedTuple):
    """Counts of the outcomes of a completed census.

    Attributes
    ----------
    total
        The number of records in the output.
    resumed_from
        The index the run started at, 0 for a fresh run.
    counts
        For every size, the number of records of every outcome.

    """

    total: int
    resumed_from: int
    counts: Mapping[int, Mapping[str, int]]


class _Job(NamedTuple):
    start: int
    stop: int
    segments: Sequence[Segment]
    detect_cycles: bool


def _run_job(job: _Job) -> list[CensusRecord]:
    offsets = [segment.offset for segment in job.segments]
    records = []
    for idx in range(job.start, job.stop):
        segment = job.segments[bisect.bisect_right(offsets, idx) - 1]
        program = program_at(segment.k, idx - segment.offset)
        outcome = run(program, segment.budget, job.detect_cycles)
        records.append(CensusRecord.from_outcome(idx, program, outcome, segment.budget))
    return records


@contextlib.contextmanager
def _mapper(workers: int) -> Iterator[Mapper[_Job, list[CensusRecord]]]:
    if workers == 1:
        yield map
    else:
        with multiprocessing.Pool(workers) as pool:
            yield pool.imap


def _read_checkpoint(path: Path) -> Checkpoint | None:
    if not path.exists():
        return None
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
        return Checkpoint(str(document["config_hash"]), int(document["next_idx"]))
    except (KeyError, TypeError, ValueError) as e:
        raise CheckpointMismatch(f"unreadable checkpoint {str(path)!r}: {e}") from e


def _write_checkpoint(path: Path, checkpoint: Checkpoint) -> None:
    document = json.dumps(checkpoint._asdict(), sort_keys=True)
    fd, temporary = tempfile.mkstemp(
        dir=path.parent, prefix=f".{path.name}.", suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(document)
            f.flush()
            os.fsync(f.fileno())
        os.replace(temporary, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(temporary)
        raise


def _empty_counts(config: CensusConfig) -> dict[int, collections.Counter[str]]:
    return {k: collections.Counter() for k in config.sizes}


def _truncate_output(
    config: CensusConfig, next_idx: int
) -> dict[int, collections.Counter[str]]:
    """Cut the output down to its first `next_idx` records and count them."""
    counts = _empty_counts(config)
    path = config.output_path
    if not path.exists():
        if next_idx:
            raise CheckpointMismatch(
                f"checkpoint expects {next_idx:d} records but {str(path)!r} is missing"
            )
        path.touch()
        return counts
    offset = written = 0
    with path.open("r+b") as f:
        for line in f:
            if written == next_idx or not line.endswith(b"\n"):
                break
            record = CensusRecord.from_json(line.decode("utf-8"), written + 1)
            if record.idx != written:
                raise MalformedRecord(
                    written + 1, f"expected index {written:d}, got {record.idx:d}"
                )
            counts[record.k][record.outcome] += 1
            offset += len(line)
            written += 1
        if written != next_idx:
            raise CheckpointMismatch(
                f"checkpoint expects {next_idx:d} records but {str(path)!r} "
                f"holds {written:d}"
            )
        f.truncate(offset)
    return counts


def _execute(
    config: CensusConfig, start: int, counts: dict[int, collections.Counter[str]]
) -> CensusSummary:
    segments = config.segments()
    total = segments[-1].offset + segments[-1].count
    config_hash = config.config_hash()
    for segment in segments:
        logger.info(
            "size %d: %d programs with budget %d",
            segment.k,
            segment.count,
            segment.budget,
        )
    logger.info(
        "running %d of %d programs with %d worker(s)",
        total - start,
        total,
        config.workers,
    )

    # a chunk never spans a checkpoint boundary
    chunk_size = min(config.chunk_size, config.checkpoint_every)
    jobs = (
        _Job(chunk[0], chunk[-1] + 1, segments, config.detect_cycles)
        for chunk in toolz.partition_all(chunk_size, range(start, total))
    )
    next_idx = start
    unsaved = 0
    with config.output_path.open("a", encoding="utf-8", newline="\n") as out:
        with _mapper(config.workers) as mapper:
            for records in mapper(_run_job, jobs):
                logger.debug(
                    "writing records %d to %d", records[0].idx, records[-1].idx
                )
                for record in records:
                    out.write(record.to_json())
                    out.write("\n")
                    counts[record.k][record.outcome] += 1
                next_idx = records[-1].idx + 1
                unsaved += len(records)
                if unsaved >= config.checkpoint_every:
                    out.flush()
                    os.fsync(out.fileno())
                    _write_checkpoint(
                        config.checkpoint_path, Checkpoint(config_hash, next_idx)
                    )
                    logger.info("checkpoint at %d of %d", next_idx, total)
                    unsaved = 0
        out.flush()
        os.fsync(out.fileno())
    _write_checkpoint(config.checkpoint_path, Checkpoint(config_hash, next_idx))
    logger.info("census complete: %d records", next_idx)
    return CensusSummary(
        total=next_idx,
        resumed_from=start,
        counts={
            k: {outcome: counter[outcome] for outcome in OUTCOMES}
            for k, counter in counts.items()
        },
    )


def _resume_from(config: CensusConfig, checkpoint: Checkpoint) -> CensusSummary:
    if checkpoint.config_hash != config.config_hash():
        raise CheckpointMismatch(
            f"checkpoint {str(config.checkpoint_path)!r} belongs to a different "
            "configuration"
        )
    logger.info("resuming census at index %d", checkpoint.next_idx)
    counts = _truncate_output(config, checkpoint.next_idx)
    return _execute(config, checkpoint.next_idx, counts)


@public
def run_census(config: CensusConfig) -> CensusSummary:
    """Run every program of the configured sizes and record the outcomes.

    When a checkpoint matching `config` exists the census resumes from it,
    otherwise the output file is started afresh.

    Raises
    ------
    CheckpointMismatch
        If an existing checkpoint belongs to a different configuration.

    """
    checkpoint = _read_checkpoint(config.checkpoint_path)
    if checkpoint is not None:
        return _resume_from(config, checkpoint)
    logger.info("starting census %s", config.config_hash()[:12])
    config.output_path.write_bytes(b"")
    return _execute(config, 0, _empty_counts(config))


@public
def resume(config: CensusConfig) -> CensusSummary:
    """Continue an interrupted census from its checkpoint.

    Raises
    ------
    CheckpointMismatch
        If there is no checkpoint or it belongs to a different configuration.

    """
    checkpoint = _read_checkpoint(config.checkpoint_path)
    if checkpoint is None:
        raise CheckpointMismatch(
            f"no checkpoint at {str(config.checkpoint_path)!r} to resume from"
        )
    return _resume_from(config, checkpoint)
