import json
from fractions import Fraction
from pathlib import Path
from typing import Callable

import pytest

from haltbound import census
from haltbound.census import (
    DEFAULT_BUDGET_CAP,
    CensusConfig,
    CensusRecord,
    Checkpoint,
    Segment,
    resume,
    run_census,
)
from haltbound.complexity import Plain, SelfDelimiting
from haltbound.errors import CheckpointMismatch, DomainError, MalformedRecord
from haltbound.horizon import budget_steps
from haltbound.machine import BudgetExhausted, CycleDetected, Halted, decode

MakeConfig = Callable[..., CensusConfig]

GOLDEN_COUNTS = {9: {"halted": 444, "exhausted": 0, "cycle": 4}}


def _records(config: CensusConfig) -> list[dict]:
    with config.output_path.open(encoding="utf-8") as f:
        return [json.loads(line) for line in f]


def test_golden_census(make_config: MakeConfig) -> None:
    config = make_config()
    assert config.budget_for(9) == 2**19 - 1
    summary = run_census(config)
    assert summary.total == 448
    assert summary.resumed_from == 0
    assert summary.counts == GOLDEN_COUNTS

    records = _records(config)
    assert [record["idx"] for record in records] == list(range(448))
    assert records[0] == {
        "idx": 0,
        "k": 9,
        "code": "9:000",
        "outcome": "halted",
        "t": "1",
        "bitlen_t": 1,
        "budget": "524287",
    }
    assert records[256] == {
        "idx": 256,
        "k": 9,
        "code": "9:800",
        "outcome": "cycle",
        "budget": "524287",
    }
    cycles = [record["code"] for record in records if record["outcome"] == "cycle"]
    assert cycles == ["9:800", "9:880", "9:900", "9:980"]

    checkpoint = json.loads(config.checkpoint_path.read_text(encoding="utf-8"))
    assert checkpoint == {"config_hash": config.config_hash(), "next_idx": 448}


def test_repeated_runs_are_identical(make_config: MakeConfig) -> None:
    first = make_config("first")
    second = make_config("second", chunk_size=7, checkpoint_every=100)
    run_census(first)
    run_census(second)
    assert first.output_path.read_bytes() == second.output_path.read_bytes()


def test_workers_do_not_change_the_output(make_config: MakeConfig) -> None:
    inline = make_config("inline")
    pooled = make_config("pooled", workers=2)
    assert inline.config_hash() == pooled.config_hash()
    run_census(inline)
    summary = run_census(pooled)
    assert summary.counts == GOLDEN_COUNTS
    assert inline.output_path.read_bytes() == pooled.output_path.read_bytes()


def test_resume_after_crash(
    make_config: MakeConfig, monkeypatch: pytest.MonkeyPatch
) -> None:
    reference = make_config("reference")
    run_census(reference)

    config = make_config("crashed")
    write_checkpoint = census._write_checkpoint
    calls = []

    def crash_on_third_call(path: Path, checkpoint: Checkpoint) -> None:
        calls.append(checkpoint.next_idx)
        if len(calls) == 3:
            raise OSError("simulated crash")
        write_checkpoint(path, checkpoint)

    monkeypatch.setattr(census, "_write_checkpoint", crash_on_third_call)
    with pytest.raises(OSError, match="simulated crash"):
        run_census(config)
    assert calls == [64, 128, 192]
    assert len(_records(config)) == 192

    summary = resume(config)
    assert summary.resumed_from == 128
    assert summary.total == 448
    assert summary.counts == GOLDEN_COUNTS
    assert config.output_path.read_bytes() == reference.output_path.read_bytes()


def test_default_interval_checkpoints_the_smallest_census(
    make_config: MakeConfig, monkeypatch: pytest.MonkeyPatch
) -> None:
    reference = make_config("reference")
    run_census(reference)

    config = make_config(
        "crashed",
        checkpoint_every=census.DEFAULT_CHECKPOINT_EVERY,
        chunk_size=census.DEFAULT_CHUNK_SIZE,
    )
    write_checkpoint = census._write_checkpoint
    calls = []

    def crash_on_final_checkpoint(path: Path, checkpoint: Checkpoint) -> None:
        calls.append(checkpoint.next_idx)
        if checkpoint.next_idx == 448:
            raise OSError("simulated crash")
        write_checkpoint(path, checkpoint)

    monkeypatch.setattr(census, "_write_checkpoint", crash_on_final_checkpoint)
    with pytest.raises(OSError, match="simulated crash"):
        run_census(config)
    assert calls == [256, 448]

    summary = resume(config)
    assert summary.resumed_from == 256
    assert summary.counts == GOLDEN_COUNTS
    assert config.output_path.read_bytes() == reference.output_path.read_bytes()


def test_resume_drops_a_partial_line(make_config: MakeConfig) -> None:
    config = make_config()
    run_census(config)
    expected = config.output_path.read_bytes()
    with config.output_path.open("a", encoding="utf-8") as f:
        f.write('{"idx":448,"k":9,"co')
    summary = resume(config)
    assert summary.total == 448
    assert summary.counts == GOLDEN_COUNTS
    assert config.output_path.read_bytes() == expected


def test_run_census_resumes_from_a_matching_checkpoint(
    make_config: MakeConfig,
) -> None:
    config = make_config()
    run_census(config)
    summary = run_census(config)
    assert summary.resumed_from == 448
    assert summary.counts == GOLDEN_COUNTS


def test_resume_without_checkpoint(make_config: MakeConfig) -> None:
    with pytest.raises(CheckpointMismatch):
        resume(make_config())


def test_checkpoint_of_another_config(make_config: MakeConfig) -> None:
    run_census(make_config())
    other = make_config(epsilon=Fraction(1, 2**12))
    assert other.output_path == make_config().output_path
    with pytest.raises(CheckpointMismatch):
        run_census(other)
    with pytest.raises(CheckpointMismatch):
        resume(other)


def test_checkpoint_ahead_of_output(make_config: MakeConfig) -> None:
    config = make_config()
    run_census(config)
    config.checkpoint_path.write_text(
        json.dumps({"config_hash": config.config_hash(), "next_idx": 500}),
        encoding="utf-8",
    )
    with pytest.raises(CheckpointMismatch):
        resume(config)


def test_unreadable_checkpoint(make_config: MakeConfig) -> None:
    config = make_config()
    config.checkpoint_path.write_text("{", encoding="utf-8")
    with pytest.raises(CheckpointMismatch):
        run_census(config)


def test_config_hash(make_config: MakeConfig) -> None:
    base = make_config()
    assert base.config_hash() == make_config(workers=3, chunk_size=5).config_hash()
    for changed in (
        make_config(epsilon=Fraction(1, 3)),
        make_config(budget_cap=1000),
        make_config(detect_cycles=False),
        make_config(model=SelfDelimiting()),
        make_config(counter_overhead_bits=2),
        make_config(sizes=[9, 18]),
    ):
        assert changed.config_hash() != base.config_hash()


def test_budget_law(make_config: MakeConfig) -> None:
    epsilon = Fraction(1, 2**10)
    assert make_config().budget_for(9) == budget_steps(Plain(0), 9, epsilon)
    assert make_config(counter_overhead_bits=3, budget_cap=2**30).budget_for(
        9
    ) == budget_steps(Plain(0), 12, epsilon)
    assert budget_steps(Plain(0), 12, epsilon) > DEFAULT_BUDGET_CAP
    assert make_config(counter_overhead_bits=3).budget_for(9) == DEFAULT_BUDGET_CAP
    assert make_config(budget_cap=100).budget_for(9) == 100


def test_segments(make_config: MakeConfig) -> None:
    config = make_config(sizes=[18, 9, 9], budget_cap=1000)
    assert config.sizes == (9, 18)
    assert config.segments() == (
        Segment(0, 9, 448, 1000),
        Segment(448, 18, 448**2, 1000),
    )


@pytest.mark.parametrize(  # type: ignore[misc]
    "kwargs",
    [
        {"sizes": []},
        {"sizes": [10]},
        {"epsilon": 0},
        {"epsilon": 1},
        {"budget_cap": 0},
        {"counter_overhead_bits": -1},
        {"workers": 0},
        {"checkpoint_every": 0},
        {"chunk_size": 0},
    ],
)
def test_invalid_config(make_config: MakeConfig, kwargs: dict) -> None:
    with pytest.raises(DomainError):
        make_config(**kwargs)


def test_no_cycle_detection(make_config: MakeConfig) -> None:
    config = make_config(detect_cycles=False, budget_cap=50)
    summary = run_census(config)
    assert summary.counts == {9: {"halted": 444, "exhausted": 4, "cycle": 0}}


def test_record_from_outcome() -> None:
    program = decode("001000000" "000000000")
    record = CensusRecord.from_outcome(7, program, Halted(2), 100)
    assert record == CensusRecord(7, 18, "18:20000", "halted", 2, 2, 100)
    assert record.to_json() == (
        '{"idx":7,"k":18,"code":"18:20000","outcome":"halted",'
        '"t":"2","bitlen_t":2,"budget":"100"}'
    )
    assert CensusRecord.from_json(record.to_json(), 1) == record

    for outcome in (BudgetExhausted(100), CycleDetected(0, 1)):
        record = CensusRecord.from_outcome(7, program, outcome, 100)
        assert record.t is None and record.bitlen_t is None
        assert CensusRecord.from_json(record.to_json(), 1) == record


def test_large_step_counts_are_strings() -> None:
    t = 2**80 + 1
    record = CensusRecord(0, 9, "9:000", "halted", t, 81, 2**90)
    document = json.loads(record.to_json())
    assert document["t"] == str(t)
    assert document["budget"] == str(2**90)
    assert CensusRecord.from_json(record.to_json(), 1).t == t


@pytest.mark.parametrize(  # type: ignore[misc]
    "line",
    [
        "",
        "[]",
        "not json",
        '{"idx":0,"k":9,"code":"9:000","outcome":"halted","budget":"10"}',
        '{"idx":0,"k":9,"code":"9:000","outcome":"paused","budget":"10"}',
        '{"idx":0,"k":9,"code":"9:000","outcome":"halted","t":"3",'
        '"bitlen_t":1,"budget":"10"}',
        '{"idx":0,"k":9,"code":"9:000","outcome":"halted","t":"30",'
        '"bitlen_t":5,"budget":"10"}',
        '{"idx":0,"k":9,"code":"9:000","outcome":"cycle","t":"3","budget":"10"}',
        '{"idx":0,"k":9,"code":"9:000","outcome":"cycle","budget":10}',
        '{"idx":"0","k":9,"code":"9:000","outcome":"cycle","budget":"10"}',
    ],
)
def test_malformed_records(line: str) -> None:
    with pytest.raises(MalformedRecord) as excinfo:
        CensusRecord.from_json(line, 12)
    assert excinfo.value.lineno == 12
