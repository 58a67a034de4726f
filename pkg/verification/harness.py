import logging
import math
import random
from typing import Any, Iterable, Literal
from pydantic import BaseModel, Field, ValidationError, computed_field, model_validator
from systolic_queue import (
    Command,
    CommandKind,
    CompletionRecord,
    Element,
    InputError,
    QueueConfig,
    QueueEngine,
    Status,
    new_engine,
)
from .oracle import GoldenQueue

logger = logging.getLogger(__name__)

DEFAULT_OPS_RATIO = 2.0
# every N-th command is followed by a same-cycle peek in hostile mode
HOSTILE_PROBE_EVERY = 7

Schedule = Literal['interval', 'quiescent']


class OpMix(BaseModel):
    push_new: float = Field(default=0.28, ge=0)
    push_update: float = Field(default=0.32, ge=0)
    pop: float = Field(default=0.10, ge=0)
    delete_present: float = Field(default=0.15, ge=0)
    delete_absent: float = Field(default=0.05, ge=0)
    peek: float = Field(default=0.10, ge=0)

    @model_validator(mode='after')
    def check_not_all_zero(self) -> 'OpMix':
        if not any(self.weights().values()):
            raise ValueError("At least one operation weight must be positive")
        return self

    def weights(self) -> dict[str, float]:
        return self.model_dump()


class FuzzPlan(BaseModel):
    config: QueueConfig
    seed: int = 0
    n_ops: int | None = Field(default=None, ge=0)
    ratio: float = Field(default=DEFAULT_OPS_RATIO, gt=0)
    mix: OpMix = Field(default_factory=OpMix)
    # upper bound of generated DATA values; a narrow range produces many ties
    data_max: int | None = Field(default=None, ge=0)
    schedule: Schedule = 'interval'
    checkpoint_every: int | None = Field(default=None, ge=1)
    hostile: bool = False
    inject_fault: bool = False

    @model_validator(mode='after')
    def fill_defaults(self) -> 'FuzzPlan':
        if self.n_ops is None:
            self.n_ops = math.ceil(self.ratio * self.config.capacity)
        if self.data_max is None:
            self.data_max = min(self.config.max_data, 2 * self.config.capacity)
        elif self.data_max > self.config.max_data:
            raise ValueError(f"data_max {self.data_max} does not fit in {self.config.data_width} bits")
        if self.checkpoint_every is None:
            self.checkpoint_every = self.config.capacity
        return self


class Mismatch(BaseModel):
    op_index: int
    command: str
    expected: str
    actual: str
    # commands up to and including the divergent one
    prefix: list[str] = Field(default_factory=list)


class Report(BaseModel):
    seed: int
    schedule: str
    ops: int = 0
    cycles: int = 0
    mismatches: list[Mismatch] = Field(default_factory=list)
    violations: list[str] = Field(default_factory=list)
    max_occupancy: int = 0
    fault: str | None = None

    @computed_field
    @property
    def passed(self) -> bool:
        return not self.mismatches and not self.violations

    def summary(self) -> str:
        verdict = 'PASS' if self.passed else 'FAIL'
        return (
            f"{verdict} seed={self.seed} schedule={self.schedule} ops={self.ops} cycles={self.cycles} "
            f"mismatches={len(self.mismatches)} violations={len(self.violations)} "
            f"max_occupancy={self.max_occupancy}"
        )


def _fresh_id(rng: random.Random, shadow: GoldenQueue, max_id: int) -> int | None:
    if len(shadow) >= max_id:
        return None
    while True:
        candidate = rng.randint(1, max_id)
        if not shadow.contains(candidate):
            return candidate


def generate_commands(plan: FuzzPlan) -> list[Command]:
    """
    Seeded command stream. A shadow golden queue tracks which IDs are live so
    that updates and deletes can target present IDs. An update or delete
    drawn against an empty queue becomes a fresh push and is owed: it is
    issued on the next step the queue holds something, so the realized mix
    follows the weights. Other infeasible picks fall back to a fresh push,
    or to a pop when the queue is full. Hostile plans never defer.
    """
    cfg = plan.config
    rng = random.Random(plan.seed)
    shadow = GoldenQueue(capacity=cfg.capacity)
    kinds, weights = zip(*plan.mix.weights().items())
    owed: list[str] = []
    commands = []

    for _ in range(plan.n_ops):
        empty = len(shadow) == 0
        if owed and not empty:
            kind = owed.pop(0)
        else:
            kind = rng.choices(kinds, weights=weights)[0]
        full = len(shadow) >= cfg.capacity
        data = rng.randint(0, plan.data_max)

        if kind in ('push_update', 'delete_present') and empty:
            if not plan.hostile:
                owed.append(kind)
            kind = 'pop' if plan.hostile else 'push_new'
        if kind == 'pop' and empty and not plan.hostile:
            kind = 'push_new'
        if kind == 'push_new' and full and not plan.hostile:
            kind = 'pop'

        if kind == 'push_new':
            new_id = _fresh_id(rng, shadow, cfg.max_id)
            cmd = Command.push(new_id, data) if new_id is not None else Command.pop()
        elif kind == 'push_update':
            cmd = Command.push(rng.choice(shadow.entries).id, data)
        elif kind == 'pop':
            cmd = Command.pop()
        elif kind == 'delete_present':
            cmd = Command.delete(rng.choice(shadow.entries).id)
        elif kind == 'delete_absent':
            absent_id = _fresh_id(rng, shadow, cfg.max_id)
            cmd = Command.delete(absent_id) if absent_id is not None else Command.peek()
        else:
            cmd = Command.peek()

        shadow.apply(cmd)
        commands.append(cmd)
    return commands


def check_invariants(engine: QueueEngine) -> list[str]:
    if not engine.is_quiescent:
        return [f"engine not quiescent at cycle {engine.cycle}"]
    violations = []
    flat = [element for block in engine.blocks for element in block.slots]
    seen_ids: set[int] = set()
    first_empty = None
    previous: Element | None = None
    for position, element in enumerate(flat):
        if not element.valid:
            if first_empty is None:
                first_empty = position
            continue
        if first_empty is not None:
            violations.append(f"empty slot {first_empty} precedes valid element {element} at slot {position}")
            first_empty = None
        if previous is not None and element.data < previous.data:
            violations.append(f"order broken at slot {position}: {previous} before {element}")
        if element.id in seen_ids:
            violations.append(f"duplicate id {element.id} at slot {position}")
        seen_ids.add(element.id)
        previous = element
    if seen_ids != engine.membership:
        violations.append(
            f"membership mismatch: array holds {len(seen_ids)} ids, engine tracks {engine.occupancy}"
        )
    return violations


def _describe(status: Status, element: Element | None) -> str:
    return status.value if element is None else f"{status.value} {element}"


class _Run:
    """One fuzz execution: engine and oracle fed the same stream, compared at checkpoints."""

    def __init__(self, plan: FuzzPlan, commands: list[Command]) -> None:
        self.plan = plan
        self.commands = commands
        self.engine = new_engine(plan.config)
        self.oracle = GoldenQueue(capacity=plan.config.capacity)
        self.report = Report(seed=plan.seed, schedule=plan.schedule)
        self.tracked: list[CompletionRecord] = []
        self._pending: list[tuple[int, CompletionRecord, Status, Element | None]] = []

    def execute(self) -> tuple[Report, list[CompletionRecord]]:
        for index, cmd in enumerate(self.commands):
            if self.plan.schedule == 'quiescent':
                self.engine.run_until_quiescent()
            self.engine.wait_for_port()
            record = self.engine.issue(cmd)
            status, element = self.oracle.apply(cmd)
            self.tracked.append(record)
            self._pending.append((index, record, status, element))
            self.report.ops += 1

            if self.plan.hostile and index % HOSTILE_PROBE_EVERY == HOSTILE_PROBE_EVERY - 1:
                self._probe_busy(index)
            if (index + 1) % self.plan.checkpoint_every == 0:
                if not self._checkpoint(index):
                    break
        else:
            self._checkpoint(len(self.commands) - 1)

        self.report.cycles = self.engine.cycle
        self.report.max_occupancy = self.engine.stats.max_occupancy
        return self.report, self.tracked

    def _probe_busy(self, index: int) -> None:
        probe = self.engine.issue(Command.peek())
        if probe.status is not Status.BUSY:
            self._mismatch(index, 'peek (busy probe)', Status.BUSY.value, _describe(probe.status, probe.element))

    def _mismatch(self, index: int, command: str, expected: str, actual: str) -> None:
        prefix = [str(cmd) for cmd in self.commands[:index + 1]]
        self.report.mismatches.append(
            Mismatch(op_index=index, command=command, expected=expected, actual=actual, prefix=prefix)
        )
        logger.warning(f"Seed {self.plan.seed}: op {index} {command} expected {expected}, got {actual}")

    def _checkpoint(self, index: int) -> bool:
        """Quiesce and compare everything; False once a divergence has been recorded."""
        self.engine.run_until_quiescent()
        for op_index, record, status, element in self._pending:
            actual = (record.status, record.element)
            if record.command.kind in (CommandKind.PUSH, CommandKind.DELETE):
                expected = (status, None)
            else:
                expected = (status, element)
            if actual != expected:
                self._mismatch(op_index, str(record.command), _describe(*expected), _describe(*actual))
        self._pending.clear()

        if self.plan.inject_fault and self.report.fault is None:
            self.report.fault = self.engine.inject_fault()
            logger.info(f"Seed {self.plan.seed}: injected fault, {self.report.fault}")

        actual_snapshot = self.engine.snapshot()
        expected_snapshot = self.oracle.snapshot()
        if actual_snapshot != expected_snapshot:
            self._mismatch(
                index,
                'snapshot',
                ' '.join(str(e) for e in expected_snapshot),
                ' '.join(str(e) for e in actual_snapshot)
            )
        self.report.violations.extend(f"op {index}: {v}" for v in check_invariants(self.engine))
        return self.report.passed


def _execute(plan: FuzzPlan) -> tuple[Report, list[CompletionRecord]]:
    commands = generate_commands(plan)
    logger.info(f"Fuzz seed={plan.seed} schedule={plan.schedule}: {len(commands)} commands")
    report, records = _Run(plan, commands).execute()
    logger.info(report.summary())
    return report, records


def fuzz(plan: FuzzPlan) -> Report:
    return _execute(plan)[0]


def fuzz_both(plan: FuzzPlan) -> Report:
    """Run the plan with interval and quiescent spacing and require identical outcomes."""
    interval_report, interval_records = _execute(plan.model_copy(update={'schedule': 'interval'}))
    quiescent_report, quiescent_records = _execute(plan.model_copy(update={'schedule': 'quiescent'}))

    report = Report(
        seed=plan.seed,
        schedule='both',
        ops=interval_report.ops,
        cycles=interval_report.cycles,
        mismatches=interval_report.mismatches + quiescent_report.mismatches,
        violations=interval_report.violations + quiescent_report.violations,
        max_occupancy=max(interval_report.max_occupancy, quiescent_report.max_occupancy),
        fault=interval_report.fault
    )
    for index, (pipelined, spaced) in enumerate(zip(interval_records, quiescent_records)):
        if pipelined.outcome != spaced.outcome:
            report.mismatches.append(Mismatch(
                op_index=index,
                command=str(pipelined.command),
                expected=f"quiescent: {_describe(spaced.status, spaced.element)}",
                actual=f"interval: {_describe(pipelined.status, pipelined.element)}"
            ))
    if len(interval_records) != len(quiescent_records):
        report.mismatches.append(Mismatch(
            op_index=min(len(interval_records), len(quiescent_records)),
            command='record count',
            expected=str(len(quiescent_records)),
            actual=str(len(interval_records))
        ))
    return report


def _as_command(position: int, item: Command | dict[str, Any]) -> Command:
    if isinstance(item, Command):
        return item
    try:
        return Command.model_validate(item)
    except ValidationError as e:
        raise InputError(position, f"malformed command: {e.errors()[0]['msg']}")


def replay(
        commands: Iterable[Command | dict[str, Any]],
        cfg: QueueConfig,
        schedule: Schedule = 'quiescent'
) -> tuple[list[CompletionRecord], list[Element]]:
    """Execute a fixed command list; input errors name the 1-based record position."""
    validated = [_as_command(position, item) for position, item in enumerate(commands, start=1)]
    engine = new_engine(cfg)
    for position, cmd in enumerate(validated, start=1):
        if schedule == 'quiescent':
            engine.run_until_quiescent()
        engine.wait_for_port()
        try:
            engine.issue(cmd)
        except ValueError as e:
            raise InputError(position, str(e))
    engine.run_until_quiescent()
    return engine.records, engine.snapshot()
