import logging
from dataclasses import dataclass
from enum import Enum
from pydantic import BaseModel, ConfigDict, Field, model_validator
from .block import BlockState, OpBundle, execute
from .config import STAGE_CYCLES
from .core import EMPTY, Element, QueueConfig, validate_config
from .exceptions import ConfigError, ContractViolation, PortBusyError

logger = logging.getLogger(__name__)


class CommandKind(str, Enum):
    PUSH = 'push'
    POP = 'pop'
    DELETE = 'delete'
    PEEK = 'peek'


class Status(str, Enum):
    OK = 'ok'
    NOT_FOUND = 'not_found'
    FULL = 'full'
    EMPTY = 'empty'
    BUSY = 'busy'


class Command(BaseModel):
    """External port command. A push covers both enqueue and update."""
    model_config = ConfigDict(frozen=True)

    kind: CommandKind
    id: int = Field(default=0, ge=0)
    data: int = Field(default=0, ge=0)

    @model_validator(mode='after')
    def validate_fields(self) -> 'Command':
        if self.kind in (CommandKind.PUSH, CommandKind.DELETE) and self.id == 0:
            raise ValueError(f"{self.kind.value} requires a non-zero id")
        return self

    @classmethod
    def push(cls, id: int, data: int) -> 'Command':
        return cls(kind=CommandKind.PUSH, id=id, data=data)

    @classmethod
    def pop(cls) -> 'Command':
        return cls(kind=CommandKind.POP)

    @classmethod
    def delete(cls, id: int) -> 'Command':
        return cls(kind=CommandKind.DELETE, id=id)

    @classmethod
    def peek(cls) -> 'Command':
        return cls(kind=CommandKind.PEEK)

    def __str__(self) -> str:
        if self.kind is CommandKind.PUSH:
            return f"push({self.id},{self.data})"
        if self.kind is CommandKind.DELETE:
            return f"delete({self.id})"
        return self.kind.value


class CompletionRecord(BaseModel):
    command: Command
    ticket: int
    issue_cycle: int
    finish_cycle: int | None = None
    status: Status = Status.OK
    element: Element | None = None

    @property
    def done(self) -> bool:
        return self.finish_cycle is not None

    @property
    def outcome(self) -> tuple[Command, Status, Element | None]:
        """Schedule-independent part of the record."""
        return self.command, self.status, self.element


class EngineStats(BaseModel):
    issued: int = 0
    rejected: int = 0
    transactions: int = 0
    dropped: int = 0
    max_occupancy: int = 0


@dataclass(slots=True)
class Transaction:
    block_index: int
    bundle: OpBundle
    start_cycle: int
    record: CompletionRecord

    @property
    def due_cycle(self) -> int:
        return self.start_cycle + STAGE_CYCLES


class QueueEngine:
    """
    N systolic blocks behind one issue port.

    A bundle delivered to block k at cycle t runs as one atomic transaction
    that completes at t+4; its outgoing bundle reaches block k+1 at t+4.
    Transactions completing on the same cycle run downstream block first, so
    an upstream compare always sees its neighbour's finished head.
    """

    def __init__(self, config: QueueConfig) -> None:
        violations = validate_config(config)
        if violations:
            raise ConfigError(violations)
        self.config = config
        self.blocks: list[BlockState] = [
            BlockState.empty(config.slots_per_block) for _ in range(config.n_blocks)
        ]
        self.cycle = 0
        self.in_flight: list[Transaction] = []
        self.last_issue_cycle: int | None = None
        self.membership: set[int] = set()
        self.records: list[CompletionRecord] = []
        self.stats = EngineStats()
        logger.info(
            f"Engine created: N={config.n_blocks} M={config.slots_per_block} "
            f"capacity={config.capacity} interval={config.issue_interval}"
        )

    @property
    def occupancy(self) -> int:
        return len(self.membership)

    @property
    def is_quiescent(self) -> bool:
        return not self.in_flight

    def cycles_until_ready(self) -> int:
        if self.last_issue_cycle is None:
            return 0
        return max(0, self.last_issue_cycle + self.config.issue_interval - self.cycle)

    def wait_for_port(self) -> int:
        """Advance just far enough for the issue port to accept a command."""
        wait = self.cycles_until_ready()
        self.step(wait)
        return wait

    def issue(self, cmd: Command, strict: bool = False) -> CompletionRecord:
        self._check_fields(cmd)
        record = CompletionRecord(command=cmd, ticket=len(self.records), issue_cycle=self.cycle)
        self.records.append(record)

        wait = self.cycles_until_ready()
        if wait > 0:
            record.status = Status.BUSY
            record.finish_cycle = self.cycle
            self.stats.rejected += 1
            logger.warning(f"Cycle {self.cycle}: {cmd} rejected, port busy for {wait} more cycles")
            if strict:
                raise PortBusyError(f"Issue port busy at cycle {self.cycle}")
            return record

        self.last_issue_cycle = self.cycle
        self.stats.issued += 1

        if cmd.kind is CommandKind.PEEK:
            record.element = self.peek_head()
            record.status = Status.OK if record.element.valid else Status.EMPTY
            record.finish_cycle = self.cycle
        elif cmd.kind is CommandKind.PUSH:
            if cmd.id not in self.membership and self.occupancy >= self.config.capacity:
                self._reject(record, Status.FULL)
            else:
                self.membership.add(cmd.id)
                self._inject(OpBundle(push=Element(cmd.id, cmd.data)), record)
        elif cmd.kind is CommandKind.POP:
            if not self.membership:
                record.element = EMPTY
                self._reject(record, Status.EMPTY)
            else:
                self._inject(OpBundle(pop=True), record)
        else:
            if cmd.id in self.membership:
                self.membership.discard(cmd.id)
            else:
                record.status = Status.NOT_FOUND
            self._inject(OpBundle(delete_id=cmd.id), record)

        self.stats.max_occupancy = max(self.stats.max_occupancy, self.occupancy)
        return record

    def _check_fields(self, cmd: Command) -> None:
        if cmd.kind in (CommandKind.PUSH, CommandKind.DELETE) and not self.config.fits_id(cmd.id):
            raise ValueError(f"id {cmd.id} does not fit in {self.config.id_width} bits")
        if cmd.kind is CommandKind.PUSH and not self.config.fits_data(cmd.data):
            raise ValueError(f"data {cmd.data} does not fit in {self.config.data_width} bits")

    def _reject(self, record: CompletionRecord, status: Status) -> None:
        record.status = status
        record.finish_cycle = self.cycle
        logger.warning(f"Cycle {self.cycle}: {record.command} rejected with status {status.value}")

    def _inject(self, bundle: OpBundle, record: CompletionRecord) -> None:
        self.in_flight.append(Transaction(block_index=0, bundle=bundle, start_cycle=self.cycle, record=record))

    def step(self, n: int = 1) -> None:
        if n < 0:
            raise ValueError(f"Cannot step a negative number of cycles: {n}")
        target = self.cycle + n
        while self.in_flight:
            due = min(t.due_cycle for t in self.in_flight)
            if due > target:
                break
            batch = [t for t in self.in_flight if t.due_cycle == due]
            self.in_flight = [t for t in self.in_flight if t.due_cycle != due]
            self.cycle = due
            for transaction in sorted(batch, key=lambda t: t.block_index, reverse=True):
                self._run_transaction(transaction)
        self.cycle = target

    def _run_transaction(self, transaction: Transaction) -> None:
        k = transaction.block_index
        record = transaction.record
        next_head = self.blocks[k + 1].head if k + 1 < len(self.blocks) else EMPTY
        new_state, effects = execute(self.blocks[k], transaction.bundle, next_head, head_block=k == 0)
        self.blocks[k] = new_state
        self.stats.transactions += 1
        logger.debug(
            f"Cycle {self.cycle}: block {k} ran {transaction.bundle} "
            f"({effects.scenario.value if effects.scenario else '-'}) -> {effects.outgoing}"
        )

        if effects.dequeued is not None:
            record.element = effects.dequeued
            self.membership.discard(effects.dequeued.id)

        outgoing = effects.outgoing
        if outgoing.is_empty:
            record.finish_cycle = self.cycle
        elif k + 1 < len(self.blocks):
            self.in_flight.append(
                Transaction(block_index=k + 1, bundle=outgoing, start_cycle=self.cycle, record=record)
            )
        else:
            record.finish_cycle = self.cycle
            for lost in (outgoing.push, outgoing.push_first):
                if lost is not None:
                    self.stats.dropped += 1
                    logger.warning(f"Cycle {self.cycle}: element {lost} dropped off the array tail")

    def run_until_quiescent(self) -> int:
        start = self.cycle
        while self.in_flight:
            self.step(min(t.due_cycle for t in self.in_flight) - self.cycle)
        return self.cycle - start

    def peek_head(self) -> Element:
        """Raw head register; equals the global minimum only at quiescence."""
        return self.blocks[0].head

    def snapshot(self) -> list[Element]:
        if self.in_flight:
            raise ContractViolation(f"snapshot requested with {len(self.in_flight)} bundles in flight")
        return [element for block in self.blocks for element in block.slots if element.valid]

    def inject_fault(self) -> str:
        """
        Corrupt the array at quiescence, for detector checks: swap the first
        adjacent pair with different DATA, else blank a valid slot, else plant
        a phantom head.
        """
        flat = [(b, s) for b in range(len(self.blocks)) for s in range(self.config.slots_per_block)]
        elements = [self.blocks[b].slots[s] for b, s in flat]
        for i in range(len(elements) - 1):
            a, b = elements[i], elements[i + 1]
            if a.valid and b.valid and a.data != b.data:
                self._write(flat[i], b)
                self._write(flat[i + 1], a)
                return f"swapped {a} and {b}"
        for i, element in enumerate(elements):
            if element.valid:
                self._write(flat[i], EMPTY)
                return f"blanked {element}"
        self._write(flat[0], Element(id=1, data=0))
        return 'planted phantom head (1,0)'

    def _write(self, position: tuple[int, int], element: Element) -> None:
        b, s = position
        slots = list(self.blocks[b].slots)
        slots[s] = element
        self.blocks[b] = BlockState(slots=tuple(slots), interface=self.blocks[b].interface)


def new_engine(cfg: QueueConfig) -> QueueEngine:
    return QueueEngine(cfg)
