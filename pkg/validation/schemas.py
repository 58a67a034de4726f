from pydantic import BaseModel, Field
from systolic_queue import Command, CommandKind, CompletionRecord, ConfigError, Element, QueueConfig, validate_config
from systolic_queue.config import (
    DEFAULT_BLOCKS,
    DEFAULT_DATA_WIDTH,
    DEFAULT_ISSUE_INTERVAL,
    DEFAULT_SLOTS,
    MIN_ISSUE_INTERVAL,
)
from timer_queue import ArmResult, ExpiryEvent

CONFIG_LIMITS = {
    'n_blocks': {'ge': 1, 'le': 4096},
    'slots_per_block': {'ge': 2, 'le': 64},
    'data_width': {'ge': 1, 'le': 64},
}


class QueueConfigIn(BaseModel):
    n_blocks: int = Field(default=DEFAULT_BLOCKS, **CONFIG_LIMITS['n_blocks'])
    slots_per_block: int = Field(default=DEFAULT_SLOTS, **CONFIG_LIMITS['slots_per_block'])
    data_width: int = Field(default=DEFAULT_DATA_WIDTH, **CONFIG_LIMITS['data_width'])
    id_width: int | None = Field(default=None, ge=1, le=64)
    issue_interval: int = Field(default=DEFAULT_ISSUE_INTERVAL, ge=MIN_ISSUE_INTERVAL)

    def to_config(self) -> QueueConfig:
        """
        Build the engine configuration; an explicit id_width too narrow for the
        capacity raises ConfigError.
        """
        config = QueueConfig.build(**self.model_dump())
        violations = validate_config(config)
        if violations:
            raise ConfigError(violations)
        return config


class SessionOut(BaseModel):
    session_id: str
    config: QueueConfig


class ElementOut(BaseModel):
    id: int
    data: int
    valid: bool

    @classmethod
    def from_element(cls, element: Element) -> 'ElementOut':
        return cls(id=element.id, data=element.data, valid=element.valid)


class CommandIn(BaseModel):
    op: CommandKind
    id: int = Field(default=0, ge=0)
    data: int = Field(default=0, ge=0)

    def to_command(self) -> Command:
        return Command(kind=self.op, id=self.id, data=self.data)


class RecordOut(BaseModel):
    ticket: int
    op: CommandKind
    status: str
    issue_cycle: int
    finish_cycle: int | None
    element: ElementOut | None = None

    @classmethod
    def from_record(cls, record: CompletionRecord) -> 'RecordOut':
        return cls(
            ticket=record.ticket,
            op=record.command.kind,
            status=record.status.value,
            issue_cycle=record.issue_cycle,
            finish_cycle=record.finish_cycle,
            element=ElementOut.from_element(record.element) if record.element is not None else None
        )


class SnapshotOut(BaseModel):
    cycle: int
    occupancy: int
    capacity: int
    elements: list[ElementOut]


class ArmIn(BaseModel):
    id: int = Field(ge=1)
    deadline: int = Field(ge=0)


class ArmOut(BaseModel):
    result: ArmResult
    armed: int


class DisarmIn(BaseModel):
    id: int = Field(ge=1)


class DisarmOut(BaseModel):
    found: bool
    armed: int


class AdvanceIn(BaseModel):
    delta: int = Field(ge=0)


class AdvanceOut(BaseModel):
    now: int
    expired: list[ExpiryEvent]
    next_deadline: int | None
