import logging
from enum import Enum
from pydantic import BaseModel, model_validator
from systolic_queue import Command, CompletionRecord, QueueConfig, QueueEngine, Status, new_engine

logger = logging.getLogger(__name__)


class ArmResult(str, Enum):
    OK = 'ok'
    UPDATED = 'already_armed_updated'
    FULL = 'full'


class ExpiryEvent(BaseModel):
    id: int
    deadline: int
    emitted_at: int

    @model_validator(mode='after')
    def check_not_early(self) -> 'ExpiryEvent':
        if self.deadline > self.emitted_at:
            raise ValueError(f"Timer {self.id} cannot expire at {self.emitted_at} before its deadline {self.deadline}")
        return self


class TimerQueue:
    """
    Absolute-deadline timers kept in the systolic queue, deadline as DATA.

    Expiry never walks the armed set: an external tick counter is compared
    with the queue head and the head is popped while it is due.
    """

    def __init__(self, config: QueueConfig, engine: QueueEngine | None = None) -> None:
        self.engine = engine if engine is not None else new_engine(config)
        self.config = config
        self.now = 0

    @property
    def armed(self) -> int:
        return self.engine.occupancy

    def is_armed(self, id: int) -> bool:
        return id in self.engine.membership

    def _issue(self, cmd: Command) -> CompletionRecord:
        self.engine.wait_for_port()
        return self.engine.issue(cmd)

    def arm(self, id: int, deadline: int) -> ArmResult:
        if not self.config.fits_data(deadline):
            raise ValueError(f"Deadline {deadline} does not fit in {self.config.data_width} bits")
        rearm = self.is_armed(id)
        record = self._issue(Command.push(id, deadline))
        if record.status is Status.FULL:
            logger.warning(f"Timer {id} not armed: {self.armed} timers already armed")
            return ArmResult.FULL
        return ArmResult.UPDATED if rearm else ArmResult.OK

    def disarm(self, id: int) -> bool:
        record = self._issue(Command.delete(id))
        return record.status is Status.OK

    def next_deadline(self) -> int | None:
        self.engine.run_until_quiescent()
        head = self.engine.peek_head()
        return head.data if head.valid else None

    def advance(self, delta: int) -> list[ExpiryEvent]:
        if delta < 0:
            raise ValueError(f"Time cannot move backwards: delta {delta}")
        if self.now + delta > self.config.max_data:
            raise ValueError(
                f"Advancing to {self.now + delta} overflows the {self.config.data_width}-bit deadline range"
            )
        self.now += delta

        events = []
        while True:
            # once the port is free the previous command has settled block 0
            self.engine.wait_for_port()
            head = self.engine.peek_head()
            if not head.valid or head.data > self.now:
                break
            self.engine.issue(Command.pop())
            events.append(ExpiryEvent(id=head.id, deadline=head.data, emitted_at=self.now))

        if events:
            logger.info(f"Tick {self.now}: {len(events)} timers expired")
        return events
