import logging
import threading
import uuid
from dataclasses import dataclass, field
from typing import Generic, TypeVar
from systolic_queue import QueueConfig, QueueEngine, new_engine
from timer_queue import TimerQueue

logger = logging.getLogger(__name__)

T = TypeVar('T')


@dataclass
class Session(Generic[T]):
    resource: T
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    """In-process registry of simulator sessions, keyed by random hex ids."""

    def __init__(self) -> None:
        self.queues: dict[str, Session[QueueEngine]] = {}
        self.timers: dict[str, Session[TimerQueue]] = {}
        self._lock = threading.Lock()

    def add_queue(self, config: QueueConfig) -> str:
        session_id = uuid.uuid4().hex
        engine = new_engine(config)
        with self._lock:
            self.queues[session_id] = Session(engine)
        logger.info(f"Queue session {session_id} created with capacity {config.capacity}")
        return session_id

    def add_timer(self, config: QueueConfig) -> str:
        session_id = uuid.uuid4().hex
        timers = TimerQueue(config)
        with self._lock:
            self.timers[session_id] = Session(timers)
        logger.info(f"Timer session {session_id} created with capacity {config.capacity}")
        return session_id

    def get_queue(self, session_id: str) -> Session[QueueEngine] | None:
        with self._lock:
            return self.queues.get(session_id)

    def get_timer(self, session_id: str) -> Session[TimerQueue] | None:
        with self._lock:
            return self.timers.get(session_id)

    def drop_queue(self, session_id: str) -> bool:
        with self._lock:
            return self.queues.pop(session_id, None) is not None

    def drop_timer(self, session_id: str) -> bool:
        with self._lock:
            return self.timers.pop(session_id, None) is not None


store = SessionStore()


def get_store() -> SessionStore:
    """FastAPI dependency returning the process-wide session store."""
    return store
