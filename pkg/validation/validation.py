import functools
import logging
from fastapi import HTTPException, status
from app.sessions import Session, SessionStore
from systolic_queue import ConfigError, ContractViolation, PortBusyError, QueueEngine
from timer_queue import TimerQueue
from verification import FuzzPlan

logger = logging.getLogger(__name__)

MAX_FUZZ_OPS = 100_000


def simulation_errors(func):
    """
    Decorator that converts simulator exceptions into HTTP exceptions.
    """

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ConfigError as e:
            raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=e.violations)
        except PortBusyError as e:
            raise HTTPException(status_code=status.HTTP_409_CONFLICT, detail=str(e))
        except ContractViolation as e:
            logger.error(f"Simulator contract violated: {e}", exc_info=True)
            raise HTTPException(status_code=500, detail='The simulator reached an inconsistent state')
        except ValueError as e:
            raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(e))
    return wrapper


def get_queue_session(session_id: str, store: SessionStore) -> Session[QueueEngine]:
    """
    Retrieve a queue session by ID; raise HTTP 404 if not found.
    """
    session = store.get_queue(session_id)
    if session is None:
        raise HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail=f"There is no queue session {session_id}")
    return session


def get_timer_session(session_id: str, store: SessionStore) -> Session[TimerQueue]:
    """
    Retrieve a timer session by ID; raise HTTP 404 if not found.
    """
    session = store.get_timer(session_id)
    if session is None:
        raise HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail=f"There is no timer session {session_id}")
    return session


def validate_fuzz_size(plan: FuzzPlan) -> None:
    if plan.n_ops > MAX_FUZZ_OPS:
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail=f"A fuzz request may run at most {MAX_FUZZ_OPS} commands, got {plan.n_ops}"
        )
