from typing import Annotated
from fastapi import APIRouter, Depends, status
from fastapi.responses import JSONResponse
from app.sessions import SessionStore, get_store
from validation import schemas, validation

router = APIRouter(
    prefix='/timers',
    tags=['Timers']
)


@router.post(
    '',
    response_model=schemas.SessionOut,
    status_code=status.HTTP_201_CREATED,
    summary="Create a timer session"
)
@validation.simulation_errors
def create_timers(
        config: schemas.QueueConfigIn,
        store: Annotated[SessionStore, Depends(get_store)]
):
    """
    Create a timer queue; deadlines live in the DATA field, so data_width bounds the tick range.
    """
    queue_config = config.to_config()
    session_id = store.add_timer(queue_config)
    return schemas.SessionOut(session_id=session_id, config=queue_config)


@router.post(
    '/{session_id}/arm',
    response_model=schemas.ArmOut,
    summary="Arm or rearm a timer"
)
@validation.simulation_errors
def arm_timer(
        session_id: str,
        timer: schemas.ArmIn,
        store: Annotated[SessionStore, Depends(get_store)]
):
    session = validation.get_timer_session(session_id, store)
    with session.lock:
        result = session.resource.arm(timer.id, timer.deadline)
        return schemas.ArmOut(result=result, armed=session.resource.armed)


@router.post(
    '/{session_id}/disarm',
    response_model=schemas.DisarmOut,
    summary="Disarm a timer"
)
@validation.simulation_errors
def disarm_timer(
        session_id: str,
        timer: schemas.DisarmIn,
        store: Annotated[SessionStore, Depends(get_store)]
):
    session = validation.get_timer_session(session_id, store)
    with session.lock:
        found = session.resource.disarm(timer.id)
        return schemas.DisarmOut(found=found, armed=session.resource.armed)


@router.post(
    '/{session_id}/advance',
    response_model=schemas.AdvanceOut,
    summary="Advance the tick counter"
)
@validation.simulation_errors
def advance_timers(
        session_id: str,
        advance: schemas.AdvanceIn,
        store: Annotated[SessionStore, Depends(get_store)]
):
    """
    Move time forward and return the timers that expired, earliest deadline first.
    """
    session = validation.get_timer_session(session_id, store)
    with session.lock:
        timers = session.resource
        expired = timers.advance(advance.delta)
        return schemas.AdvanceOut(now=timers.now, expired=expired, next_deadline=timers.next_deadline())


@router.delete(
    '/{session_id}',
    summary="Delete timer session"
)
def delete_timers(session_id: str, store: Annotated[SessionStore, Depends(get_store)]):
    validation.get_timer_session(session_id, store)
    store.drop_timer(session_id)
    return JSONResponse(content={"session_id": session_id, "message": "Timer session was deleted"}, status_code=200)
