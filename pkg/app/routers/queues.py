from typing import Annotated
from fastapi import APIRouter, Depends, status
from fastapi.responses import JSONResponse
from app.sessions import SessionStore, get_store
from validation import schemas, validation

router = APIRouter(
    prefix='/queues',
    tags=['Queues']
)


@router.post(
    '',
    response_model=schemas.SessionOut,
    status_code=status.HTTP_201_CREATED,
    summary="Create a queue session"
)
@validation.simulation_errors
def create_queue(
        config: schemas.QueueConfigIn,
        store: Annotated[SessionStore, Depends(get_store)]
):
    """
    Build an empty N x M systolic queue and return its session id.
    """
    queue_config = config.to_config()
    session_id = store.add_queue(queue_config)
    return schemas.SessionOut(session_id=session_id, config=queue_config)


@router.post(
    '/{session_id}/commands',
    response_model=schemas.RecordOut,
    summary="Issue a command"
)
@validation.simulation_errors
def issue_command(
        session_id: str,
        command: schemas.CommandIn,
        store: Annotated[SessionStore, Depends(get_store)]
):
    """
    Issue one command at the next free port cycle and run the array to quiescence.
    """
    session = validation.get_queue_session(session_id, store)
    with session.lock:
        engine = session.resource
        engine.wait_for_port()
        record = engine.issue(command.to_command())
        engine.run_until_quiescent()
    return schemas.RecordOut.from_record(record)


@router.get(
    '/{session_id}/snapshot',
    response_model=schemas.SnapshotOut,
    summary="Get queue contents"
)
@validation.simulation_errors
def get_snapshot(session_id: str, store: Annotated[SessionStore, Depends(get_store)]):
    """
    Return every stored element in dequeue order.
    """
    session = validation.get_queue_session(session_id, store)
    with session.lock:
        engine = session.resource
        engine.run_until_quiescent()
        return schemas.SnapshotOut(
            cycle=engine.cycle,
            occupancy=engine.occupancy,
            capacity=engine.config.capacity,
            elements=[schemas.ElementOut.from_element(element) for element in engine.snapshot()]
        )


@router.get(
    '/{session_id}/head',
    response_model=schemas.ElementOut,
    summary="Get queue head"
)
def get_head(session_id: str, store: Annotated[SessionStore, Depends(get_store)]):
    session = validation.get_queue_session(session_id, store)
    with session.lock:
        session.resource.run_until_quiescent()
        return schemas.ElementOut.from_element(session.resource.peek_head())


@router.delete(
    '/{session_id}',
    summary="Delete queue session"
)
def delete_queue(session_id: str, store: Annotated[SessionStore, Depends(get_store)]):
    validation.get_queue_session(session_id, store)
    store.drop_queue(session_id)
    return JSONResponse(content={"session_id": session_id, "message": "Queue session was deleted"}, status_code=200)
