import logging
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from app import routers
from systolic_queue import ContractViolation
from systolic_queue.config import LOG_FORMAT, LOG_LEVEL


logging.basicConfig(
    level=LOG_LEVEL,
    format=LOG_FORMAT
)

logger = logging.getLogger(__name__)


app = FastAPI(
    title='Systolic Queue Simulator API',
    description="""
    Cycle-accurate simulation of a hybrid systolic-array / shift-register hardware priority queue.

    This API provides:
    * **Queue Sessions**: Build an N x M array and drive it with push, pop, delete and peek commands
    * **Timer Sessions**: Arm, rearm and disarm absolute-deadline timers and advance a tick counter to collect expiries
    * **Verification**: Differential fuzzing of the pipelined array against a golden sorted-list model

    ## Semantics

    * Push covers both enqueue and in-queue update; an updated element re-enters last among equal priorities
    * Commands enter block 0 at most once every issue interval (4 cycles by default)
    * Every response is taken at quiescence, after all in-flight operations have settled
    """,
    version="1.0.0",
    openapi_tags=[
        {
            "name": "Queues",
            "description": "Priority queue sessions backed by the systolic array simulator."
        },
        {
            "name": "Timers",
            "description": "Timer-queue facade: deadlines stored as priorities, expiry by head comparison."
        },
        {
            "name": "Verification",
            "description": "Seeded differential fuzzing against the golden reference model."
        }
    ]
)

app.include_router(routers.queues.router)
app.include_router(routers.timers.router)
app.include_router(routers.verification.router)


@app.exception_handler(Exception)
def unexpected_error_handler(_request: Request, exc: Exception) -> JSONResponse:
    """Handle unexpected errors"""
    logger.error(f"Unexpected error: {exc}", exc_info=True)
    return JSONResponse(status_code=500, content={'detail': 'Something went wrong. Try again later.'})


@app.exception_handler(ContractViolation)
def contract_violation_handler(_request: Request, exc: ContractViolation) -> JSONResponse:
    """Report a simulator invariant failure that escaped the router decorators."""
    logger.error(f"Simulator contract violated: {exc}", exc_info=True)
    return JSONResponse(status_code=500, content={'detail': str(exc)})
