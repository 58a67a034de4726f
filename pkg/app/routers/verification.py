from fastapi import APIRouter
from validation import validation
from verification import FuzzPlan, Report, fuzz, fuzz_both

router = APIRouter(
    prefix='/verification',
    tags=['Verification']
)


@router.post(
    '/fuzz',
    response_model=Report,
    summary="Run a differential fuzz"
)
@validation.simulation_errors
def run_fuzz(plan: FuzzPlan, both_schedules: bool = False):
    """
    Fuzz a fresh engine against the golden model. With both_schedules the plan
    runs pipelined and fully spaced, and the two record streams must agree.
    """
    validation.validate_fuzz_size(plan)
    return fuzz_both(plan) if both_schedules else fuzz(plan)
