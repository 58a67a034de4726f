from .oracle import GoldenQueue, OracleEntry
from .harness import (
    FuzzPlan,
    Mismatch,
    OpMix,
    Report,
    check_invariants,
    fuzz,
    fuzz_both,
    generate_commands,
    replay,
)

__all__ = [
    'GoldenQueue',
    'OracleEntry',
    'FuzzPlan',
    'Mismatch',
    'OpMix',
    'Report',
    'check_invariants',
    'fuzz',
    'fuzz_both',
    'generate_commands',
    'replay'
]
