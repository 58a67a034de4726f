from .core import EMPTY, Element, QueueConfig, element_less, min_id_width, validate_config
from .block import BlockEffects, BlockState, OpBundle, PushScenario, apply_signals, classify_push, execute
from .engine import Command, CommandKind, CompletionRecord, EngineStats, QueueEngine, Status, new_engine
from .exceptions import ConfigError, ContractViolation, InputError, PortBusyError, QueueSimError

__all__ = [
    'EMPTY',
    'Element',
    'QueueConfig',
    'element_less',
    'min_id_width',
    'validate_config',
    'BlockEffects',
    'BlockState',
    'OpBundle',
    'PushScenario',
    'apply_signals',
    'classify_push',
    'execute',
    'Command',
    'CommandKind',
    'CompletionRecord',
    'EngineStats',
    'QueueEngine',
    'Status',
    'new_engine',
    'ConfigError',
    'ContractViolation',
    'InputError',
    'PortBusyError',
    'QueueSimError'
]
