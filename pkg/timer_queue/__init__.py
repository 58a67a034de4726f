from .facade import ArmResult, ExpiryEvent, TimerQueue

__all__ = [
    'ArmResult',
    'ExpiryEvent',
    'TimerQueue'
]
