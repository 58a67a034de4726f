from .main import build_parser, main
from .trace import TraceError, TraceRecord, parse_trace

__all__ = [
    'build_parser',
    'main',
    'TraceError',
    'TraceRecord',
    'parse_trace'
]
