from typing import Iterable, Literal
from pydantic import BaseModel, Field, ValidationError
from systolic_queue import Command, InputError

Dialect = Literal['queue', 'timer']

# op -> names of its positional fields
QUEUE_OPS = {
    'push': ('id', 'data'),
    'pop': (),
    'delete': ('id',),
    'peek': (),
}
TIMER_OPS = {
    'arm': ('id', 'deadline'),
    'disarm': ('id',),
    'advance': ('delta',),
}


class TraceError(InputError):
    unit = 'line'


class TraceRecord(BaseModel):
    line: int
    op: str
    id: int | None = Field(default=None, ge=1)
    data: int | None = Field(default=None, ge=0)
    deadline: int | None = Field(default=None, ge=0)
    delta: int | None = Field(default=None, ge=0)

    @property
    def dialect(self) -> Dialect:
        return 'queue' if self.op in QUEUE_OPS else 'timer'

    def to_command(self) -> Command:
        if self.op == 'push':
            return Command.push(self.id, self.data)
        if self.op == 'delete':
            return Command.delete(self.id)
        if self.op == 'pop':
            return Command.pop()
        if self.op == 'peek':
            return Command.peek()
        raise TraceError(self.line, f"'{self.op}' is not a queue command")


def parse_line(line_no: int, text: str) -> TraceRecord | None:
    """Parse one trace line; blank lines and `#` comments give None."""
    stripped = text.strip()
    if not stripped or stripped.startswith('#'):
        return None
    op, *tokens = stripped.split()
    fields = QUEUE_OPS.get(op, TIMER_OPS.get(op))
    if fields is None:
        raise TraceError(line_no, f"unknown op '{op}'")
    if len(tokens) != len(fields):
        raise TraceError(line_no, f"'{op}' takes {len(fields)} fields, got {len(tokens)}")
    values = {}
    for name, token in zip(fields, tokens):
        try:
            values[name] = int(token)
        except ValueError:
            raise TraceError(line_no, f"{name} must be an integer, got '{token}'")
    try:
        return TraceRecord(line=line_no, op=op, **values)
    except ValidationError as e:
        error = e.errors()[0]
        raise TraceError(line_no, f"{error['loc'][0]}: {error['msg']}")


def parse_trace(lines: Iterable[str]) -> tuple[Dialect, list[TraceRecord]]:
    """A trace uses one dialect; an empty trace counts as a queue trace."""
    records = []
    dialect: Dialect | None = None
    for line_no, text in enumerate(lines, start=1):
        record = parse_line(line_no, text)
        if record is None:
            continue
        if dialect is None:
            dialect = record.dialect
        elif record.dialect != dialect:
            raise TraceError(line_no, f"{record.dialect} op '{record.op}' in a {dialect} trace")
        records.append(record)
    return dialect or 'queue', records
