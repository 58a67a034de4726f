import bisect
from dataclasses import dataclass
from systolic_queue import EMPTY, Command, CommandKind, Element, Status


@dataclass(frozen=True, slots=True)
class OracleEntry:
    id: int
    data: int
    seq: int

    @property
    def element(self) -> Element:
        return Element(self.id, self.data)


class GoldenQueue:
    """
    Reference priority queue: a list sorted by (data, seq). A push always
    takes a fresh seq, so an updated element re-enters as the newest of its
    equals.
    """

    def __init__(self, capacity: int | None = None) -> None:
        self.capacity = capacity
        self.entries: list[OracleEntry] = []
        self._ids: set[int] = set()
        self._seq = 0

    def __len__(self) -> int:
        return len(self.entries)

    def contains(self, id: int) -> bool:
        return id in self._ids

    def o_push(self, id: int, data: int) -> None:
        if id == 0:
            raise ValueError("Oracle push requires a non-zero id")
        self.o_delete(id)
        self._seq += 1
        entry = OracleEntry(id=id, data=data, seq=self._seq)
        position = bisect.bisect_right(self.entries, data, key=lambda e: e.data)
        self.entries.insert(position, entry)
        self._ids.add(id)

    def o_pop(self) -> Element:
        if not self.entries:
            return EMPTY
        entry = self.entries.pop(0)
        self._ids.discard(entry.id)
        return entry.element

    def o_delete(self, id: int) -> bool:
        if id not in self._ids:
            return False
        self.entries = [entry for entry in self.entries if entry.id != id]
        self._ids.discard(id)
        return True

    def o_peek(self) -> Element:
        return self.entries[0].element if self.entries else EMPTY

    def snapshot(self) -> list[Element]:
        return [entry.element for entry in self.entries]

    def apply(self, cmd: Command) -> tuple[Status, Element | None]:
        """Expected (status, element) of a command the engine accepted at the port."""
        if cmd.kind is CommandKind.PUSH:
            if not self.contains(cmd.id) and self.capacity is not None and len(self) >= self.capacity:
                return Status.FULL, None
            self.o_push(cmd.id, cmd.data)
            return Status.OK, None
        if cmd.kind is CommandKind.POP:
            element = self.o_pop()
            return (Status.OK if element.valid else Status.EMPTY), element
        if cmd.kind is CommandKind.DELETE:
            return (Status.OK if self.o_delete(cmd.id) else Status.NOT_FOUND), None
        element = self.o_peek()
        return (Status.OK if element.valid else Status.EMPTY), element
