import logging
from typing import Any, NamedTuple
from pydantic import BaseModel, ConfigDict, model_validator
from .config import DEFAULT_DATA_WIDTH, DEFAULT_ISSUE_INTERVAL, MIN_ISSUE_INTERVAL

logger = logging.getLogger(__name__)

# M-bit (or M+1-bit) unsigned vector; bit s is slot s, bit M is the next block's head.
FlagVector = int


class Element(NamedTuple):
    """One (ID, DATA) pair held by a shift block. ID 0 marks an empty slot."""
    id: int = 0
    data: int = 0

    @property
    def valid(self) -> bool:
        return self.id != 0

    def __str__(self) -> str:
        return f"({self.id},{self.data})" if self.valid else "(-)"


EMPTY = Element()


def element_less(a: Element, b: Element) -> bool:
    """True iff `a` has strictly higher priority than `b`; empties rank after everything."""
    if not a.valid:
        return False
    if not b.valid:
        return True
    return a.data < b.data


def min_id_width(capacity: int) -> int:
    """Bits needed for `capacity` distinct non-zero IDs."""
    return max(1, capacity.bit_length())


class QueueConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_blocks: int
    slots_per_block: int
    id_width: int
    data_width: int = DEFAULT_DATA_WIDTH
    issue_interval: int = DEFAULT_ISSUE_INTERVAL

    @model_validator(mode='before')
    @classmethod
    def derive_id_width(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get('id_width') is None:
            n_blocks, slots = data.get('n_blocks'), data.get('slots_per_block')
            if isinstance(n_blocks, int) and isinstance(slots, int):
                data = {**data, 'id_width': min_id_width(max(n_blocks * slots, 0))}
        return data

    @classmethod
    def build(
            cls,
            n_blocks: int,
            slots_per_block: int,
            data_width: int = DEFAULT_DATA_WIDTH,
            id_width: int | None = None,
            issue_interval: int = DEFAULT_ISSUE_INTERVAL
    ) -> 'QueueConfig':
        return cls(
            n_blocks=n_blocks,
            slots_per_block=slots_per_block,
            data_width=data_width,
            id_width=id_width,
            issue_interval=issue_interval
        )

    @property
    def capacity(self) -> int:
        return self.n_blocks * self.slots_per_block

    @property
    def max_id(self) -> int:
        return (1 << self.id_width) - 1

    @property
    def max_data(self) -> int:
        return (1 << self.data_width) - 1

    def fits_id(self, value: int) -> bool:
        return 1 <= value <= self.max_id

    def fits_data(self, value: int) -> bool:
        return 0 <= value <= self.max_data


def validate_config(cfg: QueueConfig) -> list[str]:
    """Return every violated QueueConfig invariant; an empty list means the config is usable."""
    violations = []
    if cfg.n_blocks < 1:
        violations.append(f"n_blocks must be >= 1, got {cfg.n_blocks}")
    if cfg.slots_per_block < 2:
        violations.append(f"slots_per_block must be >= 2, got {cfg.slots_per_block}")
    if cfg.n_blocks >= 1 and cfg.slots_per_block >= 1:
        needed = min_id_width(cfg.capacity)
        if cfg.id_width < needed:
            violations.append(
                f"id_width {cfg.id_width} gives {max((1 << max(cfg.id_width, 0)) - 1, 0)} usable IDs, "
                f"capacity {cfg.capacity} needs id_width >= {needed}"
            )
    if cfg.data_width < 1:
        violations.append(f"data_width must be >= 1, got {cfg.data_width}")
    if cfg.issue_interval < MIN_ISSUE_INTERVAL:
        violations.append(f"issue_interval must be >= {MIN_ISSUE_INTERVAL}, got {cfg.issue_interval}")
    return violations
