"""
Centralized set/shift control generation for one systolic block.

Slot 0 is the queue head side. "down" moves an element toward the head
(slot s takes slot s+1), "up" moves it away from the head (slot s takes
slot s-1). All arithmetic is M-bit unsigned with wraparound, so the
equations below are evaluated exactly as a hardware subtractor would.
"""
from dataclasses import dataclass
from typing import Sequence
from .core import Element, FlagVector, element_less


@dataclass(frozen=True, slots=True)
class ControlSignals:
    set_en: int = 0
    up_en: int = 0
    down_en: int = 0
    # slot M-1 is written from the interface register
    fill_top: bool = False
    # slot 0's old value leaves toward the previous block / external port
    emit_bottom: bool = False
    # slot M-1's old value leaves toward the next block (overflow)
    emit_top: bool = False

    def masks_disjoint(self) -> bool:
        return not (self.set_en & self.up_en or self.set_en & self.down_en or self.up_en & self.down_en)


def width_mask(width: int) -> int:
    return (1 << width) - 1


def lowest_set_bit(vector: FlagVector) -> int | None:
    if vector == 0:
        return None
    return (vector & -vector).bit_length() - 1


def is_one_hot_or_zero(vector: FlagVector) -> bool:
    return vector & (vector - 1) == 0


def is_monotone(vector: FlagVector, width: int) -> bool:
    """No 1-bit sits below a 0-bit, i.e. the vector reads 1..10..0 from the top."""
    if vector == 0:
        return True
    return vector == width_mask(width) & ~((1 << lowest_set_bit(vector)) - 1)


def id_match_flags(slots: Sequence[Element], target_id: int) -> FlagVector:
    if target_id == 0:
        return 0
    flags = 0
    for s, element in enumerate(slots):
        if element.id == target_id:
            flags |= 1 << s
    return flags


def data_compare_flags(slots: Sequence[Element], next_head: Element, push_data: int) -> FlagVector:
    """
    Broadcast comparison of the pushed DATA against the M local slots and the
    next block's head (bit M). A bit is high where the stored element ranks
    strictly after the pushed one.
    """
    probe = Element(id=1, data=push_data)
    flags = 0
    for s, element in enumerate(slots):
        if element_less(probe, element):
            flags |= 1 << s
    if element_less(probe, next_head):
        flags |= 1 << len(slots)
    return flags


def encode_down_insert(data_flag: FlagVector, id_flag: FlagVector, width: int) -> ControlSignals:
    """
    Insertion point above the ID match: the matched element is removed and
    the elements between it and the insertion point move toward the head.
    With data_flag == 0 the new element takes slot M-1 through the interface
    register.
    """
    mask = width_mask(width)
    data_flag_lp = (1 << (width - 1)) | (data_flag >> 1)
    set_en = ~((data_flag_lp - 1) & mask) & mask
    down_en = ~(data_flag_lp ^ ((id_flag - 1) & mask)) & mask
    return ControlSignals(set_en=set_en, down_en=down_en, fill_top=data_flag == 0)


def encode_up_insert(data_flag: FlagVector, id_flag: FlagVector, width: int) -> ControlSignals:
    """
    Insertion point at or below the ID match (or no match at all): elements
    from the insertion point up to the match move away from the head. Without
    a match the shift runs to slot M-1 and its old value overflows.
    """
    if data_flag == 0:
        return ControlSignals()
    mask = width_mask(width)
    set_en = ~((data_flag - 1) & mask) & mask
    up_en = ((~(data_flag ^ ((id_flag - 1) & mask)) & mask) << 1) & mask
    return ControlSignals(set_en=set_en, up_en=up_en, emit_top=id_flag == 0)


def encode_delete(id_flag: FlagVector, width: int) -> ControlSignals:
    mask = width_mask(width)
    down_en = ~((id_flag - 1) & mask) & mask
    return ControlSignals(down_en=down_en, fill_top=down_en != 0)


def encode_push_first(id_flag: FlagVector, width: int) -> ControlSignals:
    mask = width_mask(width)
    if id_flag == 0:
        return ControlSignals(set_en=1, up_en=mask & ~1, emit_top=True)
    up_en = ((((id_flag - 1) & mask) << 1) | id_flag) & mask & ~1
    return ControlSignals(set_en=1, up_en=up_en)


def encode_pop(width: int) -> ControlSignals:
    return ControlSignals(down_en=width_mask(width) >> 1, fill_top=True, emit_bottom=True)
