import logging
from dataclasses import dataclass, field
from enum import Enum
from .core import EMPTY, Element, FlagVector
from .encoding import (
    ControlSignals,
    data_compare_flags,
    encode_delete,
    encode_down_insert,
    encode_pop,
    encode_push_first,
    encode_up_insert,
    id_match_flags,
    lowest_set_bit,
    width_mask,
)
from .exceptions import ContractViolation

logger = logging.getLogger(__name__)


class PushScenario(str, Enum):
    NO_ID_NO_DATA = 'no_id_no_data'
    DATA_ONLY = 'data_only'
    ID_ONLY = 'id_only'
    BOTH = 'both'
    BOUNDARY = 'boundary'


@dataclass(frozen=True, slots=True)
class OpBundle:
    """Hardware operations travelling together from one systolic block to the next."""
    push: Element | None = None
    pop: bool = False
    delete_id: int | None = None
    push_first: Element | None = None

    @property
    def is_empty(self) -> bool:
        return self.push is None and not self.pop and self.delete_id is None and self.push_first is None

    def is_legal(self) -> bool:
        if self.push is not None and self.push_first is not None:
            return False
        if self.pop and self.push_first is not None:
            return False
        if self.push is not None and self.delete_id is not None:
            return False
        if self.pop and self.delete_id is not None:
            return False
        for element in (self.push, self.push_first):
            if element is not None and not element.valid:
                return False
        return self.delete_id is None or self.delete_id != 0

    def __str__(self) -> str:
        parts = []
        if self.push is not None:
            parts.append(f"push{self.push}")
        if self.pop:
            parts.append('pop')
        if self.push_first is not None:
            parts.append(f"push_first{self.push_first}")
        if self.delete_id is not None:
            parts.append(f"delete({self.delete_id})")
        return '{' + ', '.join(parts) + '}'


NO_OP = OpBundle()


@dataclass(frozen=True, slots=True)
class BlockState:
    slots: tuple[Element, ...]
    # staging register toward the next block, latched for the last transaction
    interface: Element = EMPTY

    @classmethod
    def empty(cls, slots_per_block: int) -> 'BlockState':
        return cls(slots=(EMPTY,) * slots_per_block)

    @property
    def width(self) -> int:
        return len(self.slots)

    @property
    def head(self) -> Element:
        return self.slots[0]

    def is_empty(self) -> bool:
        return not any(element.valid for element in self.slots)

    def valid_count(self) -> int:
        return sum(1 for element in self.slots if element.valid)


@dataclass(frozen=True, slots=True)
class BlockEffects:
    outgoing: OpBundle = NO_OP
    # slot 0's old value leaving toward the head side
    to_prev: Element | None = None
    # only at block 0 under an external pop
    dequeued: Element | None = None
    needs_fill: bool = False
    scenario: PushScenario | None = None
    signals: ControlSignals = field(default_factory=ControlSignals)


@dataclass(frozen=True, slots=True)
class PushMatch:
    scenario: PushScenario
    q: int | None
    p: int | None
    id_flag: FlagVector
    data_flag: FlagVector


def classify_push(state: BlockState, push: Element, next_head: Element, pop_active: bool = False) -> PushMatch:
    """
    Classify a push against the block. `p` is the lowest window position
    (0..M, M being the next block's head) whose element ranks strictly after
    the pushed one; `q` is the slot holding the pushed ID.
    """
    width = state.width
    id_flag = id_match_flags(state.slots, push.id)
    window = data_compare_flags(state.slots, next_head, push.data)
    q = lowest_set_bit(id_flag)
    p = lowest_set_bit(window)

    if q is None:
        if p is None:
            scenario = PushScenario.NO_ID_NO_DATA
        elif p == width:
            scenario = PushScenario.BOUNDARY if pop_active else PushScenario.NO_ID_NO_DATA
        else:
            scenario = PushScenario.DATA_ONLY
    elif p is None:
        scenario = PushScenario.ID_ONLY
    else:
        scenario = PushScenario.BOTH
    return PushMatch(scenario=scenario, q=q, p=p, id_flag=id_flag, data_flag=window & width_mask(width))


def apply_signals(
        state: BlockState,
        sig: ControlSignals,
        new_element: Element = EMPTY,
        fill_value: Element = EMPTY
) -> BlockState:
    """Every slot reads the pre-state, then all enabled writes land at once."""
    old = state.slots
    top = len(old) - 1
    new = list(old)
    for s in range(top + 1):
        bit = 1 << s
        if sig.set_en & bit:
            new[s] = new_element
        elif s == top and (sig.fill_top or sig.down_en & bit):
            new[s] = fill_value
        elif sig.down_en & bit:
            new[s] = old[s + 1]
        elif sig.up_en & bit and s > 0:
            new[s] = old[s - 1]
    if sig.fill_top and sig.set_en & (1 << top):
        interface = new_element
    elif sig.fill_top:
        interface = fill_value
    elif sig.emit_top:
        interface = old[top]
    else:
        interface = EMPTY
    return BlockState(slots=tuple(new), interface=interface)


def _needs_fill(sig: ControlSignals, width: int) -> bool:
    return sig.fill_top and not sig.set_en & (1 << (width - 1))


def execute(
        state: BlockState,
        bundle: OpBundle,
        next_head: Element,
        head_block: bool = False
) -> tuple[BlockState, BlockEffects]:
    """
    One systolic-block transaction. Reads only this block's slots, the
    incoming bundle and the next block's head; writes only this block.
    """
    if not bundle.is_legal():
        raise ContractViolation(f"Malformed operation bundle {bundle}")

    if bundle.push is not None and bundle.pop:
        return _push_with_pop(state, bundle.push, next_head)
    if bundle.push is not None:
        return _push(state, bundle.push, next_head)
    if bundle.push_first is not None:
        return _push_first(state, bundle.push_first, bundle.delete_id)
    if bundle.pop:
        return _pop(state, next_head, head_block)
    if bundle.delete_id is not None:
        return _delete(state, bundle.delete_id, next_head)
    return state, BlockEffects()


def _push(state: BlockState, element: Element, next_head: Element) -> tuple[BlockState, BlockEffects]:
    width = state.width
    match = classify_push(state, element, next_head)

    if match.scenario is PushScenario.NO_ID_NO_DATA:
        return state, BlockEffects(outgoing=OpBundle(push=element), scenario=match.scenario)

    if match.scenario is PushScenario.DATA_ONLY:
        sig = encode_up_insert(match.data_flag, 0, width)
        overflow = state.slots[-1]
        new_state = apply_signals(state, sig, new_element=element)
        if overflow.valid:
            outgoing = OpBundle(push_first=overflow, delete_id=element.id)
        else:
            outgoing = OpBundle(delete_id=element.id)
        return new_state, BlockEffects(outgoing=outgoing, scenario=match.scenario, signals=sig)

    if match.scenario is PushScenario.ID_ONLY:
        sig = encode_delete(match.id_flag, width)
        new_state = apply_signals(state, sig, fill_value=next_head)
        return new_state, BlockEffects(
            outgoing=OpBundle(push=element, pop=True),
            needs_fill=True,
            scenario=match.scenario,
            signals=sig
        )

    # BOTH: the old entry and the new position are both inside this block's window
    if match.q < match.p:
        sig = encode_down_insert(match.data_flag, match.id_flag, width)
    else:
        sig = encode_up_insert(match.data_flag, match.id_flag, width)
    new_state = apply_signals(state, sig, new_element=element)
    return new_state, BlockEffects(scenario=match.scenario, signals=sig)


def _push_with_pop(state: BlockState, element: Element, next_head: Element) -> tuple[BlockState, BlockEffects]:
    width = state.width
    match = classify_push(state, element, next_head, pop_active=True)
    if match.q is not None:
        raise ContractViolation(f"push+pop for id {element.id} found a local match at slot {match.q}")
    if match.p == 0:
        raise ContractViolation(f"push+pop for {element} would insert ahead of the popped head")

    departing = state.slots[0]
    if match.p is None:
        sig = encode_pop(width)
        new_state = apply_signals(state, sig, fill_value=next_head)
        return new_state, BlockEffects(
            outgoing=OpBundle(push=element, pop=True),
            to_prev=departing,
            needs_fill=True,
            scenario=match.scenario,
            signals=sig
        )

    # The popped head acts as the matched slot: the push's away-from-head
    # shift and the pop's toward-head shift cancel above the insertion point.
    sig = encode_down_insert(match.data_flag, 1, width)
    new_state = apply_signals(state, sig, new_element=element)
    return new_state, BlockEffects(
        to_prev=departing,
        needs_fill=_needs_fill(sig, width),
        scenario=match.scenario,
        signals=sig
    )


def _pop(state: BlockState, next_head: Element, head_block: bool) -> tuple[BlockState, BlockEffects]:
    if state.is_empty():
        return state, BlockEffects(dequeued=EMPTY if head_block else None)
    departing = state.slots[0]
    sig = encode_pop(state.width)
    new_state = apply_signals(state, sig, fill_value=next_head)
    return new_state, BlockEffects(
        outgoing=OpBundle(pop=True),
        to_prev=departing,
        dequeued=departing if head_block else None,
        needs_fill=True,
        signals=sig
    )


def _delete(state: BlockState, delete_id: int, next_head: Element) -> tuple[BlockState, BlockEffects]:
    id_flag = id_match_flags(state.slots, delete_id)
    if id_flag == 0:
        return state, BlockEffects(outgoing=OpBundle(delete_id=delete_id))
    sig = encode_delete(id_flag, state.width)
    new_state = apply_signals(state, sig, fill_value=next_head)
    return new_state, BlockEffects(outgoing=OpBundle(pop=True), needs_fill=True, signals=sig)


def _push_first(
        state: BlockState,
        element: Element,
        delete_id: int | None
) -> tuple[BlockState, BlockEffects]:
    id_flag = id_match_flags(state.slots, delete_id) if delete_id is not None else 0
    sig = encode_push_first(id_flag, state.width)
    new_state = apply_signals(state, sig, new_element=element)
    if id_flag:
        return new_state, BlockEffects(signals=sig)

    overflow = state.slots[-1]
    outgoing = OpBundle(
        push_first=overflow if overflow.valid else None,
        delete_id=delete_id
    )
    return new_state, BlockEffects(outgoing=outgoing, signals=sig)
