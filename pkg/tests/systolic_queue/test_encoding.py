import pytest
from systolic_queue import EMPTY, BlockState, Element, apply_signals
from systolic_queue.encoding import (
    ControlSignals,
    data_compare_flags,
    encode_delete,
    encode_down_insert,
    encode_pop,
    encode_push_first,
    encode_up_insert,
    id_match_flags,
    is_monotone,
    is_one_hot_or_zero,
    lowest_set_bit,
    width_mask,
)
from tests.systolic_queue.conftest import make_block

WIDTH = 8
FILL = Element(50, 999)


def full_block() -> list[Element]:
    return [Element(id=s + 1, data=10 * (s + 1)) for s in range(WIDTH)]


def partial_block() -> list[Element]:
    return [Element(id=s + 1, data=10 * (s + 1)) for s in range(5)] + [EMPTY] * 3


def brute_force_push(slots: list[Element], element: Element) -> tuple[list[Element], Element]:
    """Remove the pushed ID, re-insert after every equal DATA, spill past the top."""
    remaining = [s for s in slots if s.valid and s.id != element.id]
    position = next((i for i, s in enumerate(remaining) if s.data > element.data), len(remaining))
    remaining.insert(position, element)
    remaining += [EMPTY] * (len(slots) + 1 - len(remaining))
    return remaining[:len(slots)], remaining[len(slots)]


def encoded_push(slots: list[Element], element: Element) -> tuple[list[Element], Element, ControlSignals]:
    """Variant selection: down when the ID match lies below the insertion point."""
    width = len(slots)
    id_flag = id_match_flags(slots, element.id)
    data_flag = data_compare_flags(slots, EMPTY, element.data) & width_mask(width)
    q, p = lowest_set_bit(id_flag), lowest_set_bit(data_flag)
    if id_flag and (p is None or q < p):
        sig = encode_down_insert(data_flag, id_flag, width)
    else:
        sig = encode_up_insert(data_flag, id_flag, width)
    state = apply_signals(BlockState(slots=tuple(slots)), sig, new_element=element)
    if not id_flag and not data_flag:
        overflow = element
    else:
        overflow = slots[-1] if sig.emit_top else EMPTY
    return list(state.slots), overflow, sig


def push_candidates(slots: list[Element]) -> list[Element]:
    """Every ID-match position (or none) crossed with every insertion point, ties included."""
    valid = [s for s in slots if s.valid]
    data_points = {0, valid[-1].data + 5}
    for s in valid:
        data_points.update({s.data, s.data + 5})
    ids = [s.id for s in valid] + [99]
    return [Element(id, data) for id in ids for data in sorted(data_points)]


class TestIdMatchFlags:
    """Tests for ID equality flags"""

    def test_match_is_one_hot(self, sinking_update_block):
        """Test id 7 stored at slot 2 gives 0000_0100"""
        assert id_match_flags(sinking_update_block.slots, 7) == 0b0000_0100

    def test_absent(self, sinking_update_block):
        """Test an absent id gives all zeros"""
        assert id_match_flags(sinking_update_block.slots, 42) == 0

    def test_zero_never_matches(self):
        """Test id 0 does not match empty slots"""
        assert id_match_flags(make_block((3, 1)).slots, 0) == 0


class TestDataCompareFlags:
    """Tests for the M+1 broadcast comparison"""

    def test_sinking_update_vector(self, sinking_update_block):
        """Test push DATA 21 against [2..30] flags slots 6 and 7"""
        flags = data_compare_flags(sinking_update_block.slots, EMPTY, 21)
        assert flags & width_mask(WIDTH) == 0b1100_0000
        assert flags >> WIDTH == 1

    def test_empty_block(self):
        """Test every empty slot exceeds the pushed DATA"""
        assert data_compare_flags(make_block().slots, EMPTY, 5) == 0b1_1111_1111

    def test_rising_update_vector(self, rising_update_block):
        """Test push DATA 9 against [3,5,10,...] flags slots 2..7"""
        assert data_compare_flags(rising_update_block.slots, EMPTY, 9) & width_mask(WIDTH) == 0b1111_1100

    def test_equal_data_is_not_flagged(self):
        """Test the comparison is strict so equal DATA lands after its peers"""
        block = make_block((1, 3), (2, 5), (3, 9), (4, 12), (5, 17), (6, 20), (7, 22), (8, 40))
        assert data_compare_flags(block.slots, EMPTY, 9) & width_mask(WIDTH) == 0b1111_1000

    def test_next_head_bit(self, sinking_update_block):
        """Test bit M compares against the next block's head"""
        assert data_compare_flags(sinking_update_block.slots, Element(10, 35), 31) == 1 << WIDTH
        assert data_compare_flags(sinking_update_block.slots, Element(10, 31), 31) == 0

    def test_monotone_over_sorted_block(self, sinking_update_block):
        """Test the flag vector is monotone for every pushed DATA"""
        for data in range(0, 40):
            assert is_monotone(data_compare_flags(sinking_update_block.slots, EMPTY, data), WIDTH + 1)


class TestEncodeDownInsert:
    """Tests for the toward-head insert encoder"""

    def test_reference_vector(self):
        """Test set 0010_0000 and shift 0001_1100"""
        sig = encode_down_insert(0b1100_0000, 0b0000_0100, WIDTH)
        assert sig.set_en == 0b0010_0000
        assert sig.down_en == 0b0001_1100
        assert sig.up_en == 0
        assert not sig.fill_top

    def test_no_local_insertion_point(self):
        """Test data_flag 0 sets slot M-1 through the interface register"""
        sig = encode_down_insert(0, 0b0000_0100, WIDTH)
        assert sig.set_en == 0b1000_0000
        assert sig.down_en == 0b0111_1100
        assert sig.fill_top

    def test_reset_in_place(self):
        """Test q=0, p=1 rewrites slot 0 only"""
        sig = encode_down_insert(0b1111_1110, 0b0000_0001, WIDTH)
        assert sig.set_en == 0b0000_0001
        assert sig.down_en == 0


class TestEncodeUpInsert:
    """Tests for the away-from-head insert encoder"""

    def test_reference_vector(self):
        """Test set 0000_0100 and shift 0111_1000"""
        sig = encode_up_insert(0b1111_1100, 0b0100_0000, WIDTH)
        assert sig.set_en == 0b0000_0100
        assert sig.up_en == 0b0111_1000
        assert not sig.emit_top

    def test_pure_enqueue_at_head(self):
        """Test an all-ones data_flag without match shifts everything and overflows"""
        sig = encode_up_insert(0b1111_1111, 0, WIDTH)
        assert sig.set_en == 0b0000_0001
        assert sig.up_en == 0b1111_1110
        assert sig.emit_top

    @pytest.mark.parametrize("id_flag", [0, 0b1, 0b1000_0000])
    def test_no_insertion(self, id_flag):
        """Test data_flag 0 produces no writes"""
        assert encode_up_insert(0, id_flag, WIDTH) == ControlSignals()


class TestEncodeDelete:
    """Tests for the delete encoder"""

    def test_middle_slot(self):
        """Test removing slot 2 compacts everything above it"""
        sig = encode_delete(0b0000_0100, WIDTH)
        assert sig.down_en == 0b1111_1100
        assert sig.fill_top

    def test_no_match(self):
        """Test an absent id gives all-zero signals"""
        assert encode_delete(0, WIDTH) == ControlSignals()

    def test_top_slot(self):
        """Test only slot M-1 is replaced"""
        sig = encode_delete(0b1000_0000, WIDTH)
        assert sig.down_en == 0b1000_0000
        assert sig.fill_top


class TestEncodePushFirst:
    """Tests for the push-first encoder"""

    def test_no_match_overflows(self):
        """Test prepend with a full shift"""
        sig = encode_push_first(0, WIDTH)
        assert sig.set_en == 0b0000_0001
        assert sig.up_en == 0b1111_1110
        assert sig.emit_top

    def test_match_absorbs_shift(self):
        """Test slots 1..2 receive from below and the match is overwritten"""
        sig = encode_push_first(0b0000_0100, WIDTH)
        assert sig.set_en == 0b0000_0001
        assert sig.up_en == 0b0000_0110
        assert not sig.emit_top

    def test_match_at_slot_zero(self):
        """Test a match at the insertion slot is a direct overwrite"""
        sig = encode_push_first(0b0000_0001, WIDTH)
        assert sig.set_en == 0b0000_0001
        assert sig.up_en == 0


class TestEncodePop:
    """Tests for the pop encoder"""

    @pytest.mark.parametrize("width,down_en", [(8, 0b0111_1111), (2, 0b01)])
    def test_masks(self, width, down_en):
        """Test every slot but the top takes from above"""
        sig = encode_pop(width)
        assert sig.down_en == down_en
        assert sig.fill_top
        assert sig.emit_bottom

    def test_empty_block_stays_empty(self):
        """Test shifting empties is a no-op"""
        state = apply_signals(make_block(), encode_pop(WIDTH))
        assert state.slots == (EMPTY,) * WIDTH


class TestOracleEquivalence:
    """Exhaustive check of the encoders against a remove-and-reinsert model at M=8"""

    @pytest.mark.parametrize("slots_factory", [full_block, partial_block])
    def test_push_variants(self, slots_factory):
        """Test every (id_flag, data_flag) pair reachable from a sorted block"""
        slots = slots_factory()
        seen = set()
        for element in push_candidates(slots):
            expected_slots, expected_overflow = brute_force_push(slots, element)
            actual_slots, actual_overflow, sig = encoded_push(slots, element)
            assert actual_slots == expected_slots, f"push {element}"
            assert actual_overflow == expected_overflow, f"push {element}"
            assert sig.masks_disjoint()
            assert is_one_hot_or_zero(sig.set_en)
            seen.add((id_match_flags(slots, element.id), data_compare_flags(slots, EMPTY, element.data) & 0xFF))
        assert len(seen) == (81 if slots_factory is full_block else 36)

    @pytest.mark.parametrize("q", [None, *range(WIDTH)])
    def test_delete(self, q):
        """Test delete removes the match and fills the top from the interface"""
        slots = full_block()
        id_flag = 0 if q is None else 1 << q
        state = apply_signals(BlockState(slots=tuple(slots)), encode_delete(id_flag, WIDTH), fill_value=FILL)
        expected = slots if q is None else slots[:q] + slots[q + 1:] + [FILL]
        assert list(state.slots) == expected

    @pytest.mark.parametrize("q", [None, *range(WIDTH)])
    def test_push_first(self, q):
        """Test push-first prepends and either absorbs the match or overflows"""
        slots = full_block()
        element = Element(77, 1)
        id_flag = 0 if q is None else 1 << q
        sig = encode_push_first(id_flag, WIDTH)
        state = apply_signals(BlockState(slots=tuple(slots)), sig, new_element=element)
        remaining = [element] + [s for i, s in enumerate(slots) if i != q]
        assert list(state.slots) == remaining[:WIDTH]
        if q is None:
            assert sig.emit_top
            assert state.interface == slots[-1]

    def test_pop(self):
        """Test pop drops slot 0 and fills the top"""
        slots = full_block()
        state = apply_signals(BlockState(slots=tuple(slots)), encode_pop(WIDTH), fill_value=FILL)
        assert list(state.slots) == slots[1:] + [FILL]

    @pytest.mark.parametrize("data", [15, 25, 45, 75, 80, 85])
    def test_down_insert_with_popped_head(self, data):
        """Test id_flag on slot 0 models push+pop: drop the head, insert in order"""
        slots = full_block()
        element = Element(99, data)
        data_flag = data_compare_flags(slots, EMPTY, data) & width_mask(WIDTH)
        sig = encode_down_insert(data_flag, 0b1, WIDTH)
        state = apply_signals(BlockState(slots=tuple(slots)), sig, new_element=element)
        expected, _ = brute_force_push(slots[1:] + [EMPTY], element)
        assert list(state.slots) == expected

    def test_up_insert_without_match(self):
        """Test pure enqueue overflows the old top slot"""
        slots = full_block()
        for data in (5, 35, 75):
            element = Element(99, data)
            actual, overflow, _ = encoded_push(slots, element)
            expected, spilled = brute_force_push(slots, element)
            assert actual == expected
            assert overflow == spilled == slots[-1]
