import pytest
from systolic_queue import BlockState, Element, QueueConfig, new_engine


def make_block(*pairs: tuple[int, int], width: int = 8) -> BlockState:
    """Build a block from (id, data) pairs, padding the top with empty slots."""
    slots = [Element(id, data) for id, data in pairs]
    slots += [Element()] * (width - len(slots))
    return BlockState(slots=tuple(slots))


@pytest.fixture
def small_config():
    """N=2, M=4 array (capacity 8)"""
    return QueueConfig.build(n_blocks=2, slots_per_block=4)


@pytest.fixture
def depth256_config():
    """Depth-256 array: 32 blocks of 8 slots, 16-bit DATA"""
    return QueueConfig.build(n_blocks=32, slots_per_block=8, data_width=16)


@pytest.fixture
def engine(small_config):
    """Fresh engine over the small configuration"""
    return new_engine(small_config)


@pytest.fixture
def sinking_update_block():
    """Sorted block holding id 7 at slot 2, data [2,4,6,8,10,15,25,30]"""
    return make_block((1, 2), (2, 4), (7, 6), (4, 8), (5, 10), (6, 15), (8, 25), (9, 30))


@pytest.fixture
def rising_update_block():
    """Sorted block holding id 9 at slot 6, data [3,5,10,12,17,20,22,40]"""
    return make_block((1, 3), (2, 5), (3, 10), (4, 12), (5, 17), (6, 20), (9, 22), (8, 40))
