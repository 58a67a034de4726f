import pytest
from systolic_queue import QueueConfig


@pytest.fixture
def config_2x4():
    return QueueConfig.build(n_blocks=2, slots_per_block=4)


@pytest.fixture
def config_4x4():
    return QueueConfig.build(n_blocks=4, slots_per_block=4)


@pytest.fixture
def depth256_config():
    """Depth-256 array: 32 blocks of 8 slots"""
    return QueueConfig.build(n_blocks=32, slots_per_block=8, data_width=16)
