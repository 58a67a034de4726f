import itertools
import pytest
from pydantic import ValidationError
from systolic_queue import EMPTY, ConfigError, Element, QueueConfig, element_less, min_id_width, new_engine, validate_config


class TestElement:
    """Tests for the Element pair"""

    def test_zero_id_is_empty(self):
        """Test that id 0 marks an invalid slot"""
        assert not EMPTY.valid
        assert not Element(0, 17).valid
        assert Element(3, 0).valid

    def test_str(self):
        """Test the compact text form used in logs and reports"""
        assert str(Element(7, 21)) == '(7,21)'
        assert str(EMPTY) == '(-)'


class TestElementLess:
    """Tests for element ordering"""

    def test_valid_beats_empty(self):
        """Test that any valid element ranks before an empty slot"""
        assert element_less(Element(5, 7), EMPTY)

    def test_equal_keys_are_not_less(self):
        """Test the comparison is strict on equal DATA"""
        assert not element_less(Element(1, 21), Element(2, 21))
        assert not element_less(Element(2, 21), Element(1, 21))

    def test_empty_never_less(self):
        """Test empty elements never rank before anything"""
        assert not element_less(EMPTY, EMPTY)
        assert not element_less(EMPTY, Element(1, 0))

    def test_smaller_data_wins(self):
        """Test smaller DATA means higher priority"""
        assert element_less(Element(9, 3), Element(1, 4))
        assert not element_less(Element(1, 4), Element(9, 3))

    def test_strict_weak_ordering(self):
        """Test irreflexivity, asymmetry and transitivity over a sample"""
        sample = [EMPTY, Element(1, 0), Element(2, 0), Element(3, 5), Element(4, 9), Element(5, 9)]
        for a in sample:
            assert not element_less(a, a)
        for a, b in itertools.permutations(sample, 2):
            assert not (element_less(a, b) and element_less(b, a))
        for a, b, c in itertools.permutations(sample, 3):
            if element_less(a, b) and element_less(b, c):
                assert element_less(a, c)


class TestQueueConfig:
    """Tests for QueueConfig construction"""

    def test_depth_256_derives_nine_bit_ids(self, depth256_config):
        """Test 256 slots need 9-bit IDs once ID 0 is reserved"""
        assert depth256_config.capacity == 256
        assert depth256_config.id_width == 9
        assert depth256_config.max_id == 511

    def test_id_width_kept_when_given(self):
        """Test an explicit id_width is not overwritten"""
        config = QueueConfig.build(n_blocks=2, slots_per_block=4, id_width=12)
        assert config.id_width == 12

    def test_defaults(self):
        """Test default DATA width and issue interval"""
        config = QueueConfig.build(n_blocks=1, slots_per_block=2)
        assert config.data_width == 16
        assert config.issue_interval == 4
        assert config.max_data == 65535

    def test_fits(self, small_config):
        """Test field range checks"""
        assert small_config.fits_id(1)
        assert small_config.fits_id(small_config.max_id)
        assert not small_config.fits_id(0)
        assert not small_config.fits_id(small_config.max_id + 1)
        assert small_config.fits_data(0)
        assert not small_config.fits_data(-1)

    def test_frozen(self, small_config):
        """Test configurations cannot be changed after creation"""
        with pytest.raises(ValidationError):
            small_config.n_blocks = 3

    @pytest.mark.parametrize("capacity,expected", [(1, 1), (3, 2), (4, 3), (16, 5), (255, 8), (256, 9)])
    def test_min_id_width(self, capacity, expected):
        """Test the ID width counts the reserved zero"""
        assert min_id_width(capacity) == expected


class TestValidateConfig:
    """Tests for configuration validation"""

    def test_depth256_configuration_is_valid(self):
        """Test N=32, M=8, id 9, data 16, interval 4 passes"""
        config = QueueConfig(n_blocks=32, slots_per_block=8, id_width=9, data_width=16, issue_interval=4)
        assert validate_config(config) == []

    def test_id_width_one_short(self):
        """Test 8-bit IDs are rejected for a depth of 256"""
        config = QueueConfig(n_blocks=32, slots_per_block=8, id_width=8)
        violations = validate_config(config)
        assert len(violations) == 1
        assert '255 usable IDs' in violations[0]
        assert 'capacity 256' in violations[0]

    def test_single_slot_blocks_rejected(self):
        """Test M=1 is a violation"""
        violations = validate_config(QueueConfig.build(n_blocks=4, slots_per_block=1))
        assert violations == ["slots_per_block must be >= 2, got 1"]

    def test_every_violation_reported(self):
        """Test all broken invariants are listed together"""
        config = QueueConfig(n_blocks=0, slots_per_block=2, id_width=4, data_width=0, issue_interval=3)
        violations = validate_config(config)
        assert len(violations) == 3
        assert any('n_blocks' in v for v in violations)
        assert any('data_width' in v for v in violations)
        assert any('issue_interval must be >= 4' in v for v in violations)

    def test_new_engine_raises_config_error(self):
        """Test an invalid configuration cannot build an engine"""
        with pytest.raises(ConfigError, match="slots_per_block") as exc_info:
            new_engine(QueueConfig.build(n_blocks=4, slots_per_block=1))
        assert exc_info.value.violations == ["slots_per_block must be >= 2, got 1"]
