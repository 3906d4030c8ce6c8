import pytest

from keys.keyspace import keyspace_bits


def iterative_factorial(n):
    result = 1
    for k in range(2, n + 1):
        result *= k
    return result


def test_shuffle_three_elements():
    space = keyspace_bits('shuffle', 3, 1)
    assert space.count == 6
    assert str(space) == "keyspace: 6 (2.585 bits)"


def test_flip_three_elements():
    space = keyspace_bits('flip', 3, 1)
    assert space.count == 8
    assert space.bits == 3.0


def test_shuffle_spectrogram_blocks():
    assert keyspace_bits('shuffle', 3, 2).count == 362880


def test_flip_spectrogram_blocks_exact():
    assert keyspace_bits('flip', 10, 2).count == 2 ** 100


@pytest.mark.parametrize("M", range(1, 21))
def test_shuffle_count_is_factorial(M):
    assert keyspace_bits('shuffle', M, 1).count == iterative_factorial(M)


def test_rom_is_continuous():
    space = keyspace_bits('rom', 3, 1)
    assert space.continuous
    assert space.count is None
    assert "3x3" in str(space)
    assert str(space).startswith("keyspace: continuous")
