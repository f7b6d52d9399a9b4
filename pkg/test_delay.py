# test_delay.py

import numpy as np
import pytest

from delay.delay_line import DelayLine, delay_push
from utils.errors import ConfigError


def test_zero_delay_is_identity():
    line = DelayLine(0, fill_value=-1.0)
    assert [delay_push(line, v) for v in (1.0, 2.0, 3.0)] == [1.0, 2.0, 3.0]
    assert len(line) == 0


def test_two_step_delay():
    line = DelayLine(2, fill_value=0.0)
    out = [delay_push(line, v) for v in (1.0, 2.0, 3.0, 4.0)]
    assert out == [0.0, 0.0, 1.0, 2.0]
    assert len(line) == 2


def test_long_random_sequence():
    rng = np.random.default_rng(20)
    values = rng.normal(size=1000)
    line = DelayLine(40, fill_value=0.0)
    out = np.array([delay_push(line, v) for v in values])
    assert np.all(out[:40] == 0.0)
    assert np.array_equal(out[40:], values[:-40])


def test_delays_compose():
    rng = np.random.default_rng(21)
    values = rng.normal(size=200)
    a, b = DelayLine(3, 0.0), DelayLine(5, 0.0)
    combined = DelayLine(8, 0.0)
    chained = [b.push(a.push(v)) for v in values]
    direct = [combined.push(v) for v in values]
    assert chained == direct


def test_any_value_type():
    line = DelayLine(1, fill_value=("start", 0))
    assert line.push(("a", 1)) == ("start", 0)
    assert line.push(("b", 2)) == ("a", 1)


@pytest.mark.parametrize("k", [-1, 1.5])
def test_invalid_length_rejected(k):
    with pytest.raises(ConfigError):
        DelayLine(k, 0.0)
