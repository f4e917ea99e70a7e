import doctest

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import envelopes, pointwise
import vbrcac.envelope as envelope_mod
from vbrcac.envelope import (
    Channel,
    InvalidEnvelopeError,
    OverlapError,
    Peak,
    StreamEnvelope,
    envelope_from_bits,
    height_at,
    heights_at,
    normalize,
    shift,
    sum_envelopes,
    validate,
)


def test_doctests():
    assert doctest.testmod(envelope_mod).failed == 0


def test_validate_examples():
    assert validate([(3, 0, 10)]) == []
    (v,) = validate([(3, 0, 10), (3, 10, 20)])
    assert v.message == "adjacent equal heights" and v.index == 1
    (v,) = validate([(3, 0, 10), (1, 12, 20)])
    assert v.message == "gap at [10,12)"


def test_validate_other_violations():
    kinds = {v.kind for v in validate([(1, 2, 2), (-1, 1, 3)])}
    assert {"origin", "length", "height", "overlap"} <= kinds


def test_normalize_examples():
    assert normalize([(3, 0, 10), (3, 10, 20)]).to_list() == [[3, 0, 20]]
    assert normalize([(3, 0, 10), (1, 12, 20)]).to_list() == [[3, 0, 10], [0, 10, 12], [1, 12, 20]]
    with pytest.raises(OverlapError) as info:
        normalize([(2, 0, 5), (4, 3, 8)])
    assert info.value.pair == (0, 1)


def test_normalize_accepts_unsorted_and_leading_gap():
    env = normalize([(2, 5, 7), (1, 2, 5)])
    assert env.to_list() == [[0, 0, 2], [1, 2, 5], [2, 5, 7]]


def test_constructor_rejects_unnormalized():
    with pytest.raises(InvalidEnvelopeError):
        StreamEnvelope([(3, 0, 10), (3, 10, 20)])


def test_immutable():
    env = normalize([(1, 0, 3)])
    with pytest.raises(AttributeError):
        env.heights = None
    with pytest.raises(ValueError):
        env.heights[0] = 7


def test_shift_examples():
    one = normalize([(1, 0, 4)])
    assert shift(one, 0) == one
    assert shift(one, 3).to_list() == [[0, 0, 3], [1, 3, 7]]
    assert shift(normalize([(0, 0, 2), (5, 2, 3)]), 2).to_list() == [[0, 0, 4], [5, 4, 5]]
    with pytest.raises(ValueError):
        shift(one, -1)


def test_sum_examples():
    a = normalize([(2, 0, 4)])
    assert sum_envelopes(a, normalize([(0, 0, 4)])) == a
    assert sum_envelopes(a, normalize([(3, 0, 2), (0, 2, 4)])).to_list() == [[5, 0, 2], [2, 2, 4]]


def test_height_at_examples():
    assert height_at(normalize([(3, 0, 10)]), 5) == 3
    assert height_at(normalize([(3, 0, 10)]), 10) == 0
    assert height_at(normalize([(3, 0, 10), (1, 10, 12)]), 10) == 1
    assert height_at(normalize([(3, 0, 10)]), -1) == 0


def test_channel_and_peak():
    assert Peak(2, 3, 7).length == 4
    with pytest.raises(ValueError):
        Channel(0)


def test_envelope_from_bits():
    assert envelope_from_bits("0110").to_list() == [[0, 0, 1], [1, 1, 3], [0, 3, 4]]


def test_empty_envelope():
    e = StreamEnvelope()
    assert len(e) == 0 and e.length == 0 and e.max_height == 0
    assert shift(e, 3).to_list() == [[0, 0, 3]]
    assert sum_envelopes(e, normalize([(1, 0, 2)])).to_list() == [[1, 0, 2]]


@given(envelopes())
def test_normalized_envelopes_validate(env):
    assert validate(env) == []
    assert normalize(env.peaks) == env


@given(envelopes(), st.integers(0, 12))
def test_shift_is_pointwise_delay(env, d):
    horizon = env.length + d + 3
    before = pointwise(env, horizon)
    after = pointwise(shift(env, d), horizon)
    assert after == [0] * d + before[:horizon - d]
    assert validate(shift(env, d)) == []


@given(envelopes(), envelopes(), envelopes())
def test_sum_matches_pointwise_and_associates(a, b, c):
    horizon = max(a.length, b.length, c.length) + 2
    ab_c = sum_envelopes(sum_envelopes(a, b), c)
    a_bc = sum_envelopes(a, sum_envelopes(b, c))
    assert ab_c == a_bc == sum_envelopes(c, a, b)
    want = [x + y + z for x, y, z in zip(pointwise(a, horizon), pointwise(b, horizon), pointwise(c, horizon))]
    assert pointwise(ab_c, horizon) == want
    assert validate(ab_c) == []


@settings(max_examples=50)
@given(envelopes())
def test_heights_at_breakpoints(env):
    ts = np.arange(-1, env.length + 2)
    assert heights_at(env, ts).tolist() == [0] + pointwise(env, env.length + 2)
