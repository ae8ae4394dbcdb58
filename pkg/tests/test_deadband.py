import pytest
from hypothesis import given, strategies as st

from teleswitch.deadband import DeadbandCodec, reconstruct, should_transmit


def codec(last_tx, floor=0.01, dbp=0.1):
    return DeadbandCodec(dbp=dbp, abs_floor=floor, last_tx=last_tx)


def test_inside_band_is_suppressed():
    assert not should_transmit(1.09, codec(1.0))


def test_outside_band_is_sent():
    c = codec(1.0)
    assert should_transmit(1.12, c)
    assert c.last_tx == 1.12


def test_floor_near_zero():
    assert not should_transmit(0.005, codec(0.0))
    assert should_transmit(0.02, codec(0.0))


def test_first_sample_always_sent():
    assert should_transmit(0.0, DeadbandCodec())


def test_zero_dbp_sends_everything():
    c = DeadbandCodec(dbp=0.0)
    assert all(should_transmit(v, c) for v in [1.0, 1.0, 1.0, 0.0])


def test_zero_order_hold():
    c = DeadbandCodec()
    assert reconstruct(None, c) == 0.0
    assert reconstruct(0.3, c) == 0.3
    assert reconstruct(None, c) == 0.3


def test_reset_forces_next_sample():
    c = codec(1.0)
    c.reset_sender()
    assert should_transmit(1.0, c)


@pytest.mark.parametrize("kw", [dict(dbp=1.0), dict(dbp=-0.1), dict(abs_floor=-1.0)])
def test_invalid(kw):
    with pytest.raises(ValueError):
        DeadbandCodec(**kw)


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=200), st.floats(0, 0.5), st.floats(0, 0.1))
def test_coverage(signal, dbp, floor):
    """Every sample is either sent or within the band of the value the
    receiver holds."""
    tx = DeadbandCodec(dbp=dbp, abs_floor=floor)
    rx = DeadbandCodec(dbp=dbp, abs_floor=floor)
    for v in signal:
        prev = tx.last_tx
        if should_transmit(v, tx):
            held = reconstruct(v, rx)
            assert held == v
        else:
            held = reconstruct(None, rx)
            assert held == prev
            assert abs(v - held) <= dbp * abs(held) + floor
