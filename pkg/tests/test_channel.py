import pytest
from hypothesis import given, strategies as st

from teleswitch.channel import (
    DelayChannel,
    DelayProfile,
    Direction,
    MotionCmd,
    Packet,
    RttMonitor,
    RttProbe,
)

FWD = Direction.FORWARD
TS = 0.001


def pkt(seq, t=0.0):
    return Packet(seq=seq, send_time=t, payload=MotionCmd(0.0, 0.0))


def test_constant_delay():
    ch = DelayChannel(DelayProfile(((0.0, 0.010, 0.010),)))
    ch.send(pkt(0), FWD, 0.0)
    assert ch.deliver(FWD, 0.009) == []
    out = ch.deliver(FWD, 0.010)
    assert [p.seq for p in out] == [0]
    assert out[0].delivery_time == pytest.approx(0.010)


def test_zero_delay_same_tick():
    ch = DelayChannel(DelayProfile.constant(0.0))
    ch.send(pkt(0, 0.005), FWD, 0.005)
    assert len(ch.deliver(FWD, 0.005)) == 1


def test_empty():
    assert DelayChannel(DelayProfile.constant(0.02)).deliver(FWD, 1.0) == []


def test_same_tick_in_seq_order():
    ch = DelayChannel(DelayProfile.constant(0.0))
    ch.send(pkt(0), FWD, 0.0)
    ch.send(pkt(1), FWD, 0.0)
    assert [p.seq for p in ch.deliver(FWD, 0.0)] == [0, 1]


def step_profile():
    return DelayProfile(((0.0, 0.100, 0.100), (1.0, 0.010, 0.010)))


def test_delay_drop_does_not_overtake():
    ch = DelayChannel(step_profile())
    a = ch.send(pkt(0, 0.999), FWD, 0.999)
    b = ch.send(pkt(1, 1.001), FWD, 1.001)
    assert a.delivery_time == pytest.approx(1.099)
    assert b.delivery_time == pytest.approx(1.099)
    assert [p.seq for p in ch.deliver(FWD, 1.099)] == [0, 1]


def test_send_validation():
    ch = DelayChannel(DelayProfile.constant(0.0))
    with pytest.raises(ValueError):
        ch.send(pkt(1), FWD, 0.0)
    ch.send(pkt(0, 0.002), FWD, 0.002)
    with pytest.raises(ValueError):
        ch.send(pkt(1, 0.001), FWD, 0.001)
    with pytest.raises(ValueError):
        ch.send(pkt(1, 0.0025), FWD, 0.0025)


@pytest.mark.parametrize("segs", [(), ((0.0, -0.01, 0.0),), ((0.0, 0.0, 0.0), (0.0, 0.1, 0.1))])
def test_invalid_profiles(segs):
    with pytest.raises(ValueError):
        DelayProfile(segs)


def test_constant_profile_splits_on_ticks():
    fwd, bwd = DelayProfile.constant(0.025).delays_at(0.0)
    assert round(fwd / TS) + round(bwd / TS) == 25


@given(
    st.lists(st.tuples(st.integers(0, 300), st.integers(0, 40), st.integers(0, 40)), min_size=1, max_size=5),
    st.lists(st.integers(0, 3), min_size=1, max_size=400),
)
def test_conservation_and_order(segments, sends_per_tick):
    starts = sorted({s for s, _, _ in segments})
    segs = tuple((s * TS, f * TS, b * TS) for s, (_, f, b) in zip(starts, segments))
    ch = DelayChannel(DelayProfile(segs), TS)
    delivered, sent = [], 0
    for k, n in enumerate(sends_per_tick):
        t = k * TS
        for _ in range(n):
            p = ch.transmit(FWD, MotionCmd(0.0, 0.0), t)
            assert p.delivery_time >= t - 1e-12
            sent += 1
        for p in ch.deliver(FWD, t):
            assert p.delivery_time <= t + 1e-12
            delivered.append(p.seq)
    for p in ch.deliver(FWD, 10.0):
        delivered.append(p.seq)
    assert delivered == list(range(sent))
    assert ch.sent_count(FWD) == ch.delivered_count(FWD) == sent


def _probe_loop(profile, until):
    """Drive probes and echoes through a channel the way the session does."""
    ch = DelayChannel(profile, TS)
    mon = RttMonitor(profile.initial_rtt)
    log = []
    for k in range(round(until / TS)):
        t = k * TS
        if mon.probe_due(t):
            ch.transmit(FWD, RttProbe(t), t)
        for p in ch.deliver(FWD, t):
            ch.transmit(Direction.BACKWARD, RttProbe(p.payload.sent_at, t), t)
        for p in ch.deliver(Direction.BACKWARD, t):
            mon.on_echo(p.payload, t)
            log.append((t, mon.measure_rtt(t)))
    return mon, log


def test_rtt_constant():
    mon, log = _probe_loop(DelayProfile.constant(0.050), 0.5)
    assert log
    assert mon.measure_rtt() == pytest.approx(0.050, abs=TS)


def test_rtt_zero():
    mon, _ = _probe_loop(DelayProfile.constant(0.0), 0.5)
    assert mon.measure_rtt() == 0.0


def test_rtt_step_tracks_with_ewma():
    profile = DelayProfile(((0.0, 0.005, 0.005), (5.0, 0.050, 0.050)))
    mon, log = _probe_loop(profile, 8.0)
    before = [r for t, r in log if t <= 5.0]
    assert before[-1] == pytest.approx(0.010, abs=TS)
    after = [r for t, r in log if t > 5.0]
    assert after[14] == pytest.approx(0.100, abs=0.005)
    # the recurrence itself: 0.01 + 0.09 * (1 - 0.8^k)
    assert after[0] == pytest.approx(0.010 + 0.2 * 0.090, abs=1e-12)


def test_rtt_smoothing_validated():
    with pytest.raises(ValueError):
        RttMonitor(0.0, smoothing=0.0)
