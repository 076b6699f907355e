import math

import pytest
from hypothesis import given, strategies as st

from larmorclock import (ClockWindow, Particle, PotentialProfile, Segment, Spike, UnitSystem,
                         barrier_from_groups, build_delta_dimer, build_rect_barrier)
from larmorclock.errors import ProfileError

heights = st.floats(-5, 5, allow_nan=False)
widths = st.floats(1e-3, 20, allow_nan=False)


def test_units_fixed():
    UnitSystem()
    with pytest.raises(ProfileError):
        UnitSystem(hbar=2.0)


def test_particle_k0():
    p = Particle(0.5)
    assert p.k0 == 1.0
    q = Particle.from_k0(3.0)
    assert q.k0 ** 2 == pytest.approx(2 * q.energy, rel=1e-15)
    for bad in (0.0, -1.0, math.inf):
        with pytest.raises(ProfileError):
            Particle(bad)


def test_profile_validation():
    with pytest.raises(ProfileError):
        PotentialProfile((Segment(1.0, 0.0),))
    with pytest.raises(ProfileError):
        PotentialProfile((Segment(math.nan, 1.0),))
    with pytest.raises(ProfileError):
        PotentialProfile((Segment(1.0, 1.0),), (Spike(1.0, 1.5),))
    PotentialProfile((Segment(1.0, 1.0),), (Spike(1.0, 1.0),))


def test_boundaries_and_window():
    p = PotentialProfile((Segment(1.0, 2.0), Segment(0.0, 3.0)), origin=-1.0)
    assert p.boundaries() == [-1.0, 1.0, 4.0]
    assert p.total_width == 5.0
    w = ClockWindow(1.0, 4.0)
    w.check_alignment(p)
    with pytest.raises(ProfileError):
        ClockWindow(0.5, 4.0).check_alignment(p)
    assert [s.height for s, _a, _b in p.segments_between(1.0, 4.0)] == [0.0]


def test_window_zeta_and_validation():
    w = ClockWindow(0.0, 2.5, 0.1)
    assert w.zeta == pytest.approx(0.25)
    assert w.with_omega(0.2).zeta == pytest.approx(0.5)
    with pytest.raises(ProfileError):
        ClockWindow(1.0, 1.0)
    with pytest.raises(ProfileError):
        ClockWindow(0.0, 1.0, -1e-3)


def test_builders():
    p, c, part = barrier_from_groups(2.0, 5.0)
    assert part.energy == 0.5 and p.segments[0].height == 1.0 and c.length == 5.0
    d = build_delta_dimer(1.0, 2.0, 0.5)
    assert [(s.strength, s.position) for s in d.spikes] == [(1.0, 0.0), (0.5, 2.0)]
    assert build_delta_dimer(1.0, 2.0).spikes[1].strength == 1.0
    with pytest.raises(ProfileError):
        build_rect_barrier(1.0, -1.0)
    with pytest.raises(ProfileError):
        barrier_from_groups(2.0, 0.0)


@given(st.lists(st.tuples(heights, widths), min_size=1, max_size=6),
       st.lists(st.tuples(heights, st.floats(0, 1)), max_size=3),
       st.floats(-10, 10))
def test_text_round_trip(segs, spikes, origin):
    base = PotentialProfile(tuple(Segment(h, w) for h, w in segs), origin=origin)
    span = base.end - base.origin
    sp = tuple(Spike(g, origin + f * span) for g, f in spikes if origin + f * span <= base.end)
    p = PotentialProfile(base.segments, sp, origin)
    assert PotentialProfile.from_text(p.to_text()) == p


def test_from_text_errors():
    with pytest.raises(ProfileError):
        PotentialProfile.from_text("segments=1\n")
    with pytest.raises(ProfileError):
        PotentialProfile.from_text("nonsense\n")
