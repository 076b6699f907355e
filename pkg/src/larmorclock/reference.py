"""Benchmark timescales: Buttiker-Landauer, Eisenbud-Wigner and dwell time."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import ConvergenceError, RegimeError
from .potential import HBAR, MASS, ClockWindow, PotentialProfile
from .scattering import channel_amplitudes, channel_wavevector, stationary_wave

WIGNER_REL_STEP = 1e-5


def _window_segments(profile, clock):
    y1, y2 = (None, None) if clock is None else (clock.y1, clock.y2)
    return list(profile.segments_between(y1, y2))


def window_regime(profile: PotentialProfile, clock: ClockWindow | None, E: float) -> str:
    """'evanescent' if E is below every segment in the window, 'propagating' if
    above every one, otherwise 'mixed'."""
    heights = [seg.height for seg, _a, _b in _window_segments(profile, clock)]
    if heights and all(E < h for h in heights):
        return "evanescent"
    if all(E > h for h in heights):
        return "propagating"
    return "mixed"


def buttiker_landauer(profile: PotentialProfile, E: float, clock: ClockWindow | None = None) -> float:
    """Sum of m l_j / (hbar kappa_j) over the segments in the window.

    Delta spikes carry no width and do not contribute.
    """
    total = 0.0
    for seg, a, b in _window_segments(profile, clock):
        if not seg.height > E:
            raise RegimeError(f"Buttiker-Landauer time needs V > E everywhere in the window (V={seg.height}, E={E})")
        kappa = math.sqrt(2.0 * MASS * (seg.height - E)) / HBAR
        total += MASS * (b - a) / (HBAR * kappa)
    return total


def semiclassical_time(profile: PotentialProfile, E: float, clock: ClockWindow | None = None) -> float:
    """Sum of m l_j / (hbar |k_j|): the Buttiker-Landauer time below the barrier
    and the classical transit time above it.  Used as the common normaliser of
    the ratio columns."""
    total = 0.0
    for seg, a, b in _window_segments(profile, clock):
        k = abs(channel_wavevector(E, seg.height).k)
        if k == 0:
            raise RegimeError("semiclassical time diverges at E = V")
        total += MASS * (b - a) / (HBAR * k)
    return total


def _transmission(profile, E):
    t, _ = channel_amplitudes(profile, None, E, +1, 0.0)
    if t == 0:
        raise RegimeError("transmission amplitude vanishes; Wigner delay undefined")
    return t


def wigner_delay(profile: PotentialProfile, E: float, rel_step: float = WIGNER_REL_STEP, max_refine: int = 8) -> float:
    """hbar d(arg T)/dE by central differences, one Richardson level.

    The phase difference is taken as arg(T(E+h)/T(E-h)), which needs no
    unwrapping as long as it stays below pi/2 in magnitude; otherwise the step
    is halved.
    """
    h = rel_step * E
    for _ in range(max_refine):
        dphi = []
        for hh in (h, h / 2):
            ratio = _transmission(profile, E + hh) / _transmission(profile, E - hh)
            dphi.append(cmath.phase(ratio))
        if max(abs(x) for x in dphi) < math.pi / 2:
            d1 = dphi[0] / (2 * h)
            d2 = dphi[1] / h
            return HBAR * (4.0 * d2 - d1) / 3.0
        h /= 2
    raise ConvergenceError("Wigner delay: phase step ambiguous even after refinement")


def dwell_time(profile: PotentialProfile, clock: ClockWindow | None, E: float) -> float:
    """(m/(hbar k0)) times the integrated |psi|^2 over the window, for unit incident amplitude."""
    k0 = channel_wavevector(E, 0.0).k.real
    waves = stationary_wave(profile, clock, E)
    if clock is None:
        inside = waves
    else:
        inside = [w for w in waves if clock.contains_segment(w.left, w.right)]
    return MASS / (HBAR * k0) * math.fsum(w.norm_integral() for w in inside)


@dataclass(frozen=True)
class ReferenceTimes:
    tau_BL: float | None
    tau_W: float
    tau_dwell: float
    tau_semiclassical: float | None
    regime: str


def reference_times(profile: PotentialProfile, clock: ClockWindow | None, E: float) -> ReferenceTimes:
    regime = window_regime(profile, clock, E)
    tau_bl = buttiker_landauer(profile, E, clock) if regime == "evanescent" else None
    try:
        tau_sc = semiclassical_time(profile, E, clock)
    except RegimeError:
        tau_sc = None
    return ReferenceTimes(tau_bl, wigner_delay(profile, E), dwell_time(profile, clock, E), tau_sc, regime)
