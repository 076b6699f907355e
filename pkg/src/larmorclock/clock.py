"""Larmor-clock sojourn times, naive and corrected.

Sign conventions.  The field term -(hbar omegaL/2) sigma_z lowers the spin-up
channel, so an x-polarised spin precesses towards -y.  Readings are therefore

    tau_y = -(2/hbar) d<S_y>/d omegaL,     tau_z = +(2/hbar) d<S_z>/d omegaL,

both at omegaL -> 0, which makes the free-particle precession time equal the
classical transit time m l / (hbar k0).

Naive extraction differentiates the exact amplitudes, so the clock field also
changes the interface amplitudes.  The corrected extraction matches the
interfaces at zero field and lets the field act only through the in-window
phase, k -> k +/- m omegaL / (2 hbar k).  With zeta = omegaL * l the channel
phases become exp(+/- i alpha zeta) with alpha = m / (2 hbar k).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import RegimeError, SingularPointError, SpinError
from .numerics import DEFAULT_RTOL, DEFAULT_STEPS, checked_derivative
from .potential import HBAR, MASS, ClockWindow, PotentialProfile, barrier_from_groups
from .reference import ReferenceTimes, reference_times, window_regime
from .scattering import (PartialCoefficients, barrier_partials, channel_wavevector,
                         transfer_matrix_scatter)

CHANNELS = ("precession", "alignment")
FLUXES = ("transmission", "reflection")
_READING_SIGN = {"precession": -1.0, "alignment": 1.0}
# absolute floor for the convergence test, relative to m l / (hbar k0)
_ATOL_SCALE = 1e-10


@dataclass(frozen=True)
class TransmissionSpinor:
    plus: complex
    minus: complex

    @property
    def norm(self) -> float:
        return abs(self.plus) ** 2 + abs(self.minus) ** 2


@dataclass(frozen=True)
class SpinExpectation:
    """Spin expectation values in units where hbar = 1."""

    sx: float
    sy: float
    sz: float

    def norm_squared(self) -> float:
        return self.sx**2 + self.sy**2 + self.sz**2


def spin_expectation(spinor: TransmissionSpinor) -> SpinExpectation:
    w = spinor.norm
    if not w > 0:
        raise SpinError("spin expectation of a zero-norm spinor")
    c = np.conj(spinor.plus) * spinor.minus
    return SpinExpectation(HBAR * c.real / w, HBAR * c.imag / w,
                           0.5 * HBAR * (abs(spinor.plus) ** 2 - abs(spinor.minus) ** 2) / w)


def _check(channel, flux):
    if channel not in CHANNELS:
        raise ValueError(f"channel must be one of {CHANNELS}, got {channel!r}")
    if flux not in FLUXES:
        raise ValueError(f"flux must be one of {FLUXES}, got {flux!r}")


def _spinor(cs, flux):
    if flux == "transmission":
        return TransmissionSpinor(cs.T_plus, cs.T_minus)
    return TransmissionSpinor(cs.R_plus, cs.R_minus)


def _component(s: SpinExpectation, channel):
    return s.sy if channel == "precession" else s.sz


def _omega_scale(profile, clock, E):
    """Field scale over which the readings vary.  A layer's transfer matrix is
    entire in k^2, so each layer contributes max(|k|/l, 1/l^2) (times
    hbar^2/m); E caps the result."""
    scale = E
    for seg, a, b in profile.segments_between(clock.y1, clock.y2):
        k, w = abs(channel_wavevector(E, seg.height).k), b - a
        scale = min(scale, HBAR**2 * max(k / w, 1.0 / w**2) / MASS)
    return scale / HBAR


def _extract(profile, clock, E, channel, flux, phase_only, steps, rtol, what):
    _check(channel, flux)
    clock = clock if clock is not None else profile.full_window()

    def reading(omega):
        cs = transfer_matrix_scatter(profile, clock, E, omega, phase_only=phase_only)
        return _component(spin_expectation(_spinor(cs, flux)), channel)

    hs = [r * _omega_scale(profile, clock, E) for r in steps]
    atol = _ATOL_SCALE * MASS * clock.length / (HBAR * channel_wavevector(E, 0.0).k.real)
    est = checked_derivative(reading, 0.0, hs, rtol, atol * HBAR / 2.0, what)
    return _READING_SIGN[channel] * 2.0 / HBAR * est.value


def naive_tau(profile: PotentialProfile, clock: ClockWindow | None, E: float,
              channel: str = "precession", flux: str = "transmission",
              steps=DEFAULT_STEPS, rtol: float = DEFAULT_RTOL) -> float:
    """Conventional Larmor time from the exact field-dependent amplitudes.

    Raises :class:`ConvergenceError` when the Richardson estimates disagree by
    more than ``rtol``.
    """
    return _extract(profile, clock, E, channel, flux, False, steps, rtol, f"naive {channel}/{flux}")


def corrected_tau(profile: PotentialProfile, clock: ClockWindow | None, E: float,
                  channel: str = "precession", flux: str = "transmission",
                  steps=DEFAULT_STEPS, rtol: float = DEFAULT_RTOL) -> float:
    """Corrected Larmor time for an arbitrary profile (phase-only field).

    Only the transmission readings are backed by the closed forms; reflection
    is provided as an extension and has no reference result.
    """
    return _extract(profile, clock, E, channel, flux, True, steps, rtol, f"corrected {channel}/{flux}")


def corrected_spin_of_zeta(profile: PotentialProfile, clock: ClockWindow | None, E: float,
                           zeta: float, flux: str = "transmission") -> SpinExpectation:
    """Spin expectation with the field entering only through in-window phases."""
    clock = clock if clock is not None else profile.full_window()
    cs = transfer_matrix_scatter(profile, clock, E, zeta / clock.length, phase_only=True)
    return spin_expectation(_spinor(cs, flux))


def _a_continued(v0):
    return cmath.sqrt(complex(1.0 - v0, 0.0))


def _to_bl_normalisation(value, a, v0):
    # expressions are per m l/(hbar k0 a); rescale to m l/(hbar k0 sqrt|1 - v0|)
    out = value * math.sqrt(abs(1.0 - v0)) / a
    if abs(out.imag) > 1e-12 * max(1.0, abs(out.real)):
        raise ArithmeticError(f"closed form left an imaginary residue {out.imag:.3e}")
    return out.real


def naive_tau_rect_closed_form(v0: float, k0l: float, limit: bool = False) -> float:
    """Naive precession time of a rectangular barrier over m l/(hbar k0 sqrt|v0-1|).

    For v0 > 1 the expression is continued with a = i sqrt(v0 - 1).  At v0 = 1
    the normalised value has a removable singularity whose limit is 0 (the
    sojourn time stays finite while the normaliser diverges); it is returned
    only when ``limit`` is set.
    """
    if v0 == 1.0:
        if limit:
            return 0.0
        raise SingularPointError("v0 = 1 is a removable singularity; pass limit=True")
    a = _a_continued(v0)
    x = a * k0l
    num = 2.0 * (2.0 - v0) * a - (v0 / k0l) * cmath.sin(2.0 * x)
    den = 4.0 - 4.0 * v0 + v0**2 * cmath.sin(x) ** 2
    return _to_bl_normalisation(num / den, a, v0)


def corrected_sy_of_zeta(partials: PartialCoefficients, k: complex, l: float, zeta: float) -> float:
    """<S_y>(zeta) at zero field, assembled from the factorised numerator
    Im(T+* T-) and the norm |T+|^2 + |T-|^2 (propagating k only)."""
    k = complex(k)
    if abs(k.imag) > 1e-14 * abs(k) or k.real <= 0:
        raise RegimeError("precession generator needs a propagating wavevector")
    beta = MASS * zeta / (2.0 * HBAR * k.real)
    ph = cmath.exp(1j * k * l)
    rho = partials.r23 * partials.r21 * ph * ph
    amp2 = abs(partials.t12 * partials.t23 * ph) ** 2
    D = abs(1.0 + abs(rho) ** 2 * cmath.exp(4j * beta) - 2.0 * rho.real * cmath.exp(2j * beta)) ** 2
    im_tt = -amp2 * math.sin(2.0 * beta) * (1.0 - abs(rho) ** 2) / D
    w = amp2 * (1.0 / abs(1.0 - rho * cmath.exp(2j * beta)) ** 2 + 1.0 / abs(1.0 - rho * cmath.exp(-2j * beta)) ** 2)
    return HBAR * im_tt / w


def corrected_tau_y(partials: PartialCoefficients, k: complex, l: float) -> float:
    """Closed-form corrected precession time (m l/hbar k) (1-|r r|^2) / |1 - r r e^{2ikl}|^2."""
    k = complex(k)
    if abs(k.imag) > 1e-14 * abs(k) or k.real <= 0:
        raise RegimeError("corrected precession time is defined above the barrier; use corrected_tau_z below it")
    k = k.real
    rr = partials.r23 * partials.r21
    num = 1.0 - abs(rr) ** 2
    den = 1.0 + abs(rr) ** 2 - 2.0 * (rr * cmath.exp(2j * k * l)).real
    return MASS * l / (HBAR * k) * num / den


def corrected_tau_y_rect(v0: float, k0l: float) -> float:
    """Normalised corrected precession time 2(2-v0)a / (4 - 4v0 + v0^2 sin^2(a k0 l)).

    v0 > 1 is the analytic continuation a = i sqrt(v0-1), which is not a
    corrected time in that regime.  The time itself diverges at v0 = 1.
    """
    if v0 == 1.0:
        raise SingularPointError("corrected precession time diverges at v0 = 1")
    a = _a_continued(v0)
    den = 4.0 - 4.0 * v0 + v0**2 * cmath.sin(a * k0l) ** 2
    return _to_bl_normalisation(2.0 * (2.0 - v0) * a / den, a, v0)


def corrected_sz_of_zeta(partials: PartialCoefficients, kappa: float, l: float, zeta: float) -> float:
    """<S_z>(zeta) at zero field for an evanescent layer k = i kappa."""
    if not kappa > 0:
        raise RegimeError("alignment generator needs kappa > 0")
    beta = MASS * zeta / (2.0 * HBAR * kappa)
    decay = math.exp(-kappa * l)
    u = partials.t12 * partials.t23 * decay
    v = partials.r23 * partials.r21 * decay * decay
    ep, em = math.exp(2.0 * beta), math.exp(-2.0 * beta)
    dp = 1.0 + abs(v) ** 2 * ep * ep - 2.0 * v.real * ep
    dm = 1.0 + abs(v) ** 2 * em * em - 2.0 * v.real * em
    w = abs(u) ** 2 * (ep / dp + em / dm)
    return 0.5 * HBAR * abs(u) ** 2 * 2.0 * (1.0 - abs(v) ** 2) * math.sinh(2.0 * beta) / (w * dp * dm)


def corrected_tau_z(partials: PartialCoefficients, kappa: float, l: float) -> float:
    """Closed-form corrected alignment time
    (m l/hbar kappa) (1 - |rr|^2 e^{-4 kappa l}) / |1 - rr e^{-2 kappa l}|^2."""
    if not kappa > 0:
        raise RegimeError("corrected alignment time is defined below the barrier; use corrected_tau_y above it")
    rr = partials.r23 * partials.r21
    e2 = math.exp(-2.0 * kappa * l)
    num = 1.0 - abs(rr) ** 2 * e2 * e2
    den = 1.0 + abs(rr) ** 2 * e2 * e2 - 2.0 * (rr * e2).real
    return MASS * l / (HBAR * kappa) * num / den


def corrected_tau_z_rect(v0: float, k0l: float) -> float:
    """Normalised corrected alignment time of a symmetric rectangular barrier,

        (1 - e^{-4x}) / (1 + e^{-4x} - 2 (1 - 8(v0-1)/v0^2) e^{-2x}),  x = kappa l.
    """
    if not v0 > 1.0:
        raise RegimeError("alignment time needs v0 > 1")
    x = math.sqrt(v0 - 1.0) * k0l
    e2 = math.exp(-2.0 * x)
    c4 = 1.0 - 8.0 * (v0 - 1.0) / v0**2
    return (1.0 - e2 * e2) / (1.0 + e2 * e2 - 2.0 * c4 * e2)


def _zeta_steps(k, l, steps, energy):
    # same relative schedule as the omegaL derivative, mapped through zeta = omegaL * l
    # the phase-only generator varies on zeta ~ hbar k / m
    scale = min(energy, HBAR**2 * abs(k) / (MASS * l))
    return [r * scale * l / HBAR for r in steps]


def corrected_tau_y_fd(partials: PartialCoefficients, k: complex, l: float,
                       steps=DEFAULT_STEPS, rtol: float = DEFAULT_RTOL, energy: float = 0.5) -> float:
    """Corrected precession time by differentiating :func:`corrected_sy_of_zeta`."""
    est = checked_derivative(lambda z: corrected_sy_of_zeta(partials, k, l, z), 0.0,
                             _zeta_steps(k, l, steps, energy), rtol, what="corrected precession generator")
    return -2.0 * l / HBAR * est.value


def corrected_tau_z_fd(partials: PartialCoefficients, kappa: float, l: float,
                       steps=DEFAULT_STEPS, rtol: float = DEFAULT_RTOL, energy: float = 0.5) -> float:
    """Corrected alignment time by differentiating :func:`corrected_sz_of_zeta`."""
    est = checked_derivative(lambda z: corrected_sz_of_zeta(partials, kappa, l, z), 0.0,
                             _zeta_steps(kappa, l, steps, energy), rtol, what="corrected alignment generator")
    return 2.0 * l / HBAR * est.value


def rect_partials(v0: float, k0l: float):
    """Zero-field partial coefficients, inside wavevector and width of the
    dimensionless barrier (k0 = 1)."""
    profile, _clock, particle = barrier_from_groups(v0, k0l)
    k = channel_wavevector(particle.energy, profile.segments[0].height).k
    return barrier_partials(particle.k0, k), k, profile.segments[0].width


@dataclass(frozen=True)
class SojournReport:
    tau_y_naive: float | None
    tau_z_naive: float | None
    tau_y_corrected: float | None
    tau_z_corrected: float | None
    reference: ReferenceTimes
    flux: str = "transmission"
    methods: dict = field(default_factory=dict)
    notes: tuple = ()

    @property
    def regime(self) -> str:
        return self.reference.regime

    def ratio(self, name: str, to: str = "semiclassical") -> float | None:
        num = getattr(self, name)
        den = {"semiclassical": self.reference.tau_semiclassical, "BL": self.reference.tau_BL,
               "W": self.reference.tau_W, "dwell": self.reference.tau_dwell}[to]
        if num is None or den is None or den == 0:
            return None
        return num / den


def single_layer_partials(profile, clock, E):
    """Partials when the window is one layer between free regions (spikes on
    its edges allowed), else None."""
    if len(profile.segments) != 1:
        return None
    lo, hi = profile.origin, profile.end
    if abs(clock.y1 - lo) > 1e-12 or abs(clock.y2 - hi) > 1e-12:
        return None
    gl = gr = 0.0
    for sp in profile.spikes:
        if abs(sp.position - lo) <= 1e-12:
            gl += sp.strength
        elif abs(sp.position - hi) <= 1e-12:
            gr += sp.strength
        else:
            return None
    k0 = channel_wavevector(E, 0.0).k
    k = channel_wavevector(E, profile.segments[0].height).k
    return barrier_partials(k0, k, gl, gr), k, profile.segments[0].width


def sojourn_report(profile: PotentialProfile, clock: ClockWindow | None, E: float,
                   flux: str = "transmission", method: str = "closed-form",
                   steps=DEFAULT_STEPS, rtol: float = DEFAULT_RTOL) -> SojournReport:
    """All naive and corrected times plus reference times for one point.

    Corrected times are reported only in their regime: precession above the
    barrier, alignment below it, and only for transmission.  With
    ``method="closed-form"`` the corrected times use the closed expressions
    whenever the window is a single layer; naive times always come from the
    finite-difference extraction.
    """
    _check("precession", flux)
    clock = clock if clock is not None else profile.full_window()
    ref = reference_times(profile, clock, E)
    methods = {"tau_y_naive": "finite-difference", "tau_z_naive": "finite-difference"}
    notes = []
    ty_n = naive_tau(profile, clock, E, "precession", flux, steps, rtol)
    tz_n = naive_tau(profile, clock, E, "alignment", flux, steps, rtol)
    ty_c = tz_c = None
    if flux == "transmission":
        single = single_layer_partials(profile, clock, E) if method == "closed-form" else None
        if ref.regime == "propagating":
            if single is not None:
                ty_c = corrected_tau_y(*single)
                methods["tau_y_corrected"] = "closed-form"
            else:
                ty_c = corrected_tau(profile, clock, E, "precession", flux, steps, rtol)
                methods["tau_y_corrected"] = "finite-difference"
        elif ref.regime == "evanescent":
            if single is not None:
                partials, k, l = single
                tz_c = corrected_tau_z(partials, k.imag, l)
                methods["tau_z_corrected"] = "closed-form"
            else:
                tz_c = corrected_tau(profile, clock, E, "alignment", flux, steps, rtol)
                methods["tau_z_corrected"] = "finite-difference"
        else:
            notes.append("mixed regime in window: corrected times not reported")
    else:
        notes.append("corrected times are derived for transmission only")
    return SojournReport(ty_n, tz_n, ty_c, tz_c, ref, flux, methods, tuple(notes))


def rect_report(v0: float, k0l: float, **kw) -> SojournReport:
    profile, clock, particle = barrier_from_groups(v0, k0l)
    return sojourn_report(profile, clock, particle.energy, **kw)
