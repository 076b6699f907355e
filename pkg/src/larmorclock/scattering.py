"""Per-channel scattering amplitudes for a spin-1/2 particle.

Inside the clock window the Zeeman term -(hbar omegaL / 2) sigma_z shifts the
potential seen by the two spin channels to V -/+ hbar omegaL / 2 (upper sign
for spin up, ``s = +1``).  Each channel then scatters off a real
piecewise-constant potential and is solved with 2x2 transfer matrices in the
plane-wave amplitude basis

    psi(y) = a exp(ik(y - y_left)) + b exp(-ik(y - y_left))    on each layer.

Amplitude conventions: the reflection amplitude is referenced to the profile
origin, the transmission amplitude to the profile end, so a free layer of
width l gives T = exp(i k0 l).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInterfaceError, ProfileError, ScatteringError
from .potential import HBAR, MASS, ClockWindow, PotentialProfile

# spike positions closer than this to a boundary are merged into it
_MERGE_TOL = 1e-12


@dataclass(frozen=True)
class ChannelWavevector:
    k: complex

    @property
    def branch(self) -> str:
        return "evanescent" if abs(self.k.imag) > abs(self.k.real) else "propagating"

    @property
    def kappa(self) -> float:
        """Decay constant for the evanescent branch (k = i kappa)."""
        return self.k.imag


def channel_wavevector(E: float, Veff: float) -> ChannelWavevector:
    """k = sqrt(2m(E - Veff))/hbar on the branch Im(k) >= 0."""
    if not E > 0:
        raise ProfileError(f"energy must be positive, got {E!r}")
    k = cmath.sqrt(complex(2.0 * MASS * (E - Veff), 0.0)) / HBAR
    if k.imag < 0 or (k.imag == 0 and k.real < 0):
        k = -k
    return ChannelWavevector(k)


def zeeman_shift(spin: int, omegaL: float) -> float:
    """Potential offset of channel ``spin`` (+1 up, -1 down) inside the field."""
    return -spin * 0.5 * HBAR * omegaL


def first_order_wavevector(k: complex, spin: int, omegaL: float) -> complex:
    """Linearised Zeeman wavevector k +/- m omegaL / (2 hbar k).

    Equivalently kappa -/+ m omegaL / (2 hbar kappa) when k = i kappa.
    """
    if k == 0:
        raise DegenerateInterfaceError("Zeeman linearisation is singular at k = 0")
    return k + spin * MASS * omegaL / (2.0 * HBAR * k)


def interface_coeffs(k_in: complex, k_out: complex, gamma: float = 0.0):
    """Amplitudes ``(t, r)`` for a wave in region ``k_in`` hitting region ``k_out``.

    A delta spike of strength ``gamma`` may sit on the interface; matching is
    psi continuous and psi'(+) - psi'(-) = (2 m gamma / hbar^2) psi.  Without a
    spike t = 2k_in/(k_in + k_out), r = (k_in - k_out)/(k_in + k_out), so
    1 + r = t always.
    """
    g = 2.0 * MASS * gamma / HBAR**2
    den = k_in + k_out + 1j * g
    if den == 0 or k_in == 0 or k_out == 0:
        raise DegenerateInterfaceError(f"degenerate interface k_in={k_in}, k_out={k_out}, gamma={gamma}")
    return 2.0 * k_in / den, (k_in - k_out - 1j * g) / den


@dataclass(frozen=True)
class PartialCoefficients:
    """Interface amplitudes of a single layer between two free regions.

    t12: entering the layer from the left, t23: leaving it to the right,
    r21 / r23: reflection of an inside wave at the left / right interface.
    """

    t12: complex
    t23: complex
    r21: complex
    r23: complex


def barrier_partials(k0: complex, k: complex, gamma_left: float = 0.0, gamma_right: float = 0.0) -> PartialCoefficients:
    t12, _ = interface_coeffs(k0, k, gamma_left)
    _, r21 = interface_coeffs(k, k0, gamma_left)
    t23, r23 = interface_coeffs(k, k0, gamma_right)
    return PartialCoefficients(t12, t23, r21, r23)


def rect_barrier_transmission(partials: PartialCoefficients, k: complex, l: float) -> complex:
    """Multiple-reflection sum t12 t23 e^{ikl} / (1 - r23 r21 e^{2ikl})."""
    if not l > 0:
        raise ProfileError(f"barrier width must be positive, got {l!r}")
    ph = cmath.exp(1j * k * l)
    den = 1.0 - partials.r23 * partials.r21 * ph * ph
    assert den != 0, "vanishing Fabry-Perot denominator"
    return partials.t12 * partials.t23 * ph / den


@dataclass(frozen=True)
class ChannelScattering:
    T_plus: complex
    T_minus: complex
    R_plus: complex
    R_minus: complex

    def channel(self, spin: int):
        return (self.T_plus, self.R_plus) if spin > 0 else (self.T_minus, self.R_minus)

    def unitarity_defect(self) -> float:
        return max(abs(abs(self.T_plus) ** 2 + abs(self.R_plus) ** 2 - 1.0),
                   abs(abs(self.T_minus) ** 2 + abs(self.R_minus) ** 2 - 1.0))


@dataclass(frozen=True)
class Layer:
    height: float
    left: float
    right: float
    in_window: bool

    @property
    def width(self) -> float:
        return self.right - self.left


def layers(profile: PotentialProfile, clock: ClockWindow | None = None):
    """Split the profile into constant layers (also at interior spikes).

    Returns ``(layers, gammas)`` where ``gammas[j]`` is the total spike strength
    on the interface to the left of ``layers[j]`` and ``gammas[-1]`` the one at
    the profile end.
    """
    if clock is not None:
        clock.check_alignment(profile)
    bounds = profile.boundaries()
    cuts = list(bounds)
    for sp in profile.spikes:
        if all(abs(sp.position - c) > _MERGE_TOL for c in cuts):
            cuts.append(sp.position)
    cuts.sort()
    out = []
    seg_edges = list(zip(bounds[:-1], bounds[1:]))
    j = 0
    for a, b in zip(cuts[:-1], cuts[1:]):
        while seg_edges[j][1] <= a + _MERGE_TOL:
            j += 1
        inside = clock is not None and clock.contains_segment(a, b)
        out.append(Layer(profile.segments[j].height, a, b, inside))
    gammas = [0.0] * len(cuts)
    for sp in profile.spikes:
        idx = min(range(len(cuts)), key=lambda i: abs(cuts[i] - sp.position))
        gammas[idx] += sp.strength
    return out, gammas


def _W(k):
    return np.array([[1.0, 1.0], [1j * k, -1j * k]])


def _Winv(k):
    return np.array([[0.5, 0.5 / (1j * k)], [0.5, -0.5 / (1j * k)]])


def _J(gamma):
    return np.array([[1.0, 0.0], [2.0 * MASS * gamma / HBAR**2, 1.0]], dtype=complex)


def _interface_matrix(ka, kb, gamma):
    if ka == 0 or kb == 0:
        raise DegenerateInterfaceError("transfer matrix is singular for a layer with k = 0 (E equal to the local potential)")
    return _Winv(kb) @ _J(gamma) @ _W(ka)


def _scaled_propagator(k, width):
    """diag(e^{ikw}, e^{-ikw}) divided by e^{|Im k| w}; returns (matrix, log-scale)."""
    s = abs(k.imag) * width
    return np.diag([cmath.exp(1j * k * width - s), cmath.exp(-1j * k * width - s)]), s


def _channel_wavevectors(lays, E, spin, omegaL, phase_only):
    """Wavevectors used for matching (``k_match``) and for propagation (``k_prop``)."""
    k_match, k_prop = [], []
    for lay in lays:
        if lay.in_window:
            if phase_only:
                k = channel_wavevector(E, lay.height).k
                k_match.append(k)
                k_prop.append(first_order_wavevector(k, spin, omegaL))
            else:
                k = channel_wavevector(E, lay.height + zeeman_shift(spin, omegaL)).k
                k_match.append(k)
                k_prop.append(k)
        else:
            k = channel_wavevector(E, lay.height).k
            k_match.append(k)
            k_prop.append(k)
    return k_match, k_prop


def _transfer(k0, k_match, k_prop, lays, gammas):
    """Return the list of per-step matrices [Q_0, P_0, Q_1, P_1, ..., Q_N] and log-scales."""
    steps = []
    ka = k0
    for j, lay in enumerate(lays):
        steps.append((_interface_matrix(ka, k_match[j], gammas[j]), 0.0))
        steps.append(_scaled_propagator(k_prop[j], lay.width))
        ka = k_match[j]
    steps.append((_interface_matrix(ka, k0, gammas[-1]), 0.0))
    return steps


def channel_amplitudes(profile, clock, E, spin, omegaL=0.0, phase_only=False):
    """Transmission and reflection amplitude ``(t, r)`` of one spin channel."""
    k0 = channel_wavevector(E, 0.0).k
    lays, gammas = layers(profile, clock)
    k_match, k_prop = _channel_wavevectors(lays, E, spin, omegaL, phase_only)
    M = np.eye(2, dtype=complex)
    log_scale = 0.0
    for mat, s in _transfer(k0, k_match, k_prop, lays, gammas):
        M = mat @ M
        log_scale += s
        norm = np.abs(M).max()
        if not np.isfinite(norm) or norm == 0:
            raise ScatteringError("transfer-matrix rescaling failed")
        M /= norm
        log_scale += math.log(norm)
    if M[1, 1] == 0:
        raise ScatteringError("transfer matrix has vanishing M22")
    # det M = k0/k0 = 1 exactly, so t = 1/M22
    t = cmath.exp(-log_scale) / M[1, 1]
    r = -M[1, 0] / M[1, 1]
    return complex(t), complex(r)


def transfer_matrix_scatter(profile: PotentialProfile, clock: ClockWindow | None, E: float,
                            omegaL: float | None = None, phase_only: bool = False) -> ChannelScattering:
    """Exact T/R amplitudes for both Zeeman channels.

    ``omegaL`` overrides ``clock.omegaL`` and may be negative (finite-difference
    stencils need both signs).  With ``phase_only`` the interfaces are matched
    at zero field and the field enters only through the linearised in-layer
    wavevector, which is the spurious-scattering-free generator used by the
    corrected clock.
    """
    if omegaL is None:
        omegaL = clock.omegaL if clock is not None else 0.0
    tp, rp = channel_amplitudes(profile, clock, E, +1, omegaL, phase_only)
    tm, rm = channel_amplitudes(profile, clock, E, -1, omegaL, phase_only)
    return ChannelScattering(tp, tm, rp, rm)


@dataclass(frozen=True)
class LayerWave:
    """Stationary wave on one layer, amplitudes referenced to the layer's right edge."""

    k: complex
    left: float
    right: float
    a: complex
    b: complex
    in_window: bool

    def psi(self, y):
        x = np.asarray(y, dtype=float) - self.right
        return self.a * np.exp(1j * self.k * x) + self.b * np.exp(-1j * self.k * x)

    def norm_integral(self) -> float:
        """Integral of |psi|^2 over the layer, in closed form."""
        w = self.right - self.left
        k = self.k
        val = abs(self.a) ** 2 * _int_exp(-2.0 * k.imag, w) + abs(self.b) ** 2 * _int_exp(2.0 * k.imag, w)
        cross = self.a * np.conj(self.b) * _int_exp(2j * k.real, w)
        return float((val + 2.0 * cross).real)


def _int_exp(c, w):
    """Integral of exp(c x) over x in [-w, 0]."""
    c = complex(c)
    z = c * w
    if abs(z) < 1e-5:
        return w * (1.0 - z / 2.0 + z * z / 6.0)
    return (1.0 - cmath.exp(-z)) / c


def stationary_wave(profile, clock, E, spin=+1, omegaL=0.0):
    """Layer-by-layer wave for unit incident amplitude from the left.

    Assembled backwards from the transmitted side, which is the stable
    direction under a barrier.
    """
    k0 = channel_wavevector(E, 0.0).k
    t, _ = channel_amplitudes(profile, clock, E, spin, omegaL)
    lays, gammas = layers(profile, clock)
    k_match, _ = _channel_wavevectors(lays, E, spin, omegaL, False)
    c = np.array([t, 0.0], dtype=complex)
    kb = k0
    waves = []
    for j in range(len(lays) - 1, -1, -1):
        Qinv = _Winv(k_match[j]) @ np.linalg.inv(_J(gammas[j + 1])) @ _W(kb)
        c = Qinv @ c
        waves.append(LayerWave(k_match[j], lays[j].left, lays[j].right, c[0], c[1], lays[j].in_window))
        w = lays[j].width
        c = np.array([c[0] * cmath.exp(-1j * k_match[j] * w), c[1] * cmath.exp(1j * k_match[j] * w)])
        kb = k_match[j]
    waves.reverse()
    return waves
