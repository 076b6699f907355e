"""Physical system: units, particle, piecewise-constant potentials with delta
spikes, and the clock window carrying the z-axis field.

All computation runs in natural units hbar = m = 1.  Lengths are therefore
measured in units of 1/k0 once the incident energy is fixed to E = 1/2, which is
what :func:`barrier_from_groups` does for the dimensionless groups (v0, k0*l).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ProfileError


@dataclass(frozen=True)
class UnitSystem:
    """Internal units.  Both constants are fixed to 1; conversion to physical
    units is left to the caller."""

    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if self.hbar != 1.0 or self.mass != 1.0:
            raise ProfileError("internal units require hbar = m = 1")


UNITS = UnitSystem()
HBAR = UNITS.hbar
MASS = UNITS.mass


@dataclass(frozen=True)
class Particle:
    energy: float

    def __post_init__(self):
        if not (self.energy > 0 and math.isfinite(self.energy)):
            raise ProfileError(f"particle energy must be positive, got {self.energy!r}")

    @property
    def k0(self) -> float:
        return math.sqrt(2.0 * MASS * self.energy) / HBAR

    @classmethod
    def from_k0(cls, k0: float) -> Particle:
        if not k0 > 0:
            raise ProfileError(f"k0 must be positive, got {k0!r}")
        return cls(0.5 * (HBAR * k0) ** 2 / MASS)


@dataclass(frozen=True)
class Segment:
    height: float
    width: float


@dataclass(frozen=True)
class Spike:
    strength: float
    position: float


@dataclass(frozen=True)
class PotentialProfile:
    """Contiguous constant segments starting at ``origin``, plus delta spikes
    ``strength * delta(y - position)``.  The potential vanishes outside."""

    segments: tuple[Segment, ...]
    spikes: tuple[Spike, ...] = ()
    origin: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(Segment(float(s.height), float(s.width)) for s in self.segments))
        object.__setattr__(self, "spikes", tuple(sorted(
            (Spike(float(s.strength), float(s.position)) for s in self.spikes), key=lambda s: s.position)))
        object.__setattr__(self, "origin", float(self.origin))
        for seg in self.segments:
            if not (seg.width > 0 and math.isfinite(seg.width)):
                raise ProfileError(f"segment width must be positive, got {seg.width!r}")
            if not math.isfinite(seg.height):
                raise ProfileError(f"segment height must be finite, got {seg.height!r}")
        lo, hi = self.origin, self.end
        for sp in self.spikes:
            if not (lo <= sp.position <= hi):
                raise ProfileError(f"spike at {sp.position} lies outside the profile [{lo}, {hi}]")
            if not math.isfinite(sp.strength):
                raise ProfileError("spike strength must be finite")

    @property
    def total_width(self) -> float:
        return math.fsum(s.width for s in self.segments)

    @property
    def end(self) -> float:
        return self.boundaries()[-1]

    def boundaries(self) -> list[float]:
        """Interface coordinates, origin first; len == len(segments) + 1."""
        out = [self.origin]
        acc = [self.origin]
        for seg in self.segments:
            acc.append(seg.width)
            out.append(math.fsum(acc))
        return out

    def max_height(self, y1: float | None = None, y2: float | None = None) -> float:
        return max(seg.height for seg, _a, _b in self.segments_between(y1, y2))

    def segments_between(self, y1=None, y2=None):
        """Yield ``(segment, left, right)`` for segments inside [y1, y2]."""
        y1 = self.origin if y1 is None else y1
        y2 = self.end if y2 is None else y2
        b = self.boundaries()
        for j, seg in enumerate(self.segments):
            if b[j] >= y1 - _EPS and b[j + 1] <= y2 + _EPS:
                yield seg, b[j], b[j + 1]

    def full_window(self, omegaL: float = 0.0) -> ClockWindow:
        return ClockWindow(self.origin, self.end, omegaL)

    # key=value serialisation; repr() of floats round-trips exactly
    def to_text(self) -> str:
        lines = [f"origin={self.origin!r}", f"segments={len(self.segments)}"]
        for j, s in enumerate(self.segments):
            lines.append(f"segment.{j}={s.height!r},{s.width!r}")
        lines.append(f"spikes={len(self.spikes)}")
        for j, s in enumerate(self.spikes):
            lines.append(f"spike.{j}={s.strength!r},{s.position!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> PotentialProfile:
        kv = {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ProfileError(f"malformed profile line: {raw!r}")
            kv[key.strip()] = value.strip()
        try:
            segs = [Segment(*map(float, kv[f"segment.{j}"].split(","))) for j in range(int(kv["segments"]))]
            spikes = [Spike(*map(float, kv[f"spike.{j}"].split(","))) for j in range(int(kv.get("spikes", 0)))]
            return cls(tuple(segs), tuple(spikes), float(kv.get("origin", 0.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ProfileError(f"cannot parse profile: {exc}") from exc


_EPS = 1e-12


@dataclass(frozen=True)
class ClockWindow:
    """Interval [y1, y2] carrying a uniform field along z, expressed through
    the Larmor frequency omegaL = g mu_B B / hbar."""

    y1: float
    y2: float
    omegaL: float = 0.0
    _zeta: float = field(init=False, repr=False, compare=False, default=0.0)

    def __post_init__(self):
        if not self.y2 > self.y1:
            raise ProfileError(f"clock window needs y2 > y1, got [{self.y1}, {self.y2}]")
        if not self.omegaL >= 0:
            raise ProfileError(f"omegaL must be >= 0, got {self.omegaL!r}")
        object.__setattr__(self, "_zeta", self.omegaL * (self.y2 - self.y1))

    @property
    def length(self) -> float:
        return self.y2 - self.y1

    @property
    def zeta(self) -> float:
        """Paired variable omegaL * (y2 - y1), the analogue of B * l."""
        return self._zeta

    def with_omega(self, omegaL: float) -> ClockWindow:
        return ClockWindow(self.y1, self.y2, omegaL)

    def check_alignment(self, profile: PotentialProfile) -> None:
        b = profile.boundaries()
        tol = _EPS * max(1.0, abs(b[0]), abs(b[-1]))
        for y in (self.y1, self.y2):
            if not any(abs(y - x) <= tol for x in b):
                raise ProfileError(f"clock edge {y} does not sit on a segment boundary {b}")

    def contains_segment(self, left: float, right: float) -> bool:
        return left >= self.y1 - _EPS and right <= self.y2 + _EPS


def build_rect_barrier(height: float, width: float) -> PotentialProfile:
    """Single segment of ``height`` on [0, width]; the clock window is
    ``profile.full_window()``."""
    if not width > 0:
        raise ProfileError(f"barrier width must be positive, got {width!r}")
    return PotentialProfile((Segment(height, width),))


def build_delta_dimer(gamma: float, d: float, gamma_right: float | None = None) -> PotentialProfile:
    """Spikes of strength ``gamma`` at 0 and ``gamma_right`` (default ``gamma``)
    at ``d`` on a zero background.  The gap [0, d] is kept as one free segment
    so it can carry the clock.

    A symmetric dimer has equal transmission and reflection precession times,
    so negative naive reflection times need ``gamma_right != gamma``.
    """
    if not d > 0:
        raise ProfileError(f"dimer spacing must be positive, got {d!r}")
    gamma_right = gamma if gamma_right is None else gamma_right
    return PotentialProfile((Segment(0.0, d),), (Spike(gamma, 0.0), Spike(gamma_right, d)))


def barrier_from_groups(v0: float, k0l: float):
    """Rectangular barrier from the dimensionless groups v0 = V0/E and k0*l.

    Returns ``(profile, clock, particle)`` with k0 = 1, so E = 1/2,
    V0 = v0/2 and l = k0l.
    """
    if not k0l > 0:
        raise ProfileError(f"k0*l must be positive, got {k0l!r}")
    particle = Particle.from_k0(1.0)
    profile = build_rect_barrier(v0 * particle.energy, k0l / particle.k0)
    return profile, profile.full_window(), particle
