"""Flat key=value run configuration.

Lines are ``key = value``; ``#`` starts a comment.  ``--set key=value`` on the
command line overrides file values.  Unknown keys are rejected.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigError
from .numerics import DEFAULT_RTOL, DEFAULT_STEPS


def _floats(text):
    return tuple(float(x) for x in text.split(",") if x.strip())


def _bool(text):
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _optional_float(text):
    return None if text.strip() in ("", "none", "full") else float(text)


def _choice(*options):
    def parse(text):
        if text not in options:
            raise ValueError(f"expected one of {', '.join(options)}, got {text!r}")
        return text
    return parse


# key -> (parser, default)
SCHEMA = {
    "system": (_choice("barrier", "dimer"), "barrier"),
    "barrier.v0": (float, 2.0),
    "barrier.k0l": (float, 5.0),
    "dimer.gamma": (float, 1.0),
    "dimer.ratio": (float, 0.5),
    "dimer.d": (float, 1.0),
    "dimer.k0": (float, 1.0),
    "clock.y1": (_optional_float, None),
    "clock.y2": (_optional_float, None),
    "fd.steps": (_floats, DEFAULT_STEPS),
    "fd.tol": (float, DEFAULT_RTOL),
    "sweep.variable": (_choice("v0", "k0l", "E", "omegaL-check"), "k0l"),
    "sweep.start": (float, 0.1),
    "sweep.stop": (float, 15.0),
    "sweep.count": (int, 50),
    "sweep.limit": (_bool, False),
    "scan.gamma_min": (float, 0.25),
    "scan.gamma_max": (float, 5.0),
    "scan.gamma_count": (int, 20),
    "scan.e_min": (float, 0.05),
    "scan.e_max": (float, 5.0),
    "scan.e_count": (int, 100),
    "figure.count": (int, 60),
    "figure.k0l": (float, 5.0),
    "figure.v0_tunnel": (float, 2.0),
    "figure.v0_prop": (float, 0.5),
    "output.digits": (int, 12),
}


@dataclass
class RunConfig:
    values: dict = field(default_factory=lambda: {k: d for k, (_p, d) in SCHEMA.items()})

    def __getitem__(self, key):
        return self.values[key]

    def set(self, key, raw, line=None):
        key = key.strip()
        if key not in SCHEMA:
            raise ConfigError(f"unknown key {key!r}", line)
        parser, _default = SCHEMA[key]
        try:
            self.values[key] = parser(raw.strip())
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {exc}", line) from exc

    def update_from_text(self, text):
        for n, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ConfigError(f"expected key=value, got {raw.strip()!r}", n)
            self.set(key, value, n)
        return self

    def update_from_pairs(self, pairs):
        for pair in pairs or ():
            key, sep, value = pair.partition("=")
            if not sep:
                raise ConfigError(f"--set expects key=value, got {pair!r}")
            self.set(key, value)
        return self

    def validate(self):
        if self["barrier.k0l"] <= 0:
            raise ConfigError("barrier.k0l must be positive")
        if self["dimer.d"] <= 0 or self["dimer.k0"] <= 0:
            raise ConfigError("dimer.d and dimer.k0 must be positive")
        steps = self["fd.steps"]
        if len(steps) < 2 or any(abs(a / b - 2.0) > 1e-9 for a, b in zip(steps, steps[1:])):
            raise ConfigError("fd.steps must list at least two successively halving steps")
        for prefix in ("sweep", "figure"):
            if self[f"{prefix}.count"] < 1:
                raise ConfigError(f"{prefix}.count must be >= 1")
        if self["sweep.count"] >= 2 and not self["sweep.start"] < self["sweep.stop"]:
            raise ConfigError("sweep.start must be below sweep.stop")
        if self["output.digits"] < 1:
            raise ConfigError("output.digits must be >= 1")
        return self

    def dump(self) -> str:
        lines = []
        for key, val in self.values.items():
            if isinstance(val, tuple):
                val = ",".join(repr(x) for x in val)
            elif val is None:
                val = "full"
            lines.append(f"{key} = {val}")
        return "\n".join(lines) + "\n"


def load_config(path=None, overrides=()) -> RunConfig:
    cfg = RunConfig()
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        cfg.update_from_text(text)
    cfg.update_from_pairs(overrides)
    return cfg.validate()
