"""Row builders behind the CLI: sweeps, figure datasets, dimer scan, compare table.

Rectangular-barrier points use k0 = 1, so times are in units of m/(hbar k0^2)
and lengths in units of 1/k0.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .clock import (corrected_tau_y, corrected_tau_y_rect, corrected_tau_z, naive_tau,
                    naive_tau_rect_closed_form, rect_partials, single_layer_partials, sojourn_report)
from .errors import ConvergenceError, DegenerateInterfaceError, InvariantViolation, SingularPointError
from .potential import ClockWindow, Particle, barrier_from_groups, build_delta_dimer
from .reference import buttiker_landauer, dwell_time

SWEEP_COLUMNS = ("v0", "k0l", "kappa_l", "tau_naive_y", "tau_naive_z", "tau_corr_y", "tau_corr_z",
                 "tau_BL", "tau_W", "tau_dwell", "ratio_corr_y_BL", "ratio_corr_z_BL", "note")
FIGURE_COLUMNS = ("series", "v0", "k0l", "kappa_l", "ratio")

# default axis ranges for the figure datasets (not stated with the original figures)
TUNNEL_V0 = (1.05, 5.0)
PROPAGATING_V0 = (0.05, 0.95)
K0L_RANGE = (0.1, 15.0)


def fmt(x, digits=12):
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    return format(float(x), f".{digits}g")


def write_csv(columns, rows, digits=12) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(row.get(c), digits) for c in columns])
    return buf.getvalue()


def grid(start, stop, count):
    if count == 1:
        return [float(start)]
    return [float(x) for x in np.linspace(start, stop, count)]


def naive_limit_at_threshold(k0l: float) -> float:
    """Naive precession time at E = V0 (k0 = 1): L (1 + L^2/3) / (1 + L^2/4), L = k0 l."""
    return k0l * (1.0 + k0l**2 / 3.0) / (1.0 + k0l**2 / 4.0)


def _kappa_l(v0, k0l):
    return math.sqrt(v0 - 1.0) * k0l if v0 > 1.0 else None


def _check_positive(row):
    for key in ("tau_corr_y", "tau_corr_z"):
        val = row.get(key)
        if val is not None and not val > 0:
            raise InvariantViolation(f"{key} = {val!r} is not positive at v0={row['v0']}, k0l={row['k0l']}")


def point_row(profile, clock, E, v0, k0l, steps, rtol, note=""):
    rep = sojourn_report(profile, clock, E, steps=steps, rtol=rtol)
    ref = rep.reference
    row = {
        "v0": v0, "k0l": k0l, "kappa_l": _kappa_l(v0, k0l),
        "tau_naive_y": rep.tau_y_naive, "tau_naive_z": rep.tau_z_naive,
        "tau_corr_y": rep.tau_y_corrected, "tau_corr_z": rep.tau_z_corrected,
        "tau_BL": ref.tau_BL, "tau_W": ref.tau_W, "tau_dwell": ref.tau_dwell,
        "ratio_corr_y_BL": rep.ratio("tau_y_corrected", "semiclassical"),
        "ratio_corr_z_BL": rep.ratio("tau_z_corrected", "BL"),
        "note": note,
    }
    _check_positive(row)
    return row


def rect_row(v0, k0l, steps, rtol, limit=False, note=""):
    if v0 == 1.0:
        row = {"v0": v0, "k0l": k0l, "note": "singular: v0=1"}
        if limit:
            row["tau_naive_y"] = naive_limit_at_threshold(k0l)
            row["note"] = "limit: v0=1"
        return row
    profile, clock, particle = barrier_from_groups(v0, k0l)
    try:
        return point_row(profile, clock, particle.energy, v0, k0l, steps, rtol, note)
    except (DegenerateInterfaceError, SingularPointError) as exc:
        return {"v0": v0, "k0l": k0l, "note": f"singular: {exc}"}


def sweep_rows(cfg):
    var = cfg["sweep.variable"]
    xs = grid(cfg["sweep.start"], cfg["sweep.stop"], cfg["sweep.count"])
    v0, k0l = cfg["barrier.v0"], cfg["barrier.k0l"]
    steps, rtol = cfg["fd.steps"], cfg["fd.tol"]
    rows = []
    for x in xs:
        if var == "v0":
            rows.append(rect_row(x, k0l, steps, rtol, cfg["sweep.limit"]))
        elif var == "k0l":
            rows.append(rect_row(v0, x, steps, rtol, cfg["sweep.limit"]))
        elif var == "E":
            # barrier fixed at the reference energy E = 1/2, then E scanned
            profile, clock, ref = barrier_from_groups(v0, k0l)
            V0 = profile.segments[0].height
            v0_x = V0 / x
            k0l_x = Particle(x).k0 * profile.segments[0].width
            if v0_x == 1.0:
                rows.append({"v0": v0_x, "k0l": k0l_x, "note": "singular: v0=1"})
                continue
            try:
                rows.append(point_row(profile, clock, x, v0_x, k0l_x, steps, rtol, f"E={fmt(x)}"))
            except (DegenerateInterfaceError, SingularPointError) as exc:
                rows.append({"v0": v0_x, "k0l": k0l_x, "note": f"singular: {exc}"})
        else:
            h0 = x
            rows.append(rect_row(v0, k0l, (h0, h0 / 2, h0 / 4), rtol, note=f"fd.h0={fmt(h0)}"))
    return rows


def figure_rows(which, cfg):
    """Datasets for the three normalised-time curves, each parameterised both by
    v0 (at fixed k0 l) and by k0 l (at fixed v0)."""
    n = cfg["figure.count"]
    k0l_fixed = cfg["figure.k0l"]
    if which == "2":
        v0_fixed, v0_range = cfg["figure.v0_tunnel"], TUNNEL_V0

        def value(v0, k0l):
            return naive_tau_rect_closed_form(v0, k0l)
    elif which == "3a":
        v0_fixed, v0_range = cfg["figure.v0_prop"], PROPAGATING_V0

        def value(v0, k0l):
            return corrected_tau_y_rect(v0, k0l)
    elif which == "3b":
        v0_fixed, v0_range = cfg["figure.v0_tunnel"], TUNNEL_V0

        def value(v0, k0l):
            partials, k, l = rect_partials(v0, k0l)
            profile, clock, particle = barrier_from_groups(v0, k0l)
            return corrected_tau_z(partials, k.imag, l) / buttiker_landauer(profile, particle.energy)
    else:
        raise ValueError(f"unknown figure {which!r}; expected 2, 3a or 3b")
    rows = []
    for v0 in grid(*v0_range, n):
        rows.append({"series": "v0", "v0": v0, "k0l": k0l_fixed, "kappa_l": _kappa_l(v0, k0l_fixed),
                     "ratio": value(v0, k0l_fixed)})
    for k0l in grid(*K0L_RANGE, n):
        rows.append({"series": "k0l", "v0": v0_fixed, "k0l": k0l, "kappa_l": _kappa_l(v0_fixed, k0l),
                     "ratio": value(v0_fixed, k0l)})
    if which != "2":
        for r in rows:
            if not r["ratio"] > 0:
                raise InvariantViolation(f"corrected ratio {r['ratio']} not positive at v0={r['v0']}, k0l={r['k0l']}")
    return rows


def asymmetric_dimer(gamma, d, ratio):
    return build_delta_dimer(gamma, d, ratio * gamma)


@dataclass
class DimerScan:
    hits: list
    skipped: int
    evaluated: int
    d: float
    ratio: float

    @property
    def first(self):
        return self.hits[0] if self.hits else None


def scan_dimer(gammas, energies, d=1.0, ratio=0.5, steps=None, rtol=None):
    """Evaluate the naive reflection precession time on a (gamma, E) grid and
    collect every point where it is negative, in grid order."""
    kw = {}
    if steps is not None:
        kw["steps"] = steps
    if rtol is not None:
        kw["rtol"] = rtol
    hits, skipped, evaluated = [], 0, 0
    for g in gammas:
        profile = asymmetric_dimer(g, d, ratio)
        clock = profile.full_window()
        for E in energies:
            evaluated += 1
            try:
                tau_r = naive_tau(profile, clock, E, "precession", "reflection", **kw)
            except ConvergenceError:
                skipped += 1
                continue
            if tau_r < 0:
                hits.append(dimer_point(g, d, ratio, E, tau_r, **kw))
    return DimerScan(hits, skipped, evaluated, d, ratio)


def dimer_point(gamma, d, ratio, E, tau_r=None, **kw):
    profile = asymmetric_dimer(gamma, d, ratio)
    clock = profile.full_window()
    if tau_r is None:
        tau_r = naive_tau(profile, clock, E, "precession", "reflection", **kw)
    partials, k, l = single_layer_partials(profile, clock, E)
    corr_t = corrected_tau_y(partials, k, l)
    if not corr_t > 0:
        raise InvariantViolation(f"corrected transmission time {corr_t} not positive for dimer point")
    return {
        "gamma": gamma, "gamma_right": ratio * gamma, "d": d, "E": E,
        "tau_y_reflection_naive": tau_r,
        "tau_y_transmission_naive": naive_tau(profile, clock, E, "precession", "transmission", **kw),
        "tau_y_transmission_corrected": corr_t,
        "tau_dwell": dwell_time(profile, clock, E),
    }


def compare_rows(cfg):
    """(label, value, ratio to semiclassical, ratio to tau_W, remark) for one point."""
    steps, rtol = cfg["fd.steps"], cfg["fd.tol"]
    if cfg["system"] == "barrier":
        v0, k0l = cfg["barrier.v0"], cfg["barrier.k0l"]
        profile, clock, particle = barrier_from_groups(v0, k0l)
        head = f"rectangular barrier  v0 = {fmt(v0)}  k0 l = {fmt(k0l)}"
        if v0 > 1:
            head += f"  kappa l = {fmt(_kappa_l(v0, k0l))}"
    else:
        g, d, ratio = cfg["dimer.gamma"], cfg["dimer.d"], cfg["dimer.ratio"]
        profile = asymmetric_dimer(g, d, ratio)
        particle = Particle.from_k0(cfg["dimer.k0"])
        clock = profile.full_window()
        head = f"delta dimer  gamma = {fmt(g)}  gamma_right = {fmt(ratio * g)}  d = {fmt(d)}  k0 = {fmt(particle.k0)}"
    if cfg["clock.y1"] is not None or cfg["clock.y2"] is not None:
        clock = ClockWindow(cfg["clock.y1"] if cfg["clock.y1"] is not None else profile.origin,
                            cfg["clock.y2"] if cfg["clock.y2"] is not None else profile.end)
    E = particle.energy
    rep = sojourn_report(profile, clock, E, steps=steps, rtol=rtol)
    refl = sojourn_report(profile, clock, E, flux="reflection", steps=steps, rtol=rtol)
    ref = rep.reference
    sc = ref.tau_semiclassical

    def line(label, val, remark=""):
        r1 = None if val is None or sc is None else val / sc
        r2 = None if val is None or not ref.tau_W else val / ref.tau_W
        return (label, val, r1, r2, remark)

    rows = [
        line("tau_y naive (T)", rep.tau_y_naive, "precession, exact amplitudes"),
        line("tau_z naive (T)", rep.tau_z_naive, "alignment, exact amplitudes"),
        line("tau_y naive (R)", refl.tau_y_naive, "negative values are unphysical" if refl.tau_y_naive < 0 else ""),
        line("tau_z naive (R)", refl.tau_z_naive),
        line("tau_y corrected (T)", rep.tau_y_corrected,
             rep.methods.get("tau_y_corrected", "out of regime (below barrier)")),
        line("tau_z corrected (T)", rep.tau_z_corrected,
             rep.methods.get("tau_z_corrected", "out of regime (above barrier)")),
        line("tau_BL", ref.tau_BL, "" if ref.tau_BL is not None else "needs E < V in window"),
        line("tau_W", ref.tau_W, "transmission phase delay"),
        line("tau_dwell", ref.tau_dwell),
        line("semiclassical", sc, "m l / (hbar |k|)"),
    ]
    for key in ("tau_y_corrected", "tau_z_corrected"):
        val = getattr(rep, key)
        if val is not None and not val > 0:
            raise InvariantViolation(f"{key} = {val} is not positive")
    return head, ref.regime, rows


def format_table(head, regime, rows, digits=12):
    labels = ("quantity", "value", "/semiclassical", "/tau_W", "remark")
    body = [(r[0], fmt(r[1], digits), fmt(r[2], 6), fmt(r[3], 6), r[4]) for r in rows]
    widths = [max(len(labels[i]), *(len(b[i]) for b in body)) for i in range(5)]
    out = [head, f"regime: {regime}", ""]
    out.append("  ".join(labels[i].ljust(widths[i]) for i in range(5)).rstrip())
    out.append("  ".join("-" * widths[i] for i in range(5)))
    for b in body:
        out.append("  ".join(b[i].ljust(widths[i]) for i in range(5)).rstrip())
    return "\n".join(out) + "\n"
