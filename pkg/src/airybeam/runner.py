"""Experiment runners behind the CLI subcommands and figure presets."""
from dataclasses import dataclass
import math
import os

import numpy as np

from . import __version__
from .beams import CubicPhase, CubicPlusFocus, Focusing
from .constraints import constraint_report
from .core import ArrayGeometry
from .exceptions import InvalidInputError
from .experiments import (compare_trajectory, deviation_vs_aperture, deviation_vs_spacing,
                          mobility_sweep, multiuser_sweep, multiuser_users, obstruction_setup,
                          obstruction_sweep, positioning_sweep)
from .field import field_grid
from .output import ResultTable, write_csv, write_heatmap_svg, write_line_svg, write_run_record
from .trajectory import classify_trajectory, critical_distance


def _se_unit(cfg):
    return "bit/s/Hz" if cfg.flags["log_base"] == 2 else "Hart/s/Hz"


def _field_unit(norm):
    return {"raw-sum": "1", "d-weighted": "m", "link-budget": "sqrt(W)"}[norm]


def run_field(cfg):
    g = cfg.grid
    L = cfg.geometry.aperture
    x_lo, x_hi = g["x_range"] or (-L / 2 - 1.0, L / 2 + 1.0)
    z_lo, z_hi = g["z_range"] or (5.0, 40.0)
    x_axis = x_lo + cfg.dx * np.arange(int(math.floor((x_hi - x_lo) / cfg.dx)) + 1)
    z_axis = z_lo + g["dz"] * np.arange(int(math.floor((z_hi - z_lo) / g["dz"] + 1e-9)) + 1)
    grid = field_grid(cfg.beam_variant(), cfg.geometry, cfg.carrier, x_axis, z_axis,
                      g["normalization"], threads=cfg.flags["threads"])
    Z, X = np.meshgrid(grid.z_axis, grid.x_axis, indexing="ij")
    unit = _field_unit(g["normalization"])
    table = ResultTable((("x", "m"), ("z", "m"), ("field_abs", unit), ("field_phase", "rad")),
                        np.column_stack([X.ravel(), Z.ravel(), np.abs(grid.values).ravel(),
                                         np.angle(grid.values).ravel()]))

    def plot(path, note):
        write_heatmap_svg(path, grid.x_axis, grid.z_axis, np.abs(grid.values), note)

    return table, plot, {}


def _cubic_variant(cfg):
    v = cfg.beam_variant()
    if not isinstance(v, (CubicPhase, CubicPlusFocus)):
        raise InvalidInputError("trajectory runs need beam.family 'cubic' or 'cubic_focus'")
    return v


def run_trajectory(cfg):
    v = _cubic_variant(cfg)
    g = cfg.grid
    window = tuple(g["z_range"]) if g["z_range"] else None
    res = compare_trajectory(v, cfg.geometry, cfg.carrier, window=window, dz=g["dz"], dx=cfg.dx,
                             margin=g["margin"], z_cap_factor=g["z_cap_factor"],
                             threads=cfg.flags["threads"])
    z = res.measured.z
    sel = (z >= res.window[0] - 1e-9) & (z <= res.window[1] + 1e-9)
    z = z[sel]
    xm = res.measured.x[sel]
    xt = res.theory.at(z)
    table = ResultTable((("z", "m"), ("x_theory", "m"), ("x_measured", "m"), ("delta_x", "m")),
                        np.column_stack([z, xt, xm, xt - xm]))
    extra = {"window_m": list(res.window), "window_capped": res.capped,
             "max_abs_delta_x_m": res.max_abs_delta, "delta_x_bar_m": res.delta_x_bar,
             "flagged_slices": len(res.measured.flags)}
    if isinstance(v, CubicPlusFocus):
        cls = classify_trajectory(v.x0, v.x_F, v.z_F, cfg.carrier)
        extra.update(trajectory_type=cls.trajectory_type, z_ext_m=cls.z_ext, x_ext_m=cls.x_ext, z_c_m=cls.z_c)
    else:
        extra["z_c_m"] = critical_distance(v.x0, cfg.carrier)

    def plot(path, note):
        write_line_svg(path, z, [("delta_x = theory - measured", xt - xm)], "z [m]", "delta_x [m]",
                       "Main-lobe trajectory difference", note)

    return table, plot, extra


def run_constraints(cfg):
    v = _cubic_variant(cfg)
    x_F, z_F = (v.x_F, v.z_F) if isinstance(v, CubicPlusFocus) else cfg.focus
    rep = constraint_report(cfg.geometry.aperture, cfg.geometry.spacing, v.x0, x_F, z_F, cfg.carrier)
    cls = classify_trajectory(v.x0, x_F, z_F, cfg.carrier)
    cols = (("L", "m"), ("L_min", "m"), ("z_min", "m"), ("z_max", "m"), ("d", "m"), ("d_max", "m"),
            ("sampling_offset_slope", "1"), ("truncation_bound", "1"), ("sampling_bound", "1"),
            ("trajectory_type", "1"), ("z_ext", "m"), ("x_ext", "m"), ("z_c", "m"))
    row = [cfg.geometry.aperture, rep.L_min, rep.z_min, rep.z_max, cfg.geometry.spacing, rep.d_max,
           rep.sampling_offset, rep.truncation_bound, rep.sampling_bound, cls.trajectory_type,
           math.nan if cls.z_ext is None else cls.z_ext, math.nan if cls.x_ext is None else cls.x_ext,
           cls.z_c]
    table = ResultTable(cols, [row])

    def plot(path, note):
        labels = ["L", "L_min", "z_min", "z_max"]
        vals = [cfg.geometry.aperture, rep.L_min, rep.z_min, rep.z_max if math.isfinite(rep.z_max) else np.nan]
        write_line_svg(path, np.arange(len(vals)), [("value [m] for " + ", ".join(labels), vals)],
                       "quantity index (L, L_min, z_min, z_max)", "value [m]", "Design constraints", note)

    return table, plot, {}


def _sweep_x0(cfg):
    s = cfg.sweep or {}
    return s.get("x0_values") or [cfg.beam["x0"]]


def run_deviation_vs_aperture(cfg):
    s = cfg.sweep
    if not s or s["variable"] != "n_antennas":
        raise InvalidInputError("deviation-vs-L needs sweep.variable = 'n_antennas'")
    g = cfg.grid
    rows, series = [], []
    ns = [int(round(v)) for v in cfg.sweep_values()]
    for x0 in _sweep_x0(cfg):
        r = deviation_vs_aperture(cfg.carrier, x0, cfg.focus, ns, cfg.geometry.spacing, g["dz"],
                                  g["margin"], g["z_cap_factor"], cfg.flags["threads"])
        for n, (L, zlo, zhi, bar) in zip(ns, r):
            rows.append((x0, n, L, zlo, zhi, bar))
        series.append((f"x0 = {x0:g} 1/m", r[:, 3]))
    L_axis = np.array(ns) * cfg.geometry.spacing
    table = ResultTable((("x0", "1/m"), ("N", "1"), ("L", "m"), ("z_min", "m"), ("z_max", "m"),
                         ("delta_x_bar", "m")), rows)

    def plot(path, note):
        write_line_svg(path, L_axis, series, "L [m]", "mean |delta_x| [m]", "Deviation against aperture", note)

    return table, plot, {}


def run_deviation_vs_spacing(cfg):
    s = cfg.sweep
    if not s or s["variable"] != "spacing_wavelengths":
        raise InvalidInputError("deviation-vs-d needs sweep.variable = 'spacing_wavelengths'")
    g = cfg.grid
    lam = cfg.carrier.wavelength
    ds = [v * lam for v in cfg.sweep_values()]
    rows, series = [], []
    for x0 in _sweep_x0(cfg):
        r = deviation_vs_spacing(cfg.carrier, x0, cfg.focus, cfg.geometry.aperture, ds, g["dz"],
                                 g["margin"], g["z_cap_factor"], cfg.flags["threads"])
        for d, n, bar in r:
            rows.append((x0, d, n, bar))
        series.append((f"x0 = {x0:g} 1/m", r[:, 2]))
    table = ResultTable((("x0", "1/m"), ("d", "m"), ("N", "1"), ("delta_x_bar", "m")), rows)

    def plot(path, note):
        write_line_svg(path, np.array(ds) / lam, series, "d [wavelengths]", "mean |delta_x| [m]",
                       "Deviation against spacing", note)

    return table, plot, {}


def run_obstruction(cfg):
    sc = cfg.scenario
    setup = obstruction_setup(cfg.carrier, cfg.beam["x0"], cfg.user, sc["obstacle_depth"])
    c0 = math.sqrt(sc["c0_abs2"]) * complex(math.cos(sc["c0_phase"]), math.sin(sc["c0_phase"]))
    if cfg.flags["paper_mode"]:
        etas = sc["etas"]
        rows = obstruction_sweep(cfg.carrier, cfg.geometry, setup, etas, cfg.beam["power_w"], c0, sc["side"])
    else:
        from .scenarios import ObstructionScenario, received_power_obstructed
        scen = ObstructionScenario(setup.tip, setup.user, c0, sc["side"])
        pa = received_power_obstructed(setup.airy, cfg.geometry, cfg.carrier, scen, cfg.beam["power_w"])
        pg = received_power_obstructed(setup.focusing, cfg.geometry, cfg.carrier, scen, cfg.beam["power_w"])
        rows = np.array([[pa.eta, pa.total, pg.total]])
    table = ResultTable((("eta", "1"), ("P_airy", "W"), ("P_focusing", "W")), rows)
    extra = {"obstacle_tip_m": list(setup.tip), "user_m": list(setup.user)}

    def plot(path, note):
        write_line_svg(path, rows[:, 0], [("Airy", rows[:, 1]), ("focusing", rows[:, 2])],
                       "blocked fraction eta [1]", "received power [W] (log10)", "Power under obstruction",
                       note, logy=True)

    return table, plot, extra


def run_robustness(cfg):
    sc = cfg.scenario
    rows = positioning_sweep(cfg.carrier, cfg.geometry, cfg.beam["x0"], cfg.user, sc["offsets"],
                             sc["offset_axis"], sc["snr_db"], cfg.beam["power_w"], cfg.flags["log_base"])
    unit = _se_unit(cfg)
    name = "delta_" + sc["offset_axis"]
    table = ResultTable(((name, "m"), ("se_airy", unit), ("se_focusing", unit), ("se_steering", unit)), rows)

    def plot(path, note):
        write_line_svg(path, rows[:, 0], [("Airy", rows[:, 1]), ("focusing", rows[:, 2]), ("steering", rows[:, 3])],
                       f"{name} [m]", f"SE [{unit}]", "SE against positioning error", note)

    return table, plot, {}


def run_mobility(cfg):
    sc = cfg.scenario
    rows = mobility_sweep(cfg.carrier, cfg.geometry, cfg.beam["x0"], cfg.user, sc["speed"], sc["intervals"],
                          sc["snr_db"], cfg.beam["power_w"], cfg.flags["log_base"], sc["time_samples"])
    unit = _se_unit(cfg)
    table = ResultTable((("T", "s"), ("se_airy", unit), ("se_focusing", unit)), rows)

    def plot(path, note):
        write_line_svg(path, rows[:, 0], [("Airy", rows[:, 1]), ("focusing", rows[:, 2])],
                       "update interval T [s]", f"SE [{unit}]", "SE against update interval", note)

    return table, plot, {}


def run_multiuser(cfg):
    sc = cfg.scenario
    users = multiuser_users(cfg.carrier, cfg.geometry, cfg.beam["x0"], cfg.user, sc["n_users"],
                            cfg.grid["z_cap_factor"])
    rows = multiuser_sweep(cfg.carrier, cfg.geometry, cfg.beam["x0"], users, sc["snr_dbs"],
                           cfg.beam["power_w"], cfg.flags["log_base"])
    unit = _se_unit(cfg)
    table = ResultTable((("snr", "dB"), ("se_airy", unit), ("se_focusing", unit), ("se_steering", unit)), rows)

    def plot(path, note):
        write_line_svg(path, rows[:, 0], [("Airy", rows[:, 1]), ("focusing", rows[:, 2]), ("steering", rows[:, 3])],
                       "SNR [dB]", f"average SE [{unit}]", "Multi-user SE against SNR", note)

    return table, plot, {"users_m": [list(u) for u in users]}


RUNNERS = {
    "field": run_field,
    "trajectory": run_trajectory,
    "constraints": run_constraints,
    "deviation-vs-L": run_deviation_vs_aperture,
    "deviation-vs-d": run_deviation_vs_spacing,
    "obstruction": run_obstruction,
    "robustness": run_robustness,
    "mobility": run_mobility,
    "multiuser": run_multiuser,
}


@dataclass(frozen=True)
class Preset:
    runner: str
    description: str
    overrides: dict


_FIG34_FOCUS = {"x": 1.7431, "z": 19.9239}

PRESETS = {
    "fig-trajectory-diff": Preset("trajectory", "theory minus measured main lobe, U6G Type 1", {
        "carrier": {"frequency_hz": 7e9}, "array": {"n_antennas": 256},
        "beam": {"family": "cubic_focus", "x0": 1.0, "focus": {"x": 0.0, "z": 30.0}}}),
    "fig-trajectory-diff-mmwave": Preset("trajectory", "same for the 30 GHz, N = 1024, x0 = 2 array", {
        "carrier": {"frequency_hz": 30e9}, "array": {"n_antennas": 1024},
        "beam": {"family": "cubic_focus", "x0": 2.0, "focus": {"x": 0.0, "z": 30.0}}}),
    "fig-deviation-vs-L": Preset("deviation-vs-L", "mean deviation against aperture length", {
        "beam": {"family": "cubic_focus", "focus": _FIG34_FOCUS},
        "sweep": {"variable": "n_antennas", "values": list(range(192, 1025, 64)),
                  "x0_values": [1.0, 1.5, 2.0]}}),
    "fig-deviation-vs-d": Preset("deviation-vs-d", "mean deviation against antenna spacing", {
        "beam": {"family": "cubic_focus", "focus": _FIG34_FOCUS},
        "sweep": {"variable": "spacing_wavelengths", "values": [0.125, 0.25, 0.5, 1.0],
                  "x0_values": [1.0, 1.5, 2.0]}}),
    "fig-obstruction-power": Preset("obstruction", "received power against blocked fraction", {
        "beam": {"x0": 1.0}, "scenario": {"user": {"x": 0.0, "z": 30.0}, "obstacle_depth": 15.0}}),
    "fig-se-positioning": Preset("robustness", "SE against transverse positioning error", {
        "beam": {"x0": 1.0}, "scenario": {"user": {"x": 0.0, "z": 20.0}, "snr_db": 10.0}}),
    "fig-se-mobility": Preset("mobility", "SE against update interval at 100 m/s", {
        "beam": {"x0": 1.0}, "scenario": {"user": {"x": 0.0, "z": 20.0}, "speed": 100.0}}),
    "fig-se-vs-snr": Preset("multiuser", "multi-user average SE against SNR", {
        "beam": {"x0": 1.1}, "scenario": {"user": {"x": 0.0, "z": 20.0}, "n_users": 4}}),
}


def run_experiment(cfg, runner, out_dir=None, command=None, stem=None):
    """Run one runner, write <stem>.csv, <stem>.svg and run.json; return written paths."""
    if runner not in RUNNERS:
        raise InvalidInputError(f"unknown runner {runner!r}")
    out_dir = out_dir or cfg.output_dir
    os.makedirs(out_dir, exist_ok=True)
    table, plot, extra = RUNNERS[runner](cfg)
    stem = stem or runner
    note = f"airybeam {__version__} config {cfg.hash}"
    csv_path = write_csv(table, os.path.join(out_dir, f"{stem}.csv"))
    svg_path = os.path.join(out_dir, f"{stem}.svg")
    plot(svg_path, note)
    run_path = write_run_record(out_dir, command or runner, cfg, [csv_path, svg_path], __version__, extra)
    return [csv_path, svg_path, run_path]
