"""Scenario documents, named presets and the end-to-end runner.

A scenario is one JSON object. Frequencies are angular and given in the unit
named by the key suffix (``omega_c_GHz`` in rad/ns, the ``_MHz`` fields in
rad/us); a string ending in ``pi`` such as ``"17.2pi"`` is multiplied by pi.
Everything is converted to rad/ns on load.

    {"preset": "fig6", "drive": {"t_s_ns": 800}}

starts from a built-in preset and overrides single fields.
"""

from __future__ import annotations

import copy
import json
import math
import os
import shutil
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .coefficients import MasterEqCoefficients, compute_coefficients
from .errors import CavithermError, NumericalError, ValidationError
from .greens import (DriveProtocol, GreensSolution, TimeGrid, solve_greens, solve_u,
                     step_halving, u_derivative)
from .spectral import (K_B_OVER_HBAR, KernelTable, SpectralEnvironment, build_kernels,
                       build_qgaussian, make_environment, write_csv)
from .thermo import ThermoTrace, moments, thermodynamics

SWEEP_PARAMS = ("Omega", "omega_s_ratio", "T0", "omega_d", "f_m")
TRACES = ("greens", "coefficients", "thermo", "fields", "kernels")
DEFAULT_TRACES = ("greens", "coefficients", "thermo", "fields")
STEADY_FRACTION = 0.2

_BASE = {
    "physical": {
        "omega_c_GHz": "5.38pi", "omega_s_ratio": 1.0, "Omega_MHz": "17.2pi",
        "kappa_MHz": "0.8pi", "T0_K": 0.1, "q": 1.39, "d_MHz": "18.8pi",
        "thermal_leakage": False,
    },
    "drive": {"kind": "off"},
    "initial_state": {"z0": [10.0, 0.0]},
    "grid": {"dt_ns": 0.25, "horizon_ns": 500.0},
    "tolerances": {"quadrature": 1e-8, "step_halving": None, "u_floor": 1e-8},
    "outputs": {"traces": list(DEFAULT_TRACES)},
}

_TONE = {"kind": "tone", "f_m": 0.1, "omega_d": "omega_c", "t_on_ns": 0.0,
         "t_s_ns": 900.0, "phase": 0.0}
_DRIVEN = {"drive": _TONE, "initial_state": "vacuum", "grid": {"horizon_ns": 1200.0}}
_WEAK = {"physical": {"Omega_MHz": "1.72pi"}}
_DETUNED = {"physical": {"omega_s_ratio": 0.998}}


def _merge(base, over):
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def _compose(*parts):
    doc = _BASE
    for p in parts:
        doc = _merge(doc, p)
    return doc


PRESETS = {
    "fig2": _compose(),
    "fig3": _compose(_WEAK),
    "fig4": _compose(_DETUNED),
    "fig5": _compose(_DETUNED, _WEAK),
    "fig6": _compose(_DETUNED, _DRIVEN),
    "fig7": _compose(_DETUNED, _DRIVEN, _WEAK),
    "fig8": _compose(_DETUNED, _DRIVEN, {"drive": {"omega_d": "omega_r_steady"}}),
    "fig9": _compose(_DRIVEN),
}


@dataclass(frozen=True)
class PhysicalParams:
    """Physical parameters in internal units (rad/ns, kelvin)."""

    omega_c: float
    omega_s_ratio: float
    Omega: float
    kappa: float
    T0: float
    q: float
    d: float
    thermal_leakage: bool = False

    @property
    def omega_s(self):
        return self.omega_s_ratio * self.omega_c


@dataclass(frozen=True)
class DriveSpec:
    """Drive request; ``omega_d`` is a number (rad/ns), "omega_c" or "omega_r_steady"."""

    kind: str = "off"
    f_m: float = 0.0
    omega_d: object = "omega_c"
    t_on: float = 0.0
    t_s: float = math.inf
    phase: float = 0.0

    @property
    def active(self):
        return self.kind == "tone" and self.f_m > 0


@dataclass(frozen=True)
class Tolerances:
    quadrature: float = 1e-8
    step_halving: float | None = None
    u_floor: float = 1e-8


@dataclass(frozen=True)
class Scenario:
    name: str
    physical: PhysicalParams
    drive: DriveSpec
    z0: complex
    dt: float
    horizon: float
    tolerances: Tolerances
    traces: tuple
    document: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def grid(self):
        return TimeGrid.from_horizon(self.horizon, self.dt)


# -- parsing ---------------------------------------------------------------

def parse_angular(value, path):
    """Number, or a string like "17.2pi" / "pi" meaning that multiple of pi."""
    if isinstance(value, bool):
        raise ValidationError(f"expected a number, got {value!r}", path)
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        s = value.strip().lower().replace("π", "pi")
        try:
            if s.endswith("pi"):
                head = s[:-2].strip().rstrip("*").strip()
                return (float(head) if head else 1.0) * math.pi
            return float(s)
        except ValueError:
            pass
    raise ValidationError(f"cannot read {value!r} as a number", path)


def _number(doc, key, path, default=None, lo=None, hi=None, lo_open=False, angular=False):
    p = f"{path}.{key}"
    if key not in doc or doc[key] is None:
        if default is None:
            raise ValidationError("missing required field", p)
        return default
    x = parse_angular(doc[key], p) if angular else doc[key]
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ValidationError(f"expected a number, got {doc[key]!r}", p)
    x = float(x)
    if not math.isfinite(x):
        raise ValidationError("must be finite", p)
    if lo is not None and (x <= lo if lo_open else x < lo):
        raise ValidationError(f"{x} is below the allowed range (>{'' if lo_open else '='} {lo})", p)
    if hi is not None and x > hi:
        raise ValidationError(f"{x} is above the allowed range (<= {hi})", p)
    return x


def _check_keys(doc, allowed, path):
    if not isinstance(doc, dict):
        raise ValidationError(f"expected an object, got {type(doc).__name__}", path)
    extra = sorted(set(doc) - set(allowed))
    if extra:
        raise ValidationError(f"unknown field(s) {extra}", path)


def _physical(doc):
    _check_keys(doc, ("omega_c_GHz", "omega_s_ratio", "Omega_MHz", "kappa_MHz", "T0_K", "q",
                      "d_MHz", "thermal_leakage"), "physical")
    # angular GHz -> rad/ns; angular MHz -> rad/ns * 1e-3. The ranges catch
    # values entered in the wrong unit.
    wc = _number(doc, "omega_c_GHz", "physical", lo=0.1, hi=1000.0, angular=True)
    ratio = _number(doc, "omega_s_ratio", "physical", 1.0, lo=0.0, hi=10.0, lo_open=True)
    wc_mhz = wc * 1e3
    Omega = _number(doc, "Omega_MHz", "physical", lo=0.0, hi=0.1 * wc_mhz, angular=True)
    kappa = _number(doc, "kappa_MHz", "physical", 0.0, lo=0.0, hi=0.1 * wc_mhz, angular=True)
    d = _number(doc, "d_MHz", "physical", lo=1e-3, hi=0.1 * wc_mhz, angular=True)
    T0 = _number(doc, "T0_K", "physical", 0.0, lo=0.0, hi=1e4)
    q = _number(doc, "q", "physical", 1.39)
    if not 1.0 < q < 2.0:
        raise ValidationError(f"q={q} must lie in the open interval (1, 2)", "physical.q")
    leak = doc.get("thermal_leakage", False)
    if not isinstance(leak, bool):
        raise ValidationError("expected true or false", "physical.thermal_leakage")
    return PhysicalParams(wc, ratio, Omega * 1e-3, kappa * 1e-3, T0, q, d * 1e-3, leak)


def _drive(doc):
    _check_keys(doc, ("kind", "f_m", "omega_d", "t_on_ns", "t_s_ns", "phase"), "drive")
    kind = doc.get("kind", "off")
    if kind not in ("off", "tone"):
        raise ValidationError(f"kind must be 'off' or 'tone', got {kind!r}", "drive.kind")
    if kind == "off":
        return DriveSpec()
    f_m = _number(doc, "f_m", "drive", lo=0.0, hi=10.0)
    wd = doc.get("omega_d", "omega_c")
    if wd not in ("omega_c", "omega_r_steady"):
        wd = _number(doc, "omega_d", "drive", lo=0.0, lo_open=True, angular=True)
    t_on = _number(doc, "t_on_ns", "drive", 0.0, lo=0.0)
    t_s = doc.get("t_s_ns")
    t_s = math.inf if t_s is None else _number(doc, "t_s_ns", "drive", lo=0.0)
    if not t_on < t_s:
        raise ValidationError("drive must switch on before it switches off", "drive.t_s_ns")
    phase = _number(doc, "phase", "drive", 0.0)
    return DriveSpec("tone", f_m, wd, t_on, t_s, phase)


def _initial_state(doc):
    if doc in ("vacuum", None):
        return 0j
    _check_keys(doc, ("z0", "vacuum"), "initial_state")
    if doc.get("vacuum"):
        return 0j
    z = doc.get("z0", 0.0)
    if isinstance(z, (int, float)) and not isinstance(z, bool):
        return complex(z)
    if isinstance(z, (list, tuple)) and len(z) == 2 and all(
            isinstance(c, (int, float)) and not isinstance(c, bool) for c in z):
        return complex(z[0], z[1])
    raise ValidationError("z0 must be a number or a [re, im] pair", "initial_state.z0")


def scenario_from_dict(doc, name=None):
    """Validate a scenario document (optionally based on a preset) and convert units."""
    if not isinstance(doc, dict):
        raise ValidationError("scenario must be a JSON object", "")
    doc = copy.deepcopy(doc)
    base = doc.pop("preset", None)
    if base is not None:
        if base not in PRESETS:
            raise ValidationError(f"unknown preset {base!r}; choose from {sorted(PRESETS)}",
                                  "preset")
        doc = _merge(PRESETS[base], doc)
        name = name or doc.get("name") or base
    else:
        doc = _merge(_BASE, doc)
    doc.pop("name", None)
    _check_keys(doc, ("physical", "drive", "initial_state", "grid", "tolerances", "outputs"), "")
    phys = _physical(doc["physical"])
    drive = _drive(doc["drive"])
    z0 = _initial_state(doc["initial_state"])
    _check_keys(doc["grid"], ("dt_ns", "horizon_ns"), "grid")
    dt = _number(doc["grid"], "dt_ns", "grid", lo=0.0, lo_open=True, hi=10.0)
    horizon = _number(doc["grid"], "horizon_ns", "grid", lo=0.0, lo_open=True, hi=1e6)
    if abs(horizon / dt - round(horizon / dt)) > 1e-9 * horizon / dt:
        raise ValidationError("horizon must be a whole number of steps", "grid.horizon_ns")
    if drive.active and math.isfinite(drive.t_s) and drive.t_s > horizon:
        raise ValidationError(f"drive switches off at {drive.t_s} ns, after the horizon "
                              f"{horizon} ns", "drive.t_s_ns")
    grid = TimeGrid.from_horizon(horizon, dt)
    for key, t in (("t_on_ns", drive.t_on), ("t_s_ns", drive.t_s)):
        if drive.active and math.isfinite(t) and 0 < t < horizon:
            grid.index_of(t, f"drive.{key}")
    tol_doc = doc["tolerances"]
    _check_keys(tol_doc, ("quadrature", "step_halving", "u_floor"), "tolerances")
    tol = Tolerances(
        _number(tol_doc, "quadrature", "tolerances", 1e-8, lo=0.0, lo_open=True, hi=1e-2),
        (None if tol_doc.get("step_halving") is None
         else _number(tol_doc, "step_halving", "tolerances", lo=0.0, lo_open=True)),
        _number(tol_doc, "u_floor", "tolerances", 1e-8, lo=0.0, hi=1.0),
    )
    _check_keys(doc["outputs"], ("traces",), "outputs")
    traces = tuple(doc["outputs"].get("traces", DEFAULT_TRACES))
    unknown = [t for t in traces if t not in TRACES]
    if unknown:
        raise ValidationError(f"unknown trace(s) {unknown}; choose from {list(TRACES)}",
                              "outputs.traces")
    return Scenario(name or "scenario", phys, drive, z0, dt, horizon, tol, traces, doc)


def load_scenario(path=None, preset=None):
    """Read a scenario JSON file; ``preset`` picks a named base (file fields override it).

    A file may also hold several documents under ``"scenarios"``, in which
    case ``preset`` selects one of them by name.
    """
    doc = {}
    if path is not None:
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except FileNotFoundError:
            raise ValidationError(f"config file {path} not found", "config") from None
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid JSON: {exc}", "config") from None
    if not isinstance(doc, dict):
        raise ValidationError("config must be a JSON object", "config")
    if "scenarios" in doc:
        named = doc["scenarios"]
        if preset is None:
            if len(named) != 1:
                raise ValidationError("several scenarios in file; pass a name", "preset")
            preset = next(iter(named))
        if preset in named:
            return scenario_from_dict(named[preset], name=preset)
        doc = {k: v for k, v in doc.items() if k != "scenarios"}
    if preset is not None:
        doc = {**doc, "preset": preset}
    if not doc:
        raise ValidationError("need a config file or a preset", "config")
    return scenario_from_dict(doc)


def load_preset(name):
    return scenario_from_dict({"preset": name})


def with_override(scenario: Scenario, param, value):
    """Copy of ``scenario`` with one sweep parameter replaced (value in config units)."""
    doc = copy.deepcopy(scenario.document)
    if param == "Omega":
        doc["physical"]["Omega_MHz"] = value
    elif param == "omega_s_ratio":
        doc["physical"]["omega_s_ratio"] = value
    elif param == "T0":
        doc["physical"]["T0_K"] = value
    elif param in ("omega_d", "f_m"):
        if doc["drive"].get("kind", "off") != "tone":
            raise ValidationError(f"sweeping {param} needs a tone drive", "drive.kind")
        doc["drive"][param] = value
    else:
        raise ValidationError(f"cannot sweep {param!r}; choose from {list(SWEEP_PARAMS)}",
                              "param")
    return scenario_from_dict(doc, name=scenario.name)


# -- execution -------------------------------------------------------------

def environment(scenario: Scenario) -> SpectralEnvironment:
    p = scenario.physical
    spin = build_qgaussian(p.Omega, p.omega_s, p.q, p.d)
    return make_environment(spin, p.kappa, p.T0, thermal_leakage=p.thermal_leakage)


def steady_frequency(kernels: KernelTable, grid: TimeGrid, omega_c, u_floor=1e-8):
    """Undriven pass: omega_r averaged over the last 20% of the horizon."""
    u = solve_u(kernels, grid, omega_c)
    udot = u_derivative(u, kernels, grid, omega_c)
    ok = np.abs(u) >= u_floor
    tail = grid.times >= grid.times[-1] - STEADY_FRACTION * grid.horizon
    sel = ok & tail
    if not sel.any():
        raise NumericalError("propagator vanishes over the averaging window; "
                             "cannot resolve omega_r_steady")
    omega_r = kernels.frame_freq - (udot[sel] / u[sel]).imag
    return float(np.mean(omega_r))


def drive_protocol(scenario: Scenario, kernels, grid, diagnostics):
    d = scenario.drive
    wc = scenario.physical.omega_c
    if not d.active:
        return DriveProtocol.off()
    if d.omega_d == "omega_c":
        wd = wc
    elif d.omega_d == "omega_r_steady":
        wd = steady_frequency(kernels, grid, wc, scenario.tolerances.u_floor)
        diagnostics["omega_r_steady"] = wd
    else:
        wd = float(d.omega_d)
    diagnostics["omega_d"] = wd
    return DriveProtocol("tone", d.f_m * wc, wd, d.t_on, d.t_s, d.phase)


@dataclass(frozen=True)
class RunResult:
    scenario: Scenario
    kernels: KernelTable
    solution: GreensSolution
    coefficients: MasterEqCoefficients
    thermo: ThermoTrace
    manifest: dict


def _stage(name, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except CavithermError as exc:
        exc.args = (f"[{name}] {exc.args[0] if exc.args else exc}",) + exc.args[1:]
        raise


def simulate(scenario: Scenario):
    """Run the full pipeline in memory."""
    grid = scenario.grid
    wc = scenario.physical.omega_c
    diag = {}
    env = _stage("spectral_env", environment, scenario)
    kernels = _stage("spectral_env", build_kernels, env, grid.dt, grid.n_steps, wc,
                     tol=scenario.tolerances.quadrature)
    drive = _stage("scenarios", drive_protocol, scenario, kernels, grid, diag)
    sol = _stage("greens_solver", solve_greens, kernels, grid, wc, drive)
    if scenario.tolerances.step_halving is not None:
        diag["step_halving_change"] = _stage(
            "greens_solver", step_halving, env, grid, wc, drive,
            tol=scenario.tolerances.step_halving)
    coeffs = _stage("me_coefficients", compute_coefficients, sol, scenario.tolerances.u_floor)
    thermo = _stage("thermo_quantities", thermodynamics, sol, coeffs, scenario.z0)
    diag.update({
        "kernel_quadrature_points": kernels.quad_points,
        "kernel_quadrature_change": kernels.quad_change,
        "kernel_fft_size": kernels.diagnostics.get("n_fft", 0),
        "flagged_points": int(coeffs.flags.sum()),
        "excluded_points": int(thermo.excluded.sum()),
        "balance_relative_residual": thermo.relative_residual(),
    })
    manifest = build_manifest(scenario, env, drive, grid, diag)
    return RunResult(scenario, kernels, sol, coeffs, thermo, manifest)


def build_manifest(scenario, env, drive, grid, diagnostics):
    p = scenario.physical
    s = env.spin
    return {
        "name": scenario.name,
        "version": __version__,
        "units": {"time": "ns", "frequency": "rad/ns", "energy": "hbar*rad/ns",
                  "k_B/hbar": K_B_OVER_HBAR},
        "physical": {
            "omega_c": p.omega_c, "omega_s": p.omega_s, "omega_s_ratio": p.omega_s_ratio,
            "Omega": p.Omega, "kappa": p.kappa, "T0": p.T0, "q": p.q, "d": p.d,
            "Delta": s.Delta, "C": s.C, "thermal_leakage": p.thermal_leakage,
            "omega_cut_low": env.omega_cut_low, "omega_cut_high": env.omega_cut_high,
        },
        "drive": {
            "kind": drive.kind, "amplitude": drive.amplitude, "f_m": scenario.drive.f_m,
            "omega_d": drive.drive_freq, "omega_d_spec": scenario.drive.omega_d,
            "t_on": drive.t_on, "t_s": drive.t_off if math.isfinite(drive.t_off) else None,
            "phase": drive.phase,
        },
        "initial_state": {"z0": [scenario.z0.real, scenario.z0.imag]},
        "grid": {"t0": grid.t0, "dt": grid.dt, "n_steps": grid.n_steps,
                 "horizon": grid.horizon, "frame_freq": p.omega_c},
        "tolerances": {"quadrature": scenario.tolerances.quadrature,
                       "step_halving": scenario.tolerances.step_halving,
                       "u_floor": scenario.tolerances.u_floor},
        "traces": list(scenario.traces),
        "diagnostics": diagnostics,
        "document": scenario.document,
    }


def fields_csv(result: RunResult, path):
    """Rotating-frame drive, induced field and renormalised drive plus moments."""
    sol, c = result.solution, result.coefficients
    t = sol.grid.times
    f_rot = sol.drive.lab(t) * np.exp(1j * sol.frame_freq * t)
    mom = moments(sol, result.scenario.z0)
    write_csv(path, ["t_ns", "re_f", "im_f", "re_y", "im_y", "re_fr", "im_fr", "abs_a",
                     "n_mean", "E_r_T0", "flag"],
              [t, f_rot.real, f_rot.imag, sol.y.real, sol.y.imag, c.f_r_rot.real,
               c.f_r_rot.imag, np.abs(mom.a_rot), mom.n_mean, result.thermo.E_r_T0,
               c.flags.astype(int)])


def write_outputs(result: RunResult, directory):
    d = Path(directory)
    writers = {
        "greens": lambda p: result.solution.to_csv(p),
        "coefficients": lambda p: result.coefficients.to_csv(p),
        "thermo": lambda p: result.thermo.to_csv(p),
        "fields": lambda p: fields_csv(result, p),
        "kernels": lambda p: result.kernels.to_csv(p),
    }
    for name in result.scenario.traces:
        writers[name](d / f"{name}.csv")
    with open(d / "manifest.json", "w") as fh:
        json.dump(_jsonable(result.manifest), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else None
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def run(scenario: Scenario, out=None):
    """Simulate and, if ``out`` is given, write the traces and manifest there.

    Files are produced in a staging directory next to ``out`` and moved in
    only after the whole run succeeded, so a failure leaves no partial output.
    """
    result = simulate(scenario)
    if out is not None:
        out = Path(out)
        out.parent.mkdir(parents=True, exist_ok=True)
        stage = Path(tempfile.mkdtemp(prefix=".staging-", dir=out.parent))
        try:
            write_outputs(result, stage)
            out.mkdir(exist_ok=True)
            for f in sorted(stage.iterdir()):
                os.replace(f, out / f.name)
        finally:
            shutil.rmtree(stage, ignore_errors=True)
    return result


# -- sweeps ----------------------------------------------------------------

def _point_dir(i, param, value):
    tag = str(value).replace("/", "_").replace(" ", "")
    return f"point_{i:03d}_{param}={tag}"


def _run_point(args):
    doc, name, param, value, out = args
    base = scenario_from_dict(doc, name=name)
    try:
        sc = with_override(base, param, value)
        res = run(sc, out)
        return {"status": "ok",
                "balance_relative_residual": res.manifest["diagnostics"]
                ["balance_relative_residual"]}
    except CavithermError as exc:
        kind = "validation" if isinstance(exc, ValidationError) else "numerical"
        return {"status": "failed", "error_kind": kind, "error": str(exc)}


def parse_values(text):
    """Comma-separated sweep values; numbers and "pi" multiples stay as config strings."""
    items = [s.strip() for s in str(text).split(",") if s.strip()]
    out = []
    for s in items:
        try:
            out.append(float(s))
        except ValueError:
            out.append(s)
    return out


def sweep(base: Scenario, param, values, out, workers=1):
    """Run ``base`` once per value of ``param``; returns the index written to ``out/index.json``."""
    if param not in SWEEP_PARAMS:
        raise ValidationError(f"cannot sweep {param!r}; choose from {list(SWEEP_PARAMS)}",
                              "param")
    values = list(values)
    if not values:
        raise ValidationError("empty list of sweep values", "values")
    for v in values:  # reject bad values up front
        with_override(base, param, v)
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    dirs = [_point_dir(i, param, v) for i, v in enumerate(values)]
    jobs = [(base.document, base.name, param, v, str(out / d)) for v, d in zip(values, dirs)]
    if workers <= 1:
        results = [_run_point(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_point, jobs))
    index = {
        "scenario": base.name, "param": param, "version": __version__,
        "points": [{"index": i, "value": v, "dir": d, **r}
                   for i, (v, d, r) in enumerate(zip(values, dirs, results))],
    }
    tmp = out / ".index.json.tmp"
    with open(tmp, "w") as fh:
        json.dump(_jsonable(index), fh, indent=2, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, out / "index.json")
    return index


__all__ = [
    "PRESETS", "SWEEP_PARAMS", "Scenario", "PhysicalParams", "DriveSpec", "Tolerances",
    "RunResult", "load_scenario", "load_preset", "scenario_from_dict", "with_override",
    "environment", "simulate", "run", "sweep", "parse_values", "steady_frequency",
]
