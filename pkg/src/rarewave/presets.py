"""Experiment presets: named deterministic studies with reports and artifacts.

Each preset writes an artifact directory holding manifest.json, report.txt,
and the study's CSV series (solver-backed presets also write diagnostics.csv
and checkpoints). Reports tag every measured number with a stable claim id
so runs can be audited after the fact.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass

import numpy as np

from . import burgers, diagnostics, solver, wave
from .burgers import BurgersWave
from .config import (ExperimentPreset, PRESET_NAMES, build_config, effective_values,
                     parse_sections, render_ini)
from .euler import GasModel, make_riemann_data

# canonical per-preset overrides on top of the schema defaults
PRESET_OVERRIDES = {
    "lemma21": {},
    "lemma22": {"wave": {"rho_plus": "2.0"}},
    "residual": {"gas": {"gamma": "2.0"}, "wave": {"rho_plus": "4.0"}},
    "convergence": {
        "viscosity": {"mu": "0.05"},
        "grid": {"nx": "64", "ny": "8", "l_x": "5.0"},
        "perturbation": {"amplitude": "0.05", "sigma": "1.0"},
        "run": {"preset": "convergence", "t_end": "0.4", "cfl": "0.45"},
    },
    "planarity": {
        "grid": {"nx": "128", "ny": "8", "l_x": "30.0"},
        "perturbation": {"amplitude": "0.0", "shape": "zero"},
        "run": {"preset": "planarity", "t_end": "1000.0", "cfl": "0.45"},
    },
    "stability": {
        # viscous-limited run; the step-size rule already halves the explicit
        # diffusion limit, so a large Courant number stays well inside it
        "run": {"preset": "stability", "cfl": "0.9"},
    },
}

PRESET_DESCRIPTIONS = {
    "lemma21": "decay exponents and fan convergence of the smooth Burgers profile",
    "lemma22": "structure identities, decay exponents and fan convergence of the smooth wave",
    "residual": "conservation-law residual of the smooth wave under time-probe refinement",
    "convergence": "solver self-convergence order on smooth perturbed wave data",
    "planarity": "constant-state fixed point, planar invariance and conservation audit",
    "stability": "long-time perturbed-wave run with energy and sup-error tracking",
}


@dataclass
class CheckResult:
    claim: str
    detail: str
    passed: bool

    def line(self) -> str:
        return f"[{self.claim}] {self.detail}: {'PASS' if self.passed else 'FAIL'}"


def preset_values(name: str) -> dict:
    """Schema defaults merged with the preset's canonical overrides."""
    values = parse_sections("")
    for section, keys in PRESET_OVERRIDES.get(name, {}).items():
        for key, raw in keys.items():
            kind = {"gamma": "float", "mu": "float", "lam": "float", "rho_minus": "float",
                    "u_minus": "float", "rho_plus": "float", "u_plus": "float_or_auto",
                    "nx": "int", "ny": "int", "l_x": "float_or_auto",
                    "amplitude": "float", "sigma": "float", "k": "int",
                    "cfl": "float", "t_end": "float", "diag_interval": "float",
                    "checkpoint_interval": "float"}.get(key, "str")
            from .config import _convert
            values[section][key] = _convert(kind, raw, f"[{section}] {key}")
    values["run"]["preset"] = name
    return values


def default_preset(name: str) -> ExperimentPreset:
    return ExperimentPreset(name, preset_values(name))


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([f"{v:.17g}" for v in row])


def _fit_times():
    return np.logspace(2.0, 4.0, 9)


def _study_lemma21(values, out_dir):
    """Burgers profile: derivative-norm decay slopes plus sup convergence to the fan."""
    bw = BurgersWave(-1.0, 1.0)
    ts = _fit_times()
    series = {
        "wx_p2": [burgers.lp_norm_of_derivative(bw, t, 1, 2) for t in ts],
        "wx_p4": [burgers.lp_norm_of_derivative(bw, t, 1, 4) for t in ts],
        "wx_pinf": [burgers.lp_norm_of_derivative(bw, t, 1, np.inf) for t in ts],
        "wxx_pinf": [burgers.lp_norm_of_derivative(bw, t, 2, np.inf) for t in ts],
        "wxxx_pinf": [burgers.lp_norm_of_derivative(bw, t, 3, np.inf) for t in ts],
    }
    _write_csv(os.path.join(out_dir, "decay_norms.csv"),
               ["t"] + list(series), zip(ts, *series.values()))
    targets = {"wx_p2": (-0.5, 0.10), "wx_p4": (-0.75, 0.10), "wx_pinf": (-1.0, 0.10),
               "wxx_pinf": (-1.0, 0.15), "wxxx_pinf": (-1.0, 0.15)}
    checks = []
    for name, (target, tol) in targets.items():
        slope, r2 = diagnostics.decay_rate_fit(ts, series[name], (ts[0], ts[-1]))
        checks.append(CheckResult(
            f"burgers.decay-slope.{name}",
            f"slope={slope:+.4f} (target {target:+.2f} +/- {tol}), r2={r2:.5f}",
            abs(slope - target) <= tol))
    sched = [float(2 ** k) for k in range(11)]
    sups = [burgers.sup_distance_to_fan(bw, t) for t in sched]
    _write_csv(os.path.join(out_dir, "fan_distance.csv"), ["t", "sup_dist"],
               zip(sched, sups))
    mono = all(b <= a for a, b in zip(sups, sups[1:]))
    final_ok = sups[-1] <= 0.05 * bw.gap
    checks.append(CheckResult("burgers.fan-convergence",
                              f"sup distance {sups[0]:.4g} -> {sups[-1]:.4g} over "
                              f"t=1..1024, nonincreasing={mono}, "
                              f"final<=0.05*gap={final_ok}", mono and final_ok))
    return checks


def _study_lemma22(values, out_dir):
    """Smooth wave: structure identities, norm decay, and fan convergence."""
    config = build_config(values)
    model, data = config.model, config.data
    rng = np.random.default_rng(2718)
    t_s = rng.uniform(0.0, 50.0, 2000)
    x_s = rng.uniform(-60.0, 120.0, 2000)
    bw = wave.burgers_wave_of(data)
    err_u = err_rho = 0.0
    for t, x in zip(t_s, x_s):
        w, wx, _, _ = burgers.evaluate(bw, 1.0 + t, x)
        f = wave.evaluate_wave(model, data, t, x)
        err_u = max(err_u, abs(f.u_x - 2.0 / (model.gamma + 1.0) * wx) / abs(wx))
        err_rho = max(err_rho, abs(f.rho_x - f.rho ** (0.5 * (3.0 - model.gamma)) * f.u_x)
                      / abs(f.u_x))
    checks = [CheckResult("wave.slope-identities",
                          f"max rel errors: u_x vs 2/(gamma+1)w_x {err_u:.2e}, "
                          f"rho_x vs rho^((3-gamma)/2)u_x {err_rho:.2e}",
                          err_u <= 1e-10 and err_rho <= 1e-10)]
    ts = _fit_times()
    series = {
        "ux_p2": [wave.derivative_norms(model, data, t, 1, 2).u for t in ts],
        "ux_pinf": [wave.derivative_norms(model, data, t, 1, np.inf).u for t in ts],
        "rhox_pinf": [wave.derivative_norms(model, data, t, 1, np.inf).rho for t in ts],
        "uxx_pinf": [wave.derivative_norms(model, data, t, 2, np.inf).u for t in ts],
    }
    _write_csv(os.path.join(out_dir, "decay_norms.csv"),
               ["t"] + list(series), zip(ts, *series.values()))
    targets = {"ux_p2": (-0.5, 0.10), "ux_pinf": (-1.0, 0.10),
               "rhox_pinf": (-1.0, 0.10), "uxx_pinf": (-1.0, 0.15)}
    for name, (target, tol) in targets.items():
        slope, r2 = diagnostics.decay_rate_fit(ts, series[name], (ts[0], ts[-1]))
        checks.append(CheckResult(
            f"wave.decay-slope.{name}",
            f"slope={slope:+.4f} (target {target:+.2f} +/- {tol}), r2={r2:.5f}",
            abs(slope - target) <= tol))
    sched = [float(2 ** k) for k in range(11)]
    sups = [wave.sup_distance_to_fan(model, data, t) for t in sched]
    _write_csv(os.path.join(out_dir, "fan_distance.csv"), ["t", "sup_dist"],
               zip(sched, sups))
    mono = all(b <= a for a, b in zip(sups, sups[1:]))
    final_ok = sups[-1] <= 0.05 * data.alpha
    checks.append(CheckResult("wave.fan-convergence",
                              f"sup distance {sups[0]:.4g} -> {sups[-1]:.4g}, "
                              f"nonincreasing={mono}, final<=0.05*alpha={final_ok}",
                              mono and final_ok))
    return checks


def _study_residual(values, out_dir):
    """Centered-time residual of the smooth wave, halved probe over 4 levels."""
    config = build_config(values)
    model, data = config.model, config.data
    t0 = 1.0
    grid = np.linspace(data.w_minus * (1 + t0) - 15.0, data.w_plus * (1 + t0) + 15.0, 401)
    probes = [8e-4 * 0.5 ** k for k in range(4)]
    rows = []
    for dt in probes:
        r_mass, r_mom = wave.euler_residual(model, data, t0, grid, dt)
        rows.append((dt, r_mass, r_mom))
    _write_csv(os.path.join(out_dir, "residuals.csv"),
               ["dt_probe", "r_mass", "r_momentum"], rows)
    orders = []
    for (d1, m1, q1), (d2, m2, q2) in zip(rows, rows[1:]):
        orders.append(np.log2(max(m1, q1) / max(m2, q2)))
    mean_order = float(np.mean(orders))
    final = max(rows[-1][1], rows[-1][2])
    bound = 1e-6 * data.alpha
    checks = [
        CheckResult("wave.residual-order",
                    f"orders per halving {['%.3f' % o for o in orders]}, "
                    f"mean={mean_order:.3f} (target 2.0 +/- 0.2)",
                    abs(mean_order - 2.0) <= 0.2),
        CheckResult("wave.residual-floor",
                    f"final residual {final:.3e} <= 1e-6*alpha={bound:.3e}",
                    final <= bound),
    ]
    return checks


def _restrict(a: np.ndarray) -> np.ndarray:
    return 0.25 * (a[0::2, 0::2] + a[1::2, 0::2] + a[0::2, 1::2] + a[1::2, 1::2])


def _study_convergence(values, out_dir):
    """Self-convergence order over a doubled-resolution triple."""
    base = build_config(values)
    finals = []
    rows = []
    for level in range(3):
        factor = 2 ** level
        v = {s: dict(k) for s, k in values.items()}
        v["grid"]["nx"] = base.nx * factor
        v["grid"]["ny"] = base.ny * factor
        cfg = build_config(v)
        res = solver.run(cfg)
        if res.status != "ok":
            return [CheckResult("solver.self-convergence", f"run failed: {res.error}", False)]
        finals.append(res.state)
    errs = []
    for coarse, fine in zip(finals, finals[1:]):
        area = coarse.dx * coarse.dy
        e = sum(float(np.sum(np.abs(getattr(coarse, f) - _restrict(getattr(fine, f)))))
                for f in ("rho", "mx", "my")) * area
        errs.append(e)
    order = float(np.log2(errs[0] / errs[1]))
    rows = [(base.nx * 2 ** k, errs[k] if k < 2 else float("nan")) for k in range(3)]
    _write_csv(os.path.join(out_dir, "convergence.csv"), ["nx", "l1_diff_to_finer"], rows)
    return [CheckResult("solver.self-convergence",
                        f"L1 self-errors {errs[0]:.4e} -> {errs[1]:.4e}, "
                        f"observed order {order:.3f} (target >= 1.5)", order >= 1.5)]


def _study_planarity(values, out_dir):
    """Constant-state fixed point, planar invariance, and the mass audit."""
    config = build_config(values)
    checks = []
    # constant background: zero-strength wave, no disturbance
    v0 = {s: dict(k) for s, k in values.items()}
    v0["wave"]["rho_plus"] = v0["wave"]["rho_minus"]
    v0["wave"]["u_plus"] = v0["wave"]["u_minus"]
    cfg0 = build_config(v0)
    st = solver.initialize(cfg0)
    drift = 0.0
    for _ in range(20):
        new = solver.step(st, cfg0)
        drift = max(drift, max(float(np.max(np.abs(getattr(new, f) - getattr(st, f))))
                               for f in ("rho", "mx", "my")))
        st = new
    checks.append(CheckResult("solver.constant-state-fixed-point",
                              f"max per-step field change {drift:.3e} (<= 1e-14)",
                              drift <= 1e-14))
    state = solver.initialize(config)
    max_v = 0.0
    max_audit = 0.0
    n_steps = 1000
    for _ in range(n_steps):
        state = solver.step(state, config)
        max_v = max(max_v, float(np.max(np.abs(state.my / state.rho))))
        max_audit = max(max_audit, state.mass_audit)
    _write_csv(os.path.join(out_dir, "planarity.csv"),
               ["n_steps", "max_abs_v", "max_mass_audit"],
               [(n_steps, max_v, max_audit)])
    checks.append(CheckResult("solver.planarity",
                              f"max |v| over {n_steps} steps {max_v:.3e} (<= 1e-10)",
                              max_v <= 1e-10))
    checks.append(CheckResult("solver.mass-conservation",
                              f"max relative audit residual {max_audit:.3e} (<= 1e-12)",
                              max_audit <= 1e-12))
    return checks


def _stability_checks(records, status, error):
    checks = [CheckResult("stability.completes",
                          f"status={status}" + (f" ({error})" if error else ""),
                          status == "ok")]
    if status != "ok" or not records:
        return checks
    by_t = {rec.t: rec for rec in records}
    probe = [25.0, 50.0, 100.0, 200.0]
    sups = [by_t[t].sup_fan for t in probe if t in by_t]
    dec = len(sups) == len(probe) and all(b < a for a, b in zip(sups, sups[1:]))
    checks.append(CheckResult(
        "stability.sup-error-decreasing",
        "sup_fan " + ", ".join(f"t={t:g}: {s:.5g}" for t, s in zip(probe, sups)),
        dec))
    h2_0 = records[0].h2_pert
    h2_max = max(rec.h2_pert for rec in records)
    checks.append(CheckResult("stability.h2-bounded",
                              f"max ||pert||_2 {h2_max:.5g} vs 2x initial {2 * h2_0:.5g}",
                              h2_max <= 2.0 * h2_0))
    last = records[-1]
    r150 = by_t.get(150.0)
    for name in ("cum_wgt", "cum_grad"):
        total = getattr(last, name)
        tail = total - getattr(r150, name) if r150 else float("nan")
        ok = r150 is not None and total > 0.0 and tail <= 0.10 * total
        checks.append(CheckResult(f"stability.cauchy-tail.{name}",
                                  f"increment over [150,200] {tail:.4g} vs total {total:.4g}",
                                  ok))
    return checks


def _study_stability(values, out_dir):
    """Long-time perturbed run of the default wave with full diagnostics."""
    config = build_config(values)
    diag_dt = values["run"]["diag_interval"]
    ck_dt = values["run"]["checkpoint_interval"]
    diag_times = list(np.arange(0.0, config.t_end + 0.5 * diag_dt, diag_dt))
    n_ck = int(config.t_end / ck_dt)
    ck_times = [ck_dt * (k + 1) for k in range(n_ck)]
    res = solver.run(config, diag_times, ck_times, out_dir=out_dir)
    checks = _stability_checks(res.records, res.status, res.error)
    checks.append(CheckResult("stability.mass-conservation",
                              f"max relative audit residual {res.max_mass_audit:.3e} "
                              f"(<= 1e-12)", res.max_mass_audit <= 1e-12))
    return checks


_STUDIES = {
    "lemma21": _study_lemma21,
    "lemma22": _study_lemma22,
    "residual": _study_residual,
    "convergence": _study_convergence,
    "planarity": _study_planarity,
    "stability": _study_stability,
}


def run_preset(preset: ExperimentPreset, out_dir) -> int:
    """Execute the study; write manifest.json and report.txt; 0 iff all checks pass."""
    os.makedirs(out_dir, exist_ok=True)
    values = preset.overrides
    config = build_config(values)
    manifest = {
        "preset": preset.name,
        "description": PRESET_DESCRIPTIONS[preset.name],
        "effective_config": effective_values(
            config, preset.name,
            values["run"]["diag_interval"], values["run"]["checkpoint_interval"]),
        "threads_env": {"OMP_NUM_THREADS": os.environ.get("OMP_NUM_THREADS")},
        "status": "running",
    }
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2)
    checks = _STUDIES[preset.name](values, out_dir)
    all_pass = all(c.passed for c in checks)
    manifest["status"] = "pass" if all_pass else "fail"
    manifest["checks"] = [{"claim": c.claim, "detail": c.detail, "passed": c.passed}
                          for c in checks]
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2)
    lines = [f"preset: {preset.name}", f"description: {PRESET_DESCRIPTIONS[preset.name]}", ""]
    lines += [c.line() for c in checks]
    n_ok = sum(c.passed for c in checks)
    lines += ["", f"overall: {'PASS' if all_pass else 'FAIL'} ({n_ok}/{len(checks)})"]
    with open(os.path.join(out_dir, "report.txt"), "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return 0 if all_pass else 1


def describe(name: str | None = None) -> str:
    names = [name] if name else list(PRESET_NAMES)
    parts = []
    for n in names:
        values = preset_values(n)
        parts.append(f"# preset {n}: {PRESET_DESCRIPTIONS[n]}")
        parts.append(render_ini(values).rstrip())
        parts.append("")
    return "\n".join(parts)
