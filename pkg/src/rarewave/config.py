"""INI-style run configuration: parsing, validation, defaults, manifest round trip.

Sections: [gas], [viscosity], [wave], [grid], [perturbation], [run]. Unknown
sections or keys are rejected; every effective value (defaults included) can
be rendered back to text that re-parses to the same configuration.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass

from .euler import GasModel, connect_end_states, make_riemann_data
from .solver import (BC_MODES, LIMITERS, PERTURBATION_SHAPES, PerturbationSpec,
                     SolverConfig)

PRESET_NAMES = ("lemma21", "lemma22", "residual", "convergence", "planarity", "stability")

# section -> key -> (converter, default-as-string); "u_plus"/"file" admit "auto"/"none"
_SCHEMA = {
    "gas": {"gamma": ("float", "1.4")},
    "viscosity": {"mu": ("float", "0.1"), "lam": ("float", "0.0")},
    "wave": {
        "rho_minus": ("float", "1.0"),
        "u_minus": ("float", "0.0"),
        "rho_plus": ("float", "1.2"),
        "u_plus": ("float_or_auto", "auto"),
    },
    "grid": {
        "nx": ("int", "512"),
        "ny": ("int", "32"),
        "l_x": ("float_or_auto", "auto"),
    },
    "perturbation": {
        "amplitude": ("float", "0.02"),
        "shape": ("str", "gaussian-sine"),
        "sigma": ("float", "1.0"),
        "k": ("int", "1"),
        "file": ("str_or_none", "none"),
    },
    "run": {
        "preset": ("str", "stability"),
        "cfl": ("float", "0.45"),
        "t_end": ("float", "200.0"),
        "bc_mode": ("str", "wave-dirichlet"),
        "limiter": ("str", "minmod"),
        "diag_interval": ("float", "2.5"),
        "checkpoint_interval": ("float", "50.0"),
    },
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentPreset:
    """A named study plus the key/value overrides it was invoked with."""

    name: str
    overrides: dict

    def __post_init__(self):
        if self.name not in PRESET_NAMES:
            raise ConfigError(f"unknown preset {self.name!r}; choose from {PRESET_NAMES}")


def _convert(kind, raw, where):
    try:
        if kind == "float":
            return float(raw)
        if kind == "int":
            v = float(raw)
            if v != int(v):
                raise ValueError
            return int(v)
        if kind == "float_or_auto":
            return "auto" if raw.strip().lower() == "auto" else float(raw)
        if kind == "str_or_none":
            return None if raw.strip().lower() == "none" else raw.strip()
        return raw.strip()
    except ValueError:
        raise ConfigError(f"cannot parse value {raw!r} for {where}") from None


def parse_sections(text: str) -> dict:
    """Raw text -> fully defaulted {section: {key: typed value}}; unknown keys rejected."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from None
    values = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        for key in parser[section]:
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")
    for section, keys in _SCHEMA.items():
        values[section] = {}
        for key, (kind, default) in keys.items():
            raw = parser.get(section, key, fallback=default)
            values[section][key] = _convert(kind, raw, f"[{section}] {key}")
    return values


def auto_half_width(w_plus: float, w_minus: float, t_end: float, sigma: float) -> float:
    """Domain half-width keeping the wave and disturbance 20% of L_x from the edges."""
    reach = max(abs(w_plus), abs(w_minus)) * (1.0 + t_end) + 10.0 * sigma
    return max(1.25 * reach, 20.0 * sigma, 10.0)


def build_config(values: dict) -> SolverConfig:
    """Typed section values -> validated SolverConfig (resolving auto entries)."""
    model = GasModel(values["gas"]["gamma"])
    wv = values["wave"]
    u_plus = wv["u_plus"]
    if u_plus == "auto":
        u_plus = connect_end_states(model, wv["rho_minus"], wv["u_minus"], wv["rho_plus"])
    data = make_riemann_data(model, wv["rho_minus"], wv["u_minus"], wv["rho_plus"], u_plus)
    run = values["run"]
    pert = values["perturbation"]
    l_x = values["grid"]["l_x"]
    if l_x == "auto":
        l_x = auto_half_width(data.w_plus, data.w_minus, run["t_end"], pert["sigma"])
    spec = PerturbationSpec(pert["amplitude"], pert["shape"], pert["sigma"],
                            pert["k"], pert["file"])
    try:
        return SolverConfig(
            model=model, data=data,
            mu=values["viscosity"]["mu"], lam=values["viscosity"]["lam"],
            L_x=l_x, nx=values["grid"]["nx"], ny=values["grid"]["ny"],
            cfl=run["cfl"], t_end=run["t_end"],
            bc_mode=run["bc_mode"], limiter=run["limiter"], perturbation=spec)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def parse_config(text: str):
    """Config text -> (SolverConfig, ExperimentPreset) with all defaults applied."""
    values = parse_sections(text)
    config = build_config(values)
    preset = ExperimentPreset(values["run"]["preset"], values)
    return config, preset


def effective_values(config: SolverConfig, preset_name: str = "stability",
                     diag_interval: float = 2.5,
                     checkpoint_interval: float = 50.0) -> dict:
    """Every effective parameter as section/key strings (auto entries resolved)."""
    return {
        "gas": {"gamma": repr(config.model.gamma)},
        "viscosity": {"mu": repr(config.mu), "lam": repr(config.lam)},
        "wave": {
            "rho_minus": repr(config.data.rho_minus),
            "u_minus": repr(config.data.u_minus),
            "rho_plus": repr(config.data.rho_plus),
            "u_plus": repr(config.data.u_plus),
        },
        "grid": {"nx": str(config.nx), "ny": str(config.ny), "l_x": repr(config.L_x)},
        "perturbation": {
            "amplitude": repr(config.perturbation.amplitude),
            "shape": config.perturbation.shape,
            "sigma": repr(config.perturbation.sigma),
            "k": str(config.perturbation.k),
            "file": config.perturbation.path or "none",
        },
        "run": {
            "preset": preset_name,
            "cfl": repr(config.cfl),
            "t_end": repr(config.t_end),
            "bc_mode": config.bc_mode,
            "limiter": config.limiter,
            "diag_interval": repr(diag_interval),
            "checkpoint_interval": repr(checkpoint_interval),
        },
    }


def render_ini(values: dict) -> str:
    parser = configparser.ConfigParser(interpolation=None)
    for section, keys in values.items():
        parser[section] = {k: str(v) for k, v in keys.items()}
    out = io.StringIO()
    parser.write(out)
    return out.getvalue()
