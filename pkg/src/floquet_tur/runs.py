"""Run configurations, parameter scans and table output behind the CLI.

Configurations are INI files.  Section and key names are fixed; any unknown
section or key is an error that names the offending line.
"""
from __future__ import annotations

import configparser
import io
import json
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace

import numpy as np

from . import fcs
from .bath import MachineParams
from .circular import circular_cumulants, floquet_diagonalize
from .crab import OptimizationConfig, optimize_pulse, replay_pulse, with_delta
from .errors import ConfigError, DegenerateSteadyStateError, DomainError, NoFeasiblePulseError
from .fcs import CumulantSet, cumulants_analytic
from .metrics import DEAD_ZONE, machine_report
from .modulation import ModulationSpec, floquet_spectrum, sinusoidal_three_mode
from .montecarlo import Z_PASS, build_channels, compare_with_analytic, simulate_counting

__all__ = [
    "CSV_HEADER",
    "RunConfig",
    "load_config",
    "parse_config",
    "dump_config",
    "scan",
    "crab_scan",
    "validate",
    "write_table",
    "format_table",
]

CSV_HEADER = ("var", "J_h", "J_c", "P", "var_h", "var_c", "cov_hc", "var_P", "S_dot",
              "R_h", "R_c", "R_P", "regime", "eta2", "eta_mean_sq", "eta_C_sq", "eta_R_sq",
              "D", "D_S_dot")
Z_HEADER = ("var", "z_J_h", "z_J_c", "z_var_h", "z_var_c", "z_cov_hc", "passed")
MACHINES = ("sinusoidal", "crab", "circular", "constant")
MODULATED = ("sinusoidal", "crab", "constant")


@dataclass(frozen=True)
class PhysicsConfig:
    omega0: float = 30.0
    beta_h: float = 0.005
    beta_c: float = 0.01
    gamma0: float = 1.0
    Gamma: float = 0.2
    delta: float = 3.0
    gamma0_h: float | None = None
    gamma0_c: float | None = None
    lam: float = 0.02
    sidebands: str = "three_mode"
    mu: float = 1.0
    N: int = 10
    g: float = 0.02


@dataclass(frozen=True)
class ScanConfig:
    variable: str = "Delta"
    min: float = 0.5
    max: float = 29.0
    points: int = 100


@dataclass(frozen=True)
class CrabConfig:
    target: str = "R_h"
    max_iters: int = 2000
    restarts: int = 8
    seed: int = 0
    penalty_large: float = 1e9


@dataclass(frozen=True)
class MCConfig:
    n_jumps: int = 1_000_000
    burn_in: int = 1000
    seed: int = 0
    analytic_beta_scale: float = 1.0


@dataclass(frozen=True)
class OutputConfig:
    path: str = ""
    format: str = "csv"


@dataclass(frozen=True)
class RunConfig:
    machine: str = "sinusoidal"
    physics: PhysicsConfig = field(default_factory=PhysicsConfig)
    scan: ScanConfig = field(default_factory=ScanConfig)
    crab: CrabConfig = field(default_factory=CrabConfig)
    mc: MCConfig = field(default_factory=MCConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    @property
    def params(self):
        p = self.physics
        return MachineParams(p.omega0, p.beta_h, p.beta_c, p.gamma0, p.Gamma, p.delta,
                             p.gamma0_h, p.gamma0_c)

    def grid(self):
        return np.linspace(self.scan.min, self.scan.max, self.scan.points)

    def optimization(self):
        c, p = self.crab, self.physics
        return OptimizationConfig(target=c.target, N=p.N, mu=p.mu, max_iters=c.max_iters,
                                  restarts=c.restarts, seed=c.seed,
                                  penalty_large=c.penalty_large)

    def with_overrides(self, seed=None, out=None, fmt=None):
        cfg = self
        if seed is not None:
            cfg = replace(cfg, crab=replace(cfg.crab, seed=seed), mc=replace(cfg.mc, seed=seed))
        if out is not None:
            cfg = replace(cfg, output=replace(cfg.output, path=out))
        if fmt is not None:
            cfg = replace(cfg, output=replace(cfg.output, format=fmt))
        cfg.check()
        return cfg

    def check(self):
        """Cross-field validation; raises ConfigError."""
        p, s = self.physics, self.scan
        if self.machine not in MACHINES:
            raise ConfigError(f"machine.kind must be one of {MACHINES}, got {self.machine!r}")
        if not p.beta_h > 0 or not p.beta_c > 0:
            raise ConfigError("physics: beta_h and beta_c must be positive")
        if not p.omega0 > 0:
            raise ConfigError("physics.omega0 must be positive")
        if p.sidebands not in ("three_mode", "bessel"):
            raise ConfigError("physics.sidebands must be three_mode or bessel")
        expected = "Omega" if self.machine == "circular" else "Delta"
        if s.variable != expected:
            raise ConfigError(f"scan.variable must be {expected} for machine {self.machine}")
        if not s.min > 0:
            raise ConfigError("scan.min must be positive")
        if s.points < 2:
            raise ConfigError("scan.points must be at least 2")
        if s.max < s.min:
            raise ConfigError("scan.max must not be below scan.min")
        if self.machine in MODULATED and not s.max < p.omega0:
            raise ConfigError("scan.max must stay below omega0 (low-frequency modulation)")
        if self.output.format not in ("csv", "json"):
            raise ConfigError("output.format must be csv or json")
        try:
            self.optimization()
        except DomainError as exc:
            raise ConfigError(f"crab: {exc}") from None


# ini section -> (dataclass field on RunConfig, {ini key: dataclass field})
_SECTIONS = {
    "physics": ("physics", {f.name if f.name != "lam" else "lambda": f.name
                            for f in fields(PhysicsConfig)}),
    "scan": ("scan", {f.name: f.name for f in fields(ScanConfig)}),
    "crab": ("crab", {f.name: f.name for f in fields(CrabConfig)}),
    "mc": ("mc", {f.name: f.name for f in fields(MCConfig)}),
    "output": ("output", {f.name: f.name for f in fields(OutputConfig)}),
}
_TYPES = {}
for _cls in (PhysicsConfig, ScanConfig, CrabConfig, MCConfig, OutputConfig):
    for _f in fields(_cls):
        _TYPES[(_cls, _f.name)] = type(_f.default) if _f.default is not None else float


def _line_of(text, section, key=None):
    current = None
    for no, line in enumerate(text.splitlines(), start=1):
        m = re.match(r"\s*\[([^\]]+)\]", line)
        if m:
            current = m.group(1).strip()
            if key is None and current == section:
                return no
            continue
        if current == section and key is not None:
            if re.match(rf"\s*{re.escape(key)}\s*[=:]", line, flags=re.IGNORECASE):
                return no
    return None


def _where(text, source, section, key=None):
    line = _line_of(text, section, key)
    loc = f"{source}:{line}" if line else source
    name = f"{section}.{key}" if key else f"[{section}]"
    return f"{loc}: {name}"


def _convert(raw, typ, optional):
    raw = raw.strip()
    if optional and raw.lower() in ("", "none"):
        return None
    if typ is int:
        return int(raw.replace("_", ""))
    if typ is float:
        return float(raw)
    return raw


def parse_config(text, source="<config>"):
    """RunConfig from INI text.  Raises ConfigError with file:line context."""
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    unknown = [s for s in cp.sections() if s not in _SECTIONS and s != "machine"]
    if unknown:
        raise ConfigError(f"{_where(text, source, unknown[0])} unknown section")
    kwargs = {}
    if cp.has_section("machine"):
        for key in cp["machine"]:
            if key != "kind":
                raise ConfigError(f"{_where(text, source, 'machine', key)} unknown key")
        kwargs["machine"] = cp["machine"].get("kind", "sinusoidal").strip()
    defaults = RunConfig()
    for section, (attr, keymap) in _SECTIONS.items():
        if not cp.has_section(section):
            continue
        base = getattr(defaults, attr)
        values = {}
        for key, raw in cp[section].items():
            if key not in keymap:
                raise ConfigError(f"{_where(text, source, section, key)} unknown key")
            name = keymap[key]
            optional = getattr(base, name) is None
            try:
                values[name] = _convert(raw, _TYPES[(type(base), name)], optional)
            except ValueError:
                raise ConfigError(
                    f"{_where(text, source, section, key)} cannot parse {raw!r}") from None
        kwargs[attr] = replace(base, **values)
    cfg = RunConfig(**kwargs)
    try:
        cfg.check()
    except ConfigError as exc:
        raise ConfigError(f"{source}: {exc}") from None
    return cfg


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, source=str(path))


def dump_config(cfg):
    """INI text that :func:`parse_config` maps back to an equal RunConfig."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    cp["machine"] = {"kind": cfg.machine}
    for section, (attr, keymap) in _SECTIONS.items():
        sub = getattr(cfg, attr)
        cp[section] = {key: ("none" if getattr(sub, name) is None else
                             repr(getattr(sub, name)) if isinstance(getattr(sub, name), float)
                             else str(getattr(sub, name)))
                       for key, name in keymap.items()}
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


# ---------------------------------------------------------------- evaluation

def _zero_cumulants(beta_h, beta_c):
    return CumulantSet.assemble(0.0, 0.0, 0.0, 0.0, 0.0, beta_h, beta_c)


def _modulated_spectrum(cfg, value):
    p = cfg.physics
    if cfg.machine == "constant":
        return floquet_spectrum(ModulationSpec.constant(p.omega0, value))
    if p.sidebands == "three_mode":
        return sinusoidal_three_mode(p.omega0, p.lam, value)
    return floquet_spectrum(ModulationSpec.sinusoidal(p.omega0, p.lam, value))


def point_cumulants(cfg, value, precision=fcs.MP_DIGITS):
    """Cumulants at one grid value (Delta or Omega); mpmath-valued for
    modulated machines when ``precision`` is set."""
    p = cfg.physics
    if cfg.machine == "circular":
        hot, cold = cfg.params.plain_baths()
        return circular_cumulants(floquet_diagonalize(p.omega0, value, p.g), hot, cold)
    if cfg.machine == "crab":
        raise ConfigError("machine crab is scanned with crab-scan")
    hot, cold = cfg.params.split_baths()
    try:
        return cumulants_analytic(_modulated_spectrum(cfg, value), hot, cold, precision)
    except DegenerateSteadyStateError:
        # fully decoupled machine: no current, no noise
        return _zero_cumulants(p.beta_h, p.beta_c)


def _row(value, c, report):
    c = c.to_float() if not isinstance(c.J_h, float) else c
    row = {"var": float(value)}
    row.update({k: getattr(c, k) for k in CSV_HEADER[1:9]})
    row.update(R_h=report.R_h, R_c=report.R_c, R_P=report.R_P, regime=report.regime,
               eta2=report.eta2, eta_mean_sq=report.eta_mean_sq, eta_C_sq=report.eta_C_sq,
               eta_R_sq=report.eta_R_sq, D=report.D, D_S_dot=report.D_times_Sdot)
    return row


def _scan_point(cfg, value):
    p = cfg.physics
    c = point_cumulants(cfg, value)
    Delta = value if cfg.machine == "sinusoidal" else None
    report = machine_report(c, p.beta_h, p.beta_c, cfg.params.scale, p.omega0, Delta)
    return _row(value, c, report)


def _map(func, cfg, values, workers):
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(func, [cfg] * len(values), values))
    return [func(cfg, v) for v in values]


def scan(cfg, workers=1):
    """One row per grid value, in grid order."""
    if cfg.machine == "crab":
        raise ConfigError("machine crab is scanned with crab-scan")
    return _map(_scan_point, cfg, [float(v) for v in cfg.grid()], workers)


def _penalty_row(value, cfg):
    row = {k: math.nan for k in CSV_HEADER}
    row.update(var=float(value), regime="other")
    row[cfg.crab.target] = cfg.crab.penalty_large
    return row


def _crab_point(cfg, item):
    index, value = item
    opt = with_delta(cfg.optimization(), value, index)
    try:
        pulse = optimize_pulse(opt, cfg.params)
    except NoFeasiblePulseError:
        return _penalty_row(value, cfg), None
    return _row(value, pulse.cumulants, pulse.report), _archive_entry(index, value, pulse)


def _archive_entry(index, value, pulse):
    return {"Delta": float(value), "delta_index": int(index),
            "coeffs": pulse.coeffs.tolist(), "objective": pulse.objective_value,
            "restart_index": pulse.restart_index, "iterations": pulse.iterations_used}


def crab_scan(cfg, workers=1, replay=None):
    """Optimize a pulse at every Delta; returns (rows, archive).

    With ``replay`` (a previously written archive) the stored pulses are
    re-evaluated instead of optimized.
    """
    if cfg.machine != "crab":
        raise ConfigError("crab-scan needs machine kind = crab")
    values = [float(v) for v in cfg.grid()]
    if replay is not None:
        return _replay(cfg, values, replay)
    results = _map(_crab_point, cfg, list(enumerate(values)), workers)
    rows = [r for r, _ in results]
    archive = {"seed": cfg.crab.seed, "target": cfg.crab.target, "N": cfg.physics.N,
               "mu": cfg.physics.mu, "config": dump_config(cfg),
               "pulses": [a for _, a in results if a is not None]}
    return rows, archive


def _replay(cfg, values, archive):
    stored = {p["delta_index"]: p for p in archive["pulses"]}
    rows = []
    for index, value in enumerate(values):
        entry = stored.get(index)
        if entry is None:
            rows.append(_penalty_row(value, cfg))
            continue
        if entry["Delta"] != value:
            raise ConfigError(f"archive Delta {entry['Delta']} does not match grid value {value}")
        opt = with_delta(cfg.optimization(), value, index)
        pulse = replay_pulse(entry["coeffs"], opt, cfg.params, entry["restart_index"])
        rows.append(_row(value, pulse.cumulants, pulse.report))
    return rows, archive


def _validate_point(cfg, value):
    p, mc = cfg.physics, cfg.mc
    params = cfg.params
    if cfg.machine == "circular":
        machine = floquet_diagonalize(p.omega0, value, p.g)
        baths = params.plain_baths()
    else:
        machine = _modulated_spectrum(cfg, value)
        baths = params.split_baths()
    sampled = simulate_counting(build_channels(machine, *baths), mc.n_jumps, mc.burn_in,
                                seed=mc.seed, stream=int(np.float64(value).view(np.int64)))
    shifted = replace(cfg, physics=replace(p, beta_h=p.beta_h * mc.analytic_beta_scale,
                                           beta_c=p.beta_c * mc.analytic_beta_scale))
    analytic = point_cumulants(shifted, value, precision=None)
    # roundoff floor for counters that never fluctuate (single-bath machines)
    floor = DEAD_ZONE * params.scale
    atol = dict(J_h=floor, J_c=floor, var_h=floor * p.omega0, var_c=floor * p.omega0,
                cov_hc=floor * p.omega0)
    z = compare_with_analytic(sampled, analytic, atol=atol)
    row = {"var": float(value)}
    row.update({f"z_{k}": v for k, v in z.items()})
    row["passed"] = bool(all(abs(v) <= Z_PASS for v in z.values()))
    return row


def validate(cfg, workers=1):
    """MC z-scores against the analytic cumulants at every grid value."""
    if cfg.machine == "crab":
        raise ConfigError("validate supports sinusoidal, constant and circular machines")
    return _map(_validate_point, cfg, [float(v) for v in cfg.grid()], workers)


# ---------------------------------------------------------------- output

def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, str):
        return v
    v = float(v)
    return "" if math.isnan(v) else format(v, ".17g")


def _json_value(v):
    if isinstance(v, (bool, str)):
        return v
    v = float(v)
    return None if math.isnan(v) else v


def format_table(rows, fmt="csv", header=CSV_HEADER):
    if fmt == "json":
        return json.dumps([{k: _json_value(r[k]) for k in header} for r in rows], indent=1) + "\n"
    lines = [",".join(header)]
    lines += [",".join(_cell(r[k]) for k in header) for r in rows]
    return "\n".join(lines) + "\n"


def write_table(rows, path, fmt="csv", header=CSV_HEADER):
    text = format_table(rows, fmt, header)
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text
