"""Experiment harness: config handling, parameter sweeps, CSV, validation.

A sweep runs every configured algorithm on seeded network realizations
for each value of one swept variable, recording schedule lengths,
wall-clock runtimes and (for the exact searches) evaluated-node counts.
Realization ``r`` of every sweep point uses seed ``base_seed + r``, so
all sweep points see the same channel draws and whole runs are
reproducible byte-for-byte apart from the runtime column.
"""

import json
import math
import time
from dataclasses import dataclass, field, fields, replace

from .model import EhParams, SystemParams
from .netgen import Realization, TopologyParams, UserTemplate, generate
from .power import InfeasibleUser, NumericalError, Schedule, slot_coeffs
from .schedulers import bfa, fixed_order, fpa, mpa, mtpa

SWEEP_VARIABLES = ("p_max", "p_hap", "n_users", "battery", "beta")
ALGORITHMS = ("MPA", "MTPA", "FPA", "BFA", "OTPA", "PCA")

_VALIDATE_RTOL = 1e-9


class ConfigError(ValueError):
    """Bad configuration file or sweep specification."""


@dataclass(frozen=True)
class Config:
    """Flat configuration with every simulation default baked in.

    Powers are watts, energies joules, times seconds; decibel inputs must
    be converted before they land here.
    """

    # network-wide constants
    bandwidth_hz: float = 1e6
    p_hap_w: float = 1.0
    p_max_w: float = 1e-3
    noise_density_w_per_hz: float = 10.0 ** -20.4   # -174 dBm/Hz thermal floor
    beta_si: float = 1e-7
    # per-user template
    demand_bits: float = 100.0
    battery_j: float = 1e-9
    eh_ps_saturation: float = 0.01
    eh_a_rate: float = 150.0
    eh_b_threshold: float = 0.014
    # topology
    n_users: int = 10
    radius_m: float = 10.0
    pl_d0_db: float = 30.0
    d0_m: float = 1.0
    alpha_exponent: float = 2.76
    sigma_shadow_db: float = 4.0
    rayleigh_enabled: bool = True
    seed: int = 1
    # sweep
    sweep_variable: str = "p_hap"
    sweep_values: tuple = (1.0, 3.0, 10.0, 30.0)
    realizations: int = 100
    algorithms: tuple = ("MPA", "MTPA", "FPA", "OTPA", "PCA")
    fpa_user_cap: int = 12
    bfa_user_cap: int = 9

    def system_params(self) -> SystemParams:
        return SystemParams(self.bandwidth_hz, self.p_hap_w, self.p_max_w,
                            self.noise_density_w_per_hz, self.beta_si)

    def user_template(self) -> UserTemplate:
        return UserTemplate(self.demand_bits, self.battery_j,
                            EhParams(self.eh_ps_saturation, self.eh_a_rate,
                                     self.eh_b_threshold))

    def topology(self, seed: int | None = None) -> TopologyParams:
        return TopologyParams(
            n_users=self.n_users,
            seed=self.seed if seed is None else seed,
            radius_m=self.radius_m,
            pl_d0_db=self.pl_d0_db,
            d0_m=self.d0_m,
            alpha_exponent=self.alpha_exponent,
            sigma_shadow_db=self.sigma_shadow_db,
            rayleigh_enabled=self.rayleigh_enabled,
        )


def config_from_dict(overrides: dict) -> Config:
    known = {f.name: f.type for f in fields(Config)}
    bad = set(overrides) - set(known)
    if bad:
        raise ConfigError(f"unknown config keys: {sorted(bad)}")
    kwargs = {}
    for key, value in overrides.items():
        if key in ("sweep_values", "algorithms"):
            if not isinstance(value, (list, tuple)):
                raise ConfigError(f"{key} must be a list")
            kwargs[key] = tuple(value)
        else:
            kwargs[key] = value
    try:
        return Config(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def load_config(path) -> Config:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    return config_from_dict(data)


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: which variable, which values, how many realizations."""

    variable: str
    values: tuple
    realizations: int
    algorithms: tuple
    config: Config

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ConfigError(f"sweep variable {self.variable!r} not one of {SWEEP_VARIABLES}")
        if not self.values:
            raise ConfigError("sweep values must be non-empty")
        if list(self.values) != sorted(self.values):
            raise ConfigError("sweep values must be sorted ascending")
        if self.realizations < 1:
            raise ConfigError("realizations must be >= 1")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ConfigError(f"unknown algorithms: {sorted(unknown)}")
        if not self.algorithms:
            raise ConfigError("algorithm list must be non-empty")
        max_users = self.config.n_users
        if self.variable == "n_users":
            max_users = int(max(self.values))
        if "FPA" in self.algorithms and max_users > self.config.fpa_user_cap:
            raise ConfigError(f"FPA allowed only up to {self.config.fpa_user_cap} users")
        if "BFA" in self.algorithms and max_users > self.config.bfa_user_cap:
            raise ConfigError(f"BFA allowed only up to {self.config.bfa_user_cap} users")

    @classmethod
    def from_config(cls, config: Config) -> "SweepSpec":
        return cls(config.sweep_variable, tuple(config.sweep_values),
                   config.realizations, tuple(config.algorithms), config)


@dataclass(frozen=True)
class SweepResult:
    """One (sweep value, algorithm, realization) record."""

    sweep_variable: str
    sweep_value: float
    algorithm: str
    seed: int
    schedule_len_s: float
    runtime_ns: int
    node_count: int | None


def _apply_value(config: Config, variable: str, value):
    if variable == "p_max":
        return replace(config, p_max_w=float(value))
    if variable == "p_hap":
        return replace(config, p_hap_w=float(value))
    if variable == "n_users":
        return replace(config, n_users=int(value))
    if variable == "battery":
        return replace(config, battery_j=float(value))
    if variable == "beta":
        return replace(config, beta_si=float(value))
    raise ConfigError(f"unknown sweep variable {variable!r}")


def run_algorithm(name: str, realization: Realization) -> Schedule:
    users = list(realization.users)
    sys = realization.sys
    if name == "MPA":
        return mpa(users, sys)
    if name == "MTPA":
        return mtpa(users, sys)
    if name == "FPA":
        return fpa(users, sys)
    if name == "BFA":
        return bfa(users, sys, user_cap=len(users))
    if name == "OTPA":
        return fixed_order(users, sys, cap=True)
    if name == "PCA":
        return fixed_order(users, sys, cap=False)
    raise ConfigError(f"unknown algorithm {name!r}")


def run_sweep(spec: SweepSpec):
    """Execute the sweep; returns (results, summary).

    ``summary`` maps (sweep_value, algorithm) to a dict with the mean
    schedule length, the realization count behind it, and how many
    realizations were excluded as infeasible.
    """
    results = []
    summary = {}
    for value in spec.values:
        cfg = _apply_value(spec.config, spec.variable, value)
        sys_params = cfg.system_params()
        template = cfg.user_template()
        for name in sorted(spec.algorithms):
            lengths = []
            excluded = 0
            for r in range(spec.realizations):
                seed = cfg.seed + r
                realization = generate(cfg.topology(seed=seed), sys_params, template)
                t0 = time.perf_counter_ns()
                try:
                    schedule = run_algorithm(name, realization)
                except (InfeasibleUser, NumericalError):
                    excluded += 1
                    continue
                runtime = time.perf_counter_ns() - t0
                lengths.append(schedule.total_length_s)
                results.append(SweepResult(
                    spec.variable, float(value), name, seed,
                    schedule.total_length_s, runtime, schedule.node_count))
            summary[(float(value), name)] = {
                "mean_len_s": (sum(lengths) / len(lengths)) if lengths else math.nan,
                "count": len(lengths),
                "excluded": excluded,
            }
    return results, summary


def emit_csv(results, path) -> None:
    """Write sweep rows in stable (value, algorithm, seed) order."""
    rows = sorted(results, key=lambda r: (r.sweep_value, r.algorithm, r.seed))
    lines = ["sweep_var,sweep_value,algorithm,seed,schedule_len_s,runtime_ns,node_count"]
    for r in rows:
        node = "" if r.node_count is None else str(r.node_count)
        lines.append(",".join((
            r.sweep_variable,
            format(r.sweep_value, ".17g"),
            r.algorithm,
            str(r.seed),
            format(r.schedule_len_s, ".17g"),
            str(r.runtime_ns),
            node,
        )))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# schedule files and the independent constraint checker

def write_schedule(path, schedule: Schedule) -> None:
    lines = [
        "# wpcn schedule v1",
        f"algo {schedule.algorithm_tag}",
        f"length {format(schedule.total_length_s, '.17g')}",
        f"nodes {'-' if schedule.node_count is None else schedule.node_count}",
    ]
    for a in schedule.allocations:
        lines.append("alloc " + " ".join((
            str(a.user_id),
            format(a.start_time_s, ".17g"),
            format(a.duration_s, ".17g"),
            format(a.power_w, ".17g"),
            format(a.energy_used_j, ".17g"),
        )))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_schedule(path) -> Schedule:
    from .power import Allocation
    tag = "?"
    total = None
    nodes = None
    allocations = []
    with open(path, encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields_ = line.split()
            kind = fields_[0]
            if kind == "algo":
                tag = fields_[1]
            elif kind == "length":
                total = float(fields_[1])
            elif kind == "nodes":
                nodes = None if fields_[1] == "-" else int(fields_[1])
            elif kind == "alloc":
                if len(fields_) != 6:
                    raise ValueError(f"{path}:{lineno}: alloc row needs 5 values")
                uid = int(fields_[1])
                start, dur, power, energy = (float(v) for v in fields_[2:])
                allocations.append(Allocation(uid, start, dur, power, energy))
            else:
                raise ValueError(f"{path}:{lineno}: unknown row kind {kind!r}")
    if total is None or not allocations:
        raise ValueError(f"{path}: incomplete schedule file")
    order = [a.user_id for a in allocations]
    return Schedule(order, allocations, [], total, tag, nodes)


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, user_id, constraint: str, residual: float):
        self.violations.append((user_id, constraint, residual))

    def __str__(self):
        if self.ok:
            return "schedule PASS"
        lines = ["schedule FAIL"]
        for uid, constraint, residual in self.violations:
            lines.append(f"  user {uid}: {constraint} violated, residual {residual:.6g}")
        return "\n".join(lines)


def validate_schedule(realization: Realization, schedule: Schedule) -> ValidationReport:
    """Check a schedule against the instance constraints it claims to solve.

    Verifies that the order is a permutation of the instance users, slots
    are contiguous from time zero, every slot ships the demanded bits,
    consumed energy never exceeds battery plus harvest through the slot's
    end, and no power exceeds the cap.  Independent of the solvers: only
    the model formulas appear here.
    """
    report = ValidationReport()
    users = {u.id: u for u in realization.users}
    seen = [a.user_id for a in schedule.allocations]
    if sorted(seen) != sorted(users):
        report.add("-", "permutation", float(len(set(seen) ^ set(users))))
        return report
    expected_start = 0.0
    scale = max(schedule.total_length_s, 1e-300)
    for a in schedule.allocations:
        user = users[a.user_id]
        c, k, _a, _tmin, p_max = slot_coeffs(user, realization.sys)
        if abs(a.start_time_s - expected_start) > _VALIDATE_RTOL * scale:
            report.add(a.user_id, "contiguity", a.start_time_s - expected_start)
        expected_start = a.start_time_s + a.duration_s
        sent_bits = (realization.sys.bandwidth_hz * a.duration_s
                     * math.log1p(k * a.power_w) / math.log(2.0))
        if sent_bits < user.demand_bits * (1.0 - _VALIDATE_RTOL):
            report.add(a.user_id, "data", sent_bits / user.demand_bits - 1.0)
        budget = user.battery_j + c * (a.start_time_s + a.duration_s)
        if a.energy_used_j > budget * (1.0 + _VALIDATE_RTOL):
            report.add(a.user_id, "energy", a.energy_used_j / budget - 1.0)
        if a.power_w > p_max * (1.0 + _VALIDATE_RTOL):
            report.add(a.user_id, "power_cap", a.power_w / p_max - 1.0)
        if abs(a.energy_used_j - a.power_w * a.duration_s) > _VALIDATE_RTOL * max(a.energy_used_j, 1e-300):
            report.add(a.user_id, "energy_accounting",
                       a.energy_used_j - a.power_w * a.duration_s)
    if abs(schedule.total_length_s - expected_start) > _VALIDATE_RTOL * scale:
        report.add("-", "total_length", schedule.total_length_s - expected_start)
    return report
