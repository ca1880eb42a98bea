"""Command line front end.

Usage::

    sdpkit run --model toy-inventory --method forward
    sdpkit run --model scarf --method backward --sampling exhaustive --simulate
    sdpkit run --config run.ini --param penalty_cost=20 --out-policy policy.csv

Settings come from an optional INI file (sections ``[run]`` and ``[params]``)
and are overridden by flags. ``--print-config`` echoes the merged settings
in the same INI format and exits.

Exit status: 0 on success, 1 on model/solver errors, 2 on bad configuration.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import dataclasses
import io
import sys
from dataclasses import dataclass, field

from .apps import MODELS
from .errors import SDPError
from .model import State
from .policy import simulate_policy
from .recursion import backward_recursion, forward_recursion, write_policy_csv, write_values_csv
from .sampling import SamplingPlan, Scheme


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    model: str = "toy-inventory"
    method: str = "forward"
    sampling: str = "exhaustive"
    max_samples: int = 100
    reduction_factor: float = 1.0
    seed: int = 0
    initial_stage: int = 1
    initial_level: float | None = None
    simulate: bool = False
    replications: int = 10_000
    out_policy: str | None = None
    out_values: str | None = None
    out_sim_costs: str | None = None
    threads: int = 1
    params: dict = field(default_factory=dict)

    def check(self) -> None:
        if self.model not in MODELS:
            raise ConfigError(f"[run] model: unknown model {self.model!r} "
                              f"(choose from {', '.join(MODELS)})")
        if self.method not in ("forward", "backward"):
            raise ConfigError(f"[run] method: expected forward or backward, got {self.method!r}")
        try:
            Scheme(self.sampling)
        except ValueError:
            raise ConfigError(f"[run] sampling: expected exhaustive or simple-random, "
                              f"got {self.sampling!r}") from None
        if self.max_samples < 1:
            raise ConfigError("[run] max_samples: must be >= 1")
        if self.reduction_factor < 1:
            raise ConfigError("[run] reduction_factor: must be >= 1")
        if self.replications < 1:
            raise ConfigError("[run] replications: must be >= 1")
        if self.threads < 1:
            raise ConfigError("[run] threads: must be >= 1")
        if self.initial_stage < 1:
            raise ConfigError("[run] initial_stage: must be >= 1")
        param_cls = MODELS[self.model][0]
        names = {f.name for f in dataclasses.fields(param_cls)}
        for key in self.params:
            if key not in names:
                raise ConfigError(f"[params] {key}: not a parameter of model {self.model!r}")

    def model_params(self):
        return MODELS[self.model][0](**self.params)

    def sampling_plan(self) -> SamplingPlan:
        return SamplingPlan(Scheme(self.sampling), self.max_samples, self.reduction_factor, self.seed)

    def to_ini(self) -> str:
        cp = configparser.ConfigParser(interpolation=None)
        cp["run"] = {}
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if f.name == "params" or v is None:
                continue
            cp["run"][f.name] = _format(v)
        cp["params"] = {k: _format(v) for k, v in sorted(self.params.items())}
        buf = io.StringIO()
        cp.write(buf)
        return buf.getvalue()


_RUN_TYPES = {f.name: f for f in dataclasses.fields(RunConfig)}


def _format(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, tuple):
        if v and isinstance(v[0], tuple):
            return ",".join(f"{_format(k)}:{_format(p)}" for k, p in v)
        return ",".join(_format(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _coerce_like(default, raw: str):
    """Parse ``raw`` into the type of ``default`` (int, float, bool, number list, pmf)."""
    if isinstance(default, bool):
        return _parse_bool(raw)
    if isinstance(default, int):
        return int(raw)
    if isinstance(default, float):
        return float(raw)
    if isinstance(default, tuple):
        items = [x.strip() for x in raw.split(",") if x.strip()]
        if not items:
            raise ValueError("empty list")
        if default and isinstance(default[0], tuple):
            pairs = []
            for item in items:
                k, _, p = item.partition(":")
                pairs.append((float(k), float(p)))
            return tuple(pairs)
        return tuple(float(x) for x in items)
    return raw


_RUN_DEFAULTS = RunConfig()
_RUN_PARSERS = {
    "initial_level": float,
    "out_policy": str,
    "out_values": str,
    "out_sim_costs": str,
}


def _set_run_field(cfg: RunConfig, key: str, raw: str, where: str) -> None:
    if key not in _RUN_TYPES or key == "params":
        raise ConfigError(f"{where} {key}: unknown setting")
    parse = _RUN_PARSERS.get(key)
    try:
        value = parse(raw) if parse else _coerce_like(getattr(_RUN_DEFAULTS, key), raw)
    except ValueError as exc:
        raise ConfigError(f"{where} {key}: {exc}") from None
    setattr(cfg, key, value)


def _set_param(cfg: RunConfig, key: str, raw: str, where: str) -> None:
    if cfg.model not in MODELS:
        raise ConfigError(f"[run] model: unknown model {cfg.model!r}")
    defaults = MODELS[cfg.model][0]()
    if not hasattr(defaults, key):
        raise ConfigError(f"{where} {key}: not a parameter of model {cfg.model!r}")
    try:
        cfg.params[key] = _coerce_like(getattr(defaults, key), raw)
    except ValueError as exc:
        raise ConfigError(f"{where} {key}: {exc}") from None


def load_config(text: str, source: str = "<config>") -> RunConfig:
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    for section in cp.sections():
        if section not in ("run", "params"):
            raise ConfigError(f"{source}: unknown section [{section}]")
    cfg = RunConfig()
    if cp.has_section("run"):
        for key, raw in cp["run"].items():
            _set_run_field(cfg, key, raw, f"{source} [run]")
    if cp.has_section("params"):
        for key, raw in cp["params"].items():
            _set_param(cfg, key, raw, f"{source} [params]")
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sdpkit",
                                     description="Finite-horizon stochastic dynamic programming")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="solve a bundled model")
    run.add_argument("--config", help="INI file with [run] and [params] sections")
    run.add_argument("--model", choices=sorted(MODELS))
    run.add_argument("--method", choices=["forward", "backward"])
    run.add_argument("--sampling", choices=[s.value for s in Scheme])
    run.add_argument("--max-samples", type=int)
    run.add_argument("--reduction-factor", type=float)
    run.add_argument("--seed", type=int)
    run.add_argument("--initial-stage", type=int)
    run.add_argument("--initial-level", type=float)
    run.add_argument("--simulate", action="store_true", default=None,
                     help="validate the policy by simulation")
    run.add_argument("--replications", type=int)
    run.add_argument("--out-policy", help="write policy CSV (stage, level, action)")
    run.add_argument("--out-values", help="write value CSV (stage, level, value)")
    run.add_argument("--out-sim-costs", help="write per-replication simulated costs as CSV")
    run.add_argument("--threads", type=int, help="cap on solver threads (1 = sequential)")
    run.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                     help="override a model parameter (repeatable)")
    run.add_argument("--print-config", action="store_true",
                     help="print the merged configuration and exit")
    run.add_argument("--no-timing", action="store_true", help="omit wall time from the report")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                cfg = load_config(fh.read(), args.config)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
    else:
        cfg = RunConfig()
    for key in ("model", "method", "sampling", "max_samples", "reduction_factor", "seed",
                "initial_stage", "initial_level", "simulate", "replications", "out_policy",
                "out_values", "out_sim_costs", "threads"):
        v = getattr(args, key)
        if v is not None:
            setattr(cfg, key, v)
    if args.model is not None:
        # a model switch drops overrides that do not apply to the new model
        names = {f.name for f in dataclasses.fields(MODELS[cfg.model][0])}
        cfg.params = {k: v for k, v in cfg.params.items() if k in names}
    for item in args.param:
        key, eq, raw = item.partition("=")
        if not eq:
            raise ConfigError(f"--param {item}: expected KEY=VALUE")
        _set_param(cfg, key.strip(), raw.strip(), "--param")
    cfg.check()
    return cfg


def run(cfg: RunConfig, out=None, timing: bool = True) -> int:
    out = out or sys.stdout
    _, builder = MODELS[cfg.model]
    params = cfg.model_params()
    m = builder(params)
    level = cfg.initial_level if cfg.initial_level is not None else params.initial_inventory
    s0 = State(cfg.initial_stage, float(level))
    plan = cfg.sampling_plan()
    if cfg.method == "forward":
        sol = forward_recursion(m, plan, s0)
    else:
        sol = backward_recursion(m, plan, s0, threads=cfg.threads)
    print(f"Model: {cfg.model}", file=out)
    print(f"Sampling: {plan.scheme.value}", file=out)
    for line in sol.report.lines(timing=timing):
        print(line, file=out)
    if cfg.out_policy:
        write_policy_csv(sol.policy, cfg.out_policy)
    if cfg.out_values:
        write_values_csv(sol.values, cfg.out_values)
    if cfg.simulate:
        res = simulate_policy(m, sol.policy, s0, cfg.replications, seed=cfg.seed,
                              keep_costs=bool(cfg.out_sim_costs))
        for line in res.lines():
            print(line, file=out)
        if cfg.out_sim_costs:
            with open(cfg.out_sim_costs, "w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["replication", "cost"])
                for i, c in enumerate(res.costs, 1):
                    w.writerow([i, repr(float(c))])
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ConfigError as exc:
        print(f"sdpkit: config error: {exc}", file=sys.stderr)
        return 2
    if args.print_config:
        sys.stdout.write(cfg.to_ini())
        return 0
    try:
        return run(cfg, timing=not args.no_timing)
    except (SDPError, ValueError) as exc:
        print(f"sdpkit: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
