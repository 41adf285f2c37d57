"""Command layer: evaluation tables, limit scans, the Painleve oracle, WASEP
sampling and the comparison suites, written as CSV or JSON.

Run as ``python3 -m kpzcrossover <command> ...``.  Exit codes: 0 ok,
1 a comparison failed, 2 usage or configuration error, 3 numerical failure.
"""
import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import List, Optional

import numpy as np

from . import __version__
from . import crossover, painleve, wasep
from .linalg import SingularResolventError

OUTPUT_DIR_ENV = "KPZ_OUTPUT_DIR"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    T: Optional[float] = None
    s: Optional[float] = None
    s_grid: Optional[str] = None
    method: str = "airy"
    T_list: Optional[str] = None
    suite: Optional[str] = None
    mu: float = -1.0
    step: bool = False
    r: str = "-1,0,1"
    eps: float = 0.1
    X: float = 0.0
    n_samples: int = 1000
    seed: int = 0
    output: Optional[str] = None
    format: str = "csv"
    threads: int = 1
    x_max: float = 40.0
    n_semi: int = 48
    n_ray: int = 64
    extra: dict = field(default_factory=dict)

    def validate(self):
        if self.T is not None and not self.T > 0:
            raise ConfigError("T must be positive")
        if self.command == "simulate" and not 0 < self.eps < 0.25:
            raise ConfigError("eps must lie in (0, 1/4)")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if self.method not in ("airy", "csc", "gumbel", "all"):
            raise ConfigError(f"unknown method {self.method}")
        if self.threads < 1:
            raise ConfigError("threads must be at least 1")
        if self.n_samples < 1:
            raise ConfigError("n_samples must be at least 1")

    def contour(self):
        return crossover.MuContourConfig(x_max=self.x_max, n_semi=self.n_semi, n_ray=self.n_ray)

    def s_values(self):
        if self.s_grid:
            return parse_grid(self.s_grid)
        if self.s is not None:
            return np.array([float(self.s)])
        raise ConfigError("need --s or --s-grid")


def parse_grid(text):
    """start:stop:step with stop included, ascending."""
    try:
        start, stop, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise ConfigError(f"bad grid {text!r}, expected start:stop:step")
    if step <= 0 or stop < start:
        raise ConfigError("grid needs step > 0 and stop >= start")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


def parse_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"bad list {text!r}")


def read_config_file(path):
    """Flat key=value lines; # starts a comment."""
    out = {}
    try:
        lines = open(path).read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}")
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"bad config line {line!r}")
        k, v = (p.strip() for p in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out


# output -------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_table(cfg: RunConfig, columns, rows, stream=None):
    meta = {"version": __version__, "command": cfg.command,
            "config": {k: v for k, v in asdict(cfg).items() if v is not None and k != "extra"},
            "seed": cfg.seed}
    if cfg.format == "json":
        text = json.dumps({"meta": meta, "columns": columns,
                           "rows": [[float(v) if isinstance(v, (float, np.floating)) else v for v in r]
                                    for r in rows]}, indent=1, sort_keys=True) + "\n"
    else:
        lines = [f"# version={meta['version']}", f"# command={cfg.command}",
                 "# config=" + json.dumps(meta["config"], sort_keys=True), f"# seed={cfg.seed}",
                 ",".join(columns)]
        lines += [",".join(_fmt(v) for v in r) for r in rows]
        text = "\n".join(lines) + "\n"
    if cfg.output:
        path = cfg.output
        out_dir = os.environ.get(OUTPUT_DIR_ENV)
        if out_dir and not os.path.isabs(path):
            os.makedirs(out_dir, exist_ok=True)
            path = os.path.join(out_dir, path)
        with open(path, "w") as fh:
            fh.write(text)
    else:
        (stream or sys.stdout).write(text)


# commands -----------------------------------------------------------------

EVAL_COLUMNS = ["T", "s", "method", "value", "imag_residual", "diagnostics"]


def _eval_rows(cfg: RunConfig, T, s_values):
    methods = crossover.METHODS if cfg.method == "all" else (cfg.method,)
    contour = cfg.contour()

    def one(m):
        # the Gumbel table and the spectral Airy route share work across the
        # whole s grid, so splitting them would change the numerics
        shared = m == "gumbel" or (m == "airy" and crossover._airy_mode(T) == "spectral")
        if shared or cfg.threads == 1 or len(s_values) == 1:
            return crossover.evaluate(T, s_values, m, contour)
        # split the s grid across workers; results are reassembled in order
        chunks = np.array_split(s_values, min(cfg.threads, len(s_values)))
        with ThreadPoolExecutor(max_workers=cfg.threads) as ex:
            parts = list(ex.map(lambda c: crossover.evaluate(T, c, m, contour), chunks))
        tab = crossover.DistributionTable(T, s_values)
        tab.values[m] = np.concatenate([p.values[m] for p in parts])
        tab.residuals[m] = np.concatenate([p.residuals[m] for p in parts])
        tab.diagnostics[m] = parts[0].diagnostics[m]
        return tab

    rows = []
    for m in methods:
        tab = one(m)
        diag = ";".join(f"{k}={v}" for k, v in sorted(tab.diagnostics[m].items()))
        for s, v, res in zip(s_values, tab.values[m], tab.residuals[m]):
            rows.append([T, float(s), m, float(v), float(res), diag])
    return rows


def cmd_eval(cfg: RunConfig):
    if cfg.T is None:
        raise ConfigError("eval needs --T")
    write_table(cfg, EVAL_COLUMNS, _eval_rows(cfg, cfg.T, cfg.s_values()))
    return 0


def cmd_table(cfg: RunConfig):
    Ts = parse_list(cfg.T_list) if cfg.T_list else ([cfg.T] if cfg.T else None)
    if not Ts:
        raise ConfigError("table needs --T-list or --T")
    s = cfg.s_values() if (cfg.s_grid or cfg.s is not None) else np.arange(-4.0, 3.0)
    rows = []
    for T in Ts:
        if not T > 0:
            raise ConfigError("T must be positive")
        rows += _eval_rows(cfg, T, s)
    write_table(cfg, EVAL_COLUMNS, rows)
    return 0


def cmd_tw_limit(cfg: RunConfig):
    T = cfg.T or 200.0
    s = cfg.s_values() if (cfg.s_grid or cfg.s is not None) else parse_grid("-3:1:0.25")
    sup, F, G = crossover.tw_limit_scan(T, s, "csc", cfg.contour())
    rows = [[T, float(x), float(f), float(g), float(abs(f - g))] for x, f, g in zip(s, F, G)]
    write_table(cfg, ["T", "s", "F_T_scaled", "F_GUE", "deviation"], rows)
    return 0


def cmd_gauss_limit(cfg: RunConfig):
    T = cfg.T or 1e-3
    s = cfg.s_values() if (cfg.s_grid or cfg.s is not None) else parse_grid("-2:2:0.25")
    sup, F, Phi = crossover.gaussian_limit_scan(T, s, cfg.contour())
    rows = [[T, float(x), float(f), float(p), float(abs(f - p))] for x, f, p in zip(s, F, Phi)]
    write_table(cfg, ["T", "s", "F_T_scaled", "Phi", "deviation"], rows)
    return 0


def cmd_painleve(cfg: RunConfig):
    rs = parse_list(cfg.r)
    if cfg.step:
        fld = painleve.solve_q(step=True, r_max=12.0, r_min=min(rs) - 1.0)
        ref = [crossover.f_gue(r) for r in rs]
    else:
        if cfg.T is None:
            raise ConfigError("painleve needs --T or --step")
        if not cfg.mu < 0:
            raise ConfigError("painleve supports real negative mu only")
        fld = painleve.solve_q(cfg.T, cfg.mu, r_min=min(rs) - 1.0)
        ref = [crossover.half_line_determinant(cfg.T, cfg.mu, r).real for r in rs]
    rows = []
    for r, f in zip(rs, ref):
        d = painleve.det_from_q(fld, r)
        rows.append([cfg.T if not cfg.step else "step", cfg.mu if not cfg.step else "", r, d, f, abs(d - f),
                     fld.residuals[-1] if fld.residuals else 0.0])
    write_table(cfg, ["T", "mu", "r", "det_from_q", "fredholm_det", "difference", "picard_residual"], rows)
    return 0


def cmd_simulate(cfg: RunConfig):
    if cfg.T is None:
        raise ConfigError("simulate needs --T")
    p = wasep.WasepParams(cfg.eps, cfg.T, cfg.X)
    cdf = wasep.sample_cdf(p, cfg.n_samples, cfg.seed)
    rows = [[i, int(sd), int(h), float(f)] for i, (sd, h, f) in
            enumerate(zip(cdf.seeds, cdf.heights, cdf.samples))]
    write_table(cfg, ["replica_index", "seed", "h", "F_eps_plus_shift"], rows)
    return 0


# comparison suites: each returns rows (criterion, measured, tolerance, pass)

def _suite_cross_formula(cfg):
    rows = []
    Ts = parse_list(cfg.T_list) if cfg.T_list else [cfg.T or 1.0]
    s = cfg.s_values() if (cfg.s_grid or cfg.s is not None) else np.arange(-4.0, 3.0)
    for T in Ts:
        tab = crossover.evaluate(T, s, "all", cfg.contour())
        dc = float(np.max(np.abs(tab.values["airy"] - tab.values["csc"])))
        dg = float(np.max(np.abs(tab.values["airy"] - tab.values["gumbel"])))
        rows.append([f"airy-csc T={T}", dc, 1e-3, dc <= 1e-3])
        rows.append([f"airy-gumbel T={T}", dg, 5e-3, dg <= 5e-3])
    return rows


def _suite_tw_limit(cfg):
    T = cfg.T or 200.0
    sup, _, _ = crossover.tw_limit_scan(T, parse_grid("-3:1:0.25"), "csc", cfg.contour())
    return [[f"tw-limit T={T}", sup, 0.02, sup <= 0.02]]


def _suite_gauss_limit(cfg):
    T = cfg.T or 1e-3
    sup, _, _ = crossover.gaussian_limit_scan(T, parse_grid("-2:2:0.25"), cfg.contour())
    return [[f"gauss-limit T={T}", sup, 0.02, sup <= 0.02]]


def _suite_variance(cfg):
    v = crossover.variance_constant_check()
    d = abs(v - np.sqrt(np.pi) / 2)
    return [["variance-constant", d, 1e-6, d <= 1e-6]]


def _suite_painleve(cfg):
    rows = []
    for T in (1.0, 10.0):
        for mu in (-0.5, -1.0, -2.0):
            fld = painleve.solve_q(T, mu)
            d = max(abs(painleve.det_from_q(fld, r) - crossover.half_line_determinant(T, mu, r).real)
                    for r in (-1.0, 0.0, 1.0))
            rows.append([f"painleve T={T} mu={mu}", d, 1e-3, d <= 1e-3])
    return rows


def _suite_wasep(cfg):
    p = wasep.WasepParams(cfg.eps, cfg.T or 0.5, cfg.X)
    cdf = wasep.sample_cdf(p, cfg.n_samples, cfg.seed)
    v = np.unique(cdf.values)
    F = dict(zip(v, crossover.evaluate(p.T, v, "airy", cfg.contour()).values["airy"]))
    ks = wasep.ks_distance(cdf, lambda x: np.array([F[u] for u in np.atleast_1d(x)]))
    return [[f"wasep-ks eps={p.eps} T={p.T}", ks, 0.08, ks <= 0.08]]


SUITES = {"cross-formula": _suite_cross_formula, "tw-limit": _suite_tw_limit,
          "gauss-limit": _suite_gauss_limit, "variance-constant": _suite_variance,
          "painleve-oracle": _suite_painleve, "wasep-ks": _suite_wasep}


def cmd_compare(cfg: RunConfig):
    if cfg.suite not in SUITES:
        raise ConfigError(f"unknown suite {cfg.suite!r}; choose from {', '.join(SUITES)}")
    rows = SUITES[cfg.suite](cfg)
    out = [[name, float(m), float(tol), "pass" if ok else "fail"] for name, m, tol, ok in rows]
    write_table(cfg, ["criterion", "measured", "tolerance", "result"], out)
    return 0 if all(ok for *_, ok in rows) else 1


COMMANDS = {"eval": cmd_eval, "table": cmd_table, "compare": cmd_compare, "simulate": cmd_simulate,
            "tw-limit": cmd_tw_limit, "gauss-limit": cmd_gauss_limit, "painleve": cmd_painleve}


# parsing ------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="python3 -m kpzcrossover",
                                 description="KPZ crossover distribution evaluators")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("suite", nargs="?", help="comparison suite (compare only)")
    ap.add_argument("--config", help="flat key=value file; flags override it")
    ap.add_argument("--T", type=float)
    ap.add_argument("--T-list", dest="T_list")
    ap.add_argument("--s", type=float)
    ap.add_argument("--s-grid", dest="s_grid")
    ap.add_argument("--method")
    ap.add_argument("--mu", type=float)
    ap.add_argument("--step", action="store_true", default=None)
    ap.add_argument("--r")
    ap.add_argument("--eps", type=float)
    ap.add_argument("--X", type=float)
    ap.add_argument("--n-samples", dest="n_samples", type=int)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--output")
    ap.add_argument("--format", choices=["csv", "json"])
    ap.add_argument("--threads", type=int)
    ap.add_argument("--x-max", dest="x_max", type=float)
    ap.add_argument("--n-semi", dest="n_semi", type=int)
    ap.add_argument("--n-ray", dest="n_ray", type=int)
    return ap


def make_config(ns) -> RunConfig:
    """defaults < config file < flags."""
    cfg = RunConfig(command=ns.command, suite=ns.suite)
    types = {k: type(v) for k, v in asdict(RunConfig("x")).items() if v is not None}
    types.update(T=float, s=float)
    if ns.config:
        for k, v in read_config_file(ns.config).items():
            if not hasattr(cfg, k) or k in ("command", "extra"):
                raise ConfigError(f"unknown config key {k!r}")
            try:
                if types.get(k) is bool:
                    v = v.lower() in ("1", "true", "yes")
                elif k in types:
                    v = types[k](v)
            except ValueError:
                raise ConfigError(f"bad value for {k}: {v!r}")
            setattr(cfg, k, v)
    for k, v in vars(ns).items():
        if k in ("command", "suite", "config") or v is None:
            continue
        setattr(cfg, k, v)
    cfg.validate()
    return cfg


NUMERICAL_ERRORS = {
    crossover.ContourError: "crossover",
    painleve.PainleveConvergenceError: "painleve",
    wasep.WindowTooSmall: "wasep",
    SingularResolventError: "fredholm",
}


# options whose values may start with a minus sign, e.g. --s-grid -5:3:0.5
_LIST_OPTIONS = ("--s-grid", "--r", "--T-list")


def _join_list_values(argv):
    out, i = [], 0
    while i < len(argv):
        if argv[i] in _LIST_OPTIONS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        ns = ap.parse_args(_join_list_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = make_config(ns)
        return COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        ap.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except tuple(NUMERICAL_ERRORS) as exc:
        module = next(m for e, m in NUMERICAL_ERRORS.items() if isinstance(exc, e))
        print(f"numerical failure in module {module}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
