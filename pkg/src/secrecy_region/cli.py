"""Command-line front end.

Subcommands: ``maxmin``, ``single-user``, ``critical``, ``region`` and
``verify``. Exit codes: 0 success, 2 invalid input, 3 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import optima
from .model import ChannelParams, DomainError
from .oracle import GridSpec
from .region import REGION_GRID, sample_region

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 2, 3
FORMATS = ("csv", "json")
REGION_COLUMNS = ("r1", "r2", "kind")


def fmt(x) -> str:
    """12 significant digits; booleans and strings pass through."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _num(x):
    return float(fmt(x)) if isinstance(x, float) else x


@dataclass
class RunConfig:
    command: str
    a: float = 1.0
    ac: float = 0.05
    n: float = 1.0
    p: float | None = None
    p_list: list = field(default_factory=list)
    ac_list: list = field(default_factory=list)
    grid_power: int | None = None
    grid_lambda: int | None = None
    refine: int | None = None
    format: str = "csv"
    out: str | None = None
    seed: int = 0
    no_an: bool = False
    user: int = 1
    lam: float | None = None
    draws: int = 0
    plot: bool = False

    def validate(self):
        if self.format not in FORMATS:
            raise DomainError(f"format must be one of {FORMATS}")
        for name in ("a", "ac", "n"):
            if not getattr(self, name) > 0:
                raise DomainError(f"--{name} must be positive")
        for P in self.powers():
            if P < 0:
                raise DomainError("powers must be nonnegative")
        if any(v <= 0 for v in self.ac_list):
            raise DomainError("--ac-list values must be positive")

    def channel(self, ac: float | None = None) -> ChannelParams:
        return ChannelParams(self.a, self.ac if ac is None else ac, self.n)

    def powers(self) -> list:
        if self.p_list:
            return list(self.p_list)
        return [] if self.p is None else [self.p]

    def oracle_grid(self) -> GridSpec:
        d = GridSpec()
        return GridSpec(self.grid_power or d.n_power, self.grid_lambda or d.n_lambda,
                        d.refine_rounds if self.refine is None else self.refine, d.zoom_factor)

    def region_grid(self) -> GridSpec:
        d = REGION_GRID
        return GridSpec(self.grid_power or d.n_power, self.grid_lambda or d.n_lambda, 0,
                        d.zoom_factor)


def _float_list(text: str) -> list:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def read_config_file(path: str) -> dict:
    """Flat ``key=value`` lines; ``#`` starts a comment; keys use flag names."""
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"{path}:{lineno}: expected key=value")
        key, value = (t.strip() for t in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


_CONVERT = {
    "a": float, "ac": float, "n": float, "p": float, "lam": float,
    "p_list": _float_list, "ac_list": _float_list,
    "grid_power": int, "grid_lambda": int, "refine": int, "seed": int, "user": int,
    "draws": int, "format": str, "out": str,
    "no_an": lambda v: str(v).lower() in ("1", "true", "yes"),
    "plot": lambda v: str(v).lower() in ("1", "true", "yes"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("channel and run options")
    g.add_argument("--config", help="flat key=value file; flags override it")
    g.add_argument("--a", type=float, help="direct gain (linear)")
    g.add_argument("--ac", type=float, help="cross gain (linear)")
    g.add_argument("--n", type=float, help="noise variance")
    g.add_argument("--p", type=float, help="peak power per user")
    g.add_argument("--p-list", type=_float_list, help="comma-separated powers")
    g.add_argument("--ac-list", type=_float_list, help="comma-separated cross gains")
    g.add_argument("--grid-power", type=int, help="samples per power axis")
    g.add_argument("--grid-lambda", type=int, help="samples per noise-split axis")
    g.add_argument("--refine", type=int, help="oracle refinement rounds")
    g.add_argument("--format", choices=FORMATS)
    g.add_argument("--out", help="output file (directory for region)")
    g.add_argument("--seed", type=int)
    g.add_argument("--no-an", action="store_true", default=None,
                   help="region: only the no-artificial-noise variant")

    parser = argparse.ArgumentParser(
        prog="secrecy-region",
        description="Secrecy-rate regions of the symmetric Gaussian interference "
                    "channel with artificial noise.")
    sub = parser.add_subparsers(dest="command", required=True)
    mm = sub.add_parser("maxmin", parents=[common], help="max-min operating point")
    mm.add_argument("--lambda", dest="lam", type=float, help="noise split from the admissible interval")
    su = sub.add_parser("single-user", parents=[common], help="single-user operating point")
    su.add_argument("--user", type=int, choices=(1, 2))
    sub.add_parser("critical", parents=[common], help="critical power and mode comparison")
    rg = sub.add_parser("region", parents=[common], help="region hull/frontier export")
    rg.add_argument("--plot", action="store_true", default=None, help="also render a PNG figure")
    vf = sub.add_parser("verify", parents=[common], help="closed form vs oracle checks")
    vf.add_argument("--draws", type=int, help="extra seeded random channels")
    return parser


def parse_config(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    values = read_config_file(args.config) if args.config else {}
    cfg = RunConfig(command=args.command)
    for key, raw in values.items():
        if key not in _CONVERT:
            raise DomainError(f"unknown config key {key!r}")
        setattr(cfg, key, _CONVERT[key](raw))
    for key, value in vars(args).items():
        if key in ("command", "config") or value is None:
            continue
        setattr(cfg, key, value)
    cfg.validate()
    return cfg


def write_rows(header, rows, fmt_name, meta=None) -> str:
    if fmt_name == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
        return buf.getvalue()
    doc = {"rows": [{k: _num(v) for k, v in zip(header, row)} for row in rows]}
    if meta is not None:
        doc["config"] = meta
    return json.dumps(doc, indent=2) + "\n"


def _config_echo(cfg: RunConfig) -> dict:
    return {k: v for k, v in asdict(cfg).items()}


def _require_powers(cfg):
    powers = cfg.powers()
    if not powers:
        raise DomainError("give --p or --p-list")
    return powers


def cmd_maxmin(cfg: RunConfig) -> str:
    ch = cfg.channel()
    header = ("a", "ac", "n", "p", "r_min_star", "p_min_star", "p_star", "chosen_lambda",
              "lambda_max", "power_limited")
    rows = []
    for P in _require_powers(cfg):
        sol = optima.maxmin_point(ch, P, cfg.lam)
        rows.append((ch.a, ch.a_c, ch.N, float(P), sol.r_min_star, sol.p_min_star, sol.p_star,
                     sol.chosen_lambda, sol.lambda_star_interval[1], sol.power_limited))
    return write_rows(header, rows, cfg.format, _config_echo(cfg))


def cmd_single_user(cfg: RunConfig) -> str:
    ch = cfg.channel()
    header = ("a", "ac", "n", "p", "user", "r_su_star", "delta", "p1", "p2", "lambda1", "lambda2")
    rows = []
    for P in _require_powers(cfg):
        sol = optima.single_user_point(ch, P, cfg.user)
        s = sol.strategy
        rows.append((ch.a, ch.a_c, ch.N, float(P), sol.user, sol.r_su_star, sol.delta,
                     s.p1, s.p2, s.lambda1, s.lambda2))
    return write_rows(header, rows, cfg.format, _config_echo(cfg))


def cmd_critical(cfg: RunConfig) -> str:
    """One row per power; without powers, a single row at the critical power."""
    ch = cfg.channel()
    P_c = optima.critical_power(ch)
    header = ("a", "ac", "n", "p_c", "p", "mode", "r_maxmin", "r_timeshare")
    rows = []
    for P in cfg.powers() or [P_c]:
        cmp = optima.compare_operating_modes(ch, P)
        rows.append((ch.a, ch.a_c, ch.N, P_c, float(P), cmp.mode, cmp.r_maxmin, cmp.r_timeshare))
    return write_rows(header, rows, cfg.format, _config_echo(cfg))


def region_rows(region) -> list:
    rows = [(q.r1, q.r2, "frontier") for q in region.frontier]
    rows += [(q.r1, q.r2, "hull") for q in region.hull]
    return rows


def region_document(region, cfg: RunConfig) -> dict:
    """JSON form of a region plus the run configuration."""
    return {
        "channel": {"a": region.channel.a, "ac": region.channel.a_c, "n": region.channel.N},
        "p": _num(region.power),
        "grid": asdict(region.grid),
        "with_artificial_noise": region.with_artificial_noise,
        "frontier": [[_num(q.r1), _num(q.r2)] for q in region.frontier],
        "hull": [[_num(q.r1), _num(q.r2)] for q in region.hull],
        "config": _config_echo(cfg),
    }


def region_filename(ch: ChannelParams, P: float, with_an: bool, ext: str) -> str:
    tag = "an" if with_an else "noan"
    return f"region_a{fmt(ch.a)}_ac{fmt(ch.a_c)}_n{fmt(ch.N)}_p{fmt(float(P))}_{tag}.{ext}"


def cmd_region(cfg: RunConfig) -> str:
    """Write one data file per (power or cross gain, noise mode); return the index."""
    out_dir = Path(cfg.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    powers = _require_powers(cfg)
    if cfg.ac_list and len(powers) > 1:
        raise DomainError("sweep either --p-list or --ac-list, not both")
    cases = [(cfg.channel(ac), powers[0]) for ac in cfg.ac_list] or \
            [(cfg.channel(), P) for P in powers]
    modes = [False] if cfg.no_an else [True, False]
    grid = cfg.region_grid()
    index, regions, labels = [], [], []
    for ch, P in cases:
        ch.require_secrecy()
        for with_an in modes:
            region = sample_region(ch, P, grid, with_an)
            path = out_dir / region_filename(ch, P, with_an, cfg.format)
            if cfg.format == "csv":
                path.write_text(write_rows(REGION_COLUMNS, region_rows(region), "csv"))
            else:
                path.write_text(json.dumps(region_document(region, cfg), indent=2) + "\n")
            index.append((ch.a, ch.a_c, ch.N, float(P), with_an, len(region.frontier),
                          len(region.hull), path.name))
            regions.append(region)
            sweep = f"ac={fmt(ch.a_c)}" if cfg.ac_list else f"P={fmt(float(P))}"
            labels.append(f"{sweep}, {'AN' if with_an else 'no AN'}")
    if cfg.plot:
        from .plotting import render_regions
        fig = out_dir / ("region_ac_sweep.png" if cfg.ac_list else "region_p_sweep.png")
        render_regions(regions, labels, fig)
        index.append(("", "", "", "", "", "", "", fig.name))
    header = ("a", "ac", "n", "p", "with_an", "n_frontier", "n_hull", "file")
    return write_rows(header, index, "csv" if cfg.format == "csv" else "json")


def cmd_verify(cfg: RunConfig):
    from .verify import run_checks
    ch = cfg.channel()
    ch.require_secrecy()
    P = _require_powers(cfg)[0]
    results = run_checks(ch, P, cfg.oracle_grid(), seed=cfg.seed, draws=cfg.draws)
    if cfg.format == "json":
        text = json.dumps({"checks": [asdict(r) for r in results],
                           "passed": all(r.passed for r in results),
                           "config": _config_echo(cfg)}, indent=2) + "\n"
    else:
        text = "".join(r.line() + "\n" for r in results)
        text += f"{'PASS' if all(r.passed for r in results) else 'FAIL'} overall\n"
    return text, all(r.passed for r in results)


COMMANDS = {
    "maxmin": cmd_maxmin,
    "single-user": cmd_single_user,
    "critical": cmd_critical,
    "region": cmd_region,
}


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
        if cfg.command == "verify":
            text, ok = cmd_verify(cfg)
        else:
            text, ok = COMMANDS[cfg.command](cfg), True
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if cfg.out and cfg.command != "region":
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
