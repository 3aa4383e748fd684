"""Command-line interface: roundtrip, montecarlo, bench, validate."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .bench import (
    ConfigError,
    SimConfig,
    make_config,
    parse_config_text,
    run_montecarlo,
    run_scaling,
)
from .channel import decompose, sample_error, transmit
from .decode import decoding_radius, failure_bound, failure_bound_exponent, gao_decode, receive_polys

EXIT_OK, EXIT_PARAM, EXIT_IO = 0, 1, 2


class _ArgError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgError(message)


def _add_code_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("code parameters")
    g.add_argument("--config", help="key=value file; explicit flags override it")
    g.add_argument("--p", type=int, help="characteristic (prime)")
    g.add_argument("--e", type=int, help="F_q = F_{p^e}")
    g.add_argument("--m", type=int, help="extension degree of F_{q^m} over F_q")
    g.add_argument("--r", type=int, help="Frobenius power theta(a) = a^(q^r)")
    g.add_argument("--parts", help="comma-separated block lengths, e.g. 8,8")
    g.add_argument("--k", type=int, help="code dimension")
    g.add_argument("--s", type=int, help="interleaving order")
    g.add_argument("--t", help="error weight(s), comma-separated; default t_max")
    g.add_argument("--seed", type=int)
    g.add_argument("--solver", choices=("gauss", "mab", "both"))
    g.add_argument("--random-locators", action="store_true", default=None)
    g.add_argument("--strict", action="store_true", default=None,
                   help="reject decodings farther than t_max from the received word")


def _build_parser() -> _Parser:
    parser = _Parser(prog="hilrs", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    rt = sub.add_parser("roundtrip", help="encode, corrupt and decode one word with a trace")
    _add_code_args(rt)

    mc = sub.add_parser("montecarlo", help="estimate the decoding failure rate")
    _add_code_args(mc)
    mc.add_argument("--trials", type=int)
    mc.add_argument("--output", help="write the report here instead of stdout")
    mc.add_argument("--format", dest="fmt", choices=("json", "csv"))
    mc.add_argument("--verbose-trials", action="store_true", default=None)
    mc.add_argument("--no-timing", dest="timing", action="store_false", default=None,
                    help="omit wall-clock fields so output is byte-reproducible")
    mc.add_argument("--workers", type=int, help="process count (capped by SUMRANK_THREADS)")

    bn = sub.add_parser("bench", help="median decode time of both solvers versus n")
    bn.add_argument("--grid", default="16,32,64,128")
    bn.add_argument("--p", type=int, default=2)
    bn.add_argument("--e", type=int, default=8)
    bn.add_argument("--m", type=int, default=2)
    bn.add_argument("--s", type=int, default=2)
    bn.add_argument("--instances", type=int, default=20)
    bn.add_argument("--seed", type=int, default=0)
    bn.add_argument("--output")

    va = sub.add_parser("validate", help="check parameters and print derived quantities")
    _add_code_args(va)
    return parser


_CONFIG_KEYS = ("p", "e", "m", "r", "parts", "k", "s", "t", "seed", "solver", "random_locators",
                "strict", "trials", "output", "fmt", "verbose_trials", "timing", "workers")


def _config_from_args(args) -> SimConfig:
    file_values = {}
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                file_values = parse_config_text(fh.read())
        except OSError as exc:
            raise OSError(f"cannot read config {args.config}: {exc}") from exc
        if "format" in file_values:
            file_values["fmt"] = file_values.pop("format")
    overrides = {k: getattr(args, k) for k in _CONFIG_KEYS if hasattr(args, k)}
    return make_config(file_values, overrides)


def _write(text: str, path: str | None, out) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
        if not text.endswith("\n"):
            out.write("\n")


def _cmd_validate(cfg: SimConfig, out) -> None:
    code = cfg.build_code()
    t_max = decoding_radius(code.n, code.k, code.s)
    out.write(f"field F_{code.F.q}^{code.F.m} (p={code.F.p}, e={code.F.e}, r={code.F.r})\n")
    out.write(f"n={code.n} partition={code.partition} k={code.k} s={code.s} t_max={t_max}\n")
    out.write(f"xi={list(map(int, code.params))} fingerprint={code.fingerprint()}\n")
    for t in cfg.t_values():
        out.write(
            f"t={t} bound_paper35={failure_bound(code, t, 'paper-3.5'):.6e} "
            f"bound_exact_kappa={failure_bound(code, t, 'exact-kappa'):.6e} "
            f"exponent={failure_bound_exponent(code, t)}\n"
        )
    out.write("ok\n")


def _cmd_roundtrip(cfg: SimConfig, out) -> None:
    code = cfg.build_code()
    F = code.F
    rng = np.random.default_rng(cfg.seed)
    t = cfg.t_values()[0]
    msg = code.random_message(rng)
    c = code.encode(msg)
    e, _ = sample_error(F, code.s, code.partition, t, rng)
    y = transmit(F, c, e)
    dec = decompose(F, e, code.s, code.partition)
    out.write(f"code n={code.n} k={code.k} s={code.s} partition={code.partition} "
              f"t_max={decoding_radius(code.n, code.k, code.s)}\n")
    for j, f in enumerate(msg):
        out.write(f"f_{j + 1} = {f!r}\n")
    out.write(f"error weight {dec.weight}, rank partition {dec.t}\n")
    for j, Rj in enumerate(receive_polys(code, y)):
        out.write(f"deg R_{j + 1} = {Rj.deg}\n")
    for solver in cfg.solvers():
        res = gao_decode(code, y, solver, strict=cfg.strict)
        if res.ok:
            verdict = "success" if res.messages == msg else "miscorrection"
        else:
            verdict = f"failure ({res.reason})"
        out.write(f"{solver}: {verdict}\n")


def cli_main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = _build_parser().parse_args(argv)
    except _ArgError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARAM
    try:
        if args.command == "bench":
            grid = [int(x) for x in args.grid.split(",") if x.strip()]
            table = run_scaling(grid, args.p, args.e, args.m, args.s, args.instances, args.seed)
            _write(json.dumps({"schema": 1, "scaling": table}, indent=2), args.output, out)
            return EXIT_OK
        cfg = _config_from_args(args)
        if args.command == "validate":
            _cmd_validate(cfg, out)
        elif args.command == "roundtrip":
            _cmd_roundtrip(cfg, out)
        else:
            report = run_montecarlo(cfg)
            if cfg.fmt == "json":
                text = report.to_json()
            else:
                text = report.trials_csv() if cfg.verbose_trials else report.summary_csv()
            _write(text, cfg.output, out)
        return EXIT_OK
    except (ConfigError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARAM
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_IO


def main() -> None:
    sys.exit(cli_main())
