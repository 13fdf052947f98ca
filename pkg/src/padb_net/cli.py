"""``padb-net`` command line.

Exit status: 0 on success, 2 on configuration errors, 1 on runtime errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .config import ConfigError, gen_params, parse_config, _parse_floats, _parse_list
from .experiments import prepare_out_dir, run_preset_resilience, run_preset_table1
from .generators import degree_histogram, generate_pa, generate_padb
from .graph import largest_component_fraction, write_dump

# Every flag the tool accepts, per subcommand: (flag, argparse kwargs).
FLAGS: dict[str, list[tuple[str, dict]]] = {
    "table1": [
        ("--seeds", dict(type=int, default=30, metavar="N", help="number of seeds per model (default 30, at least 10 for the check)")),
        ("--seed", dict(type=int, default=0, metavar="S", help="base seed the per-run seeds derive from (default 0)")),
        ("--out", dict(default="results", metavar="DIR", help="output directory (default ./results)")),
    ],
    "resilience": [
        ("--config", dict(default=None, metavar="FILE", help="key = value config file; flags override it")),
        ("--n", dict(type=int, default=None, metavar="N", help="nodes per network (default 10000)")),
        ("--trials", dict(type=int, default=None, metavar="T", help="trials per compromise fraction (default 20)")),
        ("--fs", dict(default=None, metavar="LIST", help="comma-separated compromised fractions, e.g. 0,0.1,0.3")),
        ("--schemes", dict(default=None, metavar="LIST", help="comma-separated subset of PADB,EG,CPS,LS")),
        ("--seed", dict(type=int, default=None, metavar="S", help="base seed (default 0)")),
        ("--out", dict(default=None, metavar="DIR", help="output directory (default ./results)")),
        ("--apl-mode", dict(default=None, choices=("sampled", "exact"), help="path length over all sources or sampled above 2000 nodes")),
        ("--exposure", dict(action="store_true", default=None, help="also break links whose shared keys all sit on captured nodes")),
        ("--workers", dict(type=int, default=None, metavar="W", help="worker processes (capped by PADB_NET_THREADS)")),
    ],
    "generate": [
        ("--model", dict(required=True, choices=("pa", "padb"), help="unbounded or degree-bounded attachment")),
        ("--n", dict(type=int, required=True, metavar="N", help="final node count")),
        ("--p", dict(type=float, required=True, metavar="P", help="probability of a uniform (not preferential) batch")),
        ("--k", dict(type=int, required=True, metavar="K", help="edges added per new node")),
        ("--dmax", dict(type=int, default=None, metavar="D", help="degree bound (padb only)")),
        ("--seed", dict(type=int, required=True, metavar="S", help="RNG seed")),
        ("--dump", dict(default=None, metavar="FILE", help="write the edge list here, metadata to FILE.meta.json")),
    ],
}

HELP = {
    "table1": "path length and diameter of PA vs PA-DB graphs (n=1000, p=0.4, k=4)",
    "resilience": "random node compromise sweep over the key predistribution schemes",
    "generate": "generate one graph and print its summary",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="padb-net", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"padb-net {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, flags in FLAGS.items():
        sp = sub.add_parser(name, help=HELP[name], description=HELP[name])
        for flag, kw in flags:
            sp.add_argument(flag, **kw)
    return parser


def _table1(args) -> int:
    if args.seeds < 1:
        raise ConfigError("seeds: must be >= 1", field="seeds")
    result = run_preset_table1(args.seeds, args.out, args.seed)
    for name, ok, detail in result.checks:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    print(f"wrote {', '.join(str(p) for p in result.files)}")
    return 0


def _resilience(args) -> int:
    overrides = dict(
        n=args.n,
        trials=args.trials,
        seed=args.seed,
        out=args.out,
        apl_mode=args.apl_mode,
        exposure=args.exposure,
        workers=args.workers,
    )
    try:
        if args.fs is not None:
            overrides["fs_grid"] = _parse_floats(args.fs)
        if args.schemes is not None:
            overrides["schemes"] = tuple(s.upper() for s in _parse_list(args.schemes))
    except ValueError as exc:
        raise ConfigError(f"bad flag value: {exc}") from None
    if args.config is not None and not Path(args.config).is_file():
        raise ConfigError(f"config file {args.config!r} not found", field="config")
    cfg = parse_config(args.config, **overrides)
    curves = run_preset_resilience(cfg)
    for scheme, curve in curves.items():
        cells = " ".join(
            f"fs={fs:.2f}:V={curve.mean('V')[i]:.4f},E={curve.mean('E')[i]:.4f},"
            f"C={curve.mean('C')[i]:.4f},P={curve.mean('P')[i]:.3f}"
            for i, fs in enumerate(curve.fs_grid)
        )
        print(f"{scheme} {cells}")
    return 0


def _generate(args) -> int:
    if args.model == "pa" and args.dmax is not None:
        raise ConfigError("--dmax only applies to --model padb", field="dmax")
    if args.model == "padb" and args.dmax is None:
        raise ConfigError("--model padb requires --dmax", field="dmax")
    params = gen_params(args.model, args.n, args.p, args.k, args.dmax, args.seed)
    g = generate_pa(params) if args.model == "pa" else generate_padb(params)
    hist = degree_histogram(g)
    summary = {
        **g.meta,
        "version": __version__,
        "edges": g.edge_count,
        "max_degree": hist.max_degree,
        "largest_component_fraction": largest_component_fraction(g),
        "degree_histogram": [[d, c] for d, c in sorted(hist.counts.items())],
        "fitted_alpha": hist.fitted_alpha,
        "theoretical_alpha": hist.theoretical_alpha,
    }
    text = json.dumps(summary, sort_keys=True, indent=2)
    if args.dump:
        dump = Path(args.dump)
        prepare_out_dir(dump.parent if str(dump.parent) else ".")
        write_dump(g, dump)
        Path(str(dump) + ".meta.json").write_text(text + "\n")
    print(text)
    return 0


COMMANDS = {"table1": _table1, "resilience": _resilience, "generate": _generate}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"padb-net: config error: {exc}", file=sys.stderr)
        return 2
    except (OSError, RuntimeError, ValueError) as exc:
        print(f"padb-net: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
