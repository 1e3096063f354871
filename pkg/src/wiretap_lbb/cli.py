"""Command-line entry point: ``wiretap-lbb <subcommand> [options]``.

Exit codes: 0 success, 1 configuration error, 2 validation failure.
"""

import argparse
import sys

from . import experiments
from .config import PRESETS, ConfigError, load_config

SUBCOMMANDS = {
    "tau-sweep": experiments.tau_sweep,
    "outage-vs-snr": experiments.outage_vs_snr,
    "outage-vs-k": experiments.outage_vs_k,
    "uncertainty-sweep": experiments.uncertainty_sweep,
    "beam-geometry": experiments.beam_geometry,
    "validate": None,
}

VALIDATE_TRIALS = 100_000


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wiretap-lbb",
        description="Secrecy outage of Rician wiretap channels with location-based beamforming.",
    )
    parser.add_argument("subcommand", choices=sorted(SUBCOMMANDS))
    parser.add_argument("--config", help="INI config file (overrides --preset entries)")
    parser.add_argument("--preset", choices=sorted(PRESETS), help="built-in parameter set")
    parser.add_argument("--seed", type=int, help="master seed (non-negative integer)")
    parser.add_argument("--out", help="output CSV path (default: stdout)")
    parser.add_argument("--trials", type=int, help="Monte-Carlo trials per point (0 disables the MC column)")
    parser.add_argument("--grid", type=float, help="tau grid step")
    return parser


def _run(args):
    if args.subcommand == "validate" and args.config is None and args.preset is None:
        args.preset = "fig5"
    if args.seed is not None and args.seed < 0:
        raise ConfigError("--seed must be non-negative")
    if args.trials is not None and args.trials < 0:
        raise ConfigError("--trials must be non-negative")
    if args.grid is not None and not 0 < args.grid <= 1:
        raise ConfigError("--grid must lie in (0, 1]")
    cfg = load_config(args.config, args.preset, {"seed": args.seed, "n_trials": args.trials, "grid": args.grid})
    if args.subcommand == "validate":
        return experiments.validate(cfg, n_trials=cfg.n_trials or VALIDATE_TRIALS)
    return SUBCOMMANDS[args.subcommand](cfg)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        header, rows = _run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        # invalid parameter combinations surface from the library as ValueError
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            experiments.write_csv(fh, header, rows)
    else:
        experiments.write_csv(sys.stdout, header, rows)

    if args.subcommand == "validate":
        failed = [r[0] for r in rows if not r[3]]
        for name in failed:
            print(f"FAILED: {name}", file=sys.stderr)
        return 2 if failed else 0
    return 0


if __name__ == "__main__":
    sys.exit(main())
