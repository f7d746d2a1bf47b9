"""Command-line entry point: ``fbmc-mimo <experiment> [options]``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .exceptions import DomainError, IllConditionedPdpError, ParameterError
from .experiments import DEFAULTS, EXPERIMENTS, QUICK_OVERRIDES, ExperimentConfig, selftest_checks

log = logging.getLogger("fbmc_mimo")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3
DEFAULT_SEED = 20170601


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fbmc-mimo", description="FBMC/OQAM massive-MIMO uplink SINR experiments")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    helps = {
        "saturation": "SINR versus N without equalizer, against the saturation level",
        "theory-vs-sim": "simulated and closed-form SINR versus N with the equalizer",
        "snr-sweep": "FBMC and CP-OFDM SINR versus input SNR",
        "spacing-sweep": "SINR versus subcarrier spacing",
        "flattening": "combined-channel flatness versus N",
        "selftest": "fast invariant checks",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text, description=text)
        p.add_argument("--config", type=Path, help="JSON file with ExperimentConfig fields")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"master seed (default {DEFAULT_SEED})")
        p.add_argument("--quick", action="store_true", help="desk-scale sweep with fewer trials")
        p.add_argument("--n-jobs", type=int, default=None, help="parallel workers (results do not depend on it)")
        p.add_argument("--csv", type=Path, help="CSV output path (default: stdout)")
        p.add_argument("--json", type=Path, help="JSON report path")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def load_config(command: str, path: Path | None, seed: int, quick: bool, n_jobs: int | None) -> ExperimentConfig:
    """Field precedence: built-in defaults, experiment defaults, ``--quick``, config file, flags."""
    fields = dict(DEFAULTS.get(command, {}))
    if quick:
        fields.update(QUICK_OVERRIDES.get(command, {}))
    if path is not None:
        try:
            user = json.loads(path.read_text())
        except OSError as exc:
            raise ParameterError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ParameterError(f"invalid JSON config: {exc}") from exc
        if not isinstance(user, dict):
            raise ParameterError("config must be a JSON object")
        fields.update(user)
    fields["seed"] = seed
    if n_jobs is not None:
        fields["n_jobs"] = n_jobs
    return ExperimentConfig.from_dict(fields)


def _selftest(cfg: ExperimentConfig) -> int:
    ok = True
    for name, passed, value, limit in selftest_checks(cfg):
        print(f"{'PASS' if passed else 'FAIL'} {name}: {value:.4g} (limit {limit:.4g})")
        ok &= passed
    return EXIT_OK if ok else EXIT_NUMERICAL


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.command, args.config, args.seed, args.quick, args.n_jobs)
        if args.command == "selftest":
            return _selftest(cfg)
        log.info("running %s with seed %d", args.command, cfg.seed)
        report = EXPERIMENTS[args.command](cfg)
    except (ParameterError, DomainError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (np.linalg.LinAlgError, IllConditionedPdpError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    text = report.csv_text()
    if args.csv is None:
        sys.stdout.write(text)
    else:
        args.csv.write_text(text)
    if args.json is not None:
        args.json.write_text(report.to_json())
    log.info("finished in %.2f s", report.wall_clock_s)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
