"""Command-line front end.

    floquet-tur scan          --config configs/sinusoidal_scan.ini
    floquet-tur crab-scan     --config configs/crab_scan.ini [--replay pulses.json]
    floquet-tur circular-scan --config configs/circular_scan.ini
    floquet-tur validate      --config configs/mc_validate.ini

Exit codes: 0 success, 1 configuration error, 2 numerical failure,
3 validation failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from .errors import ConfigError, FloquetTURError
from .runs import Z_HEADER, crab_scan, load_config, scan, validate, write_table

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_VALIDATION = 0, 1, 2, 3

log = logging.getLogger("floquet_tur")


def build_parser():
    parser = argparse.ArgumentParser(prog="floquet-tur", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("scan", "sinusoidal, constant or circular parameter scan"),
                        ("crab-scan", "CRAB optimization at every Delta"),
                        ("circular-scan", "scan with machine kind = circular"),
                        ("validate", "Monte Carlo check of the analytic cumulants")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, help="INI run configuration")
        p.add_argument("--seed", type=int, help="override crab.seed and mc.seed")
        p.add_argument("--out", help="output path (default: output.path, else stdout)")
        p.add_argument("--format", choices=("csv", "json"), help="override output.format")
        p.add_argument("--workers", type=int, default=1, help="worker processes")
        p.add_argument("-v", "--verbose", action="store_true")
        if name == "crab-scan":
            p.add_argument("--replay", help="re-evaluate the pulses of an archive")
            p.add_argument("--archive", help="pulse archive path (default: <out>.pulses.json)")
    return parser


def _archive_path(args, cfg):
    if args.archive:
        return args.archive
    return f"{cfg.output.path}.pulses.json" if cfg.output.path else None


def run(args):
    cfg = load_config(args.config).with_overrides(args.seed, args.out, args.format)
    if args.command == "circular-scan" and cfg.machine != "circular":
        raise ConfigError("circular-scan needs machine kind = circular")
    out, fmt = cfg.output.path, cfg.output.format

    if args.command in ("scan", "circular-scan"):
        text = write_table(scan(cfg, args.workers), out, fmt)
    elif args.command == "crab-scan":
        replay = None
        if args.replay:
            try:
                with open(args.replay, encoding="utf-8") as fh:
                    replay = json.load(fh)
            except (OSError, ValueError) as exc:
                raise ConfigError(f"cannot read archive {args.replay}: {exc}") from None
        rows, archive = crab_scan(cfg, args.workers, replay)
        text = write_table(rows, out, fmt)
        path = _archive_path(args, cfg)
        if path and replay is None:
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(archive, fh, indent=1)
            log.info("pulse archive written to %s", path)
    else:
        rows = validate(cfg, args.workers)
        text = write_table(rows, out, fmt, Z_HEADER)
        if not all(r["passed"] for r in rows):
            if not out:
                sys.stdout.write(text)
            log.error("validation failed at %d of %d points",
                      sum(not r["passed"] for r in rows), len(rows))
            return EXIT_VALIDATION
    if not out:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return run(args)
    except ConfigError as exc:
        log.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except FloquetTURError as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
