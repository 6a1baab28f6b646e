"""Batch front door: compute / predict / verify-identities / show-cache.

Flags mirror the run configuration; an optional key=value config file
(same field names) supplies defaults that flags override.  The cache
directory may also come from the JETCOHOM_CACHE_DIR environment variable.

Exit codes: 0 all verdicts pass; 1 usage or configuration error; 2 a
mismatch between computed and predicted cohomology (or a failed exact
check); 3 an identity-suite failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import cache as cache_mod
from .liealg import InvalidAlgebraError
from .report import (
    RunConfig,
    cmd_compute,
    cmd_predict,
    cmd_verify_identities,
    exit_code_for,
    serialize_report,
)

_CONFIG_FIELDS = {
    "series": str,
    "rank": int,
    "maxDegree": int,
    "maxEnergy": int,
    "kMin": int,
    "kMax": int,
    "guard": int,
    "tolerance": float,
    "cacheDir": str,
    "outputFormat": str,
}


def parse_config_file(path: str) -> dict:
    values: dict = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _CONFIG_FIELDS:
            raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = _CONFIG_FIELDS[key](val)
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jetcohom",
        description="Exact cohomology of the positive-mode current algebra z*g[[z]].",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, window: bool = False):
        p.add_argument("--series", help="simple series letter A-G")
        p.add_argument("--rank", type=int)
        p.add_argument("--max-degree", type=int, dest="maxDegree")
        p.add_argument("--max-energy", type=int, dest="maxEnergy")
        p.add_argument("--format", dest="outputFormat", choices=["json", "csv", "text"])
        p.add_argument("--output", help="write the report here instead of stdout")
        p.add_argument("--cache-dir", dest="cacheDir")
        p.add_argument("--config", help="key = value file with RunConfig field names")
        p.add_argument("--timing", action="store_true", help="include wall-clock timing (breaks byte determinism)")
        if window:
            p.add_argument("--kmin", type=int, dest="kMin")
            p.add_argument("--kmax", type=int, dest="kMax")
            p.add_argument("--guard", type=int)
            p.add_argument("--tolerance", type=float)

    common(sub.add_parser("compute", help="build cells, harmonic spaces and cross-check predictions"))
    common(sub.add_parser("predict", help="affine-Weyl prediction only, no complexes"))
    common(sub.add_parser("verify-identities", help="run the windowed operator identity suite"), window=True)
    pc = sub.add_parser("show-cache", help="list cached cell blocks")
    pc.add_argument("--cache-dir", dest="cacheDir")
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    values: dict = {}
    if getattr(args, "config", None):
        values.update(parse_config_file(args.config))
    for name in _CONFIG_FIELDS:
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    if getattr(args, "timing", False):
        values["timing"] = True
    return RunConfig(**values)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "show-cache":
        cache_dir = cache_mod.resolve_cache_dir(getattr(args, "cacheDir", None))
        entries = cache_mod.list_cache(cache_dir)
        print(json.dumps({"cacheDir": str(cache_dir) if cache_dir else None, "entries": entries}, indent=2, sort_keys=True))
        return 0

    try:
        config = make_config(args)
    except (ValueError, InvalidAlgebraError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    try:
        if args.command == "compute":
            report = cmd_compute(config)
        elif args.command == "predict":
            report = cmd_predict(config)
        elif args.command == "verify-identities":
            report = cmd_verify_identities(config)
        else:  # pragma: no cover
            parser.error(f"unknown command {args.command}")
            return 1
    except InvalidAlgebraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    text = serialize_report(report, config.outputFormat)
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return exit_code_for(report)


if __name__ == "__main__":
    raise SystemExit(main())
