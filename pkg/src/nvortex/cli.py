"""Command-line entry point.

Exit codes: 0 when every requested check passes, 1 when a check fails,
2 for configuration or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import load_config
from .errors import CheckFailure, ConfigError
from .runner import run_case, sample_fields

SUBSET = {
    "verify": None,
    "winding": ["winding"],
    "lift-check": ["lift"],
    "dirac-check": ["dirac"],
}


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nvortex", description="Verify exact n-vortex solutions.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("verify", "run every configured check"),
        ("winding", "winding number only"),
        ("lift-check", "group-manifold lift identities"),
        ("dirac-check", "magnetic Dirac mode checks"),
    ):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", required=True, type=Path)
        sp.add_argument("--out", type=Path, help="write the JSON report here instead of stdout")
    sp = sub.add_parser("sample", help="sample fields on the grid into a CSV file")
    sp.add_argument("--config", required=True, type=Path)
    sp.add_argument("--out", required=True, type=Path)
    return p


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def run(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    cfg = load_config(args.config)
    if args.command == "sample":
        try:
            summary = sample_fields(cfg, args.out)
        except OSError as exc:
            raise ConfigError(f"cannot write samples: {exc}") from exc
        sys.stdout.write(json.dumps(summary, sort_keys=True) + "\n")
        return 0
    wanted = SUBSET[args.command]
    if wanted is not None and not set(wanted) & set(cfg.checks):
        raise ConfigError(f"{args.command} needs {wanted[0]!r} in the config's checks")
    report = run_case(cfg, checks=wanted)
    _emit(report.to_json(), args.out)
    if not report.passed:
        raise CheckFailure("one or more checks failed")
    return 0


def main(argv: list[str] | None = None) -> int:
    try:
        return run(argv)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return ConfigError.exit_code
    except CheckFailure as exc:
        print(f"check failure: {exc}", file=sys.stderr)
        return CheckFailure.exit_code


if __name__ == "__main__":
    sys.exit(main())
