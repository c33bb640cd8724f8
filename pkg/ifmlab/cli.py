#!/usr/bin/env python3
"""
ifmlab/cli.py

Command-line front end.

  python -m ifmlab run    --protocol ev --param R=0.5 --param present=true
  python -m ifmlab sample --protocol ev --param R=0.5 --trials 1000000 --seed 7
  python -m ifmlab sweep  --protocol repeated_ev --grid R=0.5,0.25,0.1,0.01 --format csv
  python -m ifmlab tune   --param T1=0.9
  python -m ifmlab network path/to/network.json
  python -m ifmlab schema

`penrose` is the mine test (`ev`) framed as a bomb whose trigger is one of
the interferometer mirrors; R defaults to 1/2 there.

--config FILE takes a JSON RunRequest ({"protocol", "params", "mode",
"trials", "seed", "output_format"}); command-line values take precedence.

Exit codes: 0 success, 1 internal error, 2 validation error.
Probabilities are emitted with 12 significant digits.
"""

import argparse
import csv
import json
import sys
from typing import Any, Dict, List, Optional, TextIO

from pydantic import ValidationError

from .adapters import PROTOCOLS
from .errors import IfmError, UsageError
from .schema import RunRequest, json_schemas
from .utils import format_number, load_run_from_file, parse_grid, parse_params
from .worker import network_job, run_job, sweep_job, tune_job


# ---------- request construction ----------

def _load_config(path: Optional[str]) -> Dict[str, Any]:
    if not path:
        return {}
    try:
        doc = load_run_from_file(path)
    except OSError as e:
        raise UsageError("cannot read config %s: %s" % (path, e.strerror)) from None
    except json.JSONDecodeError as e:
        raise UsageError("config %s is not valid JSON: %s" % (path, e)) from None
    if not isinstance(doc, dict):
        raise UsageError("config %s must hold a JSON object" % path)
    return doc


def build_request(args: argparse.Namespace, mode: Optional[str] = None) -> RunRequest:
    """Config file first, then command-line flags on top."""
    fields = _load_config(args.config)
    params = dict(fields.get("params") or {})
    params.update(parse_params(args.param or []))
    fields["params"] = params
    for name in ("protocol", "mode", "trials", "seed"):
        value = getattr(args, name, None)
        if value is not None:
            fields[name] = value
    if mode is not None:
        fields["mode"] = mode
    if args.format is not None:
        fields["output_format"] = args.format
    return RunRequest.model_validate(fields)


# ---------- emitters ----------

def _csv_writer(out: TextIO):
    return csv.writer(out, lineterminator="\n")


def emit_csv(kind: str, doc: Dict[str, Any], out: TextIO) -> None:
    w = _csv_writer(out)
    if kind in ("run_exact", "network"):
        w.writerow(["outcome", "probability"])
        for label, p in doc["distribution"].items():
            w.writerow([label, format_number(p)])
    elif kind == "run_sample":
        w.writerow(["outcome", "count", "frequency", "probability"])
        for label in sorted(set(doc["counts"]) | set(doc["exact"])):
            w.writerow([
                label,
                doc["counts"].get(label, 0),
                format_number(doc["frequencies"].get(label, 0.0)),
                format_number(doc["exact"].get(label, 0.0)),
            ])
    elif kind == "sweep":
        w.writerow([doc["param_name"], *doc["labels"], "efficiency", "rounds_expected"])
        for row in doc["rows"]:
            w.writerow([
                format_number(row["value"]),
                *(format_number(row["distribution"][label]) for label in doc["labels"]),
                format_number(row["efficiency"]),
                format_number(row["rounds_expected"]),
            ])
    elif kind == "tune":
        w.writerow(["T1", "T2", "residual_D2"])
        w.writerow([format_number(doc["T1"]), format_number(doc["T2"]), format_number(doc["residual_D2"])])
    else:
        raise ValueError("no CSV layout for %s documents" % kind)


def emit(kind: str, doc: Dict[str, Any], fmt: str, out: TextIO) -> None:
    if fmt == "csv":
        emit_csv(kind, doc, out)
    else:
        out.write(json.dumps(doc, indent=2) + "\n")


# ---------- subcommands ----------

def cmd_run(args: argparse.Namespace, out: TextIO, mode: Optional[str] = None) -> int:
    req = build_request(args, mode=mode)
    doc = run_job(req)
    emit("run_" + req.mode, doc, req.output_format, out)
    return 0


def cmd_sample(args: argparse.Namespace, out: TextIO) -> int:
    return cmd_run(args, out, mode="sample")


def cmd_sweep(args: argparse.Namespace, out: TextIO) -> int:
    base = _load_config(args.config)
    protocol = args.protocol or base.get("protocol")
    if not protocol:
        raise UsageError("--protocol is required")
    fixed = dict(base.get("params") or {})
    fixed.update(parse_params(args.param or []))
    param_name, grid = parse_grid(args.grid)
    fixed.pop(param_name, None)
    fmt = args.format or base.get("output_format") or "json"
    doc = sweep_job(protocol, param_name, grid, fixed, workers=args.workers)
    emit("sweep", doc, fmt, out)
    return 0


def cmd_tune(args: argparse.Namespace, out: TextIO) -> int:
    params = parse_params(args.param or [])
    if "T1" not in params:
        raise UsageError("tune needs --param T1=<transmission>")
    try:
        t1 = float(params["T1"])
    except ValueError:
        raise UsageError("invalid parameter T1: not a number: %r" % params["T1"]) from None
    emit("tune", tune_job(t1), args.format or "json", out)
    return 0


def cmd_network(args: argparse.Namespace, out: TextIO) -> int:
    try:
        doc = load_run_from_file(args.file)
    except OSError as e:
        raise UsageError("cannot read network %s: %s" % (args.file, e.strerror)) from None
    except json.JSONDecodeError as e:
        raise UsageError("network %s is not valid JSON: %s" % (args.file, e)) from None
    emit("network", network_job(doc), args.format or "json", out)
    return 0


def cmd_schema(args: argparse.Namespace, out: TextIO) -> int:
    out.write(json.dumps(json_schemas(), indent=2) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ifmlab", description="Interaction-free measurement simulator.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, protocol=True):
        if protocol:
            p.add_argument("--protocol", choices=PROTOCOLS, default=None)
        p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                       help="Protocol parameter (repeatable)")
        p.add_argument("--format", choices=("json", "csv"), default=None)
        p.add_argument("--config", default=None, metavar="FILE", help="JSON RunRequest; flags override it")

    p = sub.add_parser("run", help="Run one protocol")
    common(p)
    p.add_argument("--mode", choices=("exact", "sample"), default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sample", help="Monte Carlo trials of one protocol")
    common(p)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("sweep", help="Run a protocol over a parameter grid")
    common(p)
    p.add_argument("--grid", required=True, metavar="NAME=V1,V2,...")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("tune", help="Dark-port transmission of the second splitter")
    common(p, protocol=False)
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("network", help="Propagate a JSON network document")
    p.add_argument("file")
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.set_defaults(func=cmd_network)

    p = sub.add_parser("schema", help="Print the JSON Schema of the result documents")
    p.set_defaults(func=cmd_schema)
    return parser


def describe(err: Exception) -> str:
    if isinstance(err, ValidationError):
        first = err.errors()[0]
        loc = ".".join(str(part) for part in first["loc"]) or "request"
        return "invalid parameter %s: %s" % (loc, first["msg"])
    return " ".join(str(err).split())


def main(argv: Optional[List[str]] = None, out: TextIO = None, err: TextIO = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (IfmError, ValidationError) as e:
        print("error: " + describe(e), file=err)
        return 2
    except Exception as e:
        print("internal error: " + describe(e), file=err)
        return 1


if __name__ == "__main__":
    sys.exit(main())
