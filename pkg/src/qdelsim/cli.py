"""Batch runner: ``qdelsim {verify,rates,simulate} CONFIG``.

Exit codes: 0 success, 1 verification failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path

import jsonschema

from .deletion import DeletionPattern, delete_multi
from .errors import QDelSimError
from .pipeline import (
    DeletionCode,
    ExperimentConfig,
    RateQuery,
    dec_with_trace,
    logical_state,
    rate_table,
    verify_recovery,
)
from .reed_solomon import RSParams
from .state import trace_distance

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

_CODE = {
    "type": "object",
    "properties": {k: {"type": "integer"} for k in ("E", "N", "K_C", "K_D", "t")},
    "required": ["E", "N", "K_C", "K_D", "t"],
    "additionalProperties": False,
}
_COMMON = {
    "master_seed": {"type": "integer"},
    "output_path": {"type": "string"},
}
SCHEMAS = {
    "verify": {
        "type": "object",
        "properties": {
            "command": {"const": "verify"},
            "code": _CODE,
            "logical_states": {"type": "array", "items": {"type": "string"}, "minItems": 1},
            "deletions": {
                "oneOf": [
                    {
                        "type": "object",
                        "properties": {"mode": {"const": "exhaustive"}},
                        "required": ["mode"],
                        "additionalProperties": False,
                    },
                    {
                        "type": "object",
                        "properties": {
                            "mode": {"const": "explicit"},
                            "patterns": {
                                "type": "array",
                                "items": {"type": "array", "items": {"type": "integer"}},
                            },
                        },
                        "required": ["mode", "patterns"],
                        "additionalProperties": False,
                    },
                    {
                        "type": "object",
                        "properties": {
                            "mode": {"const": "random"},
                            "count": {"type": "integer", "minimum": 0},
                        },
                        "required": ["mode", "count"],
                        "additionalProperties": False,
                    },
                ]
            },
            "tolerance": {"type": "number", "exclusiveMinimum": 0},
            "fault_loc_offset": {"type": "integer"},
            **_COMMON,
        },
        "required": ["command", "code", "logical_states"],
        "additionalProperties": False,
    },
    "rates": {
        "type": "object",
        "properties": {
            "command": {"const": "rates"},
            "gamma": {"type": ["number", "string"]},
            "t": {"type": "integer", "minimum": 0},
            "E_min": {"type": "integer", "minimum": 1},
            "E_max": {"type": "integer", "minimum": 1},
            **_COMMON,
        },
        "required": ["command", "gamma", "t", "E_min", "E_max"],
        "additionalProperties": False,
    },
    "simulate": {
        "type": "object",
        "properties": {
            "command": {"const": "simulate"},
            "code": _CODE,
            "logical_state": {"type": "string"},
            "pattern": {"type": "array", "items": {"type": "integer"}},
            "tolerance": {"type": "number", "exclusiveMinimum": 0},
            **_COMMON,
        },
        "required": ["command", "code", "logical_state", "pattern"],
        "additionalProperties": False,
    },
}


class ConfigError(Exception):
    pass


def load_config(path: str | Path, command: str) -> dict:
    try:
        config = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(config, dict):
        raise ConfigError("config must be a JSON object")
    if config.get("command") != command:
        raise ConfigError(f"config command is {config.get('command')!r}, expected {command!r}")
    try:
        jsonschema.validate(config, SCHEMAS[command])
    except jsonschema.ValidationError as exc:
        where = "/".join(map(str, exc.absolute_path)) or "<root>"
        raise ConfigError(f"invalid config at {where}: {exc.message}") from exc
    return config


def _params(config: dict) -> RSParams:
    c = config["code"]
    return RSParams(N=c["N"], K_C=c["K_C"], K_D=c["K_D"], t=c["t"], E=c["E"])


def _write(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _decimal(x: Fraction) -> str:
    with localcontext() as ctx:
        ctx.prec = 12
        return format(Decimal(x.numerator) / Decimal(x.denominator), ".12g")


def cmd_verify(config: dict, seed: int | None, out: str | None, jobs: int | None) -> int:
    deletions = config.get("deletions", {"mode": "exhaustive"})
    experiment = ExperimentConfig(
        params=_params(config),
        logical_states=config["logical_states"],
        deletion_mode=deletions["mode"],
        patterns=deletions.get("patterns", []),
        random_count=deletions.get("count", 0),
        master_seed=seed if seed is not None else config.get("master_seed", 0),
        tolerance=config.get("tolerance", 1e-9),
        offset_fault=config.get("fault_loc_offset", 0),
    )
    # surface configuration errors before any trial runs
    code = DeletionCode(experiment.params)
    for s in experiment.logical_states:
        logical_state(s, code.logical_qubits)
    reports, summary = verify_recovery(experiment, jobs)
    lines = [json.dumps(r.record(), sort_keys=True) for r in reports]
    stable = {k: v for k, v in summary.items() if k != "wall_time"}
    lines.append(json.dumps({"summary": stable}, sort_keys=True))
    _write("\n".join(lines) + "\n", out or config.get("output_path"))
    print(
        f"{summary['passed']}/{summary['trials']} trials passed, "
        f"max trace distance {summary['max_trace_distance']:.3e}",
        file=sys.stderr,
    )
    return EXIT_OK if summary["failed"] == 0 else EXIT_FAIL


def cmd_rates(config: dict, out: str | None) -> int:
    query = RateQuery(config["gamma"], config["t"], config["E_min"], config["E_max"])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["E", "N", "K_C", "K_D", "rate", "lower", "upper",
         "rate_num", "rate_den", "lower_num", "lower_den", "upper_num", "upper_den", "status"]
    )
    for row in rate_table(query):
        writer.writerow(
            [row.E, row.N, row.K_C, row.K_D,
             _decimal(row.rate), _decimal(row.lower), _decimal(row.upper),
             row.rate.numerator, row.rate.denominator,
             row.lower.numerator, row.lower.denominator,
             row.upper.numerator, row.upper.denominator,
             "ok" if row.feasible else "infeasible"]
        )
    _write(buf.getvalue(), out or config.get("output_path"))
    return EXIT_OK


def cmd_simulate(config: dict, seed: int | None, out: str | None) -> int:
    params = _params(config)
    code = DeletionCode(params)
    layout = code.layout
    pattern = DeletionPattern(config["pattern"], layout.total_qubits)
    if len(pattern) > params.t:
        raise QDelSimError(
            f"pattern has {len(pattern)} deletions; the code handles at most t={params.t}"
        )
    master_seed = seed if seed is not None else config.get("master_seed", 0)
    tolerance = config.get("tolerance", 1e-9)
    sigma = logical_state(config["logical_state"], code.logical_qubits)
    received = delete_multi(code.enc(sigma), pattern)
    try:
        located, recovered = dec_with_trace(received, code.inner, code.t, master_seed)
    except QDelSimError as exc:
        print(f"decoding failed: {type(exc).__name__}: {exc}")
        return EXIT_FAIL
    dist = trace_distance(recovered, sigma)
    passed = dist < tolerance

    lines = [
        f"layout: N={layout.N} E={layout.E} t={layout.t} -> {layout.total_qubits} qubits",
        "blocks: " + " | ".join(
            f"{b}: data {layout.data_span(b)[0]}-{layout.data_span(b)[-1]}"
            + (f", o {layout.o_span(b)[0]}-{layout.o_span(b)[-1]}, l {layout.l_span(b)[0]}-{layout.l_span(b)[-1]}" if layout.t else "")
            for b in range(1, layout.N + 1)
        ),
        f"deleted positions: {list(pattern.positions)} ({received.num_qubits} qubits received)",
        "window outcomes s_b: " + " ".join(located.outcomes),
        "weights w_0..w_N: " + " ".join(map(str, located.weights)),
        f"flagged blocks i': {list(located.flagged_blocks)}",
        f"recovery trace distance: {dist:.3e} ({'pass' if passed else 'FAIL'})",
    ]
    print("\n".join(lines))
    record = {
        "logical_state": config["logical_state"],
        "pattern": list(pattern.positions),
        "outcomes": list(located.outcomes),
        "weights": list(located.weights),
        "flagged_blocks": list(located.flagged_blocks),
        "trace_distance": float(f"{dist:.3e}"),
        "passed": passed,
    }
    path = out or config.get("output_path")
    if path:
        Path(path).write_text(json.dumps(record, sort_keys=True) + "\n", encoding="utf-8")
    return EXIT_OK if passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdelsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("verify", "run the deletion-correction verification suite"),
        ("rates", "tabulate code rates along the N = 2^E - 1 family"),
        ("simulate", "trace a single deletion pattern through the decoder"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", help="JSON config file")
        p.add_argument("--seed", type=int, help="override master_seed")
        p.add_argument("--out", help="override output_path")
        if name == "verify":
            p.add_argument("--jobs", type=int, help="worker processes (default: $QDELSIM_JOBS or 1)")
        else:
            p.add_argument("--jobs", type=int, help=argparse.SUPPRESS)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING)
    try:
        config = load_config(args.config, args.command)
        if args.command == "verify":
            return cmd_verify(config, args.seed, args.out, args.jobs)
        if args.command == "rates":
            return cmd_rates(config, args.out)
        return cmd_simulate(config, args.seed, args.out)
    except (ConfigError, QDelSimError, ValueError, IndexError) as exc:
        print(f"qdelsim: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
