"""Command-line front end.

Usage:
    mqmi compute --state ggz:n=3,p=0.5 --measure M --k 1
    mqmi compute --state dense@ghz.json --measure gcmi --blocks "1;2" --cond 3
    mqmi table --builtin-table1 --p 0.5 --format csv
    mqmi regions --state ggz:n=3
    mqmi verify --n 3 --samples 100 --seed 7
    mqmi scan --n 4 --samples 200
    mqmi deviate --state ggz:n=2 --channel depolarize:party=1,p=1 --measure M --k 1

Parties are numbered from 1 on the command line and in JSON output.
Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from . import channels, measures
from .errors import DimensionError, MQMIError, PartitionError
from .measures import MeasureSpec
from .qmatrix import DEFAULT_TOL, MultipartiteState, matrix_to_pairs
from .states import StateSpec, build, reference_table_specs
from .verify import SuiteConfig, run_property_suite, scan_conjectures

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DIMENSION = 3

NOT_APPLICABLE = "×"
LIST_KEYS = {"dims", "levels"}


class UsageError(MQMIError):
    pass


# ---------------------------------------------------------------------------
# parsing helpers


def _scalar(text: str):
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def parse_state(text: str) -> StateSpec:
    """Parse ``kind:key=val,...``, ``dense@file.json`` or ``@file.json``.

    List values use ``x`` as separator (``dims=2x2x2``). A file may hold a
    full state spec or a bare ``{"dims": ..., "matrix": ...}`` object.
    """
    if "@" in text:
        kind, path = text.split("@", 1)
        data = _load_json(path)
        if isinstance(data, dict) and "kind" in data:
            return StateSpec.from_dict(data)
        if kind not in ("", "dense") or not isinstance(data, dict):
            raise UsageError(f"cannot read a {kind or 'state'} from {path}")
        return StateSpec("dense", {"dims": data.get("dims"), "matrix": data.get("matrix")})
    kind, _, rest = text.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"expected key=value in state spec, got {item!r}")
        key = key.strip()
        if key in LIST_KEYS:
            params[key] = [_scalar(v) for v in value.split("x")]
        else:
            params[key] = _scalar(value.strip())
    return StateSpec(kind.strip(), params)


def parse_blocks(text: str | None):
    """``"1,2;3"`` -> ((0, 1), (2,)); None stays None (one block per party)."""
    if text is None:
        return None
    try:
        return tuple(
            tuple(int(x) - 1 for x in block.split(",")) for block in text.split(";") if block.strip()
        )
    except ValueError as exc:
        raise UsageError(f"bad block list {text!r}") from exc


def parse_parties(text: str | None) -> tuple[int, ...]:
    if not text:
        return ()
    try:
        return tuple(int(x) - 1 for x in text.replace(";", ",").split(","))
    except ValueError as exc:
        raise UsageError(f"bad party list {text!r}") from exc


def parse_channel(text: str, state: MultipartiteState) -> channels.KrausChannel:
    """``depolarize:party=1,p=0.5``, ``random:party=1,rank=2,seed=3`` or ``@file.json``."""
    if text.startswith("@"):
        return channels.KrausChannel.from_json(_load_json(text[1:]))
    kind, _, rest = text.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"expected key=value in channel spec, got {item!r}")
        params[key.strip()] = _scalar(value.strip())
    target = int(params.get("party", 1)) - 1
    if not 0 <= target < state.n:
        raise PartitionError(f"party {target + 1} outside 1..{state.n}")
    d = state.dims[target]
    if kind == "depolarize":
        return channels.depolarizing(d, float(params.get("p", 1.0)), target)
    if kind == "random":
        return channels.random_local_channel(
            d, int(params.get("rank", 2)), int(params.get("seed", 0)), target
        )
    raise UsageError(f"unknown channel kind {kind!r}; expected depolarize, random or @file.json")


def check_parties(spec: MeasureSpec, n: int) -> MeasureSpec:
    """Range-check parties here so errors quote the 1-based numbers the user typed."""
    used = [p for b in spec.parts or () for p in b] + list(spec.cond)
    bad = sorted({p + 1 for p in used if not 0 <= p < n})
    if bad:
        raise PartitionError(f"parties {bad} outside 1..{n}")
    return spec


def measure_spec(args) -> MeasureSpec:
    weights = None
    if args.weights:
        try:
            weights = tuple(float(w) for w in args.weights.split(","))
        except ValueError as exc:
            raise UsageError(f"bad weights {args.weights!r}") from exc
    return MeasureSpec(
        args.measure,
        parse_blocks(args.blocks),
        args.k,
        weights,
        parse_parties(args.cond),
    )


# ---------------------------------------------------------------------------
# output helpers


def clean(x: float, digits: int = 12) -> float:
    """Round away float noise so -1e-16 and -0.0 print as 0."""
    y = round(float(x), digits)
    return 0.0 if y == 0 else y


def fmt(x: float) -> str:
    return f"{clean(x, 9):.6g}"


def one_based(parties) -> list[int]:
    return [p + 1 for p in parties]


def dense_spec(state: MultipartiteState) -> dict:
    return StateSpec("dense", {"dims": list(state.dims), "matrix": matrix_to_pairs(state.matrix)}).to_dict()


def write_csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# ---------------------------------------------------------------------------
# commands


def cmd_compute(args) -> int:
    spec = parse_state(args.state)
    state = build(spec)
    report = measures.measure_report(state, check_parties(measure_spec(args), state.n), args.tol)
    subset = lambda s: "S(" + ",".join(str(p) for p in one_based(s)) + ")"  # noqa: E731
    if args.format == "json":
        out = {
            "measure": report.name,
            "value": report.value,
            "parts": [one_based(b) for b in report.parts],
            "cond": one_based(report.cond),
            "terms": [
                {"coefficient": c, "subset": one_based(s), "entropy": e} for c, s, e in report.terms
            ],
            "state": dense_spec(state) if args.emit_state else spec.to_dict(),
        }
        emit(json.dumps(out, indent=2, sort_keys=True))
    elif args.format == "csv":
        rows = [("quantity", "coefficient", "value"), (report.name, "", fmt(report.value))]
        rows += [(subset(s), f"{c:g}", fmt(e)) for c, s, e in report.terms]
        emit(write_csv(rows))
    else:
        lines = [f"{report.name} = {fmt(report.value)}"]
        lines += [f"  {c:+g} * {subset(s)} = {fmt(e)}" for c, s, e in report.terms]
        emit("\n".join(lines))
    return EXIT_OK


def table_rows(named: list[tuple[str, MultipartiteState]], tol: float):
    width = max([4] + [state.n - 1 for _, state in named])
    header = ["state"] + [f"M{k}" for k in range(1, width + 1)] + ["C"]
    rows = []
    for label, state in named:
        profile = measures.mqmi_profile(state, tol=tol)
        cells = [profile[k - 1] if k <= state.n else None for k in range(1, width + 1)]
        rows.append([label] + cells + [measures.common_information(state, tol=tol)])
    return header, rows


def cmd_table(args) -> int:
    if args.builtin_table1:
        named = [(label, build(spec)) for label, spec in reference_table_specs(args.p, args.phi)]
    elif args.state:
        named = [(text, build(parse_state(text))) for text in args.state]
    else:
        raise UsageError("table needs --builtin-table1 or at least one --state")
    header, rows = table_rows(named, args.tol)
    if args.format == "json":
        out = [
            {h: (None if v is None else clean(v) if isinstance(v, float) else v) for h, v in zip(header, row)}
            for row in rows
        ]
        emit(json.dumps(out, indent=2))
        return EXIT_OK
    cells = [[row[0]] + [NOT_APPLICABLE if v is None else fmt(v) for v in row[1:]] for row in rows]
    if args.format == "csv":
        emit(write_csv([header] + cells))
    else:
        lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
        lines += ["| " + " | ".join(r) + " |" for r in cells]
        emit("\n".join(lines))
    return EXIT_OK


def cmd_regions(args) -> int:
    state = build(parse_state(args.state))
    blocks = parse_blocks(args.blocks)
    check_parties(MeasureSpec("T", blocks), state.n)
    r = measures.tripartite_regions(state, blocks, args.tol)
    values = dict(r.regions(), T3=r.T3, S3=r.S3)
    if args.format == "json":
        emit(json.dumps({k: clean(v) for k, v in values.items()}, indent=2))
    elif args.format == "csv":
        emit(write_csv([list(values), [fmt(v) for v in values.values()]]))
    else:
        emit("\n".join(f"{k} = {fmt(v)}" for k, v in values.items()))
    return EXIT_OK


def _suite_config(args) -> SuiteConfig:
    props = tuple(args.properties.split(",")) if args.properties else None
    return SuiteConfig(
        n=args.n,
        d=args.d,
        samples=args.samples,
        seed=args.seed,
        tol=args.check_tol,
        properties=props,
        ensemble=args.ensemble,
    )


def cmd_verify(args) -> int:
    report = run_property_suite(_suite_config(args))
    emit(report.to_json() if args.format == "json" else report.to_text())
    if report.total_failures:
        print(f"{report.total_failures} property failures", file=sys.stderr)
        return 1
    return EXIT_OK


def cmd_scan(args) -> int:
    report = scan_conjectures(_suite_config(args))
    emit(report.to_json() if args.format == "json" else report.to_text())
    return EXIT_OK


def cmd_deviate(args) -> int:
    state = build(parse_state(args.state))
    channel = parse_channel(args.channel, state)
    spec = check_parties(measure_spec(args), state.n)
    after = channels.apply_local(channel, state)
    before_value = measures.evaluate(state, spec, args.tol)
    after_value = measures.evaluate(after, spec, args.tol)
    delta = abs(after_value - before_value)
    if args.format == "json":
        out = {"measure": spec.label(), "before": before_value, "after": after_value, "deviation": delta}
        if args.emit_state:
            out["state"] = dense_spec(after)
        emit(json.dumps(out, indent=2, sort_keys=True))
    elif args.format == "csv":
        emit(write_csv([("measure", "before", "after", "deviation"),
                        (spec.label(), fmt(before_value), fmt(after_value), fmt(delta))]))
    else:
        emit(fmt(delta))
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parser


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--tol", type=float, default=default(None), help="numerical tolerance")
    parser.add_argument("--seed", type=int, default=default(0), help="base random seed")
    parser.add_argument(
        "--format", choices=("json", "csv", "text"), default=default("text"), help="output format"
    )


def _measure_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--measure", choices=measures.MEASURE_IDS, default="M")
    parser.add_argument("--k", type=int, help="k for measure M")
    parser.add_argument("--blocks", "--parts", dest="blocks", help='blocks, e.g. "1,2;3"')
    parser.add_argument("--cond", help="conditioning parties, e.g. 3 or 3,4")
    parser.add_argument("--weights", help="convex weights for Mcomb, e.g. 0.5,0.5,0")


def _suite_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, default=3, help="number of parties")
    parser.add_argument("--d", type=int, default=2, help="local dimension")
    parser.add_argument("--samples", type=int, default=100)
    parser.add_argument("--properties", help="comma-separated subset of checks")
    parser.add_argument("--ensemble", choices=("pure", "mixed", "mix"))
    parser.add_argument("--check-tol", type=float, help="override every check tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mqmi", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", parents=[common], help="evaluate one measure on one state")
    p.add_argument("--state", required=True)
    _measure_flags(p)
    p.add_argument("--emit-state", action="store_true", help="include the dense state in JSON output")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("table", parents=[common], help="M_k profile and C for a list of states")
    p.add_argument("--builtin-table1", action="store_true", help="the reference table of named states")
    p.add_argument("--p", type=float, default=0.5, help="gGHZ weight")
    p.add_argument("--phi", type=float, default=0.0, help="gGHZ phase")
    p.add_argument("--state", action="append", help="state spec (repeatable)")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("regions", parents=[common], help="Venn regions of three blocks")
    p.add_argument("--state", required=True)
    p.add_argument("--blocks", "--parts", dest="blocks")
    p.set_defaults(func=cmd_regions)

    p = sub.add_parser("verify", parents=[common], help="run the property suite")
    _suite_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", parents=[common], help="scan the open conjectures")
    _suite_flags(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("deviate", parents=[common], help="|Q(channel(rho)) - Q(rho)|")
    p.add_argument("--state", required=True)
    p.add_argument("--channel", required=True)
    _measure_flags(p)
    p.add_argument("--emit-state", action="store_true", help="include the output state in JSON output")
    p.set_defaults(func=cmd_deviate)
    return parser


def default_tol() -> float:
    raw = os.environ.get("MQMI_DEFAULT_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        value = float(raw)
    except ValueError:
        raise UsageError(f"MQMI_DEFAULT_TOL must be a number, got {raw!r}") from None
    if value <= 0:
        raise UsageError("MQMI_DEFAULT_TOL must be positive")
    return value


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.tol is None:
            args.tol = default_tol()
        if args.tol <= 0:
            raise UsageError("--tol must be positive")
        return args.func(args)
    except (DimensionError, PartitionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except (MQMIError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
