"""Command-line interface: ``rlsc compile | analyze | verify | bench``.

Exit codes: 0 success, 2 input error, 3 resource cap, 4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
import warnings

from . import families
from .errors import InputError, RlscError, StageError
from .frontend import DEFAULT_STATE_CAP
from .mps import TAU
from .pipeline import VERIFY_MAX_N, CompileConfig, run_pipeline, verify_result
from .synth.circuit import dumps_json, to_qasm
from .synth.decompose import MAX_QUBITS

EMIT_CHOICES = ("qasm", "json", "report", "mps")
CSV_HEADER = ("family", "N", "k_or_s", "backend", "depth", "gates", "cnots", "chi", "compile_ms")


def _add_input(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--regex", metavar="STR", help="regular expression over {0,1}")
    src.add_argument("--strings", metavar="PATH", help="file with one word per line")
    src.add_argument("--dfa", metavar="PATH", help="DFA description in JSON")
    p.add_argument("-n", "--length", type=int, help="word length N (inferred for --strings)")
    p.add_argument("--complement", action="store_true", help="prepare the complement language")
    p.add_argument("--backend", choices=("seq", "tree"), default="seq")
    p.add_argument("--state-cap", type=int, default=DEFAULT_STATE_CAP, help="subset-construction state cap")
    p.add_argument("--tol", type=float, default=TAU, help="relative singular-value cut")
    p.add_argument("--no-minimize", action="store_true", help="skip automaton minimisation")
    p.add_argument("-o", "--out-dir", default=".", metavar="DIR")


def _emit_list(text):
    items = tuple(x.strip() for x in text.split(",") if x.strip())
    bad = [x for x in items if x not in EMIT_CHOICES]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown artifact(s) {bad}; choose from {EMIT_CHOICES}")
    return items


def build_parser():
    parser = argparse.ArgumentParser(prog="rlsc", description="Compile regular-language states to circuits.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile to a gate-level circuit")
    _add_input(p)
    p.add_argument("--emit", type=_emit_list, default=("qasm", "report"), help="comma list of qasm,json,report,mps")
    p.add_argument("--verify", action="store_true", help=f"simulate and check fidelity (N <= {VERIFY_MAX_N})")

    p = sub.add_parser("analyze", help="report automaton and Schmidt structure without synthesis")
    _add_input(p)
    p.add_argument("--emit-dfa", action="store_true", help="also write the minimised DAG-DFA as JSON")

    p = sub.add_parser("verify", help="compile and check the circuit against the enumeration oracle")
    _add_input(p)

    p = sub.add_parser("bench", help="sweep a state family and write CSV rows")
    p.add_argument("family", choices=("dicke", "w", "ghz", "complement", "random"))
    p.add_argument("--n", type=int, nargs="+", required=True, metavar="N")
    p.add_argument("--k", type=int, nargs="+", default=[3], help="Dicke weight (dicke, complement)")
    p.add_argument("--s", type=int, nargs="+", default=[8], help="set sizes (random)")
    p.add_argument("--backend", nargs="+", choices=("seq", "tree"), default=["seq"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-block", type=int, default=MAX_QUBITS, help="largest block (qubits) to decompose")
    p.add_argument("--csv", default="-", help="output file (default stdout)")
    return parser


def _config(args, **extra):
    if args.regex is not None:
        kind, source = "regex", args.regex
    elif args.strings is not None:
        kind, source = "strings", args.strings
    else:
        kind, source = "dfa", args.dfa
    return CompileConfig(
        kind=kind,
        source=source,
        n=args.length,
        complement=args.complement,
        backend=args.backend,
        state_cap=args.state_cap,
        tol=args.tol,
        out_dir=args.out_dir,
        minimize=not args.no_minimize,
        **extra,
    )


def _write(out_dir, name, text):
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return path


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def cmd_compile(args):
    cfg = _config(args, emit=args.emit, verify=args.verify)
    result = run_pipeline(cfg)
    written = []
    if "qasm" in cfg.emit:
        written.append(_write(cfg.out_dir, "circuit.qasm", to_qasm(result.circuit)))
    if "json" in cfg.emit:
        written.append(_write(cfg.out_dir, "circuit.json", dumps_json(result.circuit) + "\n"))
    if "mps" in cfg.emit:
        written.append(_write(cfg.out_dir, "mps.json", _dump(result.canonical.to_json())))
    if "report" in cfg.emit:
        written.append(_write(cfg.out_dir, "report.json", _dump(result.report())))
    r = result.resources
    print(f"N={result.n} chi={result.chi} qubits={result.circuit.n_qubits} depth={r.depth} "
          f"gates={r.gates_total} cnots={r.cnots} ancillae={r.ancillae}")
    if result.fidelity is not None:
        print(f"fidelity={result.fidelity:.15f} words={result.words_total}")
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_analyze(args):
    cfg = _config(args)
    result = run_pipeline(cfg, synthesize_circuit=False)
    report = result.report()
    print(_dump(report), end="")
    if args.emit_dfa:
        print(f"wrote {_write(cfg.out_dir, 'dfa.json', _dump(result.dag.to_json()))}")
    return 0


def cmd_verify(args):
    cfg = _config(args)
    if cfg.n is not None and cfg.n > VERIFY_MAX_N:
        raise InputError(f"verification is limited to N <= {VERIFY_MAX_N}")
    result = run_pipeline(cfg)
    fid = verify_result(result)
    print(f"fidelity={fid:.15f} words={result.words_total} (oracle agrees)")
    return 0


def _bench_config(family, n, param, backend, seed):
    if family == "dicke":
        return CompileConfig("words", families.dicke_words(n, param), n, backend=backend)
    if family == "w":
        return CompileConfig("regex", families.W_REGEX, n, backend=backend)
    if family == "ghz":
        return CompileConfig("regex", families.GHZ_REGEX, n, backend=backend)
    if family == "complement":
        return CompileConfig("regex", families.dicke_regex(param), n, complement=True, backend=backend)
    return CompileConfig("words", families.random_words(n, param, seed), n, backend=backend)


def bench_row(family, n, param, backend, seed=0, max_block=MAX_QUBITS):
    """One CSV row; failures become rows with error markers."""
    start = time.perf_counter()
    try:
        cfg = _bench_config(family, n, param, backend, seed)
        result = run_pipeline(cfg, synthesize_circuit=False)
        widest = max(b.width for b in result.skeleton.blocks)
        if widest > max_block:
            ms = 1000 * (time.perf_counter() - start)
            est = result.skeleton.estimated_cnots()
            return [family, n, param, backend, "na", "na", f"~{est}", result.chi, f"{ms:.1f}"]
        result = run_pipeline(cfg)
        ms = 1000 * (time.perf_counter() - start)
        if n <= VERIFY_MAX_N:
            verify_result(result)
        r = result.resources
        return [family, n, param, backend, r.depth, r.gates_total, r.cnots, result.chi, f"{ms:.1f}"]
    except RlscError as exc:
        tag = f"error:{type(getattr(exc, 'cause', exc)).__name__}"
        return [family, n, param, backend, tag, tag, tag, tag, "na"]


def cmd_bench(args):
    params = args.s if args.family == "random" else args.k
    if args.family in ("w", "ghz"):
        params = [1 if args.family == "w" else 0]
    out = sys.stdout if args.csv == "-" else open(args.csv, "w", newline="", encoding="utf-8")
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for n in args.n:
            for param in params:
                for backend in args.backend:
                    writer.writerow(bench_row(args.family, n, param, backend, args.seed, args.max_block))
                    out.flush()
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


COMMANDS = {"compile": cmd_compile, "analyze": cmd_analyze, "verify": cmd_verify, "bench": cmd_bench}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return COMMANDS[args.command](args)
    except RlscError as exc:
        print(f"rlsc: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"rlsc: error: {exc}", file=sys.stderr)
        return InputError.exit_code


if __name__ == "__main__":
    sys.exit(main())
