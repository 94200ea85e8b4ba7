"""Command-line front end: ``qstrcmp {compare,sweep,validate,report}``.

Exit status: 0 on a successful run (whatever the verdict), 2 on usage or
input errors, 1 when ``validate`` finds the backends disagree.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Optional

import numpy as np

from . import __version__
from .analysis import audit_claims, success_probability
from .joint import validate_backends
from .protocol import ComparisonInstance, Mode, combine_sub_oracles, compare
from .statevector import apply_diffusion, apply_phase_flip, measurement_distribution, uniform_state

JSON_DIGITS = 17
CSV_DIGITS = 12

COMPARE_FIELDS = (
    "a", "b", "N", "n", "k", "M", "marked", "ancilla_qubits", "mode", "seed",
    "measured", "verdict", "p_equal", "p_unequal", "distribution",
)
SWEEP_FIELDS = ("k", "p_marked", "p_outcome0")
REPORT_FIELDS = (
    "a", "b", "N", "n", "equal_strings", "M", "marked", "theta", "k",
    "p_equal_verdict", "p_false_equal", "p_false_unequal", "ancilla_qubits",
    "C1", "C2", "C3", "C4",
)
VALIDATE_FIELDS = (
    "N", "instances", "max_iterations", "max_deviation", "max_off_support_mass",
    "max_norm_drift", "passivity", "ok",
)


class UsageError(Exception):
    pass


def format_float(x: float, digits: int) -> str:
    s = format(float(x), f".{digits}g")
    if not any(c in s for c in ".eni"):
        s += ".0"
    return s


def to_json(obj, digits: int = JSON_DIGITS, indent: int = 2, _level: int = 0) -> str:
    """JSON text with floats printed at a fixed number of significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            raise ValueError(f"non-finite float {obj!r} is not serializable")
        return format_float(obj, digits)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, digits, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(to_json(v, digits, indent, _level + 1) for v in obj) + "]"
        items = [pad + to_json(v, digits, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format_float(v, CSV_DIGITS)
    if isinstance(v, (list, tuple)):
        return " ".join(_csv_cell(x) for x in v)
    return str(v)


def to_csv(rows: list[dict], fields) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for row in rows:
        w.writerow([_csv_cell(row.get(f)) for f in fields])
    return buf.getvalue()


def _instance(a: str, b: str, pad: Optional[str]) -> ComparisonInstance:
    try:
        return ComparisonInstance.from_strings(a, b, pad=pad)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _pairs(args) -> list[tuple[str, str]]:
    if args.file is not None:
        try:
            with open(args.file, encoding="utf-8") as fh:
                lines = [ln.rstrip("\r\n") for ln in fh if ln.strip()]
        except OSError as exc:
            raise UsageError(f"cannot read {args.file}: {exc.strerror}") from exc
        if len(lines) % 2:
            raise UsageError(f"{args.file}: expected an even number of lines (pattern, subject pairs)")
        return list(zip(lines[0::2], lines[1::2]))
    if args.a is None or args.b is None:
        raise UsageError("both --a and --b are required (or --file)")
    return [(args.a, args.b)]


def _check_k(k: Optional[int]):
    if k is not None and k < 0:
        raise UsageError(f"--iterations must be >= 0, got {k}")


def compare_record(a: str, b: str, args) -> dict:
    inst = _instance(a, b, args.pad)
    _check_k(args.iterations)
    tr = compare(inst, k=args.iterations, mode=args.mode, seed=args.seed)
    return {
        "a": a,
        "b": b,
        "N": inst.N,
        "n": inst.n,
        "k": tr.iterations,
        "M": len(tr.oracle.marked),
        "marked": list(tr.oracle.marked.members),
        "ancilla_qubits": (inst.N - 1) * inst.n,
        "mode": tr.mode.value,
        "seed": tr.seed,
        "measured": tr.measured,
        "verdict": tr.verdict.value,
        "p_equal": tr.p_equal,
        "p_unequal": tr.p_unequal,
        "distribution": [float(p) for p in tr.final_distribution],
    }


def sweep_rows(inst: ComparisonInstance, K: int) -> list[dict]:
    marked = combine_sub_oracles(inst).marked
    idx = list(marked.members)
    state = uniform_state(inst.cfg)
    rows = []
    for k in range(K + 1):
        dist = measurement_distribution(state)
        rows.append({"k": k, "p_marked": float(np.sum(dist[idx])), "p_outcome0": float(dist[0])})
        state = apply_diffusion(apply_phase_flip(state, marked))
    return rows


def report_record(a: str, b: str, args) -> dict:
    inst = _instance(a, b, args.pad)
    _check_k(args.iterations)
    rep = audit_claims(inst, args.iterations)
    rec = {
        "a": a,
        "b": b,
        "N": rep.N,
        "n": rep.n,
        "equal_strings": rep.equal_strings,
        "M": rep.marked_count,
        "marked": list(rep.marked),
        "theta": rep.theta,
        "k": rep.k_used,
        "p_equal_verdict": rep.p_equal_verdict,
        "p_false_equal": rep.p_false_equal,
        "p_false_unequal": rep.p_false_unequal,
        "ancilla_qubits": rep.ancilla_qubits,
    }
    rec["claim_flags"] = {
        name: {
            "description": f.description,
            "applicable": f.applicable,
            "passed": f.passed,
            "measured": f.measured,
            "threshold": f.threshold,
        }
        for name, f in rep.claim_flags.items()
    }
    return rec


def _flat_report(rec: dict) -> dict:
    flat = {k: v for k, v in rec.items() if k != "claim_flags"}
    for name, f in rec["claim_flags"].items():
        flat[name] = "n/a" if f["passed"] is None else ("pass" if f["passed"] else "fail")
    return flat


def cmd_compare(args) -> tuple[str, int]:
    recs = [compare_record(a, b, args) for a, b in _pairs(args)]
    if args.format == "csv":
        return to_csv(recs, COMPARE_FIELDS), 0
    return to_json(recs if args.file else recs[0]) + "\n", 0


def cmd_sweep(args) -> tuple[str, int]:
    (a, b), = _pairs(args)
    inst = _instance(a, b, args.pad)
    K = args.max_iterations
    if K is None:
        K = math.ceil(2 * math.sqrt(inst.N))
    if not 0 <= K <= 10 * math.sqrt(inst.N):
        raise UsageError(f"--max-iterations must be in [0, 10*sqrt(N)] = [0, {10 * math.sqrt(inst.N):g}], got {K}")
    rows = sweep_rows(inst, K)
    if args.format == "csv":
        return to_csv(rows, SWEEP_FIELDS), 0
    M = len(combine_sub_oracles(inst).marked)
    out = {
        "a": a,
        "b": b,
        "N": inst.N,
        "M": M,
        "rows": rows,
        "closed_form_p_marked": [success_probability(inst.N, M, r["k"]) for r in rows],
    }
    return to_json(out) + "\n", 0


def cmd_validate(args) -> tuple[str, int]:
    if args.n not in (2, 4):
        raise UsageError(f"--n must be 2 or 4 (joint simulation cap), got {args.n}")
    rep = validate_backends(args.n)
    rec = {
        "N": rep.N,
        "instances": rep.instances,
        "max_iterations": rep.max_iterations,
        "max_deviation": rep.max_deviation,
        "max_off_support_mass": rep.max_off_support_mass,
        "max_norm_drift": rep.max_norm_drift,
        "passivity": rep.passivity,
        "ok": rep.ok,
    }
    text = to_csv([rec], VALIDATE_FIELDS) if args.format == "csv" else to_json(rec) + "\n"
    return text, 0 if rep.ok else 1


def cmd_report(args) -> tuple[str, int]:
    recs = [report_record(a, b, args) for a, b in _pairs(args)]
    if args.format == "csv":
        return to_csv([_flat_report(r) for r in recs], REPORT_FIELDS), 0
    return to_json(recs if args.file else recs[0]) + "\n", 0


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must be a 64-bit unsigned integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qstrcmp", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")

    strings = argparse.ArgumentParser(add_help=False)
    strings.add_argument("--a", help="pattern string")
    strings.add_argument("--b", help="subject string")
    strings.add_argument("--pad", help="pad symbol; also allows unequal lengths")
    strings.add_argument("--file", help="batch input: alternating pattern/subject lines")

    run = argparse.ArgumentParser(add_help=False)
    run.add_argument("--iterations", "-k", type=int, help="Grover iterations (default floor(pi/4*sqrt(N)))")

    c = sub.add_parser("compare", parents=[common, strings, run], help="run the comparison protocol")
    c.add_argument("--mode", choices=[m.value for m in Mode], default="exact")
    c.add_argument("--seed", type=_seed, default=0)
    c.set_defaults(func=cmd_compare)

    s = sub.add_parser("sweep", parents=[common, strings], help="marked mass and P(0) for k = 0..K")
    s.add_argument("--max-iterations", type=int, help="K (default ceil(2*sqrt(N)))")
    s.set_defaults(func=cmd_sweep)

    v = sub.add_parser("validate", parents=[common], help="reduced vs full joint backend")
    v.add_argument("--n", type=int, required=True, help="string length N (2 or 4)")
    v.set_defaults(func=cmd_validate)

    r = sub.add_parser("report", parents=[common, strings, run], help="audit the correctness claims")
    r.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "sweep" and args.file is not None:
        parser.exit(2, "qstrcmp sweep: error: --file is not supported for sweep\n")
    try:
        text, status = args.func(args)
    except UsageError as exc:
        parser.exit(2, f"qstrcmp {args.command}: error: {exc}\n")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
