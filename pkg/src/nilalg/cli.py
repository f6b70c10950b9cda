"""Command-line interface.

Exit codes: 0 completed or PASS, 1 check FAIL, 2 input error, 3 resource cap.
Structured output is one JSON document; wall times live under its "timing"
key so that everything else is identical across runs and worker counts.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from typing import Any

from . import algebra as alg
from . import freenil
from . import polymap as pm
from .formats import InputError, algebra_to_dict, dumps, load_algebra, load_map, map_to_dict

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3
WORKERS_ENV = "NILALG_WORKERS"


@dataclass
class RunConfig:
    command: str
    fmt: str = "text"
    out: str | None = None
    timing: bool = True
    workers: int = 1
    max_trees: int = freenil.DEFAULT_MAX_TREES
    prescreen: bool = True

    def __post_init__(self):
        if self.workers < 1:
            raise InputError("--workers must be >= 1")
        if self.max_trees < 1:
            raise InputError("--max-trees must be >= 1")


# -- report documents ----------------------------------------------------------


def _strip_times(report: dict, path: str, timing: dict) -> dict:
    report = dict(report)
    timing[path] = report.pop("wall_time")
    if "subchecks" in report:
        report["subchecks"] = [_strip_times(s, f"{path}.subchecks[{i}]", timing)
                               for i, s in enumerate(report["subchecks"])]
    return report


def report_document(report: freenil.CheckReport | freenil.ClaimReport) -> dict:
    """Structured form of a theorem report with wall times moved to ``timing``."""
    timing: dict[str, float] = {}
    body = _strip_times(report.to_dict(), "report", timing)
    kind = "claim" if isinstance(report, freenil.ClaimReport) else "check"
    return {"command": "verify-theorem", "kind": kind, "report": body, "timing": timing}


def parse_report_document(doc: dict) -> freenil.CheckReport | freenil.ClaimReport:
    """Inverse of :func:`report_document` (wall times restored when present)."""
    timing = doc.get("timing", {})

    def restore(r: dict, path: str) -> dict:
        r = dict(r)
        r["wall_time"] = timing.get(path, 0.0)
        if "subchecks" in r:
            r["subchecks"] = [restore(s, f"{path}.subchecks[{i}]") for i, s in enumerate(r["subchecks"])]
        return r

    body = restore(doc["report"], "report")
    if doc["kind"] == "claim":
        return freenil.ClaimReport.from_dict(body)
    return freenil.CheckReport.from_dict(body)


def _emit(config: RunConfig, doc: dict, text: str) -> None:
    if not config.timing:
        doc = {k: v for k, v in doc.items() if k != "timing"}
    payload = dumps(doc) if config.fmt == "json" else text.rstrip("\n") + "\n"
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


# -- commands ------------------------------------------------------------------


def cmd_check(config: RunConfig, algebra: str, engel_max: int, yagzhev_max: int, gerst_max: int) -> int:
    for flag, v in (("--engel-max", engel_max), ("--yagzhev-max", yagzhev_max), ("--gerst-max", gerst_max)):
        if v < 1:
            raise InputError(f"{flag} must be >= 1")
    A = load_algebra(algebra)
    e = alg.engel_index(A, engel_max)
    y = alg.yagzhev_index(A, max(yagzhev_max, 2))
    g = alg.gerstenhaber_index(A, gerst_max)
    doc: dict[str, Any] = {
        "command": "check",
        "algebra": algebra_to_dict(A),
        "bounds": {"engel": engel_max, "yagzhev": yagzhev_max, "gerstenhaber": gerst_max},
        "engel": e.index,
        "yagzhev": y.index,
        "gerstenhaber": g.index,
        "witnesses": {k: r.witness for k, r in (("engel", e), ("yagzhev", y), ("gerstenhaber", g))
                      if not r.found},
    }
    if y.found:
        bound = alg.theorem_bound(A.arity, y.index)
        doc["theorem_bound"] = bound
        if e.found:
            doc["engel_within_bound"] = e.index <= bound
        else:
            # unknown when the Engel search stopped short of the bound
            doc["engel_within_bound"] = False if engel_max >= bound else None
    lines = [f"algebra {A.name or algebra}: arity {A.arity}, dim {A.dim}"]
    for key in ("engel", "yagzhev", "gerstenhaber"):
        value = doc[key]
        lines.append(f"{key:13s} {value if value is not None else 'not found up to ' + str(doc['bounds'][key])}")
    for key, w in doc["witnesses"].items():
        lines.append(f"  {key} witness: {w}")
    if "theorem_bound" in doc:
        lines.append(f"theorem bound {doc['theorem_bound']}, engel within bound: {doc['engel_within_bound']}")
    _emit(config, doc, "\n".join(lines))
    return EXIT_OK


def _source_map(map_path: str | None, algebra: str | None) -> tuple[pm.PolyMap, str]:
    if (map_path is None) == (algebra is None):
        raise InputError("give exactly one of --map or --algebra")
    if map_path is not None:
        return load_map(map_path), map_path
    A = load_algebra(algebra)
    return pm.identity_map(A.dim) - pm.depolarize(A), algebra


def cmd_invert(config: RunConfig, map_path: str | None, algebra: str | None, degree: int | None,
               p_max: int, inverse_out: str | None, verify_degree: int | None = None) -> int:
    F, source = _source_map(map_path, algebra)
    try:
        H, d = pm.split_identity(F)
    except ValueError as exc:
        raise InputError(f"{source}: {exc}") from None
    note = "user supplied"
    if degree is None:
        if d is None:
            degree, note = 1, "H = 0"
        else:
            y = alg.yagzhev_index(pm.polarize(H), p_max)
            if not y.found:
                raise InputError(f"no Yagzhev index up to {p_max}; pass --degree explicitly")
            degree = d * alg.yagzhev_window(d, y.index)[1]
            note = f"d * window top for Yagzhev index {y.index}"
    if degree < 1:
        raise InputError("--degree must be >= 1")
    if verify_degree is None:
        verify_degree = degree
    elif verify_degree < 1:
        raise InputError("--verify-degree must be >= 1")
    G = pm.formal_inverse(F, degree)
    check = pm.verify_automorphism(F, G, verify_degree)
    if inverse_out:
        with open(inverse_out, "w") as fh:
            fh.write(dumps(map_to_dict(G)))
    doc = {
        "command": "invert",
        "source": source,
        "degree": degree,
        "degree_rule": note,
        "verify_degree": verify_degree,
        "inverse": map_to_dict(G),
        "verification": {"status": check.status, "residual_fg": check.residual_fg,
                         "residual_gf": check.residual_gf},
    }
    text = "\n".join([f"F = {F}", f"G = {G}", f"degree bound {degree} ({note})",
                      f"verification at degree {verify_degree}: {check.status}",
                      f"  F o G - Id = ({', '.join(check.residual_fg)})",
                      f"  G o F - Id = ({', '.join(check.residual_gf)})"])
    _emit(config, doc, text)
    return EXIT_OK if check.ok else EXIT_FAIL


def _verdict_exit(verdict: str) -> int:
    return {"PASS": EXIT_OK, "NOT_ATTEMPTED": EXIT_CAP}.get(verdict, EXIT_FAIL)


def _check_lines(r: freenil.CheckReport, indent: str = "") -> list[str]:
    head = f"{indent}{r.check}: {r.verdict}  d={r.d} J={r.J} degree={r.degree}"
    if r.p is not None:
        head += f" p={r.p}"
    if r.n is not None:
        head += f" n={r.n}"
    lines = [head, f"{indent}  component {r.space_dim} trees, reduced {r.reduced_dim}, ideal rank {r.ideal_rank}"]
    if r.certificate_digest:
        lines.append(f"{indent}  certificate {r.certificate_digest}")
    if "reason" in r.details:
        lines.append(f"{indent}  not attempted: {r.details['reason']}")
    if "minimality_probe" in r.details:
        mp = r.details["minimality_probe"]
        lines.append(f"{indent}  (informational) n={mp['n']} at degree {mp['degree']}: {mp['verdict']}")
    return lines


def cmd_verify_theorem(config: RunConfig, d: int | None, p: int | None, binary_claim: bool,
                       probe: bool) -> int:
    freenil.USE_PRESCREEN = config.prescreen
    if binary_claim:
        if d is not None or p is not None:
            raise InputError("--binary-claim takes no -d/-p")
        report = freenil.verify_binary_claim(config.max_trees, config.workers)
        lines = [f"binary claim: {report.verdict}"]
        for name, info in report.details.items():
            lines.append(f"  {name}: {info['verdict']} ({info['checks']} checks)")
    else:
        if d is None or p is None:
            raise InputError("give -d and -p, or --binary-claim")
        if d < 2 or p < 2:
            raise InputError("need d >= 2 and p >= 2")
        report = freenil.verify_main_theorem(d, p, config.max_trees, probe=probe)
        lines = _check_lines(report)
    _emit(config, report_document(report), "\n".join(lines))
    return _verdict_exit(report.verdict)


def cmd_jacobian(config: RunConfig, map_path: str | None, algebra: str | None) -> int:
    F, source = _source_map(map_path, algebra)
    J = pm.jacobian(F)
    det = pm.jacobian_det(F)
    doc = {"command": "jacobian", "source": source, "map": map_to_dict(F),
           "jacobian": [[str(e) for e in row] for row in J], "det": str(det)}
    width = max(len(str(e)) for row in J for e in row)
    lines = [f"F = {F}", "J_F ="]
    lines += ["  [" + "  ".join(str(e).rjust(width) for e in row) + "]" for row in J]
    lines.append(f"det J_F = {det}")
    _emit(config, doc, "\n".join(lines))
    return EXIT_OK


# -- argument parsing ----------------------------------------------------------


def _default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text", dest="fmt")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--no-timing", action="store_true", help="omit wall times from json output")
    common.add_argument("--workers", type=int, default=_default_workers(),
                        help=f"worker processes (default from ${WORKERS_ENV}, else 1)")

    parser = argparse.ArgumentParser(prog="nilalg", description="Nilpotence checks for symmetric multilinear algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="compute Engel, Yagzhev and Gerstenhaber indices")
    p.add_argument("--algebra", required=True, help="JSON file or builtin:NAME")
    p.add_argument("--engel-max", type=int, default=8)
    p.add_argument("--yagzhev-max", type=int, default=8)
    p.add_argument("--gerst-max", type=int, default=6)

    p = sub.add_parser("invert", parents=[common], help="truncated formal inverse of F = Id - H")
    p.add_argument("--map", dest="map_path")
    p.add_argument("--algebra")
    p.add_argument("-D", "--degree", type=int)
    p.add_argument("--p-max", type=int, default=8, help="search bound used to pick the default degree")
    p.add_argument("--verify-degree", type=int, help="check compositions up to this degree (default: --degree)")
    p.add_argument("--inverse-out", help="write the inverse map file here")

    p = sub.add_parser("verify-theorem", parents=[common], help="certify Yagzhev nil => Engel in the free algebra")
    p.add_argument("-d", type=int)
    p.add_argument("-p", type=int)
    p.add_argument("--binary-claim", action="store_true")
    p.add_argument("--max-trees", type=int, default=freenil.DEFAULT_MAX_TREES)
    p.add_argument("--no-prescreen", action="store_true", help="skip the modular row prescreen")
    p.add_argument("--no-probe", action="store_true", help="skip the informational n-1 probe")

    p = sub.add_parser("jacobian", parents=[common], help="Jacobian matrix and determinant")
    p.add_argument("--map", dest="map_path")
    p.add_argument("--algebra")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig(args.command, args.fmt, args.out, not args.no_timing, args.workers,
                           getattr(args, "max_trees", freenil.DEFAULT_MAX_TREES),
                           not getattr(args, "no_prescreen", False))
        if args.command == "check":
            return cmd_check(config, args.algebra, args.engel_max, args.yagzhev_max, args.gerst_max)
        if args.command == "invert":
            return cmd_invert(config, args.map_path, args.algebra, args.degree, args.p_max, args.inverse_out,
                              args.verify_degree)
        if args.command == "verify-theorem":
            return cmd_verify_theorem(config, args.d, args.p, args.binary_claim, not args.no_probe)
        return cmd_jacobian(config, args.map_path, args.algebra)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
