"""Command-line entry point: ``prym-hurwitz <subcommand>``.

Subcommands print JSON (or Markdown where noted) to stdout. Exit status is
0 when every check passes, 1 when any check fails, and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from . import boundary_ledger as bl
from . import constellations as cs
from . import divisor_calc as dc
from . import enumerative as en
from .perm_core import GenusSignal, Partition, rh_genus

SCHEMA = "prym-hurwitz-report/1"
FORMATS = ("json", "markdown")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    brute_force_bound: int = field(default_factory=cs.default_bound)
    max_i: int = 30
    pell_bound: int = en.PELL_BOUND
    format: str = "json"
    jobs: int = 1
    table_max_degree: int = 12
    frobenius_max_degree: int = 8
    divisor_max_i: int = 12
    odd_max_i: int = 10
    boundary_max_k: int = 6
    st_max_i: int = 50

    def __post_init__(self):
        for name in ("brute_force_bound", "max_i", "pell_bound", "jobs", "table_max_degree"):
            if getattr(self, name) < 1:
                raise UsageError(f"{name} must be positive")
        if self.format not in FORMATS:
            raise UsageError(f"format must be one of {FORMATS}")


@dataclass
class CheckRecord:
    group: str
    name: str
    anchor: str
    expected: Any
    computed: Any
    status: str  # pass | fail | skip
    reason: str = ""
    elapsed_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "name": self.name,
            "anchor": self.anchor,
            "expected": _jsonable(self.expected),
            "computed": _jsonable(self.computed),
            "pass": self.passed,
            "status": self.status,
            "reason": self.reason,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else v.numerator
    if isinstance(v, GenusSignal):
        return v.value
    if isinstance(v, Partition):
        return v.to_json()
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _record(group, name, anchor, expected, computed, elapsed_ms=0.0, reason="") -> CheckRecord:
    status = "pass" if expected == computed else "fail"
    return CheckRecord(group, name, anchor, expected, computed, status, reason, elapsed_ms)


@dataclass
class Report:
    records: list[CheckRecord]
    elapsed_s: float = 0.0
    config: dict = field(default_factory=dict)

    def counts(self) -> dict[str, int]:
        out = {"total": len(self.records), "pass": 0, "fail": 0, "skip": 0}
        for r in self.records:
            out[r.status] += 1
        return out

    @property
    def ok(self) -> bool:
        return all(r.status != "fail" for r in self.records)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "config": self.config,
            "summary": self.counts(),
            "all_pass": self.ok,
            "elapsed_s": round(self.elapsed_s, 3),
            "records": [r.to_json() for r in self.records],
        }

    def to_markdown(self) -> str:
        c = self.counts()
        lines = [
            "# prym-hurwitz check report",
            "",
            f"{c['pass']} passed, {c['fail']} failed, {c['skip']} skipped of {c['total']} checks "
            f"in {self.elapsed_s:.1f} s.",
            "",
            "| group | checks | pass | fail | skip |",
            "|---|---:|---:|---:|---:|",
        ]
        groups: dict[str, list[CheckRecord]] = {}
        for r in self.records:
            groups.setdefault(r.group, []).append(r)
        for g, recs in groups.items():
            n = {s: sum(r.status == s for r in recs) for s in ("pass", "fail", "skip")}
            lines.append(f"| {g} | {len(recs)} | {n['pass']} | {n['fail']} | {n['skip']} |")
        bad = [r for r in self.records if r.status != "pass"]
        if bad:
            lines += ["", "## Failures and skips", "", "| group | check | expected | computed | status | note |", "|---|---|---|---|---|---|"]
            for r in bad:
                lines.append(
                    f"| {r.group} | {r.name} | {_jsonable(r.expected)} | {_jsonable(r.computed)} | {r.status} | {r.reason} |"
                )
        return "\n".join(lines) + "\n"


# -- check groups -------------------------------------------------------------------


def _table_task(args: tuple[int, dict, int]) -> CheckRecord:
    row, params, bound = args
    entry = cs.table_rows()[row]
    name = f"row {row} " + ",".join(f"{k}={v}" for k, v in params.items())
    try:
        chk = cs.verify_table_row(row, bound=bound, **params)
    except cs.CapacityError as exc:
        return CheckRecord("table", name, entry.anchor, entry.expected_count(**params), None, "skip", str(exc))
    profiles = " ".join(str(p) for p in chk.profiles)
    reason = f"{profiles}, genus {_jsonable(chk.genus)}"
    return _record("table", name, entry.anchor, chk.expected, chk.computed, chk.elapsed_ms, reason)


def _frobenius_task(args: tuple[int, dict]) -> CheckRecord:
    row, params = args
    entry = cs.table_rows()[row]
    b = entry.instantiate(**params)
    name = f"row {row} " + ",".join(f"{k}={v}" for k, v in params.items())
    t0 = time.perf_counter()
    exhaustive = cs.labelled_count_exhaustive(*b, max_degree=max(p.degree for p in b))
    frob = cs.frobenius_total(*b)
    ms = (time.perf_counter() - t0) * 1000
    return _record("frobenius", name, "labelled triples: character formula vs exhaustive enumeration", exhaustive, frob, ms)


def _parallel_map(fn: Callable, tasks: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(tasks) < 2:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks, chunksize=1))


def table_checks(cfg: RunConfig) -> list[CheckRecord]:
    tasks = [
        (row, params, cfg.brute_force_bound)
        for row, entry in cs.table_rows().items()
        for params in entry.parameter_grid(cfg.table_max_degree)
    ]
    return _parallel_map(_table_task, tasks, cfg.jobs)


def frobenius_checks(cfg: RunConfig) -> list[CheckRecord]:
    tasks = [
        (row, params)
        for row, entry in cs.table_rows().items()
        for params in entry.parameter_grid(min(cfg.frobenius_max_degree, cs.FROBENIUS_MAX_DEGREE))
    ]
    return _parallel_map(_frobenius_task, tasks, cfg.jobs)


def sum_checks(cfg: RunConfig) -> list[CheckRecord]:
    out = []
    for i in range(1, cfg.st_max_i + 1):
        for k in en.S_ORDERS:
            out.append(_record("binomial-sums", f"S_{k} i={i}", f"S_{k} closed form", en.closed_s(i, k), en.s_sum(i, k)))
        for k in en.T_ORDERS:
            out.append(_record("binomial-sums", f"T_{k} i={i}", f"T_{k} closed form", en.closed_t(i, k), en.t_sum(i, k)))
    return out


def identity_checks(cfg: RunConfig) -> list[CheckRecord]:
    out = []
    for name, rec in en.weighted_identities().items():
        for i in range(rec.i_min, cfg.max_i + 1):
            c = en.verify_weighted_identity(name, i)
            out.append(_record("weighted-sums", f"{name} i={i}", c.anchor, c.expected, c.computed))
    return out


def bn_checks(cfg: RunConfig) -> list[CheckRecord]:
    out = []
    for name in en.bn_specializations():
        for i in range(2, cfg.divisor_max_i + 1):
            for s in range(i):
                c = en.verify_bn_specialization(name, i, s)
                out.append(_record("brill-noether", f"{name} i={i} s={s}", c.anchor, c.expected, c.computed, reason=c.note))
    return out


def pell_checks(cfg: RunConfig) -> list[CheckRecord]:
    """Every pair satisfies its norm equation with the expected degrees."""
    out = []
    for k in range(2, cfg.pell_bound + 1):
        t0 = time.perf_counter()
        try:
            if k % 2 == 0:
                p, q = en.pell_pair(k, cfg.pell_bound)
                norm = p * p - en.NORM_FORM * q * q
                anchor, want = "P^2 - X(X-1)Q^2 = 1", (k // 2, k // 2 - 1)
            else:
                p, q = en.pell_pair_odd(k, cfg.pell_bound)
                norm = en.X * q * q - (en.X - 1) * p * p
                anchor, want = "XQ^2 - (X-1)P^2 = 1", ((k - 1) // 2, (k - 1) // 2)
        except AssertionError as exc:
            anchor = "P^2 - X(X-1)Q^2 = 1" if k % 2 == 0 else "XQ^2 - (X-1)P^2 = 1"
            out.append(CheckRecord("pell", f"k={k}", anchor, None, None, "fail", str(exc)))
            continue
        ms = (time.perf_counter() - t0) * 1000
        expected = {"norm": "1", "degrees": list(want)}
        computed = {"norm": str(norm), "degrees": [p.degree, q.degree]}
        out.append(_record("pell", f"k={k}", anchor, expected, computed, ms))
    return out


def boundary_checks(cfg: RunConfig) -> list[CheckRecord]:
    out = []
    for family in bl.FAMILIES:
        for k in range(2, cfg.boundary_max_k + 1):
            name = f"{family} k={k}"
            t0 = time.perf_counter()
            stated = 6 if family == "total" else 6 * k - 3
            anchor = bl.family_anchor(family)
            try:
                rep = bl.ledger_report(family, k, checked=True, bound=cfg.brute_force_bound)
            except cs.CapacityError as exc:
                out.append(CheckRecord("boundary", name, anchor, stated, None, "skip", str(exc)))
                continue
            except bl.LedgerMismatch as exc:
                out.append(CheckRecord("boundary", name, anchor, stated, None, "fail", str(exc)))
                continue
            ms = (time.perf_counter() - t0) * 1000
            out.append(_record("boundary", name, rep.anchor, stated, rep.degree, ms))
    return out


I2_SOLUTION = {"a": 66, "b0'": 8, "b0''": 12, "b0ram": 13, "b1": 36, "b_{g-1}": 30, "b_{1:g-1}": 18}
ODD_LITERALS = {
    2: {"a": Fraction(14), "b0'": Fraction(2), "b0''": Fraction(8), "b0ram": Fraction(5, 2)},
    3: {"a": Fraction(40), "b0'": Fraction(6), "b0''": Fraction(36), "b0ram": Fraction(7)},
}
FORGETFUL_LITERALS = {2: 1512, 3: 736560}


def divisor_checks(cfg: RunConfig) -> list[CheckRecord]:
    out = []
    closed_anchor = "a = \\frac{12i^2+10i-2}{2i-1}\\cdot\\binom{2i-1}{i}, ..."
    for i in range(2, cfg.divisor_max_i + 1):
        t0 = time.perf_counter()
        system, sol = dc.solve_system(i)
        ms = (time.perf_counter() - t0) * 1000
        out.append(_record("divisor", f"rank i={i}", "8 equations in 7 unknowns", [7, "unique"], [sol.rank, sol.status.value], ms))
        if sol.ok:
            values = dict(zip(dc.UNKNOWNS, sol.x))
            out.append(_record("divisor", f"closed forms i={i}", closed_anchor, dc.even_closed_forms(i), values))
        for rc in dc.compare_hand_rows(system):
            out.append(
                CheckRecord("divisor", f"hand row {rc.curve} i={i}", rc.anchor, "positive scale", _jsonable(rc.scale),
                            "pass" if rc.match else "fail")
            )
        for curve in dc.SYSTEM_CURVES:
            b = dc.dmu_breakdown(i, curve)
            if b.cases:
                out.append(_record("divisor", f"cases {curve} i={i}", b.anchor, b.value, b.case_total))
    _, sol = dc.solve_system(2)
    out.append(_record("divisor", "solution i=2", "(66, 8, 12, 13, 36, 30, 18)", I2_SOLUTION,
                       dict(zip(dc.UNKNOWNS, sol.x or ()))))
    for i in range(2, cfg.odd_max_i + 1):
        fc = dc.forgetful_crosscheck(i)
        out.append(_record("odd-genus", f"forgetful degree vs B0ram i={i}", "(2i)!\\cdot(2^{4i-2}-1)",
                           fc.ratio_from_intersection, fc.ratio_from_degree))
        vals = dc.odd_genus_values(i)
        if i in ODD_LITERALS:
            out.append(_record("odd-genus", f"coefficients i={i}", "odd-genus closed forms", ODD_LITERALS[i], vals))
        if i in FORGETFUL_LITERALS:
            out.append(_record("odd-genus", f"forgetful degree i={i}", "(2i)!\\cdot(2^{4i-2}-1)",
                               FORGETFUL_LITERALS[i], dc.forgetful_degree(i)))
    return out


GROUPS: tuple[tuple[str, Callable[[RunConfig], list[CheckRecord]]], ...] = (
    ("table", table_checks),
    ("frobenius", frobenius_checks),
    ("binomial-sums", sum_checks),
    ("weighted-sums", identity_checks),
    ("brill-noether", bn_checks),
    ("pell", pell_checks),
    ("boundary", boundary_checks),
    ("divisor", divisor_checks),
)


def run_all(config: RunConfig | None = None, groups: Iterable[str] | None = None) -> Report:
    """Run every check group and collect the records in a fixed order."""
    cfg = config or RunConfig()
    wanted = set(groups) if groups is not None else None
    t0 = time.perf_counter()
    records: list[CheckRecord] = []
    for name, fn in GROUPS:
        if wanted is None or name in wanted:
            records.extend(fn(cfg))
    conf = {k: getattr(cfg, k) for k in cfg.__dataclass_fields__}
    return Report(records, time.perf_counter() - t0, conf)


# -- Markdown report of the coefficients -------------------------------------------


def coefficient_report(max_i: int = 8) -> str:
    lines = [
        "# Coefficients of the Hurwitz divisor",
        "",
        "Even genus g = 2i, obtained by solving the 8 x 7 test-curve system exactly.",
        "The class is a*lambda - b0'*delta0' - b0''*delta0'' - b0ram*delta0ram"
        " - b1*delta1 - b_{g-1}*delta_{g-1} - b_{1:g-1}*delta_{1:g-1} - ...",
        "",
        "| i | g | " + " | ".join(dc.UNKNOWNS) + " | closed forms agree |",
        "|---|---|" + "---:|" * len(dc.UNKNOWNS) + "---|",
    ]
    for i in range(2, max_i + 1):
        rep = dc.solve_coefficients(i)
        cells = " | ".join(str(rep.values[u]) for u in dc.UNKNOWNS)
        lines.append(f"| {i} | {2 * i} | {cells} | {'yes' if rep.closed_form_match else 'NO'} |")
    lines += [
        "",
        "Odd genus g = 2i + 1, closed forms only (no system is solved).",
        "The B0ram intersection is read with g = 2i + 1.",
        "",
        "| i | g | a | b0' | b0'' | b0ram | forgetful degree | agrees with B0ram intersection |",
        "|---|---|---:|---:|---:|---:|---:|---|",
    ]
    for i in range(2, max_i + 1):
        v = dc.odd_genus_values(i)
        fc = dc.forgetful_crosscheck(i)
        b0p, b0pp = v["b0'"], v["b0''"]
        lines.append(
            f"| {i} | {2 * i + 1} | {v['a']} | {b0p} | {b0pp} | {v['b0ram']} "
            f"| {fc.degree} | {'yes' if fc.match else 'NO'} |"
        )
    return "\n".join(lines) + "\n"


# -- argument parsing ------------------------------------------------------------------


def _partition(text: str) -> Partition:
    try:
        return Partition.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="prym-hurwitz", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=FORMATS, default="json")

    def bound(p):
        p.add_argument("--bound", type=_positive, default=None,
                       help=f"brute-force degree bound (default: ${cs.ENV_BOUND} or 12)")

    p = sub.add_parser("count", help="count three-point covers for given profiles")
    p.add_argument("--b1", type=_partition, required=True)
    p.add_argument("--b2", type=_partition, required=True)
    p.add_argument("--b3", type=_partition, required=True)
    p.add_argument("--labelled", action="store_true", help="labelled triples via the character formula")
    p.add_argument("--no-transitive", action="store_true", help="drop the transitivity requirement")
    bound(p)

    p = sub.add_parser("verify-table", help="brute-force the ten-row table of cover counts")
    p.add_argument("--row", type=int, choices=range(1, 11), default=None)
    p.add_argument("--max-degree", type=_positive, default=12)
    p.add_argument("--jobs", type=_positive, default=1)
    bound(p)
    fmt(p)

    p = sub.add_parser("verify-identities", help="binomial sums, weighted sums, Brill-Noether data and Pell pairs")
    p.add_argument("--max-i", type=_positive, default=30)
    p.add_argument("--max-k-pell", type=_positive, default=en.PELL_BOUND)
    fmt(p)

    p = sub.add_parser("boundary-degree", help="degree of an elliptic Hurwitz space from its case ledger")
    p.add_argument("--family", choices=bl.FAMILIES, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--checked", action="store_true", help="brute-force every component count")
    bound(p)

    p = sub.add_parser("solve", help="solve for the divisor coefficients")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--genus", type=int, help="even genus g = 2i")
    grp.add_argument("--odd", action="store_true", help="odd genus 2i + 1 closed forms (needs --i)")
    p.add_argument("--i", type=int, default=None)

    p = sub.add_parser("report", help="Markdown table of coefficients for a range of i")
    p.add_argument("--max-i", type=_positive, default=8)

    p = sub.add_parser("run-all", help="run every check and summarize")
    p.add_argument("--max-i", type=_positive, default=30)
    p.add_argument("--pell-bound", type=_positive, default=en.PELL_BOUND)
    p.add_argument("--jobs", type=_positive, default=1)
    bound(p)
    fmt(p)
    return parser


def _emit(report: Report, fmt_: str) -> int:
    if fmt_ == "json":
        print(json.dumps(report.to_json(), indent=2))
    else:
        print(report.to_markdown(), end="")
    return EXIT_OK if report.ok else EXIT_FAIL


def _cmd_count(ns) -> int:
    q = cs.TripleCountQuery(ns.b1, ns.b2, ns.b3, require_transitive=not ns.no_transitive)
    if ns.labelled:
        t0 = time.perf_counter()
        total = cs.frobenius_total(ns.b1, ns.b2, ns.b3)
        genus = rh_genus(q.profiles, q.degree)
        out = {"count": int(total), "genus": _jsonable(genus), "method": "character",
               "elapsed_ms": round((time.perf_counter() - t0) * 1000, 3)}
    else:
        out = cs.count_triples_up_to_conjugacy(q, bound=ns.bound).to_json()
    print(json.dumps(out))
    return EXIT_OK


def _cmd_verify_table(ns) -> int:
    bound_ = ns.bound or cs.default_bound()
    rows = [ns.row] if ns.row else list(cs.table_rows())
    tasks = [(r, params, bound_) for r in rows for params in cs.table_rows()[r].parameter_grid(ns.max_degree)]
    t0 = time.perf_counter()
    recs = _parallel_map(_table_task, tasks, ns.jobs)
    return _emit(Report(recs, time.perf_counter() - t0, {"rows": rows, "max_degree": ns.max_degree}), ns.format)


def _cmd_verify_identities(ns) -> int:
    cfg = RunConfig(max_i=ns.max_i, pell_bound=ns.max_k_pell)
    return _emit(run_all(cfg, groups=("binomial-sums", "weighted-sums", "brill-noether", "pell")), ns.format)


def _cmd_boundary(ns) -> int:
    rep = bl.ledger_report(ns.family, ns.k, checked=ns.checked, bound=ns.bound)
    print(json.dumps(rep.to_json(), indent=2))
    return EXIT_OK if rep.match else EXIT_FAIL


def _cmd_solve(ns) -> int:
    if ns.odd:
        if ns.i is None:
            raise UsageError("--odd needs --i")
        i = ns.i
        div = dc.odd_genus_coefficients(i)
        fc = dc.forgetful_crosscheck(i)
        out = {
            "i": i,
            "g": 2 * i + 1,
            "coefficients": {k: dc._frac_json(v) for k, v in dc.odd_genus_values(i).items()},
            "divisor": div.to_json(),
            "forgetful_degree": fc.degree,
            "bram_intersection": str(fc.bram_intersection),
            "bram_interpretation": "2^(2g-3) - 2 evaluated with g = 2i + 1",
            "forgetful_crosscheck": fc.match,
        }
        print(json.dumps(out, indent=2))
        return EXIT_OK if fc.match else EXIT_FAIL
    g = ns.genus
    if g is None or g % 2 or g < 4:
        raise UsageError("--genus must be an even integer >= 4")
    rep = dc.solve_coefficients(g // 2)
    print(json.dumps(rep.to_json(), indent=2))
    return EXIT_OK if rep.closed_form_match else EXIT_FAIL


def _cmd_report(ns) -> int:
    print(coefficient_report(ns.max_i), end="")
    return EXIT_OK


def _cmd_run_all(ns) -> int:
    cfg = RunConfig(
        brute_force_bound=ns.bound or cs.default_bound(),
        max_i=ns.max_i,
        pell_bound=ns.pell_bound,
        format=ns.format,
        jobs=ns.jobs,
    )
    return _emit(run_all(cfg), ns.format)


COMMANDS = {
    "count": _cmd_count,
    "verify-table": _cmd_verify_table,
    "verify-identities": _cmd_verify_identities,
    "boundary-degree": _cmd_boundary,
    "solve": _cmd_solve,
    "report": _cmd_report,
    "run-all": _cmd_run_all,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on bad usage, 0 on --help
        return int(exc.code or 0)
    try:
        return COMMANDS[ns.command](ns)
    except (UsageError, ValueError, KeyError) as exc:
        print(f"prym-hurwitz: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except cs.CapacityError as exc:
        print(f"prym-hurwitz: capacity: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
