"""Batch runs: construct and certify family members, count, fit growth.

Outputs are deterministic: records are merged in (alpha, beta, v1) order no
matter how the work was sharded, and every number is written as a decimal
string.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import statistics
import tempfile
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .constructor import (
    Solution,
    alpha_limit,
    enumerate_alpha,
    enumerate_family,
    class_bound_holds,
    vc_cardinality,
)
from .errors import EffortExceeded
from .oracle import RHO_BUDGET, count_B, is_sum_two_squares
from .ring import CubicPoly, IntPoly, ThetaElem, poly_mul, validate_poly
from .transfer import certify_transfer

CSV_COLUMNS = (
    "poly",
    "X",
    "c",
    "count_B",
    "constructive_total",
    "constructive_distinct",
    "max_multiplicity",
    "max_height_ratio",
    "slope",
)
JSONL_KEYS = ("n", "alpha", "beta", "v1", "omega1", "omega2", "u", "v")
DEFAULT_CUTOFF = 10**6
DEFAULT_ORACLE_LIMIT = 10**9


@dataclass
class MultiplicityStats:
    """How many family members land on each n."""

    counts: dict[int, int]
    histogram: dict[int, int]
    maximum: int

    @classmethod
    def from_values(cls, ns: Iterable[int]) -> MultiplicityStats:
        counts = Counter(ns)
        hist = Counter(counts.values())
        return cls(dict(counts), dict(sorted(hist.items())), max(counts.values(), default=0))

    @property
    def total(self) -> int:
        return sum(k * v for k, v in self.histogram.items())

    @property
    def distinct(self) -> int:
        return len(self.counts)


@dataclass
class DensityRow:
    poly: str
    X: int
    c: Optional[Fraction]
    count_B: Optional[int]
    constructive_total: Optional[int] = None
    constructive_distinct: Optional[int] = None
    max_multiplicity: Optional[int] = None
    max_height_ratio: Optional[float] = None
    slope: Optional[float] = None
    # |n| <= X window, reported alongside the [1, X] columns
    abs_window_total: int = 0
    abs_window_distinct: int = 0
    emitted: int = 0

    def csv_values(self) -> list[str]:
        def fmt(x):
            if x is None:
                return ""
            return f"{x:.6f}" if isinstance(x, float) else str(x)

        return [fmt(getattr(self, name)) for name in CSV_COLUMNS]


@dataclass
class DensityReport:
    poly: str
    rows: list[DensityRow]
    slope: Optional[float] = None
    residual: Optional[float] = None


@dataclass
class ConstructRun:
    """Everything ``construct`` produces for one (p, X, c)."""

    records: list[dict]
    row: DensityRow
    multiplicity: MultiplicityStats
    oracle_confirmed: int = 0
    oracle_skipped: int = 0
    oracle_budget: int = 0
    oracle_failures: list[int] = field(default_factory=list)
    class_bound_violations: list[tuple[int, int]] = field(default_factory=list)


def height_ratio(s: Solution, X: int) -> float:
    return s.height / math.sqrt(X)


def solution_record(s: Solution, u: int, v: int) -> dict:
    return {
        "n": str(s.n),
        "alpha": str(s.alpha),
        "beta": str(s.beta),
        "v1": str(s.v1),
        "omega1": [str(c) for c in s.omega1],
        "omega2": [str(c) for c in s.omega2],
        "u": str(u),
        "v": str(v),
    }


def _sort_key(rec: dict) -> tuple[int, int, int]:
    return int(rec["alpha"]), int(rec["beta"]), int(rec["v1"])


def _oracle_status(value: int, limit_n: Optional[int], n: int, budget: int) -> str:
    if limit_n is not None and abs(n) > limit_n:
        return "skipped"
    try:
        return "yes" if is_sum_two_squares(value, budget).member else "no"
    except EffortExceeded:
        return "budget"


def _construct_slice(args) -> list[tuple[dict, int, str, float]]:
    coeffs, alphas, X, c, oracle_limit, budget = args
    p = validate_poly(*coeffs)
    out = []
    for alpha in alphas:
        for s in enumerate_alpha(p, alpha, X, c):
            if abs(s.n) > X:
                continue
            z = certify_transfer(p, s)
            status = _oracle_status(p(s.n), oracle_limit, s.n, budget)
            out.append((solution_record(s, z.re, z.im), s.n, status, height_ratio(s, X)))
    return out


def class_bound_check(X: int, c: Fraction) -> list[tuple[int, int]]:
    """(alpha, beta) pairs where the v1-class count falls below c X^(1/6) / (4 alpha)."""
    bad = []
    for alpha in range(2, alpha_limit(X, c) + 1, 2):
        for beta in range(1, alpha + 1):
            if math.gcd(alpha, beta) == 1:
                if not class_bound_holds(vc_cardinality(alpha, beta, X, c), alpha, X, c):
                    bad.append((alpha, beta))
    return bad


def construct(
    p: CubicPoly,
    X: int,
    c: Fraction = Fraction(1),
    shards: int = 1,
    oracle_limit: Optional[int] = DEFAULT_ORACLE_LIMIT,
    budget: int = RHO_BUDGET,
) -> ConstructRun:
    """Enumerate the family, keep members with |n| <= X, certify each one.

    Each kept member is certified twice: by the resultant transfer (u, v with
    u^2 + v^2 = p(n)) and, when |n| <= ``oracle_limit``, by factoring p(n).
    """
    c = Fraction(c)
    alphas = list(range(2, alpha_limit(X, c) + 1, 2))
    coeffs = (p.a2, p.a1, p.a0)
    shards = max(1, shards)
    jobs = [(coeffs, alphas[k::shards], X, c, oracle_limit, budget) for k in range(shards)]
    if shards == 1:
        parts = [_construct_slice(jobs[0])]
    else:
        with ProcessPoolExecutor(max_workers=shards) as pool:
            parts = list(pool.map(_construct_slice, jobs))
    items = sorted((it for part in parts for it in part), key=lambda it: _sort_key(it[0]))

    statuses = Counter(status for _, _, status, _ in items)
    window = MultiplicityStats.from_values(n for _, n, _, _ in items if 1 <= n <= X)
    abs_stats = MultiplicityStats.from_values(n for _, n, _, _ in items)
    row = DensityRow(
        poly=p.label,
        X=X,
        c=c,
        count_B=None,
        constructive_total=window.total,
        constructive_distinct=window.distinct,
        max_multiplicity=window.maximum,
        max_height_ratio=max((it[3] for it in items), default=0.0),
        abs_window_total=abs_stats.total,
        abs_window_distinct=abs_stats.distinct,
        emitted=len(items),
    )
    return ConstructRun(
        records=[it[0] for it in items],
        row=row,
        multiplicity=window,
        oracle_confirmed=statuses["yes"],
        oracle_skipped=statuses["skipped"],
        oracle_budget=statuses["budget"],
        oracle_failures=[n for _, n, status, _ in items if status == "no"],
        class_bound_violations=class_bound_check(X, c),
    )


def constructive_distinct(p: CubicPoly, X: int, c: Fraction = Fraction(1)) -> tuple[int, int, int, float]:
    """(total, distinct, max multiplicity, max height ratio) for n in [1, X], no certification."""
    ns = []
    ratio = 0.0
    for s in enumerate_family(p, X, c):
        if abs(s.n) <= X:
            ratio = max(ratio, height_ratio(s, X))
        if 1 <= s.n <= X:
            ns.append(s.n)
    m = MultiplicityStats.from_values(ns)
    return m.total, m.distinct, m.maximum, ratio


def fit_loglog(xs: Sequence[int], ys: Sequence[int]) -> tuple[float, float]:
    """Least-squares slope of log y against log x, and the RMS residual.

    Points with y = 0 carry no log and are dropped.
    """
    pts = [(math.log(x), math.log(y)) for x, y in zip(xs, ys) if y > 0]
    if len(pts) < 2:
        raise ValueError("need at least two points with a positive count")
    lx, ly = zip(*pts)
    slope, intercept = statistics.linear_regression(lx, ly)
    resid = math.sqrt(sum((y - (slope * x + intercept)) ** 2 for x, y in pts) / len(pts))
    return slope, resid


def fit(
    p: CubicPoly,
    grid: Sequence[int],
    c: Fraction = Fraction(1),
    cutoff: int = DEFAULT_CUTOFF,
    shards: int = 1,
) -> DensityReport:
    if len(grid) < 3:
        raise ValueError("grid needs at least 3 points")
    c = Fraction(c)
    rows = []
    for X in sorted(grid):
        total, distinct, mult, ratio = constructive_distinct(p, X, c)
        cb = count_B(p, X, shards) if X <= cutoff else None
        rows.append(DensityRow(p.label, X, c, cb, total, distinct, mult, ratio))
    slope, resid = fit_loglog([r.X for r in rows], [r.constructive_distinct for r in rows])
    for r in rows:
        r.slope = slope
    return DensityReport(p.label, rows, slope, resid)


# --- the displayed identity (x^2+8)^3 + 17 = (x^3+10x)^2 + (2x^2+23)^2 ---


def identity_sides() -> tuple[IntPoly, IntPoly]:
    inner = [8, 0, 1]
    lhs = poly_mul(poly_mul(inner, inner), inner)
    lhs[0] += 17
    a = [0, 10, 0, 1]
    b = [23, 0, 2]
    rhs = [x + y for x, y in zip(poly_mul(a, a), poly_mul(b, b) + [0] * 3)]
    return IntPoly(tuple(lhs)), IntPoly(tuple(rhs))


def verify_identity(lo: int = -1000, hi: int = 1000) -> Optional[str]:
    """None if the identity holds symbolically and at every x in [lo, hi]; else a message."""
    lhs, rhs = identity_sides()
    if lhs.coeffs != rhs.coeffs:
        for k in range(max(len(lhs.coeffs), len(rhs.coeffs))):
            a = lhs.coeffs[k] if k < len(lhs.coeffs) else 0
            b = rhs.coeffs[k] if k < len(rhs.coeffs) else 0
            if a != b:
                return f"coefficient of x^{k}: {a} != {b}"
    for x in range(lo, hi + 1):
        left = (x * x + 8) ** 3 + 17
        right = (x**3 + 10 * x) ** 2 + (2 * x * x + 23) ** 2
        if left != right:
            return f"x = {x}: {left} != {right}"
    return None


# --- serialization ---


def csv_text(rows: Iterable[DensityRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(r.csv_values())
    return buf.getvalue()


def jsonl_text(records: Iterable[dict]) -> str:
    return "".join(json.dumps(rec, separators=(",", ":")) + "\n" for rec in records)


def write_atomic(path: str, text: str) -> None:
    """Write via a temp file in the same directory, then rename over ``path``."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_jsonl(path: str) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def record_to_solution(rec: dict) -> tuple[Solution, int, int]:
    s = Solution(
        ThetaElem.from_seq(rec["omega1"]),
        ThetaElem.from_seq(rec["omega2"]),
        int(rec["n"]),
        int(rec["alpha"]),
        int(rec["beta"]),
        int(rec["v1"]),
    )
    return s, int(rec["u"]), int(rec["v"])
