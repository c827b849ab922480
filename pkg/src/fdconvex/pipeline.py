"""Per-degree convexity verification: enumerate, reduce, certify, report."""
from __future__ import annotations

import csv
import io
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional

from .coefficients import CoeffCache, default_cache
from .matrices import frac_str
from .multigraphs import Multigraph, enumerate_multigraphs
from .psdcert import PsdCertificate, Verdict, jacobi_eigen, ldlt_natural, ldlt_pivoted
from .reduction import reduced_blocks

log = logging.getLogger(__name__)

EXTENDED_DEGREE = 10
AGREEMENT_TOL = 1e-9
CACHE_MODES = ("shared", "private")
FORMATS = ("text", "json", "csv")
CSV_HEADER = ["d", "multigraphs", "lambda_min", "verdict"]


def cache_mode_from_env() -> str:
    mode = os.environ.get("COEFF_CACHE_MODE", "shared").strip().lower()
    if mode not in CACHE_MODES:
        raise ValueError(f"COEFF_CACHE_MODE must be one of {CACHE_MODES}, got {mode!r}")
    return mode


@dataclass(frozen=True)
class RunConfig:
    degree: int
    to_degree: Optional[int] = None
    jobs: int = 1
    fmt: str = "text"
    certificate_dir: Optional[Path] = None
    scaled: bool = True
    dump_blocks: bool = False
    cache_mode: str = field(default_factory=cache_mode_from_env)

    def __post_init__(self):
        if self.degree < 3:
            raise ValueError(
                f"degree must be >= 3, got {self.degree} (f_2 has a constant Hessian and is not handled here)"
            )
        if self.to_degree is not None and self.to_degree < self.degree:
            raise ValueError(f"--to {self.to_degree} is below --degree {self.degree}")
        if self.jobs < 1:
            raise ValueError("jobs must be positive")
        if self.fmt not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        if self.cache_mode not in CACHE_MODES:
            raise ValueError(f"cache mode must be one of {CACHE_MODES}")

    @property
    def degrees(self) -> range:
        return range(self.degree, (self.to_degree or self.degree) + 1)


@dataclass(frozen=True)
class MultigraphRecord:
    edges: str
    k: int
    scalar: Fraction
    b1_lambda_min: float
    b2_lambda_min: float
    b1_pivots: tuple[Fraction, ...]
    b2_pivots: tuple[Fraction, ...]
    b1_verdict: Verdict
    b2_verdict: Verdict
    b1: Optional[list[list[str]]] = None
    b2: Optional[list[list[str]]] = None

    @property
    def psd(self) -> bool:
        return self.scalar >= 0 and self.b1_verdict is Verdict.PSD and self.b2_verdict is Verdict.PSD

    @property
    def verdict(self) -> str:
        return Verdict.PSD.value if self.psd else Verdict.NOT_PSD.value

    @property
    def lambda_min_blocks(self) -> float:
        return min(self.b1_lambda_min, self.b2_lambda_min)

    @property
    def lambda_min(self) -> float:
        return min(self.lambda_min_blocks, float(self.scalar))

    @property
    def min_pivot_blocks(self) -> Fraction:
        return min(self.b1_pivots + self.b2_pivots)

    @property
    def min_pivot(self) -> Fraction:
        return min(self.min_pivot_blocks, self.scalar)


@dataclass(frozen=True)
class DegreeReport:
    """Aggregate for one degree.  Lambda and pivot minima are given both with
    the scalar condition included and over B1/B2 only."""

    degree: int
    records: tuple[MultigraphRecord, ...]
    scaled: bool = True
    wall_time: float = 0.0

    @property
    def count(self) -> int:
        return len(self.records)

    @property
    def lambda_min(self) -> float:
        return min(r.lambda_min for r in self.records)

    @property
    def lambda_min_blocks(self) -> float:
        return min(r.lambda_min_blocks for r in self.records)

    @property
    def min_pivot(self) -> Fraction:
        return min(r.min_pivot for r in self.records)

    @property
    def min_pivot_blocks(self) -> Fraction:
        return min(r.min_pivot_blocks for r in self.records)

    @property
    def verdict(self) -> str:
        return "CONVEX" if all(r.psd for r in self.records) else "NOT_PROVEN"


def _exact_verdict(M) -> Verdict:
    return ldlt_pivoted(M).verdict


def _check_agreement(name: str, lam: float, verdict: Verdict) -> None:
    if abs(lam) <= AGREEMENT_TOL:
        return
    if (lam > 0) != (verdict is Verdict.PSD):
        raise RuntimeError(f"{name}: Jacobi minimum {lam:.3e} disagrees with exact verdict {verdict.value}")


def certify_multigraph(edges: str, scaled: bool = True, dump_blocks: bool = False,
                       cache: CoeffCache | None = None) -> MultigraphRecord:
    g = Multigraph.parse(edges) if edges else Multigraph(())
    blocks = reduced_blocks(g, scaled=scaled, cache=cache)
    out = {}
    for name, M in (("b1", blocks.B1), ("b2", blocks.B2)):
        natural: PsdCertificate = ldlt_natural(M)
        verdict = _exact_verdict(M)
        lam = jacobi_eigen(M).min_eigenvalue
        _check_agreement(f"{edges} {name}", lam, verdict)
        out[name] = (lam, tuple(natural.pivots), verdict)
    return MultigraphRecord(
        edges=edges,
        k=g.k,
        scalar=blocks.scalar,
        b1_lambda_min=out["b1"][0],
        b2_lambda_min=out["b2"][0],
        b1_pivots=out["b1"][1],
        b2_pivots=out["b2"][1],
        b1_verdict=out["b1"][2],
        b2_verdict=out["b2"][2],
        b1=blocks.B1.to_strings() if dump_blocks else None,
        b2=blocks.B2.to_strings() if dump_blocks else None,
    )


def _task(args: tuple[str, bool, bool, str]) -> MultigraphRecord:
    edges, scaled, dump, mode = args
    cache = default_cache() if mode == "shared" else CoeffCache()
    return certify_multigraph(edges, scaled, dump, cache)


def verify_degree(d: int, cfg: RunConfig) -> DegreeReport:
    if d < 3:
        raise ValueError(f"degree must be >= 3, got {d}")
    if d >= EXTENDED_DEGREE:
        log.warning("d=%d: extended runtime expected", d)
    start = time.perf_counter()
    graphs = enumerate_multigraphs(d - 2)
    tasks = [(str(g), cfg.scaled, cfg.dump_blocks, cfg.cache_mode) for g in graphs]
    if cfg.jobs == 1:
        records = [_task(t) for t in tasks]
    else:
        # map() yields in submission order, so the fan-in follows the canonical order
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            records = list(pool.map(_task, tasks))
    report = DegreeReport(d, tuple(records), cfg.scaled, time.perf_counter() - start)
    if cfg.certificate_dir is not None:
        write_certificates(report, Path(cfg.certificate_dir))
    return report


def verify(cfg: RunConfig) -> list[DegreeReport]:
    return [verify_degree(d, cfg) for d in cfg.degrees]


def _fmt_lambda(x: float) -> str:
    return f"{x:.8f}"


def record_json(r: MultigraphRecord) -> dict:
    out = {
        "edges": r.edges,
        "k": r.k,
        "scalar": frac_str(r.scalar),
        "b1_lambda_min": r.b1_lambda_min,
        "b2_lambda_min": r.b2_lambda_min,
        "b1_pivots": [frac_str(p) for p in r.b1_pivots],
        "b2_pivots": [frac_str(p) for p in r.b2_pivots],
        "verdict": r.verdict,
    }
    if r.b1 is not None:
        out["B1"] = r.b1
        out["B2"] = r.b2
    return out


def report_json(r: DegreeReport) -> dict:
    return {
        "degree": r.degree,
        "count": r.count,
        "lambda_min": r.lambda_min,
        "verdict": r.verdict,
        "lambda_min_blocks": r.lambda_min_blocks,
        "min_pivot": frac_str(r.min_pivot),
        "min_pivot_blocks": frac_str(r.min_pivot_blocks),
        "scaled": r.scaled,
        "records": [record_json(rec) for rec in r.records],
    }


def emit_report(reports: DegreeReport | Iterable[DegreeReport], fmt: str = "text") -> str:
    """Serialize one or more reports.  Output never depends on timing."""
    reports = [reports] if isinstance(reports, DegreeReport) else list(reports)
    if fmt == "json":
        body = report_json(reports[0]) if len(reports) == 1 else [report_json(r) for r in reports]
        return json.dumps(body, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in reports:
            w.writerow([r.degree, r.count, _fmt_lambda(r.lambda_min), r.verdict])
        return buf.getvalue()
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    lines = ["d | multigraphs | lambda_min"]
    lines += [f"{r.degree} | {r.count} | {_fmt_lambda(r.lambda_min)}" for r in reports]
    lines.append("")
    for r in reports:
        lines.append(f"d={r.degree}: {r.verdict} (min pivot {frac_str(r.min_pivot)}, "
                     f"over B1/B2 only {frac_str(r.min_pivot_blocks)})")
    for r in reports:
        for rec in r.records:
            if rec.b1 is None:
                continue
            lines.append("")
            lines.append(f"d={r.degree} multigraph {rec.edges} k={rec.k} scalar={frac_str(rec.scalar)}")
            lines.append("B1:")
            lines += ["  " + " ".join(row) for row in rec.b1]
            lines.append("B2:")
            lines += ["  " + " ".join(row) for row in rec.b2]
    return "\n".join(lines) + "\n"


def certificate_json(d: int, r: MultigraphRecord) -> dict:
    return {
        "degree": d,
        "edges": r.edges,
        "k": r.k,
        "scalar": frac_str(r.scalar),
        "b1_pivots": [frac_str(p) for p in r.b1_pivots],
        "b2_pivots": [frac_str(p) for p in r.b2_pivots],
        "min_pivot": frac_str(r.min_pivot),
        "min_pivot_blocks": frac_str(r.min_pivot_blocks),
        "b1_lambda_min": r.b1_lambda_min,
        "b2_lambda_min": r.b2_lambda_min,
        "verdict": r.verdict,
    }


def certificate_filename(d: int, edges: str) -> str:
    return f"d{d}_{edges.replace(',', '_') or 'empty'}.json"


def write_certificates(report: DegreeReport, directory: Path) -> list[Path]:
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for rec in report.records:
        path = directory / certificate_filename(report.degree, rec.edges)
        path.write_text(json.dumps(certificate_json(report.degree, rec), indent=2) + "\n")
        paths.append(path)
    return paths


@dataclass(frozen=True)
class Observation:
    argmin_edges: str
    argmin_is_matching: bool
    min_in_b1: dict[str, bool]

    @property
    def all_min_in_b1(self) -> bool:
        return all(self.min_in_b1.values())


def observe_extremes(r: DegreeReport) -> Observation:
    """Where the extremes sit.  Reported, never enforced."""
    best = min(r.records, key=lambda rec: rec.lambda_min)
    g = Multigraph.parse(best.edges)
    in_b1 = {
        rec.edges: rec.b1_lambda_min <= min(rec.b2_lambda_min, float(rec.scalar))
        for rec in r.records
    }
    return Observation(best.edges, g.is_matching(), in_b1)
